// Copyright 2026 The fermilab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#include "fermilab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fermilab/error.hpp"

namespace fermilab {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw parse_error("'" + path.string() + "': " + e.what());
    }
}

cplx parse_complex(const json& j) {
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw parse_error("expected a number or [re, im], got " + j.dump());
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

CMatrix parse_matrix(const json& j, int rows, int cols) {
    if (!j.is_array() || j.empty())
        throw parse_error("matrix must be a non-empty list");
    // Nested rows: j has `rows` elements, each a list of `cols` entries.
    const std::size_t want_rows = rows > 0 ? static_cast<std::size_t>(rows) : j.size();
    const std::size_t want_cols = cols > 0 ? static_cast<std::size_t>(cols) : j.size();
    bool nested = j.size() == want_rows;
    for (const auto& row : j)
        nested = nested && row.is_array() && row.size() == want_cols;
    std::vector<cplx> flat;
    int r = 0, c = 0;
    if (nested) {
        r = static_cast<int>(j.size());
        c = static_cast<int>(j[0].size());
        for (const auto& row : j) {
            if (!row.is_array() || static_cast<int>(row.size()) != c)
                throw parse_error("matrix rows have unequal length");
            for (const auto& e : row)
                flat.push_back(parse_complex(e));
        }
    } else {
        for (const auto& e : j)
            flat.push_back(parse_complex(e));
        const int n = static_cast<int>(flat.size());
        if (rows > 0 && cols > 0) {
            r = rows;
            c = cols;
        } else {
            r = c = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        }
        if (r * c != n)
            throw parse_error("flat matrix of " + std::to_string(n) + " entries is not " +
                              std::to_string(r) + " x " + std::to_string(c));
    }
    if ((rows > 0 && r != rows) || (cols > 0 && c != cols))
        throw parse_error("matrix is " + std::to_string(r) + " x " + std::to_string(c) +
                          ", expected " + std::to_string(rows) + " x " + std::to_string(cols));
    CMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < c; ++k)
            m(i, k) = flat[static_cast<std::size_t>(i * c + k)];
    return m;
}

json matrix_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            row.push_back(complex_json(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

PeriodicStencil parse_stencil(const json& j) {
    if (!j.is_object())
        throw parse_error("stencil must be a JSON object");
    for (const char* key : {"dim", "fiber", "coeffs"})
        if (!j.contains(key))
            throw parse_error(std::string("stencil is missing '") + key + "'");
    if (!j.at("dim").is_number_integer() || !j.at("fiber").is_number_integer())
        throw parse_error("stencil 'dim' and 'fiber' must be integers");
    const int dim = j.at("dim").get<int>();
    const int fiber = j.at("fiber").get<int>();
    if (dim < 1 || dim > 3)
        throw domain_error("stencil dim must be 1, 2 or 3");
    if (fiber < 1)
        throw domain_error("stencil fiber must be positive");
    if (!j.at("coeffs").is_array())
        throw parse_error("stencil 'coeffs' must be a list");
    std::vector<StencilTerm> terms;
    for (const auto& t : j.at("coeffs")) {
        if (!t.is_object() || !t.contains("offset") || !t.contains("matrix"))
            throw parse_error("each coefficient needs 'offset' and 'matrix'");
        Offset g;
        try {
            g = t.at("offset").get<Offset>();
        } catch (const json::exception&) {
            throw parse_error("offset must be a list of integers");
        }
        terms.push_back({std::move(g), parse_matrix(t.at("matrix"), fiber, fiber)});
    }
    return PeriodicStencil::hermitian(dim, fiber, terms);
}

PeriodicStencil load_stencil(const std::filesystem::path& path) {
    return parse_stencil(read_json_file(path));
}

json stencil_json(const PeriodicStencil& s) {
    json coeffs = json::array();
    for (const auto& [g, a] : s.coefficients())
        if (lex_nonnegative(g))
            coeffs.push_back({{"offset", g}, {"matrix", matrix_json(a)}});
    return {{"dim", s.dim()}, {"fiber", s.fiber()}, {"coeffs", coeffs}};
}

namespace {

PeriodicStencil stencil_ref(const json& j, const std::filesystem::path& base_dir) {
    if (j.is_string()) {
        std::filesystem::path p = j.get<std::string>();
        if (p.is_relative())
            p = base_dir / p;
        return load_stencil(p);
    }
    return parse_stencil(j);
}

} // namespace

CMatrix parse_k(const json& j) {
    if (j.is_object()) {
        if (!j.contains("K"))
            throw parse_error("K file must be a matrix or an object with 'K'");
        return parse_matrix(j.at("K"));
    }
    return parse_matrix(j);
}

CouplingSpec parse_coupling(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object() || !j.contains("base") || !j.contains("K"))
        throw parse_error("coupling descriptor needs 'base' and 'K'");
    auto base = stencil_ref(j.at("base"), base_dir);
    auto rabi = j.contains("rabi") ? stencil_ref(j.at("rabi"), base_dir)
                                   : stencils::scalar(base.dim(), base.fiber(), 1.0);
    CouplingSpec spec{std::move(base), std::move(rabi), parse_matrix(j.at("K"))};
    validate(spec);
    return spec;
}

CouplingSpec load_coupling(const std::filesystem::path& path) {
    return parse_coupling(read_json_file(path), path.parent_path());
}

json band_json(const BandReport& b) {
    auto ivs = [](const std::vector<BandInterval>& v) {
        json a = json::array();
        for (const auto& iv : v)
            a.push_back({{"lo", iv.lo}, {"hi", iv.hi}, {"mult", iv.mult}});
        return a;
    };
    json crit = json::array();
    for (const auto& c : b.critical)
        crit.push_back({{"k", c.k}, {"value", c.value}});
    json samples = json::array();
    for (std::size_t i = 0; i < b.lambda_grid.size(); ++i)
        samples.push_back({{b.variable, b.lambda_grid[i]}, {"mult", b.multiplicity[i]}});
    return {{"variable", b.variable},  {"intervals", ivs(b.intervals)}, {"branches", ivs(b.branches)},
            {"span", ivs(b.span)},     {"critical", crit},               {"samples", samples}};
}

json decay_json(const DecayFit& f) {
    json shells = json::array();
    for (const auto& s : f.shells)
        shells.push_back({{"radius", s.radius}, {"max_abs", s.max_abs}});
    return {{"alpha", f.alpha}, {"r2", f.r2}, {"used", f.used}, {"power", f.power}, {"shells", shells}};
}

json greens_json(const GreensResult& g, const SiteDefect& v, double residual) {
    json j = {{"lambda", g.lambda},
              {"u0", complex_json(g.u0)},
              {"quad_n", g.quad_n},
              {"component", g.component},
              {"quad_error", g.quad_error},
              {"min_det", g.min_det},
              {"residual", residual}};
    const CMatrix* v0 = v.at(Offset(g.u.dim(), 0));
    j["V0"] = v0 ? (*v0)(g.component, g.component).real() : 0.0;
    try {
        j["decay"] = decay_json(fit_decay(g.u, 1, 0.5 * (g.u.dim() - 1)));
    } catch (const domain_error&) {
        j["decay"] = nullptr;
    }
    return j;
}

json example1_json(const Example1Defect& e, double residual) {
    return {{"alpha", e.alpha}, {"lambda", e.lambda}, {"V0", e.v0},
            {"V1", e.v1},       {"Vm1", e.v1},        {"residual", residual},
            {"box", e.v.half_width()[0]}};
}

json chain_json(const ChainBoundState& s) {
    return {{"mu", s.mu},
            {"lambda", s.mu * s.mu},
            {"z", s.z},
            {"nu", s.nu.nu},
            {"V0", s.nu.v0},
            {"nu_residual", s.nu.residual},
            {"nu_branch", s.nu.branch},
            {"box", s.box},
            {"residual_continuity", s.residual_continuity},
            {"residual_flux", s.residual_flux},
            {"residual_vertex", s.residual_vertex},
            {"decay_ratio_error", s.decay_ratio_error},
            {"reflection_error", s.reflection_error},
            {"antisymmetry_error", s.antisymmetry_error},
            {"decay_alpha", -std::log(std::abs(s.z))},
            {"embedded", s.embedded},
            {"witness", {{"lo", s.witness.lo}, {"hi", s.witness.hi}}}};
}

json grid_json(const GridBoundState& s, const BandReport& bands) {
    json j = {{"mu", s.mu},
              {"bc", to_string(s.bc)},
              {"lambda", s.mu * s.mu},
              {"nu", s.nu},
              {"V0", s.v0},
              {"box", s.box},
              {"quad_n", s.quad_n},
              {"k0", s.k0},
              {"quad_error", s.quad_error},
              {"residual_continuity", s.residual_continuity},
              {"residual_flux", s.residual_flux},
              {"residual_vertex", s.residual_vertex},
              {"decay_alpha", s.decay.alpha},
              {"decay_r2", s.decay.r2},
              {"predicted_alpha", s.predicted_alpha},
              {"tail", s.tail},
              {"embedded", s.embedded},
              {"bands", band_json(bands)}};
    j["witness"] = s.embedded ? json{{"lo", s.witness.lo}, {"hi", s.witness.hi}} : json(nullptr);
    return j;
}

json embed_json(const EmbedResult& e) {
    return {{"variant", e.variant},
            {"eigenvalue", e.eigenvalue},
            {"residual_in", e.residual_in},
            {"residual_out", e.residual_out},
            {"embedded", true},
            {"witness", {{"lo", e.witness.lo}, {"hi", e.witness.hi}, {"mult", e.witness.mult}}},
            {"fiber", e.op.fiber()},
            {"degree", e.op.degree()}};
}

std::string csv_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string dispersion_csv(const std::vector<CriticalPoint>& pts) {
    std::string out = "k,lambda\n";
    for (const auto& p : pts)
        out += csv_number(p.k) + "," + csv_number(p.value) + "\n";
    return out;
}

std::string decay_csv(const DecayFit& f) {
    std::string out = "radius,max_abs\n";
    for (const auto& s : f.shells)
        out += std::to_string(s.radius) + "," + csv_number(s.max_abs) + "\n";
    return out;
}

std::string cells_csv(const LatticeField& cells, const std::vector<std::string>& columns) {
    static const char* axes[] = {"g1", "g2", "g3"};
    std::string out;
    for (int a = 0; a < cells.dim(); ++a)
        out += std::string(axes[a]) + ",";
    for (int c = 0; c < cells.fiber(); ++c) {
        const std::string name =
            c < static_cast<int>(columns.size()) ? columns[c] : "c" + std::to_string(c);
        out += name + "_re," + name + "_im" + (c + 1 < cells.fiber() ? "," : "\n");
    }
    for (std::size_t i = 0; i < cells.site_count(); ++i) {
        for (int x : cells.site(i))
            out += std::to_string(x) + ",";
        const auto f = cells.fiber_at(i);
        for (std::size_t c = 0; c < f.size(); ++c)
            out += csv_number(f[c].real()) + "," + csv_number(f[c].imag()) +
                   (c + 1 < f.size() ? "," : "\n");
    }
    return out;
}

std::string bands_csv(const BandReport& b) {
    std::string out = "lo,hi,mult\n";
    for (const auto& iv : b.intervals)
        out += csv_number(iv.lo) + "," + csv_number(iv.hi) + "," + std::to_string(iv.mult) + "\n";
    return out;
}

} // namespace fermilab
