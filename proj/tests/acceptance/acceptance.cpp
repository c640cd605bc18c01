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

// Acceptance criteria 1 to 9. One PASS/FAIL line per criterion; exit status
// is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fermilab/coupling.hpp"
#include "fermilab/dispersion.hpp"
#include "fermilab/greens.hpp"
#include "fermilab/quantum_graph.hpp"
#include "fermilab/verify.hpp"
#include "generators.hpp"

namespace {

using namespace fermilab;
constexpr double kPi = std::numbers::pi;

// Collects named sub-checks; a criterion passes when every one holds.
class Checks {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok)
            failed_.push_back(what);
    }
    void note(const std::string& s) { notes_.push_back(s); }
    bool ok() const { return failed_.empty(); }
    std::string summary() const {
        std::ostringstream out;
        for (const auto& f : failed_)
            out << " [fail: " << f << "]";
        for (const auto& n : notes_)
            out << " " << n;
        return out.str();
    }

private:
    std::vector<std::string> failed_;
    std::vector<std::string> notes_;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// Multiplicity the band report assigns to an interior point of a level.
int report_mult(const BandReport& b, double lambda) {
    for (const auto& iv : b.intervals)
        if (iv.lo < lambda && lambda < iv.hi)
            return iv.mult;
    return 0;
}

void criterion1(Checks& c) {
    const auto b = example1_bands();
    c.expect(b.span.size() == 1 && b.span[0].lo == -3.0 && b.span[0].hi == 6.0, "span [-3,6]");
    c.expect(b.intervals.size() == 2 && b.intervals[0].mult == 4 && b.intervals[1].mult == 2 &&
                 b.intervals[0].hi == -2.0,
             "multiplicity 4 on (-3,-2), 2 on (-2,6)");
    const auto a = stencils::fourth_order_1d();
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        const double lambda = -4.0 + 11.0 * (i + 0.5) / 200.0;
        const auto m = multiplicity_1d(a, lambda);
        if (m.at_edge || m.count != report_mult(b, lambda))
            ++mismatches;
    }
    c.expect(mismatches == 0, "multiplicity_1d agreement at 200 lambda samples");
    c.note("mismatches=" + std::to_string(mismatches));
}

void criterion2(Checks& c) {
    const auto e = example1_defect(std::log(2.0), 50);
    const double r = apply_truncated(stencils::fourth_order_1d(), e.v, &e.defect, e.lambda).sup_norm();
    c.expect(std::abs(e.lambda + 0.75) <= 1e-12, "lambda = -0.75");
    c.expect(std::abs(e.v0 - 0.75) <= 1e-12, "V0 = 0.75");
    c.expect(std::abs(e.v1 + 4.5) <= 1e-12, "V+-1 = -4.5");
    c.expect(r <= 1e-12, "interior residual <= 1e-12");
    c.note("lambda=" + fmt("%.15g", e.lambda) + " V0=" + fmt("%.15g", e.v0) + " V+-1=" +
           fmt("%.15g", e.v1) + " residual=" + fmt("%.3g", r));
}

void criterion3(Checks& c) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double worst = 0.0;
    int mult_mismatch = 0, count_mismatch = 0;
    for (int t = 0; t < 100; ++t) {
        const double a = u(rng), b = u(rng), cc = u(rng);
        const auto closed = example2_bands(a, b, cc);
        const auto sampled = spectrum_bands(stencils::coupled_chains(a, b, cc), 256, 400);
        if (closed.intervals.size() != sampled.intervals.size()) {
            ++count_mismatch;
            continue;
        }
        for (std::size_t i = 0; i < closed.intervals.size(); ++i) {
            worst = std::max({worst, std::abs(closed.intervals[i].lo - sampled.intervals[i].lo),
                              std::abs(closed.intervals[i].hi - sampled.intervals[i].hi)});
            if (closed.intervals[i].mult != sampled.intervals[i].mult)
                ++mult_mismatch;
        }
    }
    c.expect(count_mismatch == 0 && mult_mismatch == 0, "interval structure and multiplicity");
    c.expect(worst <= 1e-10, "endpoints to 1e-10");
    c.note("max_endpoint_diff=" + fmt("%.3g", worst));
}

void criterion4(Checks& c) {
    testing::Gen gen(4);
    double conj = 0.0, fact = 0.0;
    for (int m = 2; m <= 4; ++m) {
        const CouplingSpec spec{gen.stencil(2, 2, 1, 2), gen.stencil(2, 2, 1, 2), gen.hermitian(m)};
        std::vector<FloquetPoint> zs;
        for (int i = 0; i < 100; ++i)
            zs.push_back(gen.torus_point(2));
        conj = std::max(conj, conjugation_residual(spec, zs));
        for (int i = 0; i < 20; ++i)
            fact = std::max(fact, factorization_check(spec, zs[i], gen.uniform(-3, 3)));
    }
    c.expect(conj <= 1e-12, "conjugation residual <= 1e-12");
    c.expect(fact <= 1e-10, "determinant factorization <= 1e-10");
    c.note("conjugation=" + fmt("%.3g", conj) + " factorization=" + fmt("%.3g", fact));
}

void criterion5(Checks& c) {
    const auto a = stencils::nearest_neighbour(2);
    const double lambda = -5.0;
    GreensOptions opt;
    opt.quad_n = 256;
    opt.box = 40;
    const auto g = resolvent_delta(a, lambda, opt);
    const auto v = synth_defect(g);
    const double l0 = centered_lambda0(a, lambda);
    for (int variant : {1, 2}) {
        const auto e = theorem1_embed(a, v, g.u, lambda, {0.7, 0.3, l0}, variant);
        const bool witness = e.witness.lo <= lambda + 2 * l0 && lambda + 2 * l0 <= e.witness.hi;
        c.expect(e.residual_out <= 1e-8 && witness,
                 "variant " + std::to_string(variant) + " residual and witness");
        c.note("V" + std::to_string(variant) + "_residual=" + fmt("%.3g", e.residual_out));
    }
    c.note("lambda0=" + fmt("%.6g", l0));
}

void criterion6(Checks& c) {
    const auto chain = resolvent_delta(stencils::nearest_neighbour(1), -3.0);
    const double d1 = std::abs(chain.u0 - 1.0 / std::sqrt(5.0));
    c.expect(d1 <= 1e-10, "1D u(0) = 1/sqrt 5");

    GreensOptions opt;
    opt.quad_n = 256;
    opt.box = 40;
    const auto a = stencils::nearest_neighbour(2);
    const auto g = resolvent_delta(a, -5.0, opt);
    const auto b = brute_force_green(a, -5.0, 60);
    double rel = 0.0;
    for (std::size_t i = 0; i < g.u.site_count(); ++i) {
        const auto s = g.u.site(i);
        if (linf_norm(s) > opt.box / 4)
            continue;
        rel = std::max(rel, std::abs(g.u.values()[i] - b.at(s)) / std::abs(b.at(s)));
    }
    c.expect(rel <= 1e-6, "2D relative difference on inner quarter box");
    c.expect(std::abs(g.u0.imag()) <= 1e-12, "u(0) real");
    c.note("chain_diff=" + fmt("%.3g", d1) + " lattice_rel=" + fmt("%.3g", rel) +
           " im_u0=" + fmt("%.3g", std::abs(g.u0.imag())));
}

void criterion7(Checks& c) {
    const double z = chain1d_z(2 * kPi);
    c.expect(std::abs(z - (4.0 - std::sqrt(15.0))) <= 1e-13, "z(2pi) = 4 - sqrt 15");
    const auto s = chain1d_bound_state(2 * kPi + 0.1, 30);
    c.expect(s.nu.residual <= 1e-12, "nu residual");
    c.expect(s.residual_vertex <= 1e-10, "vertex residuals");
    c.expect(s.decay_ratio_error <= 1e-10, "decay ratio = z");
    c.expect(s.embedded && s.witness.lo <= s.mu && s.mu <= s.witness.hi, "embedding witness");
    c.note("z(2pi)=" + fmt("%.15g", z) + " nu_residual=" + fmt("%.3g", s.nu.residual) +
           " vertex=" + fmt("%.3g", s.residual_vertex) + " ratio=" + fmt("%.3g", s.decay_ratio_error));
}

void criterion8(Checks& c) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> mu_d(0.05, 12.0), k_d(-kPi, kPi);
    double det_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double mu = mu_d(rng);
        const auto bc = (i % 2) ? BoundaryCondition::neumann : BoundaryCondition::dirichlet;
        const auto s = grid2d_secular(bc_constants(bc, mu, std::nullopt), mu, k_d(rng), k_d(rng));
        det_err = std::max(det_err, std::abs(s.det - s.det_closed) / std::max(1.0, std::abs(s.det)));
    }
    c.expect(det_err <= 1e-12, "5x5 determinant closed form");

    const double edge = grid2d_bands(BoundaryCondition::neumann).intervals.front().hi;
    c.expect(std::abs(edge - std::acos(-3.0 / 5.0)) <= 1e-12, "Neumann band edge");

    const auto r = R_integral(0.5);
    c.expect(r.value > 0 && r.rel_change <= 1e-9, "R(0.5) > 0 and converged");

    std::vector<int> tails;
    GridBoundState last;
    for (int box : {10, 15, 20}) {
        last = grid2d_bound_state(0.5, BoundaryCondition::dirichlet, box, 256);
        tails.push_back(last.tail);
    }
    c.expect(last.residual_vertex <= 1e-8, "vertex residuals");
    c.expect(last.decay.r2 >= 0.999, "decay fit r2");
    c.expect(tails[0] < tails[1] && tails[1] < tails[2], "tail grows with box");
    c.expect(last.embedded, "embedded");
    c.note("det_err=" + fmt("%.3g", det_err) + " R=" + fmt("%.10g", r.value) + " vertex=" +
           fmt("%.3g", last.residual_vertex) + " r2=" + fmt("%.6f", last.decay.r2) +
           " alpha=" + fmt("%.4f", last.decay.alpha) + " predicted=" + fmt("%.4f", last.predicted_alpha));
}

void criterion9(Checks& c) {
    const auto s = suite_run(nlohmann::json::array({"ex1.corrupt_v0", "grid2d.corrupt_nu"}));
    for (const auto& r : s.cases) {
        c.expect(!r.pass && r.residual_interior >= 1e-3 && r.expected_fail_ok, r.id + " reported FAIL");
        c.note(r.id + "_residual=" + fmt("%.3g", r.residual_interior));
    }
    c.expect(s.cases.size() == 2 && s.expected_failures == 2, "both controls counted");
}

struct Criterion {
    int id;
    double budget_s;
    std::function<void(Checks&)> run;
};

} // namespace

int main() {
    const std::vector<Criterion> all = {
        {1, 1, criterion1},  {2, 1, criterion2},  {3, 5, criterion3},
        {4, 5, criterion4},  {5, 60, criterion5}, {6, 30, criterion6},
        {7, 5, criterion7},  {8, 300, criterion8}, {9, 10, criterion9},
    };
    int failed = 0;
    for (const auto& cr : all) {
        Checks c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.expect(dt < cr.budget_s, "time budget " + fmt("%g s", cr.budget_s));
        if (!c.ok())
            ++failed;
        std::printf("criterion %d: %s (%.3f s)%s\n", cr.id, c.ok() ? "PASS" : "FAIL", dt,
                    c.summary().c_str());
        std::fflush(stdout);
    }
    return failed;
}
