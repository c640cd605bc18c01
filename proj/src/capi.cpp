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

#include "fermilab/fermilab.h"

#include <cmath>
#include <new>
#include <random>
#include <string>

#include "fermilab/coupling.hpp"
#include "fermilab/dispersion.hpp"
#include "fermilab/error.hpp"
#include "fermilab/greens.hpp"
#include "fermilab/io.hpp"
#include "fermilab/quantum_graph.hpp"
#include "fermilab/verify.hpp"

struct fl_stencil {
    fermilab::PeriodicStencil s;
};

struct fl_document {
    std::string text;
};

namespace {

using namespace fermilab;
using nlohmann::json;

thread_local std::string g_last_error;

fl_status fail(fl_status st, const std::string& msg) {
    g_last_error = msg;
    return st;
}

struct invalid_argument : error {
    using error::error;
};

// Maps library exceptions to status codes.
template <class F>
fl_status guarded(F&& f) {
    g_last_error.clear();
    try {
        f();
        return FL_OK;
    } catch (const invalid_argument& e) {
        return fail(FL_ERR_INVALID_ARGUMENT, e.what());
    } catch (const domain_error& e) {
        return fail(FL_ERR_DOMAIN, e.what());
    } catch (const convergence_error& e) {
        return fail(FL_ERR_CONVERGENCE, e.what());
    } catch (const io_error& e) {
        return fail(FL_ERR_IO, e.what());
    } catch (const parse_error& e) {
        return fail(FL_ERR_PARSE, e.what());
    } catch (const json::exception& e) {
        return fail(FL_ERR_PARSE, e.what());
    } catch (const std::bad_alloc&) {
        return fail(FL_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(FL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FL_ERR_INTERNAL, "unknown exception");
    }
}

void require(bool ok, const char* what) {
    if (!ok)
        throw invalid_argument(what);
}

fl_options opts_or_default(const fl_options* opt) {
    fl_options o;
    fl_options_init(&o);
    if (opt)
        o = *opt;
    if (o.format != FL_FORMAT_JSON && o.format != FL_FORMAT_CSV)
        throw invalid_argument("unknown output format");
    if (o.quad_n < 0 || o.box < 0)
        throw invalid_argument("quad_n and box must be non-negative");
    return o;
}

void emit(fl_document** out, const json& j) {
    *out = new fl_document{j.dump(2) + "\n"};
}

void emit(fl_document** out, std::string csv) { *out = new fl_document{std::move(csv)}; }

FloquetPoint torus_point(const double* k, size_t nk, int dim) {
    require(k != nullptr || nk == 0, "k is NULL");
    require(static_cast<int>(nk) == dim, "k length does not match the stencil dimension");
    return FloquetPoint::on_torus(std::span<const double>(k, nk));
}

// Deterministic torus samples for the coupling identities.
std::vector<FloquetPoint> random_torus(int dim, int count) {
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> u(-3.141592653589793, 3.141592653589793);
    std::vector<FloquetPoint> pts;
    for (int i = 0; i < count; ++i) {
        std::vector<double> k(dim);
        for (auto& x : k)
            x = u(rng);
        pts.push_back(FloquetPoint::on_torus(k));
    }
    return pts;
}

} // namespace

extern "C" {

const char* fl_version(void) { return "0.1.0"; }

const char* fl_last_error(void) { return g_last_error.c_str(); }

void fl_options_init(fl_options* opt) {
    if (!opt)
        return;
    opt->format = FL_FORMAT_JSON;
    opt->quad_n = 0;
    opt->box = 0;
}

fl_status fl_stencil_parse(const char* text, fl_stencil** out) {
    return guarded([&] {
        require(text && out, "NULL argument");
        *out = nullptr;
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw parse_error(e.what());
        }
        *out = new fl_stencil{parse_stencil(j)};
    });
}

fl_status fl_stencil_load(const char* path, fl_stencil** out) {
    return guarded([&] {
        require(path && out, "NULL argument");
        *out = nullptr;
        *out = new fl_stencil{load_stencil(path)};
    });
}

void fl_stencil_free(fl_stencil* s) { delete s; }

int fl_stencil_dim(const fl_stencil* s) { return s ? s->s.dim() : -1; }
int fl_stencil_fiber(const fl_stencil* s) { return s ? s->s.fiber() : -1; }
int fl_stencil_degree(const fl_stencil* s) { return s ? s->s.degree() : -1; }

fl_status fl_stencil_symbol(const fl_stencil* s, const double* k, size_t nk, double* out,
                            size_t out_len) {
    return guarded([&] {
        require(s && out, "NULL argument");
        const int d = s->s.fiber();
        require(out_len >= static_cast<size_t>(2 * d * d), "output buffer too small");
        const CMatrix m = symbol_eval(s->s, torus_point(k, nk, s->s.dim()));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                out[2 * (i * d + j)] = m(i, j).real();
                out[2 * (i * d + j) + 1] = m(i, j).imag();
            }
    });
}

fl_status fl_stencil_det(const fl_stencil* s, const double* k, size_t nk, double lambda,
                         double* re, double* im) {
    return guarded([&] {
        require(s && re && im, "NULL argument");
        const cplx v = det_symbol(s->s, torus_point(k, nk, s->s.dim()), lambda);
        *re = v.real();
        *im = v.imag();
    });
}

fl_status fl_multiplicity_1d(const fl_stencil* s, double lambda, int* count, int* at_edge) {
    return guarded([&] {
        require(s && count && at_edge, "NULL argument");
        require(s->s.dim() == 1, "multiplicity_1d needs a one-dimensional stencil");
        const auto m = multiplicity_1d(s->s, lambda);
        *count = m.count;
        *at_edge = m.at_edge ? 1 : 0;
    });
}

fl_status fl_run_ex1(double alpha, const fl_options* opt, fl_document** out) {
    return guarded([&] {
        require(out != nullptr, "NULL argument");
        *out = nullptr;
        const auto o = opts_or_default(opt);
        const int box = o.box > 0 ? o.box : 50;
        const auto e = example1_defect(alpha, box);
        const auto A = stencils::fourth_order_1d();
        const double res = apply_truncated(A, e.v, &e.defect, e.lambda).sup_norm();
        if (o.format == FL_FORMAT_CSV)
            return emit(out, cells_csv(e.v, {"v"}));
        json j = example1_json(e, res);
        const auto bands = example1_bands();
        if (auto w = bands.witness(e.lambda))
            j["witness"] = {{"lo", w->lo}, {"hi", w->hi}, {"mult", w->mult}};
        j["embedded"] = bands.contains(e.lambda);
        j["decay"] = decay_json(fit_decay(e.v, 1));
        emit(out, j);
    });
}

fl_status fl_run_ex2(double a, double b, double c, const fl_options* opt, fl_document** out) {
    return guarded([&] {
        require(out != nullptr, "NULL argument");
        *out = nullptr;
        const auto o = opts_or_default(opt);
        const auto rep = example2_bands(a, b, c);
        if (o.format == FL_FORMAT_CSV)
            return emit(out, bands_csv(rep));
        json j = band_json(rep);
        j["a"] = a;
        j["b"] = b;
        j["c"] = c;
        emit(out, j);
    });
}

fl_status fl_run_ex3(double mu, const fl_options* opt, fl_document** out) {
    return guarded([&] {
        require(out != nullptr, "NULL argument");
        *out = nullptr;
        const auto o = opts_or_default(opt);
        const auto st = chain1d_bound_state(mu, o.box > 0 ? o.box : 30);
        if (o.format == FL_FORMAT_CSV)
            return emit(out, cells_csv(st.cells, {"rung", "C", "D"}));
        emit(out, chain_json(st));
    });
}

fl_status fl_run_green(const fl_stencil* s, double lambda, const fl_options* opt,
                       fl_document** out) {
    return guarded([&] {
        require(s && out, "NULL argument");
        *out = nullptr;
        const auto o = opts_or_default(opt);
        GreensOptions g;
        if (o.quad_n > 0)
            g.quad_n = o.quad_n;
        if (o.box > 0)
            g.box = o.box;
        else
            g.box = std::min(g.box, g.quad_n / 2 - 1);
        const auto r = resolvent_delta(s->s, lambda, g);
        const auto v = synth_defect(r);
        const double res = apply_truncated(s->s, r.u, &v, lambda).sup_norm();
        if (o.format == FL_FORMAT_CSV)
            return emit(out, decay_csv(fit_decay(r.u, 0)));
        emit(out, greens_json(r, v, res));
    });
}

fl_status fl_run_bands(const fl_stencil* s, const fl_options* opt, fl_document** out) {
    return guarded([&] {
        require(s && out, "NULL argument");
        *out = nullptr;
        const auto o = opts_or_default(opt);
        const int samples = o.quad_n > 0 ? o.quad_n : 256;
        if (o.format == FL_FORMAT_CSV) {
            if (s->s.dim() == 1)
                return emit(out, dispersion_csv(dispersion_curve(s->s, samples + 1)));
            return emit(out, bands_csv(spectrum_bands(s->s, samples)));
        }
        const auto rep = spectrum_bands(s->s, samples, s->s.dim() == 1 ? 200 : 0);
        json j = band_json(rep);
        j["dim"] = s->s.dim();
        j["fiber"] = s->s.fiber();
        emit(out, j);
    });
}

fl_status fl_run_coupled(const fl_stencil* s, const char* k_json, double theta, double phi,
                         double lambda0, int variant, double lambda, const fl_options* opt,
                         fl_document** out) {
    return guarded([&] {
        require(s && out, "NULL argument");
        require(variant >= 0 && variant <= 2, "variant must be 0, 1 or 2");
        *out = nullptr;
        const auto o = opts_or_default(opt);
        const auto& A = s->s;

        double mu_lambda = lambda;
        if (std::isnan(mu_lambda)) {
            const auto bands = spectrum_bands(A, 256);
            require(!bands.span.empty(), "stencil has no spectrum");
            mu_lambda = bands.span.front().lo - 1.0;
        }
        const double l0 = std::isnan(lambda0) ? centered_lambda0(A, mu_lambda) : lambda0;

        CMatrix K;
        if (k_json) {
            json kj;
            try {
                kj = json::parse(k_json);
            } catch (const json::parse_error& e) {
                throw parse_error(e.what());
            }
            K = parse_k(kj);
        } else {
            K = two_graph_K(theta, phi);
        }
        const CouplingSpec spec{A, stencils::scalar(A.dim(), A.fiber(), l0), K};
        validate(spec);
        const auto hb = hybrid_unitary(K);
        const auto pts = random_torus(A.dim(), 100);
        double fact = 0.0;
        for (int i = 0; i < 10; ++i)
            fact = std::max(fact, factorization_check(spec, pts[i], 0.5 * (i - 5)));

        json j;
        j["m"] = K.rows();
        j["lambda0"] = l0;
        std::vector<double> kl(hb.lambda.data(), hb.lambda.data() + hb.lambda.size());
        j["K_eigenvalues"] = kl;
        j["conjugation_residual"] = conjugation_residual(spec, hb, pts);
        j["factorization_error"] = fact;

        if (variant == 0) {
            if (o.format == FL_FORMAT_CSV)
                return emit(out, std::string("m,lambda0,conjugation_residual,factorization_error\n") +
                                     std::to_string(K.rows()) + "," + csv_number(l0) + "," +
                                     csv_number(j["conjugation_residual"].get<double>()) + "," +
                                     csv_number(fact) + "\n");
            return emit(out, j);
        }

        GreensOptions g;
        if (o.quad_n > 0)
            g.quad_n = o.quad_n;
        g.box = o.box > 0 ? o.box : std::min(20, g.quad_n / 2 - 1);
        const auto r = resolvent_delta(A, mu_lambda, g);
        const auto V = synth_defect(r);
        const TwoGraphAngles ang{theta, phi, l0};
        const auto emb = theorem1_embed(A, V, r.u, mu_lambda, ang, variant);
        if (o.format == FL_FORMAT_CSV)
            return emit(out, cells_csv(emb.state.stacked, {}));
        j["lambda"] = mu_lambda;
        j["theta"] = theta;
        j["phi"] = phi;
        j["V0"] = (*V.at(Offset(A.dim(), 0)))(0, 0).real();
        j["embedding"] = embed_json(emb);
        emit(out, j);
    });
}

fl_status fl_run_grid2d(double mu, const char* bc, const fl_options* opt, fl_document** out) {
    return guarded([&] {
        require(bc && out, "NULL argument");
        *out = nullptr;
        const auto o = opts_or_default(opt);
        const auto cond = parse_bc(bc);
        const auto st = grid2d_bound_state(mu, cond, o.box > 0 ? o.box : 20,
                                           o.quad_n > 0 ? o.quad_n : 256);
        if (o.format == FL_FORMAT_CSV)
            return emit(out, cells_csv(st.cells, {"K", "C1", "D1", "C2", "D2"}));
        json j = grid_json(st, grid2d_bands(cond == BoundaryCondition::dirichlet
                                                ? BoundaryCondition::neumann
                                                : BoundaryCondition::dirichlet,
                                            mu + 3.141592653589793));
        j["bilayer_residual"] = grid2d_mirror_lift(st).residual;
        emit(out, j);
    });
}

fl_status fl_run_verify(const char* config_json, const fl_options* opt, fl_document** out,
                        int* suite_exit) {
    return guarded([&] {
        require(out && suite_exit, "NULL argument");
        *out = nullptr;
        const auto o = opts_or_default(opt);
        json cfg;
        if (config_json) {
            try {
                cfg = json::parse(config_json);
            } catch (const json::parse_error& e) {
                throw parse_error(e.what());
            }
        } else {
            cfg = default_suite_config();
        }
        const auto rep = suite_run(cfg);
        *suite_exit = rep.exit_code;
        if (o.format == FL_FORMAT_CSV) {
            std::string csv = "id,pass,negative_control,expected_fail_ok,residual_interior,failures\n";
            for (const auto& r : rep.cases) {
                std::string f;
                for (const auto& x : r.failures)
                    f += (f.empty() ? "" : ";") + x;
                csv += r.id + "," + (r.pass ? "1" : "0") + "," + (r.negative_control ? "1" : "0") +
                       "," + (r.expected_fail_ok ? "1" : "0") + "," +
                       csv_number(r.residual_interior) + "," + f + "\n";
            }
            return emit(out, csv);
        }
        emit(out, to_json(rep));
    });
}

const char* fl_document_text(const fl_document* d) { return d ? d->text.c_str() : ""; }

size_t fl_document_size(const fl_document* d) { return d ? d->text.size() : 0; }

void fl_document_free(fl_document* d) { delete d; }

} // extern "C"
