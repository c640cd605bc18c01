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

#include <cmath>

#include <gtest/gtest.h>

#include "fermilab/dispersion.hpp"
#include "fermilab/error.hpp"
#include "fermilab/greens.hpp"
#include "generators.hpp"

namespace fermilab {
namespace {

using testing::Gen;

// (A - lambda) u = delta on the chain: u(g) = u0 r^|g| with r the root of
// r + 1/r = lambda inside the unit disk and u0 = 1 / (2r - lambda).
double chain_u0(double lambda) {
    const double r = (lambda + (lambda < 0 ? 1 : -1) * std::sqrt(lambda * lambda - 4)) / 2;
    return 1.0 / (2.0 * r - lambda);
}

double chain_ratio(double lambda) {
    return (lambda + (lambda < 0 ? 1 : -1) * std::sqrt(lambda * lambda - 4)) / 2;
}

TEST(ResolventDelta, ChainMatchesClosedForm) {
    for (double lambda : {-3.0, -2.5, 2.2, 4.0, -10.0}) {
        GreensOptions opt;
        opt.quad_n = 256;
        opt.box = 10;
        const auto g = resolvent_delta(stencils::nearest_neighbour(1), lambda, opt);
        EXPECT_NEAR(g.u0.real(), chain_u0(lambda), 1e-12) << lambda;
        EXPECT_NEAR(g.u0.imag(), 0.0, 1e-14);
        const double r = chain_ratio(lambda);
        for (int s = -10; s <= 10; ++s)
            EXPECT_NEAR(std::abs(g.u.at({s}) - chain_u0(lambda) * std::pow(r, std::abs(s))), 0.0,
                        1e-12)
                << lambda << " " << s;
    }
}

TEST(ResolventDelta, ChainAtMinusThree) {
    const auto g = resolvent_delta(stencils::nearest_neighbour(1), -3.0);
    EXPECT_NEAR(g.u0.real(), 1.0 / std::sqrt(5.0), 1e-13);
    EXPECT_NEAR((g.u.at({1}) / g.u0).real(), (-3.0 + std::sqrt(5.0)) / 2.0, 1e-12);
    const auto v = synth_defect(g);
    EXPECT_NEAR(v.at({0})->coeff(0, 0).real(), -std::sqrt(5.0), 1e-12);
    EXPECT_EQ(v.sites().size(), 1u);
}

TEST(ResolventDelta, LatticeMatchesSparseSolve) {
    GreensOptions opt;
    opt.quad_n = 256;
    opt.box = 40;
    const auto g = resolvent_delta(stencils::nearest_neighbour(2), -5.0, opt);
    const auto b = brute_force_green(stencils::nearest_neighbour(2), -5.0, 60);
    for (std::size_t i = 0; i < g.u.site_count(); ++i) {
        const auto s = g.u.site(i);
        if (linf_norm(s) > 10)
            continue;
        const cplx want = b.at(s);
        EXPECT_NEAR(std::abs(g.u.values()[i] - want), 0.0, 1e-8 * std::abs(want) + 1e-15);
    }
    // symmetry of the square lattice
    EXPECT_NEAR(std::abs(g.u.at({3, 1}) - g.u.at({1, -3})), 0.0, 1e-15);
}

TEST(ResolventDelta, LargeShiftAsymptotics) {
    // (A - lambda)^{-1} = -sum A^n / lambda^{n+1}; <0|A^2|0> = 4, <0|A^4|0> = 36, <0|A^6|0> = 400.
    const auto g = resolvent_delta(stencils::nearest_neighbour(2), -100.0);
    EXPECT_NEAR(g.u0.real(), 1e-2 + 4e-6 + 36e-10 + 4e-12, 1e-13);
}

TEST(ResolventDelta, SolvesEquationProperty) {
    Gen gen(71);
    for (int t = 0; t < 12; ++t) {
        const int dim = gen.integer(1, 2);
        const int fiber = gen.integer(1, 2);
        const auto s = gen.stencil(dim, fiber, 1, 2);
        const auto bands = spectrum_bands(s, 32);
        const double lambda = bands.span.front().lo - gen.uniform(0.5, 2.0);
        GreensOptions opt;
        opt.quad_n = dim == 1 ? 128 : 96;
        opt.box = 12;
        opt.component = gen.integer(0, fiber - 1);
        const auto g = resolvent_delta(s, lambda, opt);
        const auto r = apply_truncated(s, g.u, nullptr, lambda);
        for (std::size_t i = 0; i < r.site_count(); ++i) {
            const bool origin = linf_norm(r.site(i)) == 0;
            for (int c = 0; c < fiber; ++c) {
                const cplx want = (origin && c == opt.component) ? 1.0 : 0.0;
                EXPECT_NEAR(std::abs(r.fiber_at(i)[c] - want), 0.0, 1e-9);
            }
        }
        // defect from the Green's function gives an eigenvector
        const auto v = synth_defect(g);
        const auto e = apply_truncated(s, g.u, &v, lambda);
        EXPECT_LT(e.sup_norm(), 1e-9);
    }
}

TEST(ResolventDelta, Errors) {
    EXPECT_THROW(resolvent_delta(stencils::nearest_neighbour(1), 0.0), domain_error);
    EXPECT_THROW(resolvent_delta(stencils::nearest_neighbour(1), 2.0), domain_error);
    GreensOptions opt;
    opt.quad_n = 32;
    opt.box = 16;
    EXPECT_THROW(resolvent_delta(stencils::nearest_neighbour(1), -3.0, opt), domain_error);
    opt.box = 4;
    opt.component = 1;
    EXPECT_THROW(resolvent_delta(stencils::nearest_neighbour(1), -3.0, opt), domain_error);
}

TEST(ResolventDelta, CoarseGridNearEdgeDoesNotConverge) {
    GreensOptions opt;
    opt.quad_n = 16;
    opt.box = 4;
    EXPECT_THROW(resolvent_delta(stencils::nearest_neighbour(1), -2.001, opt), error);
}

TEST(Example1, LnTwo) {
    const auto e = example1_defect(std::log(2.0));
    EXPECT_NEAR(e.lambda, -0.75, 1e-15);
    EXPECT_NEAR(e.v0, 0.75, 1e-14);
    EXPECT_NEAR(e.v1, 3.0, 1e-14);
    EXPECT_NEAR(e.v.at({3}).real(), -0.125, 1e-16);
    const auto r = apply_truncated(stencils::fourth_order_1d(), e.v, &e.defect, e.lambda);
    EXPECT_LT(r.sup_norm(), 1e-14);
}

TEST(Example1, EigenvectorProperty) {
    Gen gen(73);
    for (int t = 0; t < 20; ++t) {
        const double alpha = gen.uniform(0.05, std::acosh(2.0) - 0.05);
        const auto e = example1_defect(alpha, 30);
        EXPECT_GT(e.lambda, -2.0);
        EXPECT_LT(e.lambda, 6.0);
        const auto r = apply_truncated(stencils::fourth_order_1d(), e.v, &e.defect, e.lambda);
        EXPECT_LT(r.sup_norm(), 1e-12) << alpha;
        EXPECT_EQ(e.defect.sites().size(), 3u);
    }
    EXPECT_THROW(example1_defect(0.0), domain_error);
    EXPECT_THROW(example1_defect(2.0), domain_error);
}

TEST(FitDecay, ExactExponential) {
    const auto e = example1_defect(std::log(2.0));
    const auto f = fit_decay(e.v);
    EXPECT_NEAR(f.alpha, std::log(2.0), 1e-10);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
    EXPECT_GE(f.used, 3);
}

TEST(FitDecay, RemovesAlgebraicPrefactor) {
    LatticeField u({30, 30}, 1);
    for (std::size_t i = 0; i < u.site_count(); ++i) {
        const double r = linf_norm(u.site(i));
        u.values()[i] = r == 0 ? 1.0 : std::pow(r, -0.5) * std::exp(-0.9624 * r);
    }
    const auto f = fit_decay(u, 1, 0.5);
    EXPECT_NEAR(f.alpha, 0.9624, 1e-10);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
    EXPECT_EQ(f.power, 0.5);
    EXPECT_GT(std::abs(fit_decay(u).alpha - 0.9624), 1e-3);
}

TEST(FitDecay, TooFewShells) {
    LatticeField u({1}, 1);
    u.at({0}) = 1.0;
    EXPECT_THROW(fit_decay(u), domain_error);
}

TEST(SupportCheck, ChainResolventHasUnboundedTail) {
    const auto c = unbounded_support_check(stencils::nearest_neighbour(1), -3.0, {10, 15, 20});
    EXPECT_TRUE(c.unbounded);
    EXPECT_EQ(c.laurent_terms, 3);
    ASSERT_EQ(c.tail.size(), 3u);
    EXPECT_EQ(c.tail[0], 10);
    EXPECT_LE(c.tail[0], c.tail[1]);
    EXPECT_THROW(unbounded_support_check(stencils::scalar(1, 1, 2.0), -3.0, {10, 20}), domain_error);
}

} // namespace
} // namespace fermilab
