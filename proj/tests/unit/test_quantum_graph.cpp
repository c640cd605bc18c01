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
#include <numbers>

#include <gtest/gtest.h>

#include "fermilab/error.hpp"
#include "fermilab/quantum_graph.hpp"
#include "generators.hpp"

namespace fermilab {
namespace {

using testing::Gen;
constexpr double kPi = std::numbers::pi;

TEST(Ladder, SecularDeterminantClosedFormProperty) {
    Gen gen(101);
    for (int t = 0; t < 40; ++t) {
        const double mu = gen.uniform(0.1, 12.0);
        const cplx z = gen.complex(2.0);
        for (auto p : {Parity::symmetric, Parity::antisymmetric}) {
            const auto s = chain1d_secular(mu, z, p);
            EXPECT_NEAR(std::abs(s.det - s.det_closed), 0.0, 1e-10 * (1.0 + std::abs(s.det)));
            EXPECT_NEAR(std::abs(s.det - s.matrix.determinant()), 0.0, 1e-12 * (1.0 + std::abs(s.det)));
        }
    }
    EXPECT_THROW(chain1d_secular(0.0, 1.0, Parity::symmetric), domain_error);
}

TEST(Ladder, DecayingMultiplier) {
    EXPECT_NEAR(chain1d_z(2 * kPi), 2.0 - std::sqrt(3.0), 1e-15);
    EXPECT_THROW(chain1d_z(kPi / 2), domain_error);
    Gen gen(103);
    for (int t = 0; t < 50; ++t) {
        const double mu = gen.uniform(0.01, 0.8) + 2 * kPi * gen.integer(0, 3);
        const double w = 3 * std::cos(mu) + 1;
        if (std::abs(w) <= 2.0 + 1e-9)
            continue;
        const double z = chain1d_z(mu);
        EXPECT_LT(std::abs(z), 1.0);
        EXPECT_NEAR(z + 1 / z, w, 1e-12);
    }
}

TEST(Ladder, NuRootSolvesCondition) {
    for (double mu : {0.3, 2 * kPi + 0.1, 4 * kPi + 0.5}) {
        const auto r = chain1d_nu(mu);
        EXPECT_LT(r.residual, 1e-12) << mu;
        EXPECT_NE(r.nu, mu);
        EXPECT_NEAR(r.v0, mu * mu - r.nu * r.nu, 1e-12 * (1 + mu * mu));
        EXPECT_LT(chain1d_nu(mu, 1).residual, 1e-12);
        EXPECT_GT(chain1d_nu(mu, 1).nu, r.nu);
    }
}

TEST(Ladder, BoundStateIsEmbedded) {
    const auto s = chain1d_bound_state(2 * kPi + 0.1, 20);
    EXPECT_TRUE(s.embedded);
    EXPECT_LE(s.witness.lo, s.mu);
    EXPECT_GE(s.witness.hi, s.mu);
    EXPECT_LT(s.residual_vertex, 1e-10);
    EXPECT_LT(s.decay_ratio_error, 1e-10);
    EXPECT_LT(s.reflection_error, 1e-12);
    EXPECT_LT(s.antisymmetry_error, 1e-12);
    EXPECT_THROW(chain1d_bound_state(kPi / 2, 20), domain_error);
    EXPECT_THROW(chain1d_bound_state(2 * kPi + 0.1, 1), domain_error);
}

TEST(Grid, SecularDeterminantClosedFormProperty) {
    Gen gen(107);
    for (int t = 0; t < 40; ++t) {
        const double mu = gen.uniform(0.1, 9.0);
        const cplx k1 = gen.complex(3.0), k2 = gen.complex(3.0);
        for (auto bc : {BoundaryCondition::dirichlet, BoundaryCondition::neumann}) {
            const auto s = grid2d_secular(bc_constants(bc, mu, std::nullopt), mu, k1, k2);
            EXPECT_NEAR(std::abs(s.det - s.det_closed), 0.0, 1e-9 * (1.0 + std::abs(s.det)));
            EXPECT_EQ(s.rhs.norm(), 0.0);
        }
    }
}

TEST(Grid, BandsInMu) {
    const double j = std::acos(-3.0 / 5.0);
    const auto n = grid2d_bands(BoundaryCondition::neumann);
    EXPECT_NEAR(n.intervals.front().lo, 0.0, 1e-15);
    EXPECT_NEAR(n.intervals.front().hi, j, 1e-15);
    const auto d = grid2d_bands(BoundaryCondition::dirichlet);
    EXPECT_NEAR(d.intervals.front().lo, kPi - j, 1e-15);
    EXPECT_NEAR(d.intervals.front().hi, kPi + j, 1e-15);
    EXPECT_FALSE(grid2d_in_band(BoundaryCondition::dirichlet, 0.5));
    EXPECT_TRUE(grid2d_in_band(BoundaryCondition::neumann, 0.5));
    EXPECT_TRUE(grid2d_in_band(BoundaryCondition::dirichlet, kPi - j));
}

TEST(Grid, BandMembershipMatchesDispersionProperty) {
    Gen gen(109);
    for (int t = 0; t < 100; ++t) {
        const double mu = gen.uniform(0.05, 12.0);
        for (auto bc : {BoundaryCondition::dirichlet, BoundaryCondition::neumann}) {
            const double lo = grid2d_dispersion(bc, mu, 0.0, 0.0);
            const double hi = grid2d_dispersion(bc, mu, kPi, kPi);
            EXPECT_EQ(grid2d_in_band(bc, mu), lo <= 0.0 && hi >= 0.0) << mu;
        }
    }
}

TEST(Grid, RIntegral) {
    const auto r = R_integral(0.5);
    EXPECT_GT(r.value, 0.0);
    EXPECT_LT(r.rel_change, 1e-9);
    EXPECT_NEAR(R_integral_neumann(0.5 + kPi).value, r.value, 1e-12);
    EXPECT_THROW(R_integral(1.0), domain_error);
    EXPECT_THROW(R_integral_neumann(0.5), domain_error);
}

TEST(Grid, RationalCoefficientMatchesSolveProperty) {
    Gen gen(113);
    for (int t = 0; t < 30; ++t) {
        const double mu = gen.uniform(0.1, 0.9);
        const double nu = gen.uniform(1.0, 3.0);
        const double k1 = gen.angle(), k2 = gen.angle();
        const cplx kd = grid2d_KD_hat(mu, nu, k1, k2);
        const CVector x = grid2d_solve(BoundaryCondition::dirichlet, mu, nu, k1, k2);
        EXPECT_NEAR(std::abs(kd - x[0]), 0.0, 1e-10 * (1.0 + std::abs(kd)));
        const cplx kn = grid2d_KN_hat(mu + kPi, nu, k1, k2);
        const CVector y = grid2d_solve(BoundaryCondition::neumann, mu + kPi, nu, k1, k2);
        EXPECT_NEAR(std::abs(kn - y[0]), 0.0, 1e-10 * (1.0 + std::abs(kn)));
    }
}

TEST(Grid, NuRootAndBoundState) {
    for (auto [mu, bc] : {std::pair{0.5, BoundaryCondition::dirichlet},
                          std::pair{0.5 + kPi, BoundaryCondition::neumann}}) {
        const auto r = grid2d_nu_root(mu, bc);
        EXPECT_LT(r.residual, 1e-10);
        const auto s = grid2d_bound_state(mu, bc, 20);
        EXPECT_TRUE(s.embedded);
        EXPECT_NEAR(s.nu, r.nu, 1e-12);
        EXPECT_LT(s.residual_vertex, 1e-8);
        EXPECT_GT(s.decay.r2, 0.999);
        EXPECT_NEAR(s.decay.alpha, s.predicted_alpha, 0.05 * s.predicted_alpha);
        EXPECT_EQ(s.tail, 20);
        const auto lift = grid2d_mirror_lift(s);
        EXPECT_EQ(lift.sigma, bc == BoundaryCondition::dirichlet ? -1 : 1);
        EXPECT_LT(lift.residual, 1e-8);
    }
}

TEST(Grid, WrongNuFailsVertexConditions) {
    const auto r = grid2d_nu_root(0.5, BoundaryCondition::dirichlet);
    const auto s = grid2d_bound_state_at(0.5, BoundaryCondition::dirichlet, r.nu + 1e-2, 15, 256);
    EXPECT_GT(s.residual_vertex, 1e-4);
}

TEST(Grid, ParseBoundaryCondition) {
    EXPECT_EQ(parse_bc("dirichlet"), BoundaryCondition::dirichlet);
    EXPECT_EQ(parse_bc("neumann"), BoundaryCondition::neumann);
    EXPECT_STREQ(to_string(BoundaryCondition::neumann), "neumann");
    EXPECT_THROW(parse_bc("robin"), domain_error);
}

} // namespace
} // namespace fermilab
