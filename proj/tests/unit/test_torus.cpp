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
#include <vector>

#include <gtest/gtest.h>

#include "fermilab/error.hpp"
#include "fermilab/torus.hpp"
#include "generators.hpp"

namespace fermilab {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(PairwiseSum, MatchesExactSumOfIntegers) {
    std::vector<double> v(1001);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = static_cast<double>(i);
    EXPECT_EQ(pairwise_sum(v), 500500.0);
    std::vector<cplx> c(7, cplx(1.0, -2.0));
    EXPECT_EQ(pairwise_sum(c), cplx(7.0, -14.0));
    EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(TorusGrid, NodesAndIndexing) {
    const TorusGrid g(2, 8);
    EXPECT_EQ(g.size(), 64u);
    EXPECT_DOUBLE_EQ(g.node(0), 0.0);
    EXPECT_DOUBLE_EQ(g.node(4), kPi);
    const auto idx = g.index(8 * 3 + 5);
    EXPECT_EQ(idx, (std::vector<int>{3, 5}));
    const auto p = g.point(8 * 3 + 5);
    EXPECT_DOUBLE_EQ(p[0], g.node(3));
    EXPECT_DOUBLE_EQ(p[1], g.node(5));
    EXPECT_THROW(TorusGrid(0, 8), domain_error);
    EXPECT_THROW(TorusGrid(4, 8), domain_error);
}

TEST(TorusAverage, ExactForLowTrigonometricPolynomials) {
    // The N-point trapezoid rule integrates e^{imk} exactly for |m| < N.
    const TorusGrid g(2, 16);
    for (int m1 = -15; m1 <= 15; m1 += 3)
        for (int m2 = -15; m2 <= 15; m2 += 5) {
            const cplx avg = torus_average(g, [&](std::span<const double> k) {
                return std::polar(1.0, m1 * k[0] + m2 * k[1]);
            });
            const double want = (m1 == 0 && m2 == 0) ? 1.0 : 0.0;
            EXPECT_NEAR(std::abs(avg - want), 0.0, 1e-14) << m1 << "," << m2;
        }
}

TEST(TorusAverage, ResolventOfChainConverges) {
    // (1/2pi) int dk / (3 + 2cos k) = 1/sqrt(5).
    const TorusGrid g(1, 128);
    const double v = torus_average_real(g, [](std::span<const double> k) { return 1.0 / (3.0 + 2.0 * std::cos(k[0])); });
    EXPECT_NEAR(v, 1.0 / std::sqrt(5.0), 1e-15);
}

TEST(InverseFloquet, MonomialMapsToShiftedDelta) {
    testing::Gen gen(41);
    const int n = 16;
    const TorusGrid g(2, n);
    for (int t = 0; t < 10; ++t) {
        const int h1 = gen.integer(-3, 3), h2 = gen.integer(-3, 3);
        std::vector<cplx> s(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto k = g.point(i);
            s[i] = std::polar(1.0, -(h1 * k[0] + h2 * k[1]));
        }
        const auto u = inverse_floquet(g, s, 1, {5, 5});
        for (std::size_t i = 0; i < u.site_count(); ++i) {
            const auto site = u.site(i);
            const double want = (site[0] == h1 && site[1] == h2) ? 1.0 : 0.0;
            EXPECT_NEAR(std::abs(u.values()[i] - want), 0.0, 1e-14);
        }
    }
}

TEST(InverseFloquet, MatchesDirectSumOnRandomSamples) {
    testing::Gen gen(43);
    const int n = 8;
    const TorusGrid g(2, n);
    const int d = 2;
    std::vector<cplx> s(g.size() * d);
    for (auto& x : s)
        x = gen.complex();
    const auto u = inverse_floquet(g, s, d, {3, 2});
    for (std::size_t i = 0; i < u.site_count(); ++i) {
        const auto site = u.site(i);
        for (int c = 0; c < d; ++c) {
            cplx acc = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j) {
                const auto k = g.point(j);
                acc += s[j * d + c] * std::polar(1.0, k[0] * site[0] + k[1] * site[1]);
            }
            acc /= static_cast<double>(g.size());
            EXPECT_NEAR(std::abs(u.fiber_at(i)[c] - acc), 0.0, 1e-14);
        }
    }
}

TEST(InverseFloquet, BoxMustFitGrid) {
    const TorusGrid g(1, 8);
    std::vector<cplx> s(8, 1.0);
    EXPECT_THROW(inverse_floquet(g, s, 1, {4}), domain_error);
    EXPECT_NO_THROW(inverse_floquet(g, s, 1, {3}));
}

} // namespace
} // namespace fermilab
