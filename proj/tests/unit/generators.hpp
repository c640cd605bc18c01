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

#pragma once

// Seeded generators for property tests.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fermilab/lattice.hpp"

namespace fermilab::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    cplx complex(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }

    double angle() { return uniform(-std::numbers::pi, std::numbers::pi); }

    std::vector<double> torus(int dim) {
        std::vector<double> k(dim);
        for (auto& x : k)
            x = angle();
        return k;
    }

    FloquetPoint torus_point(int dim) {
        const auto k = torus(dim);
        return FloquetPoint::on_torus(k);
    }

    CMatrix matrix(int rows, int cols, double scale = 1.0) {
        CMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                m(i, j) = complex(scale);
        return m;
    }

    CMatrix hermitian(int d, double scale = 1.0) {
        const CMatrix m = matrix(d, d, scale);
        return 0.5 * (m + m.adjoint());
    }

    // Self-adjoint stencil with random lex-positive offsets of degree <= deg.
    PeriodicStencil stencil(int dim, int fiber, int deg = 2, int terms = 3) {
        std::vector<StencilTerm> half{{Offset(dim, 0), hermitian(fiber)}};
        std::vector<Offset> used{Offset(dim, 0)};
        int avail = 1;
        for (int a = 0; a < dim; ++a)
            avail *= 2 * deg + 1;
        terms = std::min(terms, (avail - 1) / 2);
        for (int t = 0; t < terms; ++t) {
            Offset g(dim);
            do {
                for (auto& x : g)
                    x = integer(-deg, deg);
            } while (!lex_nonnegative(g) || linf_norm(g) == 0 ||
                     std::find(used.begin(), used.end(), g) != used.end());
            used.push_back(g);
            half.push_back({g, matrix(fiber, fiber)});
        }
        return PeriodicStencil::hermitian(dim, fiber, half);
    }

    LatticeField field(int dim, int box, int fiber) {
        LatticeField f(std::vector<int>(dim, box), fiber);
        for (auto& v : f.values())
            v = complex();
        return f;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

} // namespace fermilab::testing
