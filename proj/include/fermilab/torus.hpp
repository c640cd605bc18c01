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

// Trapezoidal product quadrature on the n-torus and the inverse Floquet
// transform onto a finite box.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fermilab/lattice.hpp"

namespace fermilab {

// Deterministic pairwise (cascade) summation.
cplx pairwise_sum(std::span<const cplx> v);
double pairwise_sum(std::span<const double> v);

// Uniform grid k_j = 2 pi j / N per axis, j = 0..N-1, axis 0 slowest.
class TorusGrid {
public:
    TorusGrid(int dim, int n);

    int dim() const { return dim_; }
    int n() const { return n_; }
    std::size_t size() const { return size_; }

    double node(int j) const;
    std::vector<int> index(std::size_t flat) const;
    std::vector<double> point(std::size_t flat) const;

private:
    int dim_;
    int n_;
    std::size_t size_;
};

// Grid average of f over the torus, pairwise summed.
cplx torus_average(const TorusGrid& grid, const std::function<cplx(std::span<const double>)>& f);
double torus_average_real(const TorusGrid& grid,
                          const std::function<double(std::span<const double>)>& f);

// u(g) = N^{-n} sum_k f(k) e^{i k.g} for |g_a| <= B_a. samples holds
// grid.size() * fiber values (grid point slowest). Requires 2B_a < N.
LatticeField inverse_floquet(const TorusGrid& grid, std::span<const cplx> samples, int fiber,
                             const std::vector<int>& half_width);

} // namespace fermilab
