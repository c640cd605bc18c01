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

#include "fermilab/torus.hpp"

#include <cmath>
#include <numbers>

#include "fermilab/error.hpp"

namespace fermilab {

namespace {

template <typename T>
T pairwise(const T* p, std::size_t n) {
    if (n <= 8) {
        T s{};
        for (std::size_t i = 0; i < n; ++i)
            s += p[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise(p, h) + pairwise(p + h, n - h);
}

} // namespace

cplx pairwise_sum(std::span<const cplx> v) { return pairwise(v.data(), v.size()); }
double pairwise_sum(std::span<const double> v) { return pairwise(v.data(), v.size()); }

TorusGrid::TorusGrid(int dim, int n) : dim_(dim), n_(n), size_(1) {
    if (dim < 1 || dim > 3)
        throw domain_error("TorusGrid: dimension must be 1, 2 or 3");
    if (n < 2)
        throw domain_error("TorusGrid: need at least 2 points per axis");
    for (int a = 0; a < dim; ++a)
        size_ *= static_cast<std::size_t>(n);
}

double TorusGrid::node(int j) const { return 2.0 * std::numbers::pi * j / n_; }

std::vector<int> TorusGrid::index(std::size_t flat) const {
    std::vector<int> idx(dim_);
    for (int a = dim_ - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % n_);
        flat /= n_;
    }
    return idx;
}

std::vector<double> TorusGrid::point(std::size_t flat) const {
    auto idx = index(flat);
    std::vector<double> k(dim_);
    for (int a = 0; a < dim_; ++a)
        k[a] = node(idx[a]);
    return k;
}

cplx torus_average(const TorusGrid& grid, const std::function<cplx(std::span<const double>)>& f) {
    std::vector<cplx> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto k = grid.point(i);
        vals[i] = f(k);
    }
    return pairwise_sum(vals) / static_cast<double>(grid.size());
}

double torus_average_real(const TorusGrid& grid,
                          const std::function<double(std::span<const double>)>& f) {
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto k = grid.point(i);
        vals[i] = f(k);
    }
    return pairwise_sum(vals) / static_cast<double>(grid.size());
}

LatticeField inverse_floquet(const TorusGrid& grid, std::span<const cplx> samples, int fiber,
                             const std::vector<int>& half_width) {
    const int n = grid.dim();
    const int N = grid.n();
    if (static_cast<int>(half_width.size()) != n)
        throw domain_error("inverse_floquet: box dimension differs from grid");
    if (samples.size() != grid.size() * static_cast<std::size_t>(fiber))
        throw domain_error("inverse_floquet: sample count mismatch");
    for (int b : half_width)
        if (2 * b >= N)
            throw domain_error("inverse_floquet: box too large for the quadrature grid (aliasing)");

    // exact twiddles: e^{2 pi i m / N}
    std::vector<cplx> tw(N);
    for (int m = 0; m < N; ++m) {
        const double t = 2.0 * std::numbers::pi * m / N;
        tw[m] = cplx(std::cos(t), std::sin(t));
    }

    // Contract one axis at a time. shape[a] is N before axis a is
    // contracted and 2B_a+1 afterwards; the fiber is the last index.
    std::vector<std::size_t> shape(n, static_cast<std::size_t>(N));
    std::vector<cplx> cur(samples.begin(), samples.end());
    for (int a = 0; a < n; ++a) {
        const int out_len = 2 * half_width[a] + 1;
        std::size_t outer = 1, inner = static_cast<std::size_t>(fiber);
        for (int b = 0; b < a; ++b)
            outer *= shape[b];
        for (int b = a + 1; b < n; ++b)
            inner *= shape[b];
        std::vector<cplx> next(outer * out_len * inner, cplx(0.0, 0.0));
        for (std::size_t o = 0; o < outer; ++o) {
            for (int q = 0; q < out_len; ++q) {
                const int g = q - half_width[a];
                cplx* dst = &next[(o * out_len + q) * inner];
                for (int j = 0; j < N; ++j) {
                    int m = static_cast<int>((static_cast<long long>(j) * g) % N);
                    if (m < 0)
                        m += N;
                    const cplx w = tw[m];
                    const cplx* src = &cur[(o * N + j) * inner];
                    for (std::size_t i = 0; i < inner; ++i)
                        dst[i] += w * src[i];
                }
            }
        }
        shape[a] = static_cast<std::size_t>(out_len);
        cur.swap(next);
    }

    LatticeField out(half_width, fiber);
    const double scale = 1.0 / static_cast<double>(grid.size());
    auto vals = out.values();
    for (std::size_t i = 0; i < cur.size(); ++i)
        vals[i] = cur[i] * scale;
    return out;
}

} // namespace fermilab
