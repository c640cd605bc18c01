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

#include "fermilab/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "fermilab/error.hpp"
#include "fermilab/torus.hpp"

namespace fermilab {

namespace {

constexpr double kPi = std::numbers::pi;

// Pairs of roots closer than this, both this close to the circle, mark an edge.
constexpr double kEdgeTol = 1e-6;

} // namespace

cplx det_symbol(const PeriodicStencil& stencil, const FloquetPoint& z, double lambda) {
    CMatrix m = symbol_eval(stencil, z);
    m.diagonal().array() -= lambda;
    if (m.rows() == 1)
        return m(0, 0);
    return m.partialPivLu().determinant();
}

BranchValue branch_roots(cplx w) {
    // Take the larger-modulus root first; its reciprocal avoids cancellation.
    const cplx s = std::sqrt(w * w - 4.0);
    const cplx q1 = 0.5 * (w + s);
    const cplx q2 = 0.5 * (w - s);
    const cplx big = std::abs(q1) >= std::abs(q2) ? q1 : q2;
    BranchValue out{w, {}};
    if (big == cplx(0.0, 0.0)) {
        out.roots = {cplx(0.0, 1.0), cplx(0.0, -1.0)};
        return out;
    }
    const cplx small = 1.0 / big;
    out.roots = {small, big};
    if (std::abs(small) > std::abs(big))
        std::swap(out.roots[0], out.roots[1]);
    return out;
}

Multiplicity multiplicity_1d(const PeriodicStencil& stencil, double lambda, double tol_circle) {
    if (stencil.dim() != 1)
        throw domain_error("multiplicity_1d: stencil must be one-dimensional");
    Multiplicity out;
    const int shift = stencil.degree() * stencil.fiber();
    if (shift == 0)
        return out;

    // Exact coefficients of the degree-2*shift polynomial from M samples on the circle.
    const int M = 2 * shift + 1;
    std::vector<cplx> p(M);
    for (int j = 0; j < M; ++j) {
        const double k = 2.0 * kPi * j / M;
        const cplx zj = std::polar(1.0, k);
        p[j] = std::pow(zj, shift) * det_symbol(stencil, FloquetPoint::on_torus(std::span(&k, 1)),
                                                lambda);
    }
    std::vector<cplx> c(M);
    for (int m = 0; m < M; ++m) {
        std::vector<cplx> terms(M);
        for (int j = 0; j < M; ++j)
            terms[j] = p[j] * std::polar(1.0, -2.0 * kPi * static_cast<double>((j * m) % M) / M);
        c[m] = pairwise_sum(terms) / static_cast<double>(M);
    }
    double scale = 0.0;
    for (const auto& v : c)
        scale = std::max(scale, std::abs(v));
    if (scale == 0.0)
        throw domain_error("multiplicity_1d: det(A_hat(z) - lambda) vanishes identically");
    const double cut = 1e-12 * scale;
    int hi = M - 1;
    while (hi > 0 && std::abs(c[hi]) <= cut)
        --hi;
    int lo = 0;
    while (lo < hi && std::abs(c[lo]) <= cut)
        ++lo;
    const int deg = hi - lo;
    if (deg == 0)
        return out;

    CMatrix comp = CMatrix::Zero(deg, deg);
    for (int i = 1; i < deg; ++i)
        comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i)
        comp(i, deg - 1) = -c[lo + i] / c[hi];
    Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
    if (es.info() != Eigen::Success)
        throw convergence_error("multiplicity_1d: companion eigenvalue solver failed");
    for (int i = 0; i < deg; ++i)
        out.roots.push_back(es.eigenvalues()[i]);
    std::sort(out.roots.begin(), out.roots.end(), [](const cplx& x, const cplx& y) {
        return std::arg(x) < std::arg(y) || (std::arg(x) == std::arg(y) && std::abs(x) < std::abs(y));
    });

    for (const auto& r : out.roots)
        if (std::abs(std::abs(r) - 1.0) < tol_circle)
            ++out.count;
    for (std::size_t i = 0; i < out.roots.size(); ++i) {
        if (std::abs(std::abs(out.roots[i]) - 1.0) > kEdgeTol)
            continue;
        for (std::size_t j = i + 1; j < out.roots.size(); ++j) {
            if (std::abs(std::abs(out.roots[j]) - 1.0) > kEdgeTol)
                continue;
            if (std::abs(out.roots[i] - out.roots[j]) < kEdgeTol)
                out.at_edge = true;
        }
    }
    return out;
}

std::optional<BandInterval> BandReport::witness(double x, double tol) const {
    const auto& src = span.empty() ? intervals : span;
    for (const auto& iv : src)
        if (iv.contains(x, tol))
            return iv;
    return std::nullopt;
}

std::vector<BandInterval> merge_intervals(std::vector<BandInterval> v) {
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
    std::vector<BandInterval> out;
    for (const auto& iv : v) {
        if (!out.empty() && iv.lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, iv.hi);
        } else {
            out.push_back({iv.lo, iv.hi, 0});
        }
    }
    return out;
}

namespace {

// Splits the union of branch bands by how many branches cover each piece.
std::vector<BandInterval> partition_by_cover(const std::vector<BandInterval>& branches,
                                             int per_branch) {
    std::vector<double> ends;
    for (const auto& b : branches) {
        ends.push_back(b.lo);
        ends.push_back(b.hi);
    }
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    std::vector<BandInterval> out;
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
        const double mid = 0.5 * (ends[i] + ends[i + 1]);
        int cover = 0;
        for (const auto& b : branches)
            if (b.lo < mid && mid < b.hi)
                ++cover;
        if (cover == 0)
            continue;
        const int mult = per_branch * cover;
        if (!out.empty() && out.back().hi == ends[i] && out.back().mult == mult)
            out.back().hi = ends[i + 1];
        else
            out.push_back({ends[i], ends[i + 1], mult});
    }
    return out;
}

int sampled_mult(const PeriodicStencil& s, double lambda) {
    const auto m = multiplicity_1d(s, lambda);
    return m.at_edge ? -1 : m.count;
}

} // namespace

BandReport example1_bands() {
    BandReport r;
    r.intervals = {{-3.0, -2.0, 4}, {-2.0, 6.0, 2}};
    r.branches = {{-3.0, 6.0, 0}};
    r.span = {{-3.0, 6.0, 0}};
    // lambda(k) = 4cos k + 2cos 2k is stationary at k = 0, pi and cos k = -1/2.
    r.critical = {{0.0, 6.0}, {2.0 * kPi / 3.0, -3.0}, {kPi, -2.0}};
    return r;
}

BandReport example2_bands(double a, double b, double c) {
    const double r = std::hypot(b, c);
    BandReport rep;
    rep.branches = {{a - r - 2.0, a - r + 2.0, 2}, {a + r - 2.0, a + r + 2.0, 2}};
    rep.intervals = partition_by_cover(rep.branches, 2);
    rep.span = merge_intervals(rep.branches);
    return rep;
}

BandReport spectrum_bands(const PeriodicStencil& stencil, int samples, int lambda_samples) {
    if (samples < 2 || samples % 2 != 0)
        throw domain_error("spectrum_bands: samples must be even and >= 2");
    const TorusGrid grid(stencil.dim(), samples);
    const int d = stencil.fiber();
    std::vector<BandInterval> br(d, {INFINITY, -INFINITY, 0});
    Eigen::SelfAdjointEigenSolver<CMatrix> es;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto k = grid.point(i);
        const CMatrix m = symbol_eval(stencil, FloquetPoint::on_torus(k));
        es.compute(m, Eigen::EigenvaluesOnly);
        for (int j = 0; j < d; ++j) {
            br[j].lo = std::min(br[j].lo, es.eigenvalues()[j]);
            br[j].hi = std::max(br[j].hi, es.eigenvalues()[j]);
        }
    }
    BandReport rep;
    rep.branches = br;
    rep.span = merge_intervals(br);
    rep.intervals = partition_by_cover(br, 0);
    if (stencil.dim() != 1 || lambda_samples <= 1)
        return rep;

    // Sampled multiplicities, with run boundaries refined by bisection.
    const double lo = rep.span.front().lo - 0.5;
    const double hi = rep.span.back().hi + 0.5;
    for (int i = 0; i < lambda_samples; ++i) {
        const double x = lo + (hi - lo) * i / (lambda_samples - 1);
        rep.lambda_grid.push_back(x);
        rep.multiplicity.push_back(sampled_mult(stencil, x));
    }
    std::vector<BandInterval> runs;
    double run_lo = lo;
    int run_m = rep.multiplicity.front();
    auto close_run = [&](double end) {
        if (run_m > 0)
            runs.push_back({run_lo, end, run_m});
    };
    for (int i = 1; i < lambda_samples; ++i) {
        const int m = rep.multiplicity[i];
        if (m == run_m || m < 0)
            continue;
        double a = rep.lambda_grid[i - 1], b = rep.lambda_grid[i];
        for (int it = 0; it < 60 && b - a > 1e-14 * std::max(1.0, std::abs(a)); ++it) {
            const double mid = 0.5 * (a + b);
            if (sampled_mult(stencil, mid) == run_m)
                a = mid;
            else
                b = mid;
        }
        const double edge = 0.5 * (a + b);
        close_run(edge);
        run_lo = edge;
        run_m = m;
    }
    close_run(hi);
    rep.intervals = runs;
    return rep;
}

std::vector<CriticalPoint> dispersion_curve(const PeriodicStencil& stencil, int samples) {
    if (stencil.dim() != 1)
        throw domain_error("dispersion_curve: stencil must be one-dimensional");
    if (samples < 2)
        throw domain_error("dispersion_curve: need at least 2 samples");
    std::vector<CriticalPoint> out;
    Eigen::SelfAdjointEigenSolver<CMatrix> es;
    for (int i = 0; i < samples; ++i) {
        const double k = -kPi + 2.0 * kPi * i / (samples - 1);
        es.compute(symbol_eval(stencil, FloquetPoint::on_torus(std::span(&k, 1))),
                   Eigen::EigenvaluesOnly);
        for (int j = 0; j < stencil.fiber(); ++j)
            out.push_back({k, es.eigenvalues()[j]});
    }
    return out;
}

} // namespace fermilab
