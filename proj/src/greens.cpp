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

#include "fermilab/greens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "fermilab/dispersion.hpp"
#include "fermilab/error.hpp"
#include "fermilab/torus.hpp"

namespace fermilab {

namespace {

constexpr std::size_t kMaxProbePoints = std::size_t{1} << 22;

double min_abs_det(const PeriodicStencil& s, double lambda, int n) {
    const TorusGrid grid(s.dim(), n);
    double m = INFINITY;
    for (std::size_t i = 0; i < grid.size(); ++i)
        m = std::min(m, std::abs(det_symbol(s, FloquetPoint::on_torus(grid.point(i)), lambda)));
    return m;
}

int probe_size(int dim, int quad_n) {
    int n = 4 * quad_n;
    auto total = [&](int p) {
        std::size_t t = 1;
        for (int a = 0; a < dim; ++a)
            t *= static_cast<std::size_t>(p);
        return t;
    };
    while (n > quad_n && total(n) > kMaxProbePoints)
        n /= 2;
    return n;
}

} // namespace

GreensResult resolvent_delta(const PeriodicStencil& stencil, double lambda,
                             const GreensOptions& opt) {
    const int n = stencil.dim();
    const int d = stencil.fiber();
    if (opt.quad_n < 4 || opt.quad_n % 2 != 0)
        throw domain_error("resolvent_delta: quad_n must be even and >= 4");
    if (opt.box < 0 || 2 * opt.box >= opt.quad_n)
        throw domain_error("resolvent_delta: need 0 <= 2*box < quad_n");
    if (opt.component < 0 || opt.component >= d)
        throw domain_error("resolvent_delta: delta component out of range");

    GreensResult res{LatticeField(std::vector<int>(n, opt.box), d), cplx(0.0), lambda,
                     opt.quad_n, opt.component};

    if (n == 1) {
        const auto m = multiplicity_1d(stencil, lambda);
        if (m.count > 0 || m.at_edge)
            throw domain_error("resolvent_delta: lambda = " + std::to_string(lambda) +
                               " lies in the spectrum (unit-circle multiplicity " +
                               std::to_string(m.count) + ")");
    }
    res.min_det = min_abs_det(stencil, lambda, probe_size(n, opt.quad_n));
    if (!(res.min_det > opt.gap_tol))
        throw domain_error("resolvent_delta: lambda = " + std::to_string(lambda) +
                           " is in or too near the spectrum (min |det| = " +
                           std::to_string(res.min_det) + ")");

    const TorusGrid grid(n, opt.quad_n);
    std::vector<cplx> samples(grid.size() * d);
    std::vector<cplx> diag(grid.size());
    std::vector<cplx> diag_half;
    diag_half.reserve(grid.size() >> n);
    CVector rhs = CVector::Zero(d);
    rhs[opt.component] = 1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto idx = grid.index(i);
        CMatrix m = symbol_eval(stencil, FloquetPoint::on_torus(grid.point(i)));
        m.diagonal().array() -= lambda;
        const CVector x = d == 1 ? CVector::Constant(1, 1.0 / m(0, 0))
                                 : CVector(m.partialPivLu().solve(rhs));
        for (int c = 0; c < d; ++c)
            samples[i * d + c] = x[c];
        diag[i] = x[opt.component];
        if (std::all_of(idx.begin(), idx.end(), [](int j) { return j % 2 == 0; }))
            diag_half.push_back(x[opt.component]);
    }
    res.u0 = pairwise_sum(diag) / static_cast<double>(diag.size());
    const cplx u0_half = pairwise_sum(diag_half) / static_cast<double>(diag_half.size());
    res.quad_error = std::abs(res.u0 - u0_half);
    if (res.quad_error > opt.convergence_tol)
        throw convergence_error("resolvent_delta: quadrature not converged, |u0(N) - u0(N/2)| = " +
                                std::to_string(res.quad_error));
    res.u = inverse_floquet(grid, samples, d, std::vector<int>(n, opt.box));
    return res;
}

SiteDefect synth_defect(const GreensResult& result) {
    if (std::abs(result.u0) < 1e-10)
        throw domain_error("synth_defect: |u(0)| < 1e-10, defect strength undefined");
    const int d = result.u.fiber();
    SiteDefect v(d);
    CMatrix m = CMatrix::Zero(d, d);
    m(result.component, result.component) = -1.0 / result.u0.real();
    v.set(Offset(result.u.dim(), 0), m);
    return v;
}

LatticeField brute_force_green(const PeriodicStencil& stencil, double lambda, int box,
                               int component) {
    const int d = stencil.fiber();
    if (box < 1)
        throw domain_error("brute_force_green: box must be >= 1");
    if (component < 0 || component >= d)
        throw domain_error("brute_force_green: delta component out of range");
    LatticeField u(std::vector<int>(stencil.dim(), box), d);
    const auto rows = static_cast<Eigen::Index>(u.site_count() * d);
    std::vector<Eigen::Triplet<cplx>> trips;
    trips.reserve(static_cast<std::size_t>(rows) * stencil.coefficients().size() * d);
    Offset h(stencil.dim());
    for (std::size_t i = 0; i < u.site_count(); ++i) {
        const Offset g = u.site(i);
        for (const auto& [off, a] : stencil.coefficients()) {
            for (std::size_t ax = 0; ax < g.size(); ++ax)
                h[ax] = g[ax] + off[ax];
            if (!u.contains(h))
                continue;
            const std::size_t j = u.site_index(h);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c)
                    if (a(r, c) != cplx(0.0))
                        trips.emplace_back(i * d + r, j * d + c, a(r, c));
        }
        for (int r = 0; r < d; ++r)
            trips.emplace_back(i * d + r, i * d + r, cplx(-lambda));
    }
    Eigen::SparseMatrix<cplx> mat(rows, rows);
    mat.setFromTriplets(trips.begin(), trips.end());
    mat.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.compute(mat);
    if (lu.info() != Eigen::Success)
        throw domain_error("brute_force_green: truncated system is singular");
    CVector rhs = CVector::Zero(rows);
    rhs[static_cast<Eigen::Index>(u.site_index(Offset(stencil.dim(), 0)) * d + component)] = 1.0;
    const CVector x = lu.solve(rhs);
    if (lu.info() != Eigen::Success)
        throw domain_error("brute_force_green: sparse solve failed");
    auto vals = u.values();
    for (Eigen::Index i = 0; i < rows; ++i)
        vals[i] = x[i];
    return u;
}

Example1Defect example1_defect(double alpha, int box) {
    if (!(alpha > 0.0) || !(alpha < std::acosh(2.0)))
        throw domain_error("example1_defect: alpha must lie in (0, acosh 2) so that lambda is in (-2, 6)");
    if (box < 3)
        throw domain_error("example1_defect: box must be >= 3");
    Example1Defect ex{alpha, 0.0, 0.0, 0.0, LatticeField({box}, 1), SiteDefect(1)};
    const double ch = std::cosh(alpha);
    const double em = std::exp(-alpha);
    ex.lambda = (2.0 * ch - 1.0) * (2.0 * ch - 1.0) - 3.0;
    ex.v0 = ex.lambda + 4.0 * em - 2.0 * em * em;
    ex.v1 = ex.lambda + 2.0 * (2.0 - em) * ch;
    for (int g = -box; g <= box; ++g) {
        const int a = std::abs(g);
        ex.v.at({g}) = (a % 2 ? -1.0 : 1.0) * std::exp(-alpha * a);
    }
    ex.defect.set({0}, cplx(ex.v0));
    ex.defect.set({1}, cplx(ex.v1));
    ex.defect.set({-1}, cplx(ex.v1));
    return ex;
}

DecayFit fit_decay(const LatticeField& u, int skip, double power) {
    const int rmax = *std::min_element(u.half_width().begin(), u.half_width().end());
    DecayFit fit;
    fit.power = power;
    std::vector<double> shell(rmax + 1, 0.0);
    for (std::size_t i = 0; i < u.site_count(); ++i) {
        const int r = linf_norm(u.site(i));
        if (r > rmax)
            continue;
        for (const auto& v : u.fiber_at(i))
            shell[r] = std::max(shell[r], std::abs(v));
    }
    double peak = 0.0;
    for (int r = 0; r <= rmax; ++r) {
        fit.shells.push_back({r, shell[r]});
        peak = std::max(peak, shell[r]);
    }
    std::vector<double> xs, ys;
    for (int r = std::max(skip, power != 0.0 ? 1 : 0); r <= rmax; ++r) {
        if (shell[r] < 1e-300 || shell[r] < 1e-12 * peak)
            continue;
        xs.push_back(r);
        ys.push_back(std::log(shell[r]) + power * std::log(static_cast<double>(r)));
    }
    if (xs.size() < 3)
        throw domain_error("fit_decay: fewer than three usable shells (field vanishes or box too small)");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    fit.alpha = -slope;
    fit.r2 = syy > 0.0 ? std::min(1.0, (sxy * sxy) / (sxx * syy)) : 1.0;
    fit.used = static_cast<int>(xs.size());
    return fit;
}

namespace {

// Nonzero coefficients of the Laurent polynomial det(A_hat(z) - lambda),
// recovered exactly by a DFT on (2Dd+1)^n points of the torus.
int count_laurent_terms(const PeriodicStencil& s, double lambda) {
    const int span = s.degree() * s.fiber();
    const int M = 2 * span + 1;
    const TorusGrid grid(s.dim(), M);
    std::vector<cplx> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        vals[i] = det_symbol(s, FloquetPoint::on_torus(grid.point(i)), lambda);
    double scale = 0.0;
    std::vector<cplx> coef(grid.size());
    const TorusGrid modes(s.dim(), M);
    for (std::size_t m = 0; m < modes.size(); ++m) {
        const auto mi = modes.index(m);
        std::vector<cplx> terms(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto ji = grid.index(i);
            long long ph = 0;
            for (std::size_t a = 0; a < ji.size(); ++a)
                ph += static_cast<long long>(ji[a]) * mi[a];
            terms[i] = vals[i] * std::polar(1.0, -2.0 * std::numbers::pi *
                                                     static_cast<double>(ph % M) / M);
        }
        coef[m] = pairwise_sum(terms) / static_cast<double>(grid.size());
        scale = std::max(scale, std::abs(coef[m]));
    }
    int terms = 0;
    for (const auto& c : coef)
        if (std::abs(c) > 1e-12 * std::max(scale, 1.0))
            ++terms;
    return terms;
}

} // namespace

SupportCheck unbounded_support_check(const PeriodicStencil& stencil, double lambda,
                                     const std::vector<int>& boxes, int quad_n) {
    if (stencil.is_constant())
        throw domain_error("unbounded_support_check: stencil is constant (no off-zero offsets); "
                           "the support argument requires a non-constant operator");
    SupportCheck chk;
    chk.laurent_terms = count_laurent_terms(stencil, lambda);
    chk.boxes = boxes;
    for (int b : boxes) {
        GreensOptions opt;
        opt.box = b;
        opt.quad_n = quad_n;
        while (2 * opt.box >= opt.quad_n)
            opt.quad_n *= 2;
        const auto res = resolvent_delta(stencil, lambda, opt);
        int tail = -1;
        for (std::size_t i = 0; i < res.u.site_count(); ++i)
            for (const auto& v : res.u.fiber_at(i))
                if (std::abs(v) > chk.threshold)
                    tail = std::max(tail, linf_norm(res.u.site(i)));
        chk.tail.push_back(tail);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < chk.tail.size(); ++i)
        monotone = monotone && chk.tail[i] >= chk.tail[i - 1];
    const bool reaches = chk.tail.empty() ||
                         chk.tail.front() >= *std::min_element(boxes.begin(), boxes.end());
    chk.unbounded = chk.laurent_terms >= 2 && monotone && reaches;
    return chk;
}

} // namespace fermilab
