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

#include "fermilab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "fermilab/error.hpp"

namespace fermilab {

int linf_norm(const Offset& g) {
    int r = 0;
    for (int c : g)
        r = std::max(r, std::abs(c));
    return r;
}

bool lex_nonnegative(const Offset& g) {
    for (int c : g) {
        if (c > 0)
            return true;
        if (c < 0)
            return false;
    }
    return true;
}

Offset negate(const Offset& g) {
    Offset r(g.size());
    std::transform(g.begin(), g.end(), r.begin(), [](int c) { return -c; });
    return r;
}

/////////////////// FloquetPoint ///////////////////

FloquetPoint::FloquetPoint(std::vector<cplx> z) : z_(std::move(z)) {
    if (z_.empty())
        throw domain_error("FloquetPoint: empty multiplier vector");
    for (const auto& zj : z_)
        if (zj == cplx(0.0, 0.0))
            throw domain_error("FloquetPoint: Floquet multipliers must be nonzero");
}

FloquetPoint FloquetPoint::from_quasi_momentum(std::vector<cplx> k) {
    std::vector<cplx> z(k.size());
    const cplx I(0.0, 1.0);
    for (std::size_t j = 0; j < k.size(); ++j)
        z[j] = std::exp(I * k[j]);
    FloquetPoint p(std::move(z));
    p.k_ = std::move(k);
    return p;
}

FloquetPoint FloquetPoint::on_torus(std::span<const double> k) {
    return from_quasi_momentum(std::vector<cplx>(k.begin(), k.end()));
}

cplx FloquetPoint::monomial(const Offset& g) const {
    cplx r(1.0, 0.0);
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (g[j] == 0)
            continue;
        if (k_) {
            // exact unit modulus on the torus
            r *= std::exp(cplx(0.0, 1.0) * ((*k_)[j] * static_cast<double>(g[j])));
        } else {
            r *= std::pow(z_[j], g[j]);
        }
    }
    return r;
}

/////////////////// PeriodicStencil ///////////////////

namespace {

int compute_degree(const std::map<Offset, CMatrix>& coeffs) {
    int deg = 0;
    for (const auto& [g, a] : coeffs)
        if (a.cwiseAbs().maxCoeff() > 0.0)
            deg = std::max(deg, linf_norm(g));
    return deg;
}

std::string offset_string(const Offset& g) {
    std::string s = "(";
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(g[i]);
    }
    return s + ")";
}

} // namespace

PeriodicStencil::PeriodicStencil(int dim, int fiber, std::map<Offset, CMatrix> coeffs)
    : dim_(dim), fiber_(fiber), coeffs_(std::move(coeffs)) {
    if (dim_ < 1 || fiber_ < 1)
        throw domain_error("PeriodicStencil: dim and fiber must be >= 1");
    for (const auto& [g, a] : coeffs_) {
        if (static_cast<int>(g.size()) != dim_)
            throw domain_error("PeriodicStencil: offset " + offset_string(g) +
                               " has wrong dimension");
        if (a.rows() != fiber_ || a.cols() != fiber_)
            throw domain_error("PeriodicStencil: coefficient at " + offset_string(g) +
                               " is not fiber x fiber");
    }
    degree_ = compute_degree(coeffs_);
}

PeriodicStencil PeriodicStencil::hermitian(int dim, int fiber,
                                           const std::vector<StencilTerm>& half) {
    std::map<Offset, CMatrix> coeffs;
    for (const auto& t : half) {
        if (static_cast<int>(t.offset.size()) != dim)
            throw domain_error("PeriodicStencil: offset " + offset_string(t.offset) +
                               " has wrong dimension");
        if (t.matrix.rows() != fiber || t.matrix.cols() != fiber)
            throw domain_error("PeriodicStencil: coefficient at " + offset_string(t.offset) +
                               " is not fiber x fiber");
        if (!lex_nonnegative(t.offset))
            throw domain_error("PeriodicStencil: offset " + offset_string(t.offset) +
                               " is lexicographically negative; store its mirror instead");
        if (coeffs.count(t.offset))
            throw domain_error("PeriodicStencil: repeated offset " + offset_string(t.offset));
        if (linf_norm(t.offset) == 0) {
            const double scale = std::max(1.0, t.matrix.cwiseAbs().maxCoeff());
            if ((t.matrix - t.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-14 * scale)
                throw domain_error("PeriodicStencil: A_0 must be Hermitian");
            coeffs[t.offset] = 0.5 * (t.matrix + t.matrix.adjoint());
        } else {
            coeffs[t.offset] = t.matrix;
            coeffs[negate(t.offset)] = t.matrix.adjoint();
        }
    }
    return PeriodicStencil(dim, fiber, std::move(coeffs));
}

PeriodicStencil PeriodicStencil::from_raw(int dim, int fiber, std::map<Offset, CMatrix> coeffs) {
    return PeriodicStencil(dim, fiber, std::move(coeffs));
}

const CMatrix* PeriodicStencil::coefficient(const Offset& g) const {
    auto it = coeffs_.find(g);
    return it == coeffs_.end() ? nullptr : &it->second;
}

bool PeriodicStencil::is_constant() const { return degree_ == 0; }

CMatrix symbol_eval(const PeriodicStencil& stencil, const FloquetPoint& z) {
    if (z.dim() != stencil.dim())
        throw domain_error("symbol_eval: Floquet point dimension does not match stencil");
    CMatrix m = CMatrix::Zero(stencil.fiber(), stencil.fiber());
    for (const auto& [g, a] : stencil.coefficients())
        m += z.monomial(g) * a;
    return m;
}

SelfAdjointReport check_self_adjoint(const PeriodicStencil& stencil, double tol) {
    SelfAdjointReport rep;
    const int d = stencil.fiber();
    const CMatrix zero = CMatrix::Zero(d, d);
    for (const auto& [g, a] : stencil.coefficients()) {
        if (!lex_nonnegative(g)) {
            // checked from the mirror unless the mirror is absent
            if (stencil.coefficient(negate(g)) != nullptr)
                continue;
        }
        const CMatrix* mirror = stencil.coefficient(negate(g));
        const CMatrix& b = mirror ? *mirror : zero;
        const double defect = (b - a.adjoint()).cwiseAbs().maxCoeff();
        rep.max_defect = std::max(rep.max_defect, defect);
        if (defect > tol * std::max(1.0, a.cwiseAbs().maxCoeff()))
            rep.violations.push_back(lex_nonnegative(g) ? g : negate(g));
    }
    return rep;
}

/////////////////// LatticeField ///////////////////

LatticeField::LatticeField(std::vector<int> half_width, int fiber)
    : half_width_(std::move(half_width)), fiber_(fiber) {
    if (half_width_.empty() || fiber_ < 1)
        throw domain_error("LatticeField: need dim >= 1 and fiber >= 1");
    stride_.assign(half_width_.size(), 1);
    site_count_ = 1;
    for (int a = static_cast<int>(half_width_.size()) - 1; a >= 0; --a) {
        if (half_width_[a] < 0)
            throw domain_error("LatticeField: negative half width");
        stride_[a] = site_count_;
        site_count_ *= static_cast<std::size_t>(2 * half_width_[a] + 1);
    }
    values_.assign(site_count_ * static_cast<std::size_t>(fiber_), cplx(0.0, 0.0));
}

bool LatticeField::contains(const Offset& g) const {
    if (g.size() != half_width_.size())
        return false;
    for (std::size_t a = 0; a < g.size(); ++a)
        if (std::abs(g[a]) > half_width_[a])
            return false;
    return true;
}

std::size_t LatticeField::site_index(const Offset& g) const {
    if (!contains(g))
        throw domain_error("LatticeField: site outside box");
    std::size_t idx = 0;
    for (std::size_t a = 0; a < g.size(); ++a)
        idx += static_cast<std::size_t>(g[a] + half_width_[a]) * stride_[a];
    return idx;
}

Offset LatticeField::site(std::size_t index) const {
    Offset g(half_width_.size());
    for (std::size_t a = 0; a < g.size(); ++a) {
        g[a] = static_cast<int>(index / stride_[a]) - half_width_[a];
        index %= stride_[a];
    }
    return g;
}

cplx& LatticeField::at(const Offset& g, int component) {
    return values_[site_index(g) * fiber_ + component];
}

const cplx& LatticeField::at(const Offset& g, int component) const {
    return values_[site_index(g) * fiber_ + component];
}

std::span<cplx> LatticeField::fiber_at(std::size_t idx) {
    return std::span<cplx>(values_).subspan(idx * fiber_, fiber_);
}

std::span<const cplx> LatticeField::fiber_at(std::size_t idx) const {
    return std::span<const cplx>(values_).subspan(idx * fiber_, fiber_);
}

LatticeField LatticeField::restricted(const std::vector<int>& half_width) const {
    if (half_width.size() != half_width_.size())
        throw domain_error("LatticeField::restricted: dimension mismatch");
    for (std::size_t a = 0; a < half_width.size(); ++a)
        if (half_width[a] > half_width_[a])
            throw domain_error("LatticeField::restricted: box larger than field");
    LatticeField out(half_width, fiber_);
    for (std::size_t i = 0; i < out.site_count(); ++i) {
        auto src = fiber_at(site_index(out.site(i)));
        std::copy(src.begin(), src.end(), out.fiber_at(i).begin());
    }
    return out;
}

double LatticeField::sup_norm() const {
    double m = 0.0;
    for (const auto& v : values_)
        m = std::max(m, std::abs(v));
    return m;
}

double LatticeField::l2_norm() const {
    double s = 0.0;
    for (const auto& v : values_)
        s += std::norm(v);
    return std::sqrt(s);
}

/////////////////// SiteDefect ///////////////////

SiteDefect& SiteDefect::set(const Offset& g, const CMatrix& v) {
    if (v.rows() != fiber_ || v.cols() != fiber_)
        throw domain_error("SiteDefect: matrix is not fiber x fiber");
    sites_[g] = v;
    return *this;
}

SiteDefect& SiteDefect::set(const Offset& g, cplx v) {
    return set(g, CMatrix::Identity(fiber_, fiber_) * v);
}

const CMatrix* SiteDefect::at(const Offset& g) const {
    auto it = sites_.find(g);
    return it == sites_.end() ? nullptr : &it->second;
}

/////////////////// apply_truncated ///////////////////

LatticeField apply_truncated(const PeriodicStencil& stencil, const LatticeField& field,
                             const SiteDefect* defect, double lambda) {
    if (field.dim() != stencil.dim() || field.fiber() != stencil.fiber())
        throw domain_error("apply_truncated: field and stencil shapes differ");
    if (defect && defect->fiber() != stencil.fiber())
        throw domain_error("apply_truncated: defect fiber differs from stencil");
    const int deg = stencil.degree();
    std::vector<int> inner(field.half_width());
    for (auto& b : inner) {
        if (b <= deg)
            throw domain_error("apply_truncated: box half width must exceed stencil degree");
        b -= deg;
    }
    const int d = stencil.fiber();
    LatticeField out(inner, d);
    Offset h(field.dim());
    for (std::size_t i = 0; i < out.site_count(); ++i) {
        const Offset g = out.site(i);
        CVector acc = CVector::Zero(d);
        for (const auto& [off, a] : stencil.coefficients()) {
            for (std::size_t ax = 0; ax < g.size(); ++ax)
                h[ax] = g[ax] + off[ax];
            auto u = field.fiber_at(field.site_index(h));
            acc += a * Eigen::Map<const CVector>(u.data(), d);
        }
        auto u0 = field.fiber_at(field.site_index(g));
        Eigen::Map<const CVector> ug(u0.data(), d);
        acc -= lambda * ug;
        if (defect) {
            if (const CMatrix* v = defect->at(g))
                acc += (*v) * ug;
        }
        auto r = out.fiber_at(i);
        for (int c = 0; c < d; ++c)
            r[c] = acc[c];
    }
    return out;
}

/////////////////// named stencils ///////////////////

namespace stencils {

namespace {
CMatrix scalar_matrix(double s) { return CMatrix::Constant(1, 1, cplx(s, 0.0)); }
} // namespace

PeriodicStencil fourth_order_1d() {
    return PeriodicStencil::hermitian(1, 1, {{{1}, scalar_matrix(2.0)}, {{2}, scalar_matrix(1.0)}});
}

PeriodicStencil coupled_chains(double a, double b, double c) {
    CMatrix a0(2, 2);
    a0 << a + b, c, c, a - b;
    return PeriodicStencil::hermitian(1, 2, {{{0}, a0}, {{1}, CMatrix::Identity(2, 2)}});
}

PeriodicStencil nearest_neighbour(int dim) {
    std::vector<StencilTerm> terms;
    for (int j = 0; j < dim; ++j) {
        Offset g(dim, 0);
        g[j] = 1;
        terms.push_back({g, scalar_matrix(1.0)});
    }
    return PeriodicStencil::hermitian(dim, 1, terms);
}

PeriodicStencil scalar(int dim, int fiber, double s) {
    return PeriodicStencil::hermitian(dim, fiber,
                                      {{Offset(dim, 0), CMatrix::Identity(fiber, fiber) * s}});
}

} // namespace stencils

} // namespace fermilab
