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

/// @file
/// Periodic finite-degree difference operators on Z^n with a d-dimensional
/// fiber, their Floquet symbols, and lattice fields on finite boxes.
///
/// Conventions: (Au)(g) = sum_h A_h u(g+h), so a Floquet mode u(g) = z^g v
/// is mapped to A_hat(z) z^g v with A_hat(z) = sum_h A_h z^h.

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fermilab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Lattice vector g in Z^n.
using Offset = std::vector<int>;

/// Sup norm |g|_inf.
int linf_norm(const Offset& g);

/// Lexicographic "g >= 0": the first nonzero component is positive, or g = 0.
bool lex_nonnegative(const Offset& g);

Offset negate(const Offset& g);

/// A point z in (C*)^n, optionally carrying quasi-momenta k with z_j = e^{i k_j}.
class FloquetPoint {
public:
    /// Throws domain_error if some z_j is zero.
    explicit FloquetPoint(std::vector<cplx> z);

    /// z_j = exp(i k_j); k may be complex.
    static FloquetPoint from_quasi_momentum(std::vector<cplx> k);

    /// Real quasi-momenta, i.e. a point of the unit torus.
    static FloquetPoint on_torus(std::span<const double> k);

    const std::vector<cplx>& z() const { return z_; }
    const std::optional<std::vector<cplx>>& k() const { return k_; }
    int dim() const { return static_cast<int>(z_.size()); }

    /// prod_j z_j^{g_j}
    cplx monomial(const Offset& g) const;

private:
    std::vector<cplx> z_;
    std::optional<std::vector<cplx>> k_;
};

struct StencilTerm {
    Offset offset;
    CMatrix matrix;
};

/// Sparse map g -> A_g (d x d). Immutable once built.
class PeriodicStencil {
public:
    /// Builds a self-adjoint stencil from terms with lexicographically
    /// non-negative offsets; each mirror A_{-g} = A_g^dagger is derived.
    /// Throws domain_error for a negative offset, a non-Hermitian A_0, a
    /// repeated offset or a shape mismatch.
    static PeriodicStencil hermitian(int dim, int fiber, const std::vector<StencilTerm>& half);

    /// Stores exactly the given coefficients; symmetry is not enforced.
    /// Used to represent (and diagnose) operators that are not self-adjoint.
    static PeriodicStencil from_raw(int dim, int fiber, std::map<Offset, CMatrix> coeffs);

    int dim() const { return dim_; }
    int fiber() const { return fiber_; }

    /// max |g|_inf over offsets with A_g != 0.
    int degree() const { return degree_; }

    const std::map<Offset, CMatrix>& coefficients() const { return coeffs_; }

    /// nullptr when g is not stored.
    const CMatrix* coefficient(const Offset& g) const;

    /// True when every off-zero coefficient vanishes (a multiplication operator).
    bool is_constant() const;

private:
    PeriodicStencil(int dim, int fiber, std::map<Offset, CMatrix> coeffs);

    int dim_ = 1;
    int fiber_ = 1;
    int degree_ = 0;
    std::map<Offset, CMatrix> coeffs_;
};

/// A_hat(z) = sum_g A_g z^g. Throws domain_error on a dimension mismatch.
CMatrix symbol_eval(const PeriodicStencil& stencil, const FloquetPoint& z);

struct SelfAdjointReport {
    /// Offsets (lexicographically >= 0) where A_{-g} != A_g^dagger.
    std::vector<Offset> violations;
    double max_defect = 0.0;
    bool pass() const { return violations.empty(); }
};

SelfAdjointReport check_self_adjoint(const PeriodicStencil& stencil, double tol = 1e-13);

/// Complex d-vector valued function on the box prod_a [-B_a, B_a].
/// Storage is row-major over axes (axis 0 slowest), fiber index fastest.
class LatticeField {
public:
    /// Single site of Z^1 with fiber 1.
    LatticeField() : LatticeField({0}, 1) {}
    LatticeField(std::vector<int> half_width, int fiber);

    int dim() const { return static_cast<int>(half_width_.size()); }
    int fiber() const { return fiber_; }
    const std::vector<int>& half_width() const { return half_width_; }
    std::size_t site_count() const { return site_count_; }

    bool contains(const Offset& g) const;
    std::size_t site_index(const Offset& g) const;
    Offset site(std::size_t index) const;

    cplx& at(const Offset& g, int component = 0);
    const cplx& at(const Offset& g, int component = 0) const;

    std::span<cplx> values() { return values_; }
    std::span<const cplx> values() const { return values_; }

    std::span<cplx> fiber_at(std::size_t site_index);
    std::span<const cplx> fiber_at(std::size_t site_index) const;

    /// Copy of the values on a smaller box (each half width <= current).
    LatticeField restricted(const std::vector<int>& half_width) const;

    double sup_norm() const;
    double l2_norm() const;

private:
    std::vector<int> half_width_;
    std::vector<std::size_t> stride_;
    int fiber_ = 1;
    std::size_t site_count_ = 0;
    std::vector<cplx> values_;
};

/// Site-local perturbation: (Vu)(g) = V_g u(g) for the finitely many stored g.
class SiteDefect {
public:
    explicit SiteDefect(int fiber) : fiber_(fiber) {}

    SiteDefect& set(const Offset& g, const CMatrix& v);
    SiteDefect& set(const Offset& g, cplx v);

    int fiber() const { return fiber_; }
    const std::map<Offset, CMatrix>& sites() const { return sites_; }
    const CMatrix* at(const Offset& g) const;

private:
    int fiber_;
    std::map<Offset, CMatrix> sites_;
};

/// (A + V - lambda) u evaluated on the interior box (half widths reduced by
/// the stencil degree), where every stencil term reads inside the field box.
/// Throws domain_error when the box is not larger than the degree.
LatticeField apply_truncated(const PeriodicStencil& stencil,
                             const LatticeField& field,
                             const SiteDefect* defect,
                             double lambda);

/// Named operators used across the library and its tests.
namespace stencils {

/// 2(S + S^-1) + (S^2 + S^-2): symbol 4cos k + 2cos 2k on the circle.
PeriodicStencil fourth_order_1d();

/// Two coupled chains: A_0 = [[a+b, c], [c, a-b]], A_{+-1} = I.
PeriodicStencil coupled_chains(double a, double b, double c);

/// sum_j (S_j + S_j^-1) on Z^n, fiber 1.
PeriodicStencil nearest_neighbour(int dim);

/// s * I at offset 0.
PeriodicStencil scalar(int dim, int fiber, double s);

} // namespace stencils

} // namespace fermilab
