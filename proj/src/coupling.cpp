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

#include "fermilab/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

#include "fermilab/error.hpp"

namespace fermilab {

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

cplx det(const CMatrix& m) { return m.rows() == 1 ? m(0, 0) : m.partialPivLu().determinant(); }

} // namespace

void validate(const CouplingSpec& spec) {
    const auto m = spec.K.rows();
    if (m < 2 || spec.K.cols() != m)
        throw domain_error("coupling: K must be square with m >= 2");
    if ((spec.K - spec.K.adjoint()).cwiseAbs().maxCoeff() >
        1e-13 * std::max(1.0, spec.K.cwiseAbs().maxCoeff()))
        throw domain_error("coupling: K must be Hermitian");
    if (spec.base.dim() != spec.rabi.dim() || spec.base.fiber() != spec.rabi.fiber())
        throw domain_error("coupling: A and L must share dimension and fiber");
    if (!check_self_adjoint(spec.base).pass())
        throw domain_error("coupling: A is not self-adjoint");
    if (!check_self_adjoint(spec.rabi).pass())
        throw domain_error("coupling: L is not self-adjoint");
}

PeriodicStencil build_coupled(const CouplingSpec& spec) {
    validate(spec);
    const int m = static_cast<int>(spec.K.rows());
    const int d = spec.base.fiber();
    std::set<Offset> offsets;
    for (const auto& [g, a] : spec.base.coefficients())
        offsets.insert(g);
    for (const auto& [g, a] : spec.rabi.coefficients())
        offsets.insert(g);
    const CMatrix zero = CMatrix::Zero(d, d);
    const CMatrix eye = CMatrix::Identity(m, m);
    std::map<Offset, CMatrix> coeffs;
    for (const auto& g : offsets) {
        const CMatrix* a = spec.base.coefficient(g);
        const CMatrix* l = spec.rabi.coefficient(g);
        coeffs[g] = kron(eye, a ? *a : zero) + kron(spec.K, l ? *l : zero);
    }
    return PeriodicStencil::from_raw(spec.base.dim(), m * d, std::move(coeffs));
}

HybridBasis hybrid_unitary(const CMatrix& K) {
    if (K.rows() != K.cols() || K.rows() < 1)
        throw domain_error("hybrid_unitary: K must be square");
    if ((K - K.adjoint()).cwiseAbs().maxCoeff() > 1e-13 * std::max(1.0, K.cwiseAbs().maxCoeff()))
        throw domain_error("hybrid_unitary: K must be Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(K);
    const auto m = K.rows();
    HybridBasis hb{CMatrix(m, m), Eigen::VectorXd(m)};
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::Index src = m - 1 - j;
        hb.lambda[j] = es.eigenvalues()[src];
        CVector col = es.eigenvectors().col(src);
        Eigen::Index pivot = j;
        if (std::abs(col[pivot]) < 1e-12) {
            pivot = 0;
            while (pivot < m && std::abs(col[pivot]) < 1e-12)
                ++pivot;
        }
        col *= std::conj(col[pivot]) / std::abs(col[pivot]);
        col[pivot] = std::abs(col[pivot]);
        hb.U.col(j) = col;
    }
    return hb;
}

double conjugation_residual(const CouplingSpec& spec, const HybridBasis& basis,
                            const std::vector<FloquetPoint>& zs) {
    validate(spec);
    const auto m = spec.K.rows();
    const int d = spec.base.fiber();
    const CMatrix eye_m = CMatrix::Identity(m, m);
    const CMatrix Ud = kron(basis.U, CMatrix::Identity(d, d));
    const CMatrix lam = basis.lambda.cast<cplx>().asDiagonal();
    double worst = 0.0;
    for (const auto& z : zs) {
        const CMatrix a = symbol_eval(spec.base, z);
        const CMatrix l = symbol_eval(spec.rabi, z);
        const CMatrix lhs = (kron(eye_m, a) + kron(spec.K, l)) * Ud;
        const CMatrix rhs = Ud * (kron(eye_m, a) + kron(lam, l));
        worst = std::max(worst, (lhs - rhs).norm());
    }
    return worst;
}

double conjugation_residual(const CouplingSpec& spec, const std::vector<FloquetPoint>& zs) {
    return conjugation_residual(spec, hybrid_unitary(spec.K), zs);
}

double factorization_check(const CouplingSpec& spec, const FloquetPoint& z, double lambda) {
    const auto coupled = build_coupled(spec);
    const auto hb = hybrid_unitary(spec.K);
    CMatrix big = symbol_eval(coupled, z);
    big.diagonal().array() -= lambda;
    const cplx lhs = det(big);
    const CMatrix a = symbol_eval(spec.base, z);
    const CMatrix l = symbol_eval(spec.rabi, z);
    cplx rhs(1.0, 0.0);
    for (Eigen::Index i = 0; i < hb.lambda.size(); ++i) {
        CMatrix blk = a + hb.lambda[i] * l;
        blk.diagonal().array() -= lambda;
        rhs *= det(blk);
    }
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    return std::abs(lhs - rhs) / scale;
}

CMatrix two_graph_K(double theta, double phi) {
    const cplx e = std::polar(1.0, phi);
    CMatrix k(2, 2);
    k << std::cos(theta), e * std::sin(theta), std::conj(e) * std::sin(theta), -std::cos(theta);
    return k;
}

CMatrix two_graph_unitary(double theta, double phi) {
    const cplx e = std::polar(1.0, phi);
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    CMatrix u(2, 2);
    u << c, -e * s, std::conj(e) * s, c;
    return u;
}

HybridState make_hybrid(const LatticeField& u, double theta, double phi, Branch branch) {
    const cplx e = std::polar(1.0, phi);
    const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
    const cplx w1 = branch == Branch::plus ? cplx(c) : -e * s;
    const cplx w2 = branch == Branch::plus ? std::conj(e) * s : cplx(c);
    const int d = u.fiber();
    HybridState h{branch, LatticeField(u.half_width(), d), LatticeField(u.half_width(), d),
                  LatticeField(u.half_width(), 2 * d)};
    for (std::size_t i = 0; i < u.site_count(); ++i) {
        const auto src = u.fiber_at(i);
        auto a = h.u1.fiber_at(i);
        auto b = h.u2.fiber_at(i);
        auto st = h.stacked.fiber_at(i);
        for (int f = 0; f < d; ++f) {
            a[f] = w1 * src[f];
            b[f] = w2 * src[f];
            st[f] = a[f];
            st[d + f] = b[f];
        }
    }
    return h;
}

double centered_lambda0(const PeriodicStencil& A, double lambda, int band_samples) {
    const auto rep = spectrum_bands(A, band_samples);
    const BandInterval* widest = nullptr;
    for (const auto& iv : rep.span)
        if (!widest || iv.hi - iv.lo > widest->hi - widest->lo)
            widest = &iv;
    if (!widest || widest->hi <= widest->lo)
        throw domain_error("centered_lambda0: operator has no band of positive width");
    return 0.5 * (0.5 * (widest->lo + widest->hi) - lambda);
}

EmbedResult theorem1_embed(const PeriodicStencil& A, const SiteDefect& V, const LatticeField& u,
                           double lambda, const TwoGraphAngles& angles, int variant,
                           double max_input_residual, int band_samples) {
    if (variant != 1 && variant != 2)
        throw domain_error("theorem1_embed: variant must be 1 or 2");
    if (u.dim() != A.dim() || u.fiber() != A.fiber() || V.fiber() != A.fiber())
        throw domain_error("theorem1_embed: field, defect and operator shapes differ");

    const double r_in = apply_truncated(A, u, &V, lambda).sup_norm();
    if (!(r_in <= max_input_residual))
        throw domain_error("theorem1_embed: input eigenpair residual " + std::to_string(r_in) +
                           " exceeds " + std::to_string(max_input_residual));
    const double target = lambda + 2.0 * angles.lambda0;
    const auto bands = spectrum_bands(A, band_samples);
    const auto wit = bands.witness(target);
    if (!wit)
        throw domain_error("theorem1_embed: lambda + 2 lambda0 = " + std::to_string(target) +
                           " is not in the continuous spectrum of A; embedding fails");

    const int d = A.fiber();
    const CouplingSpec spec{A, stencils::scalar(A.dim(), d, angles.lambda0),
                            two_graph_K(angles.theta, angles.phi)};
    EmbedResult out{build_coupled(spec), SiteDefect(2 * d),
                    make_hybrid(u, angles.theta, angles.phi, Branch::plus),
                    lambda + angles.lambda0, r_in, 0.0, *wit, variant};

    CMatrix mix = CMatrix::Identity(2, 2);
    if (variant == 2) {
        const double c = std::cos(0.5 * angles.theta), s = std::sin(0.5 * angles.theta);
        const cplx e = std::polar(1.0, angles.phi);
        const double sn = std::sin(angles.theta);
        mix << c * c, 0.5 * e * sn, 0.5 * std::conj(e) * sn, s * s;
    }
    for (const auto& [g, v] : V.sites())
        out.defect.set(g, kron(mix, v));

    out.residual_out =
        apply_truncated(out.op, out.state.stacked, &out.defect, out.eigenvalue).sup_norm();
    if (out.residual_out > std::max(10.0 * r_in, 1e-13))
        throw convergence_error("theorem1_embed: output residual " +
                                std::to_string(out.residual_out) + " exceeds 10x input residual");
    return out;
}

} // namespace fermilab
