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

// Coupled copies I_m (x) A + K (x) L, their hybrid block diagonalization
// and embedded eigenvalues built from a defect eigenpair of A.

#include <vector>

#include "fermilab/dispersion.hpp"
#include "fermilab/lattice.hpp"

namespace fermilab {

struct CouplingSpec {
    PeriodicStencil base;  // A
    PeriodicStencil rabi;  // L
    CMatrix K;             // m x m Hermitian
};

// Throws domain_error unless K is Hermitian, m >= 2, L is self-adjoint and
// A, L share dim and fiber.
void validate(const CouplingSpec& spec);

// Fiber index of the result is copy * d + f.
PeriodicStencil build_coupled(const CouplingSpec& spec);

struct HybridBasis {
    CMatrix U;
    Eigen::VectorXd lambda;  // descending
};

// K U = U diag(lambda). Column j is scaled so that U_jj is real positive,
// or its first nonzero entry when U_jj vanishes.
HybridBasis hybrid_unitary(const CMatrix& K);

// max_z |(I (x) A + K (x) L)(U (x) I) - (U (x) I)(I (x) A + Lambda (x) L)|_F
double conjugation_residual(const CouplingSpec& spec, const HybridBasis& basis,
                            const std::vector<FloquetPoint>& zs);
double conjugation_residual(const CouplingSpec& spec, const std::vector<FloquetPoint>& zs);

// Relative gap between det(A_hat_coupled - lambda) and
// prod_i det(A_hat + lambda_i L_hat - lambda).
double factorization_check(const CouplingSpec& spec, const FloquetPoint& z, double lambda);

struct TwoGraphAngles {
    double theta = 0.0;
    double phi = 0.0;
    double lambda0 = 1.0;
};

// [[cos t, e^{i p} sin t], [e^{-i p} sin t, -cos t]]
CMatrix two_graph_K(double theta, double phi);

// Closed-form block diagonalizer of two_graph_K.
CMatrix two_graph_unitary(double theta, double phi);

enum class Branch { plus, minus };

struct HybridState {
    Branch branch = Branch::plus;
    LatticeField u1;
    LatticeField u2;
    // (u1, u2) stacked into fiber 2d, copy-major.
    LatticeField stacked;
};

HybridState make_hybrid(const LatticeField& u, double theta, double phi, Branch branch);

struct EmbedResult {
    PeriodicStencil op;  // A coupled through L = lambda0 I
    SiteDefect defect;   // V_1 or V_2
    HybridState state;
    double eigenvalue = 0.0;  // lambda + lambda0
    double residual_in = 0.0;
    double residual_out = 0.0;
    BandInterval witness;
    int variant = 1;
};

// Hybrid embedding of a defect eigenpair. Checks (A + V) u = lambda u to max_input_residual
// on the interior box and that lambda + 2 lambda0 lies in a sampled band of A;
// throws domain_error otherwise.
EmbedResult theorem1_embed(const PeriodicStencil& A, const SiteDefect& V, const LatticeField& u,
                           double lambda, const TwoGraphAngles& angles, int variant,
                           double max_input_residual = 1e-8, int band_samples = 256);

// lambda0 placing lambda + 2 lambda0 at the middle of the widest band of A.
double centered_lambda0(const PeriodicStencil& A, double lambda, int band_samples = 256);

} // namespace fermilab
