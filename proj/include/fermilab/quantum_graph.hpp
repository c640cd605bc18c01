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
/// The two fixed metric-graph models: the decorated 1D ladder (vertical
/// rungs between two chains) and the square grid with a dangling half edge
/// at every vertex, which is half of the two-layer grid. Edges carry
/// u(x) = C cos(mu x) + D sin(mu x)/mu, lambda = mu^2.

#include <optional>
#include <string>

#include "fermilab/dispersion.hpp"
#include "fermilab/greens.hpp"
#include "fermilab/lattice.hpp"

namespace fermilab {

/// Boundary condition at the free end of the dangling edge.
enum class BoundaryCondition { neumann, dirichlet };

BoundaryCondition parse_bc(const std::string& s);
const char* to_string(BoundaryCondition bc);

/// Values below this |sin mu| are treated as the flat bands mu = l pi.
inline constexpr double kSinGuard = 1e-6;

// ---------------------------------------------------------------- ladder

enum class Parity { symmetric, antisymmetric };

struct ChainSecular {
    double mu = 0.0;
    cplx z;
    Parity parity = Parity::antisymmetric;
    CMatrix matrix;  // 3 x 3, unknowns [rung coefficient, C1, D1]
    cplx det;
    /// mu sin(mu/2) (z^2 - (3cos mu + 1) z + 1), resp. with cos(mu/2) and 3cos mu - 1.
    cplx det_closed;
};

/// Throws domain_error for mu = 0.
ChainSecular chain1d_secular(double mu, cplx z, Parity parity);

/// Decaying multiplier of the antisymmetric branch: the root of
/// z^2 - (3cos mu + 1) z + 1 with |z| < 1. Throws domain_error when
/// |3cos mu + 1| <= 2 (propagating branch, no decaying solution).
double chain1d_z(double mu);

struct NuRoot {
    double nu = 0.0;
    double v0 = 0.0;  // mu^2 - nu^2
    /// |lhs - rhs| / max(1, |rhs|) of the cot/tan form of the condition.
    double residual = 0.0;
    int branch = 0;
};

/// nu cot(nu/2) = 2 (z - cos mu) mu / sin mu, smallest admissible root
/// (nu != mu) or the branch-th one.
NuRoot chain1d_nu(double mu, int branch = 0);

struct ChainBoundState {
    double mu = 0.0;
    double z = 0.0;
    NuRoot nu;
    int box = 0;
    /// Per cell g in [-box, box]: [rung amplitude, C, D] of the top chain.
    /// The rung of cell g carries A sin(mu x) (sin(nu x) at g = 0), x in
    /// [-1/2, 1/2]; the horizontal edge of cell g joins vertex g-1 (x = 0)
    /// to vertex g (x = 1). The bottom chain is the negative of the top one.
    LatticeField cells;
    double residual_continuity = 0.0;
    double residual_flux = 0.0;
    double residual_vertex = 0.0;
    /// max |phi(g+1)/phi(g) - z| over g >= 0.
    double decay_ratio_error = 0.0;
    /// Reflection about the defective rung.
    double reflection_error = 0.0;
    /// Antisymmetry about the centre line, rechecked on the bottom chain.
    double antisymmetry_error = 0.0;
    bool embedded = false;
    BandInterval witness;  // symmetric band (cos mu >= -1/3) containing mu
};

/// Throws domain_error when mu is not in an antisymmetric gap, sin mu ~ 0,
/// or box < 2.
ChainBoundState chain1d_bound_state(double mu, int box, int branch = 0);

// ---------------------------------------------------------------- grid

struct BcConstants {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
};

/// Forced constants; pass nu = nullopt for the homogeneous problem (c = d = 0).
BcConstants bc_constants(BoundaryCondition bc, double mu, std::optional<double> nu);

struct GridSecular {
    double mu = 0.0;
    cplx k1, k2;
    BcConstants bc;
    CMatrix matrix;  // 5 x 5, unknowns [K, C1, D1, C2, D2]
    CVector rhs;     // [c, c, c, c, d] * (-1 / (nu^2 - mu^2)), zero when c = d = 0
    cplx det;
    /// e^{-i(k1+k2)} sin(mu)/mu [4a cos mu + b sin(mu)/mu - 2a (cos k1 + cos k2)]
    cplx det_closed;
};

/// Builds the matching system; rhs is filled when nu is given.
GridSecular grid2d_secular(const BcConstants& c, double mu, cplx k1, cplx k2,
                           std::optional<double> nu = std::nullopt);

/// 5 cos mu -+ 1 - 2 (cos k1 + cos k2): Neumann takes -1, Dirichlet +1.
double grid2d_dispersion(BoundaryCondition bc, double mu, double k1, double k2);

/// Bands in mu: Neumann J + 2 pi l, Dirichlet J + pi + 2 pi l with
/// J = [-acos(-3/5), acos(-3/5)], clipped to [0, mu_max].
BandReport grid2d_bands(BoundaryCondition bc, double mu_max = 4.0 * 3.14159265358979323846);

/// Closed-form band membership (closed intervals).
bool grid2d_in_band(BoundaryCondition bc, double mu);

struct RIntegral {
    double value = 0.0;
    double half_grid_value = 0.0;
    double rel_change = 0.0;
    int quad_n = 0;
};

/// R(mu) = avg over the torus of 1 / D_D(mu; k). Requires mu in a Dirichlet
/// gap (cos mu > 3/5); throws domain_error otherwise and convergence_error
/// when halving the grid changes the value by more than tol (relative).
RIntegral R_integral(double mu, int quad_n = 256, double tol = 1e-9);

/// -avg 1 / D_N(mu; k), equal to R(mu + pi). Requires cos mu < -3/5.
RIntegral R_integral_neumann(double mu, int quad_n = 256, double tol = 1e-9);

/// Closed forms of the averaged dangling-edge coefficient.
double grid2d_KD(double mu, double nu, int quad_n = 256);
double grid2d_KN(double mu, double nu, int quad_n = 256);

/// Pointwise coefficient, rational form in z_j = e^{i k_j}. Throws
/// domain_error at a pole.
cplx grid2d_KD_hat(double mu, double nu, cplx k1, cplx k2);
cplx grid2d_KN_hat(double mu, double nu, cplx k1, cplx k2);

/// Solution [K, C1, D1, C2, D2] of the forced system at (k1, k2).
CVector grid2d_solve(BoundaryCondition bc, double mu, double nu, cplx k1, cplx k2);

/// Dirichlet: nu cot(nu/2) = mu csc mu (1 + cos mu - 1/R(mu));
/// Neumann:   nu tan(nu/2) = mu csc mu (1 - cos mu - 1/R(mu + pi)).
NuRoot grid2d_nu_root(double mu, BoundaryCondition bc, int branch = 0, int quad_n = 256);

/// Rate of the slowest (axis) decay: distance of the nearest zero of the
/// dispersion function to the unit torus along one axis.
double grid2d_predicted_decay(BoundaryCondition bc, double mu);

struct GridBoundState {
    double mu = 0.0;
    BoundaryCondition bc = BoundaryCondition::dirichlet;
    double nu = 0.0;
    double v0 = 0.0;
    int box = 0;
    int quad_n = 0;
    /// Per cell: [K, C1, D1, C2, D2]; the defect cell holds K = 0 and only
    /// the particular solution on its dangling edge.
    LatticeField cells;
    /// Quadrature value of K at the defect cell before it is dropped.
    double k0 = 0.0;
    /// |K(0) at N minus K(0) at N/2|.
    double quad_error = 0.0;
    double residual_continuity = 0.0;
    double residual_flux = 0.0;
    /// max of the two, relative to the largest vertex value (flux also / max(1, mu)).
    double residual_vertex = 0.0;
    DecayFit decay;
    double predicted_alpha = 0.0;
    /// Largest |g|_inf with |K(g)| > 1e-13.
    int tail = 0;
    bool embedded = false;
    BandInterval witness;  // band of the companion condition, in mu
};

/// Bound state at the root nu of the given branch.
GridBoundState grid2d_bound_state(double mu, BoundaryCondition bc, int box = 20,
                                  int quad_n = 256, int branch = 0);

/// Same pipeline at an arbitrary nu (negative controls).
GridBoundState grid2d_bound_state_at(double mu, BoundaryCondition bc, double nu, int box,
                                     int quad_n);

struct BilayerCheck {
    int sigma = 1;  // bottom = sigma * top
    double midpoint_value_jump = 0.0;
    double midpoint_slope_jump = 0.0;
    double residual_top = 0.0;
    double residual_bottom = 0.0;
    double residual = 0.0;
};

/// Lifts the half-graph state to both layers by even (Neumann) or odd
/// (Dirichlet) reflection across the rung midpoints and rechecks all vertex
/// and midpoint conditions.
BilayerCheck grid2d_mirror_lift(const GridBoundState& state);

} // namespace fermilab
