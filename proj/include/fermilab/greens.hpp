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
/// Lattice Green's functions (A - lambda) u = delta by torus quadrature,
/// single-site defects built from them, and decay diagnostics.

#include <vector>

#include "fermilab/lattice.hpp"

namespace fermilab {

struct GreensOptions {
    int quad_n = 128;
    /// Half width of the output box on every axis. Requires 2*box < quad_n.
    int box = 20;
    /// Fiber component carrying the delta.
    int component = 0;
    /// Proximity guard: min |det(A_hat - lambda)| on a 4x finer probe grid.
    double gap_tol = 1e-6;
    /// Allowed |u0(N) - u0(N/2)|.
    double convergence_tol = 1e-9;
};

struct GreensResult {
    LatticeField u;
    cplx u0;
    double lambda = 0.0;
    int quad_n = 0;
    int component = 0;
    /// |u0(N) - u0(N/2)|
    double quad_error = 0.0;
    /// min |det| seen by the proximity probe.
    double min_det = 0.0;
};

/// Throws domain_error when lambda is in or too near the spectrum and
/// convergence_error when halving the grid moves u0 by more than the tolerance.
GreensResult resolvent_delta(const PeriodicStencil& stencil, double lambda,
                             const GreensOptions& opt = {});

/// V(0) = -1/u0 on the delta component; throws domain_error when |u0| < 1e-10.
SiteDefect synth_defect(const GreensResult& result);

/// Direct sparse solve of (A - lambda) u = delta on the box with zero
/// boundary values. Oracle only.
LatticeField brute_force_green(const PeriodicStencil& stencil, double lambda, int box,
                               int component = 0);

struct Example1Defect {
    double alpha = 0.0;
    double lambda = 0.0;
    double v0 = 0.0;
    double v1 = 0.0;
    LatticeField v;
    SiteDefect defect;
};

/// Closed-form defect for the fourth-order stencil: v(g) = (-e^alpha)^{-|g|},
/// lambda = (2cosh alpha - 1)^2 - 3. Requires alpha in (0, acosh 2) so that
/// lambda lies in (-2, 6).
Example1Defect example1_defect(double alpha, int box = 50);

struct DecayShell {
    int radius;
    double max_abs;
};

struct DecayFit {
    double alpha = 0.0;
    double r2 = 0.0;
    std::vector<DecayShell> shells;
    /// Shells used by the fit.
    int used = 0;
    /// Algebraic prefactor removed before the fit: max ~ r^-power e^{-alpha r}.
    double power = 0.0;
};

/// Log-linear least squares of log(max) + power log(r) over sup-norm shells
/// against the radius. In n dimensions the lattice resolvent decays like
/// r^{-(n-1)/2} e^{-alpha r} along its slowest ray, so power = (n-1)/2 makes
/// alpha comparable with the analytic rate. Shells below 1e-300 or 1e-12 of
/// the peak are dropped (and r = 0 when power != 0); throws domain_error when
/// fewer than three usable shells remain.
DecayFit fit_decay(const LatticeField& u, int skip = 1, double power = 0.0);

struct SupportCheck {
    /// Nonzero Laurent coefficients of det(A_hat(z) - lambda).
    int laurent_terms = 0;
    std::vector<int> boxes;
    /// Largest |g|_inf with |u(g)| > threshold, per box.
    std::vector<int> tail;
    double threshold = 1e-13;
    bool unbounded = false;
};

/// Throws domain_error when the stencil is constant.
SupportCheck unbounded_support_check(const PeriodicStencil& stencil, double lambda,
                                     const std::vector<int>& boxes, int quad_n = 128);

} // namespace fermilab
