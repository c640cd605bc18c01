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
/// Dispersion relations det(A_hat(z) - lambda) = 0, band intervals and
/// unit-circle multiplicities.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fermilab/lattice.hpp"

namespace fermilab {

/// det(A_hat(z) - lambda I).
cplx det_symbol(const PeriodicStencil& stencil, const FloquetPoint& z, double lambda);

/// The pair {z, 1/z} with z + 1/z = w, smaller modulus first.
struct BranchValue {
    cplx w;
    std::array<cplx, 2> roots;
};

BranchValue branch_roots(cplx w);

struct Multiplicity {
    /// Unit-modulus roots of z^{D d} det(A_hat(z) - lambda), with multiplicity.
    int count = 0;
    /// A (near) double root on the circle: lambda sits at a band edge and
    /// count is not meaningful.
    bool at_edge = false;
    std::vector<cplx> roots;
};

inline constexpr double kTolCircle = 1e-8;

/// Companion-matrix root count for n = 1 stencils.
Multiplicity multiplicity_1d(const PeriodicStencil& stencil, double lambda,
                             double tol_circle = kTolCircle);

struct BandInterval {
    double lo = 0.0;
    double hi = 0.0;
    /// Unit-circle multiplicity on the open interval (0 when not computed).
    int mult = 0;
    bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

struct CriticalPoint {
    double k;
    double value;
};

struct BandReport {
    /// "lambda" for combinatorial operators, "mu" for quantum-graph bands.
    std::string variable = "lambda";
    /// Partition of the spectrum by multiplicity level (or plain bands).
    std::vector<BandInterval> intervals;
    /// Band of each eigenvalue branch, before merging.
    std::vector<BandInterval> branches;
    /// Union of the bands as disjoint closed intervals.
    std::vector<BandInterval> span;
    std::vector<CriticalPoint> critical;
    /// Sampled multiplicities (1D); edge samples report -1.
    std::vector<double> lambda_grid;
    std::vector<int> multiplicity;

    /// The span interval containing x, if any.
    std::optional<BandInterval> witness(double x, double tol = 0.0) const;
    bool contains(double x, double tol = 0.0) const { return witness(x, tol).has_value(); }
};

/// Merges closed intervals into a disjoint sorted union.
std::vector<BandInterval> merge_intervals(std::vector<BandInterval> v);

/// Ex-1 stencil: [-3,-2] with multiplicity 4 and [-2,6] with multiplicity 2.
BandReport example1_bands();

/// Coupled chains: branches (a-2,a+2) -+ sqrt(b^2+c^2), partitioned by multiplicity.
BandReport example2_bands(double a, double b, double c);

/// Branch-wise min/max of the eigenvalues of A_hat on a samples^n torus
/// grid (samples even so that k = 0 and k = pi are nodes). For n = 1 the
/// report also carries multiplicity_1d on a lambda grid of lambda_samples points.
BandReport spectrum_bands(const PeriodicStencil& stencil, int samples = 256,
                          int lambda_samples = 0);

/// (k, lambda) pairs on a uniform k grid of [-pi, pi] for plotting (n = 1).
std::vector<CriticalPoint> dispersion_curve(const PeriodicStencil& stencil, int samples);

} // namespace fermilab
