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
/// Pass/fail verification of bound states and the registered case suite.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fermilab/dispersion.hpp"
#include "fermilab/greens.hpp"
#include "fermilab/lattice.hpp"
#include "fermilab/quantum_graph.hpp"

namespace fermilab {

/// Every limit a report is judged against. Disabled checks are nullopt.
struct Thresholds {
    double residual = 1e-12;
    /// r[i+1] <= trend_factor * r[i] + trend_floor along the box sequence.
    double trend_factor = 2.0;
    double trend_floor = 1e-14;
    std::optional<double> decay_r2 = 0.999;
    std::optional<double> oracle = std::nullopt;
    bool require_embedded = true;
    bool require_tail = true;
    /// A negative control passes the harness only if its residual is at least this.
    double negative_floor = 1e-3;
};

struct VerificationReport {
    std::string id;
    std::string kind;  // "combinatorial" | "quantum" | "oracle"
    double residual_interior = 0.0;
    std::vector<int> boxes;
    std::vector<double> residual_trend;
    bool embedded = false;
    std::optional<BandInterval> witness;
    std::optional<DecayFit> decay;
    std::optional<double> oracle_diff;
    std::vector<int> tail;
    /// Residual of the symmetry class check (mirror lift, antisymmetry).
    std::optional<double> class_residual;
    /// Case parameters and derived scalars, for the record.
    nlohmann::json details = nlohmann::json::object();
    Thresholds thresholds;
    /// Names of the thresholds that were not met.
    std::vector<std::string> failures;
    bool pass = false;
    bool negative_control = false;
    /// Negative control: failed with residual >= negative_floor.
    bool expected_fail_ok = false;
    /// Set when the case threw; the message is kept here.
    std::optional<std::string> error;
};

/// Residual of (A + V - lambda) u on nested boxes of u, decay fit, support
/// tail and embedding of lambda in the sampled spectrum of A. Throws
/// domain_error on inconsistent shapes or a box larger than the field.
VerificationReport verify_combinatorial(const PeriodicStencil& stencil, const SiteDefect& defect,
                                        const LatticeField& u, double lambda,
                                        const std::vector<int>& boxes,
                                        const Thresholds& thresholds = {});

/// Chain bound states recomputed at each box; the class check is the
/// antisymmetry of the two chains.
VerificationReport verify_quantum(const std::vector<ChainBoundState>& runs,
                                  const Thresholds& thresholds = {});

/// Grid bound states recomputed at each box; the class check is the mirror
/// lift (odd for Dirichlet, even for Neumann).
VerificationReport verify_quantum(const std::vector<GridBoundState>& runs,
                                  const Thresholds& thresholds = {});

/// Fills failures and pass from the recorded values and thresholds.
void judge(VerificationReport& report);

std::vector<std::string> registered_cases();
bool is_negative_control(const std::string& id);

struct SuiteReport {
    std::vector<VerificationReport> cases;  // sorted by id
    int passed = 0;
    int failed = 0;
    int expected_failures = 0;
    /// Negative controls that did not fail as required.
    int unexpected_passes = 0;
    int exit_code = 0;
};

/// Runs one case descriptor {"id": ..., parameters..., "thresholds": {...}}.
/// Thresholds start from the case defaults, then take the suite-wide
/// overrides, then the descriptor's own. Throws domain_error for an unknown id;
/// numerical failures inside the case are recorded in the report.
VerificationReport run_case(const nlohmann::json& descriptor,
                            const nlohmann::json& overrides = nlohmann::json::object());

/// Config is a list of case descriptors, or {"thresholds": {...}, "cases": [...]}.
/// Cases run in parallel. exit_code is 0 iff every non-negative case passes
/// and every negative control fails as required.
SuiteReport suite_run(const nlohmann::json& config);

/// The default acceptance configuration.
nlohmann::json default_suite_config();

nlohmann::json to_json(const Thresholds& t);
Thresholds thresholds_from_json(const nlohmann::json& j, Thresholds base = {});
nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(const SuiteReport& r);

} // namespace fermilab
