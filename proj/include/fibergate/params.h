// Copyright 2026 The fibergate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Physical inputs of the two-cavity model and every closed-form quantity
// obtained from the dispersive (second- and fourth-order) elimination.
//
// Units: hbar = 1. Every rate is a plain number in the same unit as `g`;
// with the default g = 1 all rates are in units of g and all times in 1/g.

#include <numbers>
#include <string>
#include <vector>

namespace fibergate {

struct ModelParams {
  double g = 1.0;            // atom-cavity coupling
  double omega = 1.0;        // classical Rabi frequency
  double delta_big = 30.0;   // cavity detuning
  double delta_small = 1.0;  // two-photon detuning; drive detuning is delta_big - delta_small
  double nu = std::numbers::sqrt2;  // cavity-fiber coupling
  double phi = 0.0;          // fiber propagation phase, [0, 2pi)
  double gamma = 0.0;        // excited-state decay rate
  double kappa = 0.0;        // bosonic-mode decay rate
  double r = 1.0;            // coupling asymmetry g2 / g1
  int n_max = 2;             // per-mode Fock cutoff

  /// Omega = g, Delta = 30g, delta = g, nu = sqrt(2) g, Gamma = kappa = 0.01g.
  static ModelParams reference_operating_point();

  bool operator==(const ModelParams&) const = default;
};

/// Throws ParameterError naming the first offending field.
void check_fields(const ModelParams& p);

enum class Xi1Form {
  corrected,   // g^2/4 (1/(Delta - sqrt2 nu) + 1/(Delta + sqrt2 nu))
  as_printed,  // g^2/4 (2/(Delta + sqrt2 nu))
};

struct ConstantsOptions {
  Xi1Form xi1 = Xi1Form::corrected;
  // Debug canary only: multiplies lambda0 after evaluation.
  double lambda0_scale = 1.0;
};

struct DerivedConstants {
  double lambda0 = 0, lambda1 = 0, lambda2 = 0;
  double xi0 = 0, xi1 = 0, xi2 = 0;
  double eta = 0;
  double eps0 = 0, eps1 = 0, eps2 = 0;
  double mu0 = 0, mu1 = 0, mu2 = 0;
  double p1 = 0, p2 = 0;
  double gamma_eff = 0, kappa_eff = 0;

  bool operator==(const DerivedConstants&) const = default;
};

struct ValidityCheck {
  std::string name;
  double ratio = 0;
  bool pass = false;
};

struct ValidityReport {
  double threshold = 10.0;
  std::vector<ValidityCheck> checks;

  bool all_pass() const;
  const ValidityCheck& at(const std::string& name) const;
  /// Names of failing inequalities, in check order.
  std::vector<std::string> failures() const;
};

inline constexpr double kDefaultValidityThreshold = 10.0;

/// Dispersive-regime ratios. Never throws for degenerate detunings: a
/// vanishing denominator shows up as a failing (zero or NaN) ratio.
ValidityReport validate(const ModelParams& p, double threshold = kDefaultValidityThreshold);

DerivedConstants derive_constants(const ModelParams& p, const ConstantsOptions& opts = {});

/// -2 r (mu1 + mu2 - mu0), the rate at which the two-qubit phase accumulates.
double conditional_phase_rate(const ModelParams& p, const ConstantsOptions& opts = {});

/// target_phase / conditional_phase_rate. Throws ZeroRateError when the rate
/// vanishes (unless target_phase is also zero).
double gate_time_for_phase(const ModelParams& p, double target_phase,
                           const ConstantsOptions& opts = {});

/// (Gamma' + kappa') * gate_time_for_phase.
double infidelity_estimate(const ModelParams& p, double target_phase,
                           const ConstantsOptions& opts = {});

/// (Gamma' + kappa') * t for an externally supplied gate time.
double infidelity_for_time(const ModelParams& p, double gate_time,
                           const ConstantsOptions& opts = {});

/// Gate time quoted for a 0.15pi conditional phase at the operating point.
inline constexpr double kQuotedGateTime = 101.25 * std::numbers::pi;
inline constexpr double kQuotedGatePhase = 0.15 * std::numbers::pi;

/// The quoted gate time scaled linearly to another target phase.
double quoted_gate_time_for_phase(double target_phase);

inline constexpr double kSpeedOfLight = 2.998e8;  // m/s

/// Longest fiber (m) for which l * nu_bar / (2 pi c) stays below mode_bound.
/// nu_bar is the cavity-into-fiber decay rate in 1/s.
double max_fiber_length(double nu_bar, double mode_bound = 1.0);

}  // namespace fibergate
