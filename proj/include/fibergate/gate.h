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

// End-to-end gate protocol: evolve the four qubit basis states (field in
// vacuum), extract their phases, and compare with the effective theory.

#include <array>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "fibergate/dynamics.h"
#include "fibergate/hamiltonian.h"
#include "fibergate/params.h"

namespace fibergate {

enum class Engine { full_unitary, full_lindblad, effective };

const char* engine_name(Engine e);
/// Accepts "full-unitary", "full-lindblad", "effective". Throws ConfigError.
Engine parse_engine(const std::string& name);

struct GateOptions {
  IntegratorConfig integrator;
  HamiltonianOptions hamiltonian;
  double branching_to_g = 0.5;
  ModeDecayBasis decay_basis = ModeDecayBasis::physical;
  // Switch the classical drive off at this time (<= 0 keeps it on).
  double drive_off_after = 0;
  // Also report the best fidelity over free single-qubit phases.
  bool fit_local_phases = false;
  int jobs = 0;  // 0: one worker per hardware thread
};

struct GateReport {
  Engine engine = Engine::full_unitary;
  int n_max = 0;
  double gate_time = 0;
  // Per basis state (QubitBasis order): unwrapped arg<k, vac|psi_k(T)>.
  std::array<double, 4> phases{};
  std::array<double, 4> magnitudes{};
  // Single-qubit phase removed from each basis state before comparing with
  // the ideal gate: |g_j> -> e^{i(mu1 + mu2 + mu0 - eta)t}|g_j> at r = 1.
  std::array<double, 4> local_correction{};
  // phases.gg - phases.gf - phases.fg + phases.ff, wrapped into (-pi, pi].
  double conditional_phase = 0;
  double predicted_conditional_phase = 0;
  double fidelity = 0;
  double fitted_fidelity = std::numeric_limits<double>::quiet_NaN();
  // Peaks over all integrator steps and all runs of this gate.
  double max_atom_excitation = 0;
  double max_field_excitation = 0;
  std::array<double, 4> peak_atom_excitation{};
  std::array<double, 4> peak_field_excitation{};
  // Largest ||psi_ff(t) - psi_ff(0)|| over snapshots (pure-state engines).
  double ff_deviation = 0;
  // Field-vacuum qubit block of the final state: rho for the Lindblad engine
  // (input |++>), v v^dagger with v_k = <k|psi_k(T)>/2 for pure engines.
  Eigen::Matrix4cd qubit_block = Eigen::Matrix4cd::Zero();
  // One trajectory per basis state, or a single one for the Lindblad engine.
  std::vector<std::pair<std::string, Trajectory>> trajectories;

  /// Fills qubit_block, phases and magnitudes from per-basis amplitudes.
  void set_amplitudes(const std::array<cplx, 4>& amplitudes);
};

GateReport run_gate(const ModelParams& p, double t_final, Engine engine, const GateOptions& opts = {});

/// <psi_ideal| D R D^dagger |psi_ideal> with psi_ideal = (e^{i theta}, 1, 1, 1)/2,
/// R the qubit block and D the local corrections. For pure engines this is
/// |tr(U_ideal^dagger M)|^2 / 16.
double gate_fidelity(const GateReport& report, double target_conditional_phase);

/// Same, maximized over the two single-qubit phases.
double fitted_gate_fidelity(const GateReport& report, double target_conditional_phase);

struct LeakageCheck {
  bool atom_pass = false;
  bool field_pass = false;
  double atom_bound = 0;   // factor * p1
  double field_bound = 0;  // factor * p2
  bool pass() const { return atom_pass && field_pass; }
};

inline constexpr double kDefaultLeakageFactor = 4.0;

LeakageCheck leakage_check(const GateReport& report, const DerivedConstants& constants,
                           double factor = kDefaultLeakageFactor);

struct AsymmetryScan {
  std::vector<double> r;
  std::vector<double> conditional_phase;
  double slope = 0;         // least squares through the origin
  double max_residual = 0;  // max_i |phase_i - slope r_i|
  double relative_residual() const { return max_residual / std::abs(slope); }
};

AsymmetryScan asymmetry_scan(const ModelParams& p, const std::vector<double>& r_values, double t_final,
                             Engine engine = Engine::full_unitary, const GateOptions& opts = {});

/// Flat `key = value` report, 15 significant digits.
void write_report(const GateReport& report, std::ostream& os);

}  // namespace fibergate
