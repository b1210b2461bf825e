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

// Schroedinger and Lindblad integration for harmonic-term Hamiltonians.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fibergate/hamiltonian.h"
#include "fibergate/hilbert.h"
#include "fibergate/params.h"

namespace fibergate {

enum class Method { rk4, dopri5 };

struct IntegratorConfig {
  Method method = Method::rk4;
  // Fixed step. 0 picks min(step_bound(H), max_dt); a positive value above
  // step_bound(H) is rejected.
  double dt = 0;
  double max_dt = 0.0015;
  // Local error tolerance of the adaptive pair (absolute and relative).
  double tolerance = 1e-10;
  long max_steps = 50'000'000;
  // Snapshots per unit time.
  double record_stride = 4.0;
  bool store_states = true;
  // Abort threshold on | ||psi|| - 1 | (pure) or | tr rho - 1 | (Lindblad).
  double drift_abort = 1e-6;
  // Lindblad only: record the smallest eigenvalue of rho at each snapshot.
  bool check_positivity = false;

  bool operator==(const IntegratorConfig&) const = default;
};

/// (2 pi / omega_max) / 20, where omega_max is the largest harmonic frequency
/// or, if larger, a row-sum bound on the static part's spectral radius.
double step_bound(const TimeDependentOperator& h);

struct Observable {
  std::string name;
  QOperator op;
};

struct Trajectory {
  std::vector<double> times;
  // Snapshots: a pure state is a dim x 1 column, a density matrix dim x dim.
  std::vector<Eigen::MatrixXcd> states;
  // Real part of each observable's expectation value at every snapshot.
  std::map<std::string, std::vector<double>> observables;
  // Largest value each observable reached over every integrator step.
  std::map<std::string, double> peaks;
  Eigen::MatrixXcd final_state;
  long steps = 0;
  double dt = 0;  // fixed step used, or smallest accepted adaptive step

  /// Header `t,<observable names...>`, one row per snapshot, 12 significant digits.
  void write_csv(std::ostream& os) const;
};

struct CollapseChannel {
  std::string name;
  QOperator op;
  double rate = 0;
};

class CollapseSet {
 public:
  /// Throws ParameterError for a negative or non-finite rate.
  void add(std::string name, QOperator op, double rate);
  const std::vector<CollapseChannel>& channels() const { return channels_; }
  bool empty() const { return channels_.empty(); }

 private:
  std::vector<CollapseChannel> channels_;
};

enum class ModeDecayBasis { physical, normal };

/// |g><e| and |f><e| on each atom (rates branching_to_g * Gamma and
/// (1 - branching_to_g) * Gamma), plus decay of the three bosonic modes at
/// kappa, either on a1, a2, b or on the normal modes c0, c1, c2.
CollapseSet gate_collapse_set(const HilbertSpace& space, const ModelParams& p, double branching_to_g = 0.5,
                              ModeDecayBasis modes = ModeDecayBasis::physical);

/// Integrates i dpsi/dt = H(t) psi from t_start to t_start + t_final.
Trajectory evolve_pure(const TimeDependentOperator& h, const QState& psi0, double t_final,
                       const IntegratorConfig& cfg, const std::vector<Observable>& observables = {},
                       double t_start = 0);

/// Same, continuing from an arbitrary (normalized) amplitude vector.
Trajectory evolve_pure(const TimeDependentOperator& h, const Eigen::VectorXcd& psi0, double t_final,
                       const IntegratorConfig& cfg, const std::vector<Observable>& observables = {},
                       double t_start = 0);

/// Zero-temperature master equation
///   drho/dt = -i[H, rho] + sum_k rate_k (L rho L^dagger - {L^dagger L, rho}/2).
/// Observables "trace" and "hermiticity" are always recorded.
Trajectory evolve_lindblad(const TimeDependentOperator& h, const Eigen::MatrixXcd& rho0,
                           const CollapseSet& collapse, double t_final, const IntegratorConfig& cfg,
                           const std::vector<Observable>& observables = {}, double t_start = 0);

Eigen::MatrixXcd pure_density(const QState& psi);

/// arg <reference|psi(t)> at every stored snapshot, unwrapped continuously.
/// Throws LeakageError when |<reference|psi(t)>| < 0.5 at any snapshot.
std::vector<double> phase_of(const Trajectory& traj, const QState& reference);

/// Wraps an angle into (-pi, pi].
double wrap_phase(double x);

}  // namespace fibergate
