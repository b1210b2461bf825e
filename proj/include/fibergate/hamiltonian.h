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

// Builders for every Hamiltonian of the scheme: the exact lab-frame model,
// its normal-mode rotated form, and the second- and fourth-order effective
// Hamiltonians. Time dependence is kept as explicit harmonic term lists so
// integrators can size their step from the fastest frequency.

#include <array>
#include <vector>

#include "fibergate/hilbert.h"
#include "fibergate/params.h"

namespace fibergate {

/// amplitude * e^{i frequency t} * op + h.c.
struct HarmonicTerm {
  QOperator op;
  double frequency = 0;
  cplx amplitude{1.0, 0.0};
};

class TimeDependentOperator {
 public:
  explicit TimeDependentOperator(QOperator static_part, std::vector<HarmonicTerm> terms = {});

  const HilbertSpace& space() const { return static_part_.space(); }
  const QOperator& static_part() const { return static_part_; }
  const std::vector<HarmonicTerm>& terms() const { return terms_; }

  QOperator at(double t) const;
  /// Largest |frequency| in the term list (0 for a static operator).
  double max_frequency() const;

  TimeDependentOperator& operator+=(const TimeDependentOperator& o);

 private:
  QOperator static_part_;
  std::vector<HarmonicTerm> terms_;
};

struct HamiltonianOptions {
  ConstantsOptions constants;
  // Removes the xi mode-mode terms from the second- and fourth-order forms.
  bool drop_xi_terms = false;
};

/// nu b^dagger (a1 + e^{i phi} a2) + h.c., which equals
/// sqrt2 nu (c1^dagger c1 - c2^dagger c2) on the interior subspace.
QOperator h_cavity_fiber(const HilbertSpace& space, const ModelParams& p);

/// sqrt2 nu (c1^dagger c1 - c2^dagger c2), the generator of the normal-mode frame.
QOperator h_normal_mode_free(const HilbertSpace& space, const ModelParams& p);

/// sum_j (g_j a_j e^{i Delta t} + Omega e^{i(Delta - delta) t}) |e_j><g_j| + h.c.
/// with g_1 = g, g_2 = r g.
TimeDependentOperator h_atom_cavity(const HilbertSpace& space, const ModelParams& p);

/// h_cavity_fiber + h_atom_cavity: the exact reference dynamics.
TimeDependentOperator h_full(const HilbertSpace& space, const ModelParams& p);

/// Atom-field coupling after the e^{i H0 t} transformation. Evolving with
/// this and applying e^{-i H0 T} reproduces h_full on the interior subspace.
TimeDependentOperator h_rotated(const HilbertSpace& space, const ModelParams& p);

/// Second-order Hamiltonian after eliminating the excited states. Atom 2's
/// lambda couplings carry a factor r and its xi/eps couplings r^2.
TimeDependentOperator h_second_order(const HilbertSpace& space, const ModelParams& p,
                                     const HamiltonianOptions& opts = {});

/// Static fourth-order Hamiltonian, c c^dagger ordering kept as written.
QOperator h_effective(const HilbertSpace& space, const ModelParams& p, const HamiltonianOptions& opts = {});

/// Qubit basis of the gate, in the order gg, gf, fg, ff.
enum class QubitBasis : int { gg = 0, gf = 1, fg = 2, ff = 3 };
inline constexpr std::array<QubitBasis, 4> kQubitBasis{QubitBasis::gg, QubitBasis::gf, QubitBasis::fg,
                                                      QubitBasis::ff};
const char* basis_name(QubitBasis b);
Level atom1_level(QubitBasis b);
Level atom2_level(QubitBasis b);

struct PredictedPhases {
  std::array<double, 4> phase{};  // indexed by QubitBasis
  double conditional = 0;         // -2 r (mu1 + mu2 - mu0) t
};

/// Vacuum-field phases of the four qubit basis states under the fourth-order
/// Hamiltonian. At r = 1: gg -> -(4mu1 + 4mu2 - 2eta)t, gf/fg ->
/// -(mu1 + mu2 + mu0 - eta)t, ff -> 0.
PredictedPhases predicted_phases(const ModelParams& p, double t, const ConstantsOptions& opts = {});

}  // namespace fibergate
