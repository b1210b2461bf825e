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

#include "fibergate/hamiltonian.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fibergate/errors.h"

namespace fibergate {

TimeDependentOperator::TimeDependentOperator(QOperator static_part, std::vector<HarmonicTerm> terms)
    : static_part_(std::move(static_part)), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (!(t.op.space() == static_part_.space())) throw Error("harmonic term lives on a different space");
  }
}

QOperator TimeDependentOperator::at(double t) const {
  QOperator out = static_part_;
  for (const auto& term : terms_) {
    const cplx c = term.amplitude * std::polar(1.0, term.frequency * t);
    out += c * term.op + std::conj(c) * term.op.adjoint();
  }
  return out;
}

double TimeDependentOperator::max_frequency() const {
  double w = 0;
  for (const auto& term : terms_) w = std::max(w, std::abs(term.frequency));
  return w;
}

TimeDependentOperator& TimeDependentOperator::operator+=(const TimeDependentOperator& o) {
  static_part_ += o.static_part_;
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

namespace {

struct Ops {
  QOperator a1, a2, b;
  QOperator c0, c1, c2;
  QOperator raise1, raise2;  // |e_j><g_j|
  QOperator G1, G2;          // |g_j><g_j|

  Ops(const HilbertSpace& s, double phi)
      : a1(mode_annihilation(s, Mode::cavity1)),
        a2(mode_annihilation(s, Mode::cavity2)),
        b(mode_annihilation(s, Mode::fiber)),
        c0(normal_mode(s, NormalMode::c0, phi)),
        c1(normal_mode(s, NormalMode::c1, phi)),
        c2(normal_mode(s, NormalMode::c2, phi)),
        raise1(atomic_projector(s, 1, Level::e, Level::g)),
        raise2(atomic_projector(s, 2, Level::e, Level::g)),
        G1(atomic_projector(s, 1, Level::g, Level::g)),
        G2(atomic_projector(s, 2, Level::g, Level::g)) {}
};

}  // namespace

QOperator h_cavity_fiber(const HilbertSpace& space, const ModelParams& p) {
  const QOperator a1 = mode_annihilation(space, Mode::cavity1);
  const QOperator a2 = mode_annihilation(space, Mode::cavity2);
  const QOperator b = mode_annihilation(space, Mode::fiber);
  const QOperator hop = p.nu * (b.adjoint() * (a1 + std::polar(1.0, p.phi) * a2));
  return hop + hop.adjoint();
}

QOperator h_normal_mode_free(const HilbertSpace& space, const ModelParams& p) {
  const QOperator c1 = normal_mode(space, NormalMode::c1, p.phi);
  const QOperator c2 = normal_mode(space, NormalMode::c2, p.phi);
  return (std::numbers::sqrt2 * p.nu) * (c1.adjoint() * c1 - c2.adjoint() * c2);
}

TimeDependentOperator h_atom_cavity(const HilbertSpace& space, const ModelParams& p) {
  const Ops o(space, p.phi);
  const double drive = p.delta_big - p.delta_small;
  std::vector<HarmonicTerm> terms{
      {o.a1 * o.raise1, p.delta_big, p.g},
      {o.raise1, drive, p.omega},
      {o.a2 * o.raise2, p.delta_big, p.r * p.g},
      {o.raise2, drive, p.omega},
  };
  return TimeDependentOperator(zero_operator(space), std::move(terms));
}

TimeDependentOperator h_full(const HilbertSpace& space, const ModelParams& p) {
  TimeDependentOperator h(h_cavity_fiber(space, p));
  h += h_atom_cavity(space, p);
  return h;
}

TimeDependentOperator h_rotated(const HilbertSpace& space, const ModelParams& p) {
  const Ops o(space, p.phi);
  const double s = std::numbers::sqrt2 * p.nu;
  const double big = p.delta_big;
  const double drive = p.delta_big - p.delta_small;
  const double g1 = p.g;
  const cplx g2 = p.r * p.g * std::polar(1.0, -p.phi);
  std::vector<HarmonicTerm> terms{
      {o.c1 * o.raise1, big - s, g1 / 2},
      {o.c2 * o.raise1, big + s, g1 / 2},
      {o.c0 * o.raise1, big, g1 / std::numbers::sqrt2},
      {o.raise1, drive, p.omega},
      {o.c1 * o.raise2, big - s, g2 / 2.0},
      {o.c2 * o.raise2, big + s, g2 / 2.0},
      {o.c0 * o.raise2, big, -g2 / std::numbers::sqrt2},
      {o.raise2, drive, p.omega},
  };
  return TimeDependentOperator(zero_operator(space), std::move(terms));
}

TimeDependentOperator h_second_order(const HilbertSpace& space, const ModelParams& p,
                                     const HamiltonianOptions& opts) {
  const DerivedConstants k = derive_constants(p, opts.constants);
  const Ops o(space, p.phi);
  const double s = std::numbers::sqrt2 * p.nu;
  const double d = p.delta_small;
  const double r = p.r;
  const cplx ph2 = r * std::polar(1.0, -p.phi);

  std::vector<HarmonicTerm> terms{
      {o.c1 * o.G1, d - s, -k.lambda1},
      {o.c2 * o.G1, d + s, -k.lambda2},
      {o.c0 * o.G1, d, -k.lambda0},
      {o.c1 * o.G2, d - s, -k.lambda1 * ph2},
      {o.c2 * o.G2, d + s, -k.lambda2 * ph2},
      {o.c0 * o.G2, d, k.lambda0 * ph2},
  };
  if (!opts.drop_xi_terms) {
    const double r2 = r * r;
    const QOperator c1c2d = o.c1 * o.c2.adjoint();
    const QOperator c1c0d = o.c1 * o.c0.adjoint();
    const QOperator c0c2d = o.c0 * o.c2.adjoint();
    terms.push_back({c1c2d * o.G1, -2 * s, -k.xi1});
    terms.push_back({c1c0d * o.G1, -s, -k.xi2});
    terms.push_back({c0c2d * o.G1, -s, -k.xi0});
    terms.push_back({c1c2d * o.G2, -2 * s, -k.xi1 * r2});
    terms.push_back({c1c0d * o.G2, -s, k.xi2 * r2});
    terms.push_back({c0c2d * o.G2, -s, k.xi0 * r2});
  }

  const QOperator id = identity(space);
  const QOperator stark = k.eps1 * (o.c1.adjoint() * o.c1) + k.eps2 * (o.c2.adjoint() * o.c2) +
                          k.eps0 * (o.c0.adjoint() * o.c0);
  QOperator stat = -1.0 * ((k.eta * id + stark) * o.G1 + (k.eta * id + (r * r) * stark) * o.G2);
  return TimeDependentOperator(std::move(stat), std::move(terms));
}

QOperator h_effective(const HilbertSpace& space, const ModelParams& p, const HamiltonianOptions& opts) {
  const DerivedConstants k = derive_constants(p, opts.constants);
  const Ops o(space, p.phi);
  const double r = p.r;
  const double r2 = r * r;
  const QOperator id = identity(space);

  const QOperator plus = o.G1 + r * o.G2;
  const QOperator minus = o.G1 - r * o.G2;
  QOperator h = (k.mu1 + k.mu2) * (plus * plus) + k.mu0 * (minus * minus);

  if (!opts.drop_xi_terms) {
    const double s = std::numbers::sqrt2 * p.nu;
    if (s == 0) throw DegenerateDetuningError("degenerate detuning: sqrt2 nu vanishes in the xi^2 terms");
    const QOperator cc0 = o.c0 * o.c0.adjoint();
    const QOperator cc1 = o.c1 * o.c1.adjoint();
    const QOperator cc2 = o.c2 * o.c2.adjoint();
    const QOperator plus2 = o.G1 + r2 * o.G2;
    const QOperator minus2 = o.G1 - r2 * o.G2;
    h += (k.xi1 * k.xi1 / (2 * s)) * ((cc1 - cc2) * (plus2 * plus2));
    h += ((k.xi2 * k.xi2 / s) * (cc1 - cc0) + (k.xi0 * k.xi0 / s) * (cc0 - cc2)) * (minus2 * minus2);
  }

  const QOperator stark = k.eps1 * (o.c1.adjoint() * o.c1) + k.eps2 * (o.c2.adjoint() * o.c2) +
                          k.eps0 * (o.c0.adjoint() * o.c0);
  h -= (k.eta * id + stark) * o.G1 + (k.eta * id + r2 * stark) * o.G2;
  return h;
}

const char* basis_name(QubitBasis b) {
  switch (b) {
    case QubitBasis::gg: return "gg";
    case QubitBasis::gf: return "gf";
    case QubitBasis::fg: return "fg";
    case QubitBasis::ff: return "ff";
  }
  return "?";
}

Level atom1_level(QubitBasis b) {
  return (b == QubitBasis::gg || b == QubitBasis::gf) ? Level::g : Level::f;
}

Level atom2_level(QubitBasis b) {
  return (b == QubitBasis::gg || b == QubitBasis::fg) ? Level::g : Level::f;
}

PredictedPhases predicted_phases(const ModelParams& p, double t, const ConstantsOptions& opts) {
  if (t < 0) throw ParameterError("t", "must be >= 0");
  const DerivedConstants k = derive_constants(p, opts);
  const double r = p.r;
  const double m12 = k.mu1 + k.mu2;
  // Vacuum eigenvalues of the fourth-order Hamiltonian; the xi and eps
  // terms vanish on the field vacuum.
  const double e_gg = m12 * (1 + r) * (1 + r) + k.mu0 * (1 - r) * (1 - r) - 2 * k.eta;
  const double e_gf = m12 + k.mu0 - k.eta;
  const double e_fg = r * r * (m12 + k.mu0) - k.eta;
  PredictedPhases out;
  out.phase = {-e_gg * t, -e_gf * t, -e_fg * t, 0.0};
  out.conditional = -2 * r * (m12 - k.mu0) * t;
  return out;
}

}  // namespace fibergate
