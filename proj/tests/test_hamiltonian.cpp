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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fibergate/errors.h"
#include "fibergate/hamiltonian.h"

using namespace fibergate;

namespace {

Eigen::VectorXcd vac(const HilbertSpace& s, Level a, Level b) { return basis_state(s, a, b).amplitudes(); }

ModelParams skewed() {
  ModelParams p;
  p.phi = 0.9;
  p.r = 0.7;
  p.omega = 1.3;
  return p;
}

}  // namespace

TEST_CASE("hamiltonians are hermitian") {
  const HilbertSpace s(2);
  for (const ModelParams& p : {ModelParams{}, skewed()}) {
    for (double t : {0.0, 0.37, 12.5}) {
      CHECK(h_full(s, p).at(t).is_hermitian(1e-13));
      CHECK(h_rotated(s, p).at(t).is_hermitian(1e-13));
      CHECK(h_second_order(s, p).at(t).is_hermitian(1e-13));
    }
    CHECK(h_effective(s, p).is_hermitian(1e-13));
    CHECK(h_cavity_fiber(s, p).is_hermitian(1e-15));
  }
}

TEST_CASE("term frequencies") {
  const HilbertSpace s(1);
  const ModelParams p;
  CHECK(h_full(s, p).max_frequency() == doctest::Approx(30));
  CHECK(h_rotated(s, p).max_frequency() == doctest::Approx(32));
  CHECK(h_second_order(s, p).max_frequency() == doctest::Approx(4));
  HamiltonianOptions no_xi;
  no_xi.drop_xi_terms = true;
  CHECK(h_second_order(s, p, no_xi).max_frequency() == doctest::Approx(3));
}

TEST_CASE("ff vacuum is annihilated at all times") {
  const HilbertSpace s(2);
  const Eigen::VectorXcd ff = vac(s, Level::f, Level::f);
  for (double t : {0.0, 1.0, 7.3}) {
    CHECK((h_full(s, skewed()).at(t).matrix() * ff).norm() == 0);
  }
  CHECK((h_effective(s, skewed()).matrix() * ff).norm() < 1e-16);
}

TEST_CASE("without drive the gg vacuum is stationary") {
  ModelParams p;
  p.omega = 0;
  const HilbertSpace s(2);
  const Eigen::VectorXcd gg = vac(s, Level::g, Level::g);
  for (double t : {0.0, 2.0}) CHECK((h_full(s, p).at(t).matrix() * gg).norm() == 0);
}

TEST_CASE("cavity-fiber coupling equals the normal-mode splitting on the interior") {
  const HilbertSpace s(2);
  for (double phi : {0.0, 0.5, std::numbers::pi}) {
    ModelParams p;
    p.phi = phi;
    const Eigen::MatrixXcd d = (h_cavity_fiber(s, p) - h_normal_mode_free(s, p)).restricted([](const BasisLabel& l) {
      return l.n1 < 2 && l.n2 < 2 && l.nb < 2;
    });
    CHECK(d.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("fourth-order Hamiltonian is diagonal on the vacuum qubit block") {
  const HilbertSpace s(2);
  for (const ModelParams& p : {ModelParams{}, skewed()}) {
    const QOperator h = h_effective(s, p);
    const PredictedPhases pred = predicted_phases(p, 1.0);
    for (QubitBasis b : kQubitBasis) {
      const Eigen::VectorXcd v = vac(s, atom1_level(b), atom2_level(b));
      const Eigen::VectorXcd hv = h.matrix() * v;
      const cplx e = v.dot(hv);
      CHECK((hv - e * v).norm() < 1e-15);
      CHECK(e.real() == doctest::Approx(-pred.phase[static_cast<int>(b)]).epsilon(1e-12));
    }
  }
}

TEST_CASE("predicted phases") {
  const ModelParams p;
  const DerivedConstants k = derive_constants(p);
  const PredictedPhases pred = predicted_phases(p, 10);
  CHECK(pred.phase[0] == doctest::Approx(-(4 * k.mu1 + 4 * k.mu2 - 2 * k.eta) * 10));
  CHECK(pred.phase[1] == doctest::Approx(-(k.mu1 + k.mu2 + k.mu0 - k.eta) * 10));
  CHECK(pred.phase[1] == pred.phase[2]);
  CHECK(pred.phase[3] == 0);
  CHECK(pred.conditional == doctest::Approx(pred.phase[0] - pred.phase[1] - pred.phase[2] + pred.phase[3]));
  CHECK(pred.conditional == doctest::Approx(-2 * (k.mu1 + k.mu2 - k.mu0) * 10));

  ModelParams q = skewed();
  const PredictedPhases pq = predicted_phases(q, 3);
  CHECK(pq.conditional == doctest::Approx(pq.phase[0] - pq.phase[1] - pq.phase[2] + pq.phase[3]));
  CHECK(pq.conditional == doctest::Approx(conditional_phase_rate(q) * 3));
  q.r = 0;
  CHECK(predicted_phases(q, 5).conditional == 0);
}

TEST_CASE("xi terms only act off the vacuum") {
  const HilbertSpace s(2);
  HamiltonianOptions no_xi;
  no_xi.drop_xi_terms = true;
  const ModelParams p;
  const QOperator diff = h_effective(s, p) - h_effective(s, p, no_xi);
  CHECK(max_abs(diff) > 1e-6);
  for (QubitBasis b : kQubitBasis) {
    CHECK((diff.matrix() * vac(s, atom1_level(b), atom2_level(b))).norm() < 1e-16);
  }
  ModelParams z;
  z.nu = 0;
  z.delta_big = 30;
  CHECK_THROWS_AS(h_effective(s, z), DegenerateDetuningError);
}

TEST_CASE("time-dependent operator evaluation") {
  const HilbertSpace s(1);
  const QOperator a = mode_annihilation(s, Mode::cavity1);
  const TimeDependentOperator h(zero_operator(s), {{a, 2.0, cplx(0.5, 0)}});
  const double t = 0.3;
  const QOperator expect = std::polar(0.5, 2 * t) * a + std::polar(0.5, -2 * t) * a.adjoint();
  CHECK(max_abs(h.at(t) - expect) < 1e-15);
  CHECK(h.max_frequency() == 2);
}
