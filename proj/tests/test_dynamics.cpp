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
#include <sstream>

#include "fibergate/dynamics.h"
#include "fibergate/errors.h"

using namespace fibergate;

namespace {

// Atom 1 driven g <-> e at Rabi frequency 1.
TimeDependentOperator rabi(const HilbertSpace& s) {
  const QOperator sp = atomic_projector(s, 1, Level::e, Level::g);
  return TimeDependentOperator(0.5 * (sp + sp.adjoint()));
}

double rabi_error(const HilbertSpace& s, Method m, double dt, double tol = 1e-10) {
  IntegratorConfig cfg;
  cfg.method = m;
  cfg.dt = dt;
  cfg.tolerance = tol;
  cfg.store_states = false;
  const double t = 10;
  const Eigen::VectorXcd y = evolve_pure(rabi(s), basis_state(s, Level::g, Level::g), t, cfg).final_state.col(0);
  Eigen::VectorXcd exact = Eigen::VectorXcd::Zero(s.dim());
  exact(s.index({Level::g, Level::g, 0, 0, 0})) = std::cos(t / 2);
  exact(s.index({Level::e, Level::g, 0, 0, 0})) = cplx(0, -std::sin(t / 2));
  return (y - exact).norm();
}

}  // namespace

TEST_CASE("fixed-step integrator converges at fourth order") {
  const HilbertSpace s(1);
  const double e1 = rabi_error(s, Method::rk4, 0.1);
  const double e2 = rabi_error(s, Method::rk4, 0.05);
  CHECK(e1 / e2 == doctest::Approx(16).epsilon(0.02));
}

TEST_CASE("adaptive integrator meets its tolerance") {
  const HilbertSpace s(1);
  CHECK(rabi_error(s, Method::dopri5, 0, 1e-10) < 1e-8);
  CHECK(rabi_error(s, Method::dopri5, 0, 1e-6) > rabi_error(s, Method::dopri5, 0, 1e-11));
}

TEST_CASE("step bound is enforced") {
  const HilbertSpace s(1);
  const ModelParams p;
  const TimeDependentOperator h = h_full(s, p);
  CHECK(step_bound(h) == doctest::Approx(2 * std::numbers::pi / 30 / 20));
  IntegratorConfig cfg;
  cfg.dt = 0.02;
  CHECK_THROWS_AS(evolve_pure(h, basis_state(s, Level::g, Level::g), 1, cfg), IntegratorError);
  cfg.dt = 0.01;
  CHECK_NOTHROW(evolve_pure(h, basis_state(s, Level::g, Level::g), 1, cfg));
  cfg.max_steps = 10;
  CHECK_THROWS_AS(evolve_pure(h, basis_state(s, Level::g, Level::g), 1, cfg), IntegratorError);
}

TEST_CASE("norm drift aborts") {
  const HilbertSpace s(1);
  IntegratorConfig cfg;
  cfg.dt = 0.5;  // coarse but inside the bound of this slow Hamiltonian
  cfg.drift_abort = 1e-12;
  CHECK_THROWS_AS(evolve_pure(rabi(s), basis_state(s, Level::g, Level::g), 50, cfg), IntegratorError);
}

TEST_CASE("trajectory records snapshots and observables") {
  const HilbertSpace s(1);
  IntegratorConfig cfg;
  cfg.dt = 0.01;
  cfg.record_stride = 2;
  const Trajectory tr = evolve_pure(rabi(s), basis_state(s, Level::g, Level::g), 3, cfg,
                                    {{"excited", excited_number(s)}}, 1.0);
  REQUIRE(tr.times.size() == 7);
  CHECK(tr.times.front() == 1.0);
  CHECK(tr.times.back() == doctest::Approx(4.0));
  CHECK(tr.states.size() == 7);
  const auto& e = tr.observables.at("excited");
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK(e[i] == doctest::Approx(std::pow(std::sin((tr.times[i] - 1) / 2), 2)).epsilon(1e-9));
  }
  CHECK(tr.peaks.at("excited") <= 1 + 1e-12);
  CHECK(tr.peaks.at("excited") >= e.back());

  std::ostringstream os;
  tr.write_csv(os);
  std::istringstream is(os.str());
  std::string header, row;
  std::getline(is, header);
  CHECK(header == "t,excited,norm");
  std::getline(is, row);
  CHECK(row == "1,0,1");
  std::getline(is, row);
  CHECK(row.rfind("1.5,0.061208719", 0) == 0);
}

TEST_CASE("phase extraction unwraps past pi") {
  const HilbertSpace s(1);
  const QState gg = basis_state(s, Level::g, Level::g);
  // H = 0.7 |gg><gg| gives phase -0.7 t
  const TimeDependentOperator h(0.7 * atomic_projector(s, 1, Level::g, Level::g) *
                                atomic_projector(s, 2, Level::g, Level::g));
  IntegratorConfig cfg;
  cfg.dt = 0.01;
  const Trajectory tr = evolve_pure(h, gg, 20, cfg);
  const std::vector<double> ph = phase_of(tr, gg);
  CHECK(ph.back() == doctest::Approx(-14).epsilon(1e-9));
  CHECK(wrap_phase(ph.back()) == doctest::Approx(-14 + 4 * std::numbers::pi));

  const Trajectory flip = evolve_pure(rabi(s), gg, 4, cfg);
  CHECK_THROWS_AS(phase_of(flip, gg), LeakageError);
}

TEST_CASE("wrap_phase range") {
  const double pi = std::numbers::pi;
  CHECK(wrap_phase(pi) == doctest::Approx(pi));
  CHECK(wrap_phase(-pi) == doctest::Approx(pi));
  CHECK(wrap_phase(3 * pi / 2) == doctest::Approx(-pi / 2));
  CHECK(wrap_phase(0.25) == 0.25);
}

TEST_CASE("single-mode decay") {
  const HilbertSpace s(2);
  const double kappa = 0.3;
  CollapseSet c;
  c.add("fiber", mode_annihilation(s, Mode::fiber), kappa);
  IntegratorConfig cfg;
  cfg.check_positivity = true;
  const Trajectory tr =
      evolve_lindblad(TimeDependentOperator(zero_operator(s)), pure_density(basis_state(s, Level::g, Level::f, 0, 0, 2)),
                      c, 5, cfg, {{"nb", mode_number(s, Mode::fiber)}});
  const auto& n = tr.observables.at("nb");
  for (std::size_t i = 0; i < n.size(); ++i) CHECK(n[i] == doctest::Approx(2 * std::exp(-kappa * tr.times[i])).epsilon(1e-9));
  for (double tr_value : tr.observables.at("trace")) CHECK(std::abs(tr_value - 1) < 1e-12);
  for (double m : tr.observables.at("min_eigenvalue")) CHECK(m > -1e-12);
}

TEST_CASE("Lindblad without collapse reproduces the pure evolution") {
  const HilbertSpace s(1);
  const ModelParams p;
  const TimeDependentOperator h = h_full(s, p);
  const QState psi = basis_state(s, Level::g, Level::g);
  IntegratorConfig cfg;
  const Eigen::VectorXcd y = evolve_pure(h, psi, 5, cfg).final_state.col(0);
  const Eigen::MatrixXcd rho = evolve_lindblad(h, pure_density(psi), CollapseSet{}, 5, cfg).final_state;
  // same scheme on a different ODE, so agreement is at the truncation-error level
  CHECK((rho - y * y.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("decay in physical and normal mode bases agree") {
  ModelParams p;
  p.kappa = 0.05;
  p.gamma = 0.02;
  p.phi = 0.4;
  const HilbertSpace s(1);
  const TimeDependentOperator h = h_full(s, p);
  Eigen::VectorXcd v = basis_state(s, Level::e, Level::g, 1, 0, 0).amplitudes() +
                       basis_state(s, Level::g, Level::f, 0, 1, 1).amplitudes();
  v.normalize();
  IntegratorConfig cfg;
  cfg.store_states = false;
  const Eigen::MatrixXcd a =
      evolve_lindblad(h, v * v.adjoint(), gate_collapse_set(s, p, 0.5, ModeDecayBasis::physical), 4, cfg).final_state;
  const Eigen::MatrixXcd b =
      evolve_lindblad(h, v * v.adjoint(), gate_collapse_set(s, p, 0.5, ModeDecayBasis::normal), 4, cfg).final_state;
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("collapse and density-matrix validation") {
  const HilbertSpace s(1);
  CollapseSet c;
  CHECK_THROWS_AS(c.add("x", mode_annihilation(s, Mode::fiber), -1), ParameterError);
  CHECK_THROWS_AS(gate_collapse_set(s, ModelParams{}, 1.5), ParameterError);
  const TimeDependentOperator h(zero_operator(s));
  IntegratorConfig cfg;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(s.dim(), s.dim());
  CHECK_THROWS(evolve_lindblad(h, rho, c, 1, cfg));
  rho(0, 0) = 2;
  rho(1, 1) = -1;
  CHECK_THROWS(evolve_lindblad(h, rho, c, 1, cfg));
  ModelParams p;
  p.gamma = 0.1;
  p.kappa = 0.2;
  const CollapseSet g = gate_collapse_set(s, p);
  CHECK(g.channels().size() == 7);
}
