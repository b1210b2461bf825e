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

#include "fibergate/verify.h"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "fibergate/dynamics.h"
#include "fibergate/errors.h"
#include "fibergate/gate.h"
#include "fibergate/hamiltonian.h"
#include "fibergate/hilbert.h"

namespace fibergate {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string percent(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.3g%%", 100 * v);
  return buf;
}

// Reference operating point with the fields the checklist fixes.
ModelParams base_params(const VerifyOptions& opts, int n_max) {
  ModelParams p = opts.params;
  p.n_max = n_max;
  return p;
}

GateOptions gate_options(const VerifyOptions& opts) {
  GateOptions g;
  g.hamiltonian.constants = opts.constants;
  g.jobs = opts.jobs;
  return g;
}

double closed_form_time(const VerifyOptions& opts) {
  return gate_time_for_phase(opts.params, kQuotedGatePhase, opts.constants);
}

void closed_form_budget(const VerifyOptions& opts, CriterionResult& r) {
  const DerivedConstants c = derive_constants(opts.params, opts.constants);
  r.checks.push_back(check_relative("p1", c.p1, 1.0 / 900.0, 1e-6));
  r.checks.push_back(check_relative("p2", c.p2, 0.917e-3, 0.01));
  const double exponent = (c.gamma_eff + c.kappa_eff) * kQuotedGateTime;
  r.checks.push_back(check_relative("(G'+K')t", exponent, 0.645e-2, 0.02));
  const double pi_gate = infidelity_for_time(opts.params, quoted_gate_time_for_phase(std::numbers::pi), opts.constants);
  r.checks.push_back(check_relative("pi-gate infidelity", pi_gate, 4.3e-2, 0.05));
}

void gate_time_cross_check(const VerifyOptions& opts, CriterionResult& r) {
  const double t = closed_form_time(opts);
  r.checks.push_back(check_relative("t(0.15pi) vs quoted 101.25pi", t, kQuotedGateTime, 0.15));
  r.checks.push_back(check_relative("t(0.15pi) pinned", t, kPinnedGateTime, 1e-9));
  r.notes.push_back("closed-form " + num(t) + " vs quoted " + num(kQuotedGateTime) + " (" +
                    percent(t / kQuotedGateTime - 1) + ")");
}

void normal_mode_identities(const VerifyOptions& opts, CriterionResult& r) {
  const HilbertSpace space(2);
  const int n_max = space.n_max();
  auto interior = [n_max](const BasisLabel& l) { return l.n1 < n_max && l.n2 < n_max && l.nb < n_max; };
  const std::array<NormalMode, 3> modes{NormalMode::c0, NormalMode::c1, NormalMode::c2};
  for (double phi : {opts.params.phi, 0.7}) {
    double comm = 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const QOperator ci = normal_mode(space, modes[i], phi);
        const QOperator cj = normal_mode(space, modes[j], phi);
        Eigen::MatrixXcd m = commutator(ci, cj.adjoint()).restricted(interior);
        if (i == j) m -= Eigen::MatrixXcd::Identity(m.rows(), m.cols());
        comm = std::max(comm, m.cwiseAbs().maxCoeff());
      }
    }
    ModelParams p = base_params(opts, 2);
    p.phi = phi;
    const Eigen::MatrixXcd diff =
        (h_cavity_fiber(space, p) - h_normal_mode_free(space, p)).restricted(interior);
    r.checks.push_back(check_at_most("[ci,cj+] phi=" + num(phi), comm, 1e-12));
    r.checks.push_back(check_at_most("H_cf - diag phi=" + num(phi), diff.cwiseAbs().maxCoeff(), 1e-12));
  }
}

void frame_equivalence(const VerifyOptions& opts, CriterionResult& r) {
  // n_max = 3 keeps truncation error below the overlap tolerance.
  const ModelParams p = base_params(opts, 3);
  const HilbertSpace space(p.n_max);
  const double t = 10;
  IntegratorConfig cfg;
  cfg.dt = 0.001;
  cfg.store_states = false;
  const TimeDependentOperator full = h_full(space, p);
  const TimeDependentOperator rotated = h_rotated(space, p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_cavity_fiber(space, p).dense());
  const Eigen::VectorXcd phases = (es.eigenvalues() * cplx(0, -t)).array().exp();
  const Eigen::MatrixXcd u0 = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

  std::mt19937_64 rng(20260101);
  std::normal_distribution<double> normal;
  const std::array<Level, 3> levels{Level::g, Level::f, Level::e};
  double worst = 0;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(space.dim());
    for (Level a : levels) {
      for (Level b : levels) psi(space.index({a, b, 0, 0, 0})) = cplx(normal(rng), normal(rng));
    }
    psi.normalize();
    const Eigen::VectorXcd x = evolve_pure(full, psi, t, cfg).final_state.col(0);
    const Eigen::VectorXcd y = u0 * evolve_pure(rotated, psi, t, cfg).final_state.col(0);
    worst = std::max(worst, 1 - std::norm(x.dot(y)));
  }
  r.checks.push_back(check_at_most("1 - overlap (5 states, n_max=3)", worst, 1e-8));
}

void full_vs_effective(const VerifyOptions& opts, CriterionResult& r) {
  const ModelParams p = base_params(opts, 2);
  const double t = closed_form_time(opts);
  const GateReport rep = run_gate(p, t, Engine::full_unitary, gate_options(opts));
  const DerivedConstants c = derive_constants(p, opts.constants);
  const LeakageCheck leak = leakage_check(rep, c, opts.leakage_factor);
  r.checks.push_back(check_relative("conditional phase", rep.conditional_phase, kQuotedGatePhase, 0.05));
  r.checks.push_back(check_at_most("|ff> deviation", rep.ff_deviation, 1e-10));
  r.checks.push_back(check_at_most("peak atom excitation", rep.max_atom_excitation, leak.atom_bound));
  r.checks.push_back(check_at_most("peak photon number", rep.max_field_excitation, leak.field_bound));
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / v.size();
  };
  const Trajectory& gg = rep.trajectories.front().second;
  r.notes.push_back("dt " + num(gg.dt) + ", fidelity " + num(rep.fidelity));
  r.notes.push_back("gg time-averaged atom excitation " + num(mean(gg.observables.at("atom_excitation"))) +
                    " (2 p1 = " + num(2 * c.p1) + "), photon number " +
                    num(mean(gg.observables.at("photon_number"))));
}

void truncation_convergence(const VerifyOptions& opts, CriterionResult& r) {
  const double t = closed_form_time(opts);
  const GateReport lo = run_gate(base_params(opts, opts.convergence_low), t, Engine::full_unitary, gate_options(opts));
  const GateReport hi = run_gate(base_params(opts, opts.convergence_high), t, Engine::full_unitary, gate_options(opts));
  const double rel = std::abs(lo.conditional_phase - hi.conditional_phase) / std::abs(hi.conditional_phase);
  r.checks.push_back(check_at_most("n_max " + std::to_string(opts.convergence_low) + " vs " +
                                       std::to_string(opts.convergence_high) + " relative",
                                   rel, 1e-3));
  r.notes.push_back("delta " + num(lo.conditional_phase - hi.conditional_phase) + " rad");
}

void decoherence_fidelity(const VerifyOptions& opts, CriterionResult& r) {
  const double t_gate = closed_form_time(opts);
  const double horizon = opts.lindblad_horizon > 0 ? std::min(opts.lindblad_horizon, t_gate) : t_gate;
  ModelParams noisy = base_params(opts, 2);
  if (noisy.gamma == 0 && noisy.kappa == 0) noisy.gamma = noisy.kappa = 0.01;
  ModelParams clean = noisy;
  clean.gamma = clean.kappa = 0;
  GateOptions gopts = gate_options(opts);
  gopts.integrator.method = Method::dopri5;
  gopts.integrator.tolerance = 1e-9;
  const GateReport pure = run_gate(clean, horizon, Engine::full_unitary, gate_options(opts));
  const GateReport mixed = run_gate(noisy, horizon, Engine::full_lindblad, gopts);
  const double expected = 0.645e-2 * horizon / t_gate;
  r.checks.push_back(check_factor("1 - F(lindblad)", 1 - mixed.fidelity, expected, 1.5));
  r.checks.push_back(check_factor("F(unitary) - F(lindblad)", pure.fidelity - mixed.fidelity, expected, 1.5));
  const Trajectory& tr = mixed.trajectories.front().second;
  const auto& rate = tr.observables.at("loss_rate");
  double events = 0;
  for (std::size_t i = 1; i < rate.size(); ++i) events += 0.5 * (rate[i] + rate[i - 1]) * (tr.times[i] - tr.times[i - 1]);
  r.notes.push_back("F(unitary) " + num(pure.fidelity) + ", F(lindblad) " + num(mixed.fidelity));
  r.notes.push_back("expected decay events " + num(events) + ", closed-form budget at this horizon " +
                    num(infidelity_for_time(noisy, horizon, opts.constants)));
  if (horizon < t_gate) {
    r.notes.push_back("horizon " + num(horizon) + " instead of " + num(t_gate) + ", expectation scaled linearly");
  }
}

void asymmetry(const VerifyOptions& opts, CriterionResult& r) {
  const double t = closed_form_time(opts);
  GateOptions g = gate_options(opts);
  const AsymmetryScan scan = asymmetry_scan(base_params(opts, 2), {0.8, 1.0, 1.2}, t, Engine::full_unitary, g);
  r.checks.push_back(check_at_most("residual / slope", scan.relative_residual(), 0.05));
  std::string phases;
  for (std::size_t i = 0; i < scan.r.size(); ++i) phases += (i ? ", " : "") + num(scan.conditional_phase[i]);
  r.notes.push_back("slope " + num(scan.slope) + ", phases " + phases);
}

void integrator_checks(const VerifyOptions& opts, CriterionResult& r) {
  // Rabi flopping of atom 1 under a static drive.
  {
    const HilbertSpace space(1);
    const QOperator sp = atomic_projector(space, 1, Level::e, Level::g);
    const TimeDependentOperator h(0.5 * (sp + sp.adjoint()));
    const QState psi0 = basis_state(space, Level::g, Level::g);
    const double t = 10;
    auto error = [&](double dt) {
      IntegratorConfig cfg;
      cfg.dt = dt;
      cfg.store_states = false;
      const Eigen::VectorXcd y = evolve_pure(h, psi0, t, cfg).final_state.col(0);
      Eigen::VectorXcd exact = Eigen::VectorXcd::Zero(space.dim());
      exact(space.index({Level::g, Level::g, 0, 0, 0})) = std::cos(t / 2);
      exact(space.index({Level::e, Level::g, 0, 0, 0})) = cplx(0, -std::sin(t / 2));
      return (y - exact).norm();
    };
    const double order = std::log2(error(0.1) / error(0.05));
    r.checks.push_back(check_within("RK4 order", order, 3.8, 4.2));
  }
  const ModelParams p = base_params(opts, 2);
  {
    const HilbertSpace space(p.n_max);
    IntegratorConfig cfg;
    cfg.store_states = false;
    const Trajectory tr = evolve_pure(h_full(space, p), basis_state(space, Level::g, Level::g),
                                      closed_form_time(opts), cfg);
    r.checks.push_back(check_at_most("norm drift", tr.peaks.at("norm_drift"), 1e-8));
  }
  {
    ModelParams q = base_params(opts, 1);
    q.gamma = q.kappa = 0.01;
    const HilbertSpace space(q.n_max);
    Eigen::VectorXcd plus = Eigen::VectorXcd::Zero(space.dim());
    for (QubitBasis b : kQubitBasis) plus(space.index({atom1_level(b), atom2_level(b), 0, 0, 0})) = 0.5;
    IntegratorConfig cfg;
    cfg.store_states = false;
    const Trajectory tr = evolve_lindblad(h_full(space, q), plus * plus.adjoint(), gate_collapse_set(space, q), 30, cfg);
    r.checks.push_back(check_at_most("Lindblad trace drift", tr.peaks.at("trace_drift"), 1e-7));
  }
  {
    const HilbertSpace space(1);
    const double kappa = 0.1;
    CollapseSet c;
    c.add("cavity1", mode_annihilation(space, Mode::cavity1), kappa);
    const QState one = basis_state(space, Level::g, Level::g, 1, 0, 0);
    IntegratorConfig cfg;
    cfg.store_states = false;
    const Trajectory tr = evolve_lindblad(TimeDependentOperator(zero_operator(space)), pure_density(one), c, 20, cfg,
                                          {{"n1", mode_number(space, Mode::cavity1)}});
    double worst = 0;
    const auto& n = tr.observables.at("n1");
    for (std::size_t i = 0; i < n.size(); ++i) worst = std::max(worst, std::abs(n[i] - std::exp(-kappa * tr.times[i])));
    r.checks.push_back(check_at_most("single-mode decay", worst, 1e-6));
  }
}

void feasibility(const VerifyOptions&, CriterionResult& r) {
  r.checks.push_back(check_relative("max fiber length (1 GHz)", max_fiber_length(1e9, 1), 1.884, 1e-3));
}

std::string fmt_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

SubCheck check_relative(std::string name, double value, double expected, double tol) {
  return {std::move(name), SubCheck::Kind::relative, value, expected, tol,
          std::abs(value - expected) <= tol * std::abs(expected)};
}

SubCheck check_absolute(std::string name, double value, double expected, double tol) {
  return {std::move(name), SubCheck::Kind::absolute, value, expected, tol, std::abs(value - expected) <= tol};
}

SubCheck check_at_most(std::string name, double value, double bound) {
  return {std::move(name), SubCheck::Kind::at_most, value, bound, 0, value <= bound};
}

SubCheck check_factor(std::string name, double value, double expected, double factor) {
  return {std::move(name), SubCheck::Kind::factor, value, expected, factor,
          value >= expected / factor && value <= expected * factor};
}

SubCheck check_within(std::string name, double value, double lo, double hi) {
  return {std::move(name), SubCheck::Kind::within, value, lo, hi, value >= lo && value <= hi};
}

std::string SubCheck::describe() const {
  std::string s = name + " = " + fmt_value(value);
  switch (kind) {
    case Kind::relative:
      s += " (expect " + fmt_value(expected) + " rel " + num(tolerance) + ", off " +
           percent(value / expected - 1) + ")";
      break;
    case Kind::absolute:
      s += " (expect " + fmt_value(expected) + " abs " + num(tolerance) + ")";
      break;
    case Kind::at_most:
      s += " (<= " + num(expected) + ")";
      break;
    case Kind::factor:
      s += " (expect " + fmt_value(expected) + " within x" + num(tolerance) + ", ratio " + num(value / expected) + ")";
      break;
    case Kind::within:
      s += " (in [" + num(expected) + ", " + num(tolerance) + "])";
      break;
  }
  return s + (pass ? "" : " FAILED");
}

bool CriterionResult::pass() const {
  if (!error.empty() || checks.empty()) return false;
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string CriterionResult::line() const {
  char head[96];
  std::snprintf(head, sizeof head, "%s %2d %s [%.1fs]:", pass() ? "PASS" : "FAIL", id, title.c_str(), seconds);
  std::string s = head;
  for (std::size_t i = 0; i < checks.size(); ++i) s += (i ? "; " : " ") + checks[i].describe();
  if (!error.empty()) s += " error: " + error;
  for (const auto& n : notes) s += " | " + n;
  return s;
}

CriterionResult run_criterion(int id, const VerifyOptions& opts) {
  using Fn = void (*)(const VerifyOptions&, CriterionResult&);
  static const std::array<Fn, kCriterionCount> table{closed_form_budget,   gate_time_cross_check, normal_mode_identities,
                                                     frame_equivalence,    full_vs_effective,     truncation_convergence,
                                                     decoherence_fidelity, asymmetry,             integrator_checks,
                                                     feasibility};
  static const std::array<const char*, kCriterionCount> titles{
      "closed-form error budget", "gate-time cross-check",     "normal-mode identities",
      "frame equivalence",        "full-vs-effective phase",   "truncation convergence",
      "decoherence fidelity",     "asymmetry linearity",       "integrator order and conservation",
      "feasibility utilities"};
  if (id < 1 || id > kCriterionCount) throw Error("no acceptance criterion " + std::to_string(id));
  CriterionResult r;
  r.id = id;
  r.title = titles[id - 1];
  const auto start = std::chrono::steady_clock::now();
  try {
    table[id - 1](opts, r);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<int> ids = opts.criteria;
  if (ids.empty()) {
    for (int i = 1; i <= kCriterionCount; ++i) ids.push_back(i);
  }
  std::vector<CriterionResult> out;
  for (int id : ids) {
    out.push_back(run_criterion(id, opts));
    if (on_result) on_result(out.back());
  }
  return out;
}

}  // namespace fibergate
