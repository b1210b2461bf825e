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

#include "fibergate/gate.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>

#include "fibergate/errors.h"
#include "fibergate/parallel.h"

namespace fibergate {

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::full_unitary: return "full-unitary";
    case Engine::full_lindblad: return "full-lindblad";
    case Engine::effective: return "effective";
  }
  return "?";
}

Engine parse_engine(const std::string& name) {
  if (name == "full-unitary") return Engine::full_unitary;
  if (name == "full-lindblad") return Engine::full_lindblad;
  if (name == "effective") return Engine::effective;
  throw ConfigError("unknown engine '" + name + "' (expected full-unitary, full-lindblad or effective)");
}

void GateReport::set_amplitudes(const std::array<cplx, 4>& amplitudes) {
  Eigen::Vector4cd v;
  for (int k = 0; k < 4; ++k) {
    v(k) = amplitudes[k] / 2.0;
    magnitudes[k] = std::abs(amplitudes[k]);
    phases[k] = std::arg(amplitudes[k]);
  }
  qubit_block = v * v.adjoint();
}

namespace {

TimeDependentOperator engine_hamiltonian(const HilbertSpace& space, const ModelParams& p, Engine engine,
                                         const GateOptions& opts) {
  if (engine == Engine::effective) return TimeDependentOperator(h_effective(space, p, opts.hamiltonian));
  return h_full(space, p);
}

// Appends the second stage of a two-stage run onto the first.
void append(Trajectory& a, Trajectory&& b) {
  const std::size_t skip = 1;  // b's first snapshot repeats a's last
  a.times.insert(a.times.end(), b.times.begin() + skip, b.times.end());
  if (!b.states.empty()) {
    a.states.insert(a.states.end(), std::make_move_iterator(b.states.begin() + skip),
                    std::make_move_iterator(b.states.end()));
  }
  for (auto& [name, values] : b.observables) {
    auto& dst = a.observables[name];
    dst.insert(dst.end(), values.begin() + skip, values.end());
  }
  for (const auto& [name, value] : b.peaks) {
    auto [it, inserted] = a.peaks.try_emplace(name, value);
    if (!inserted) it->second = std::max(it->second, value);
  }
  a.final_state = std::move(b.final_state);
  a.steps += b.steps;
  a.dt = std::min(a.dt, b.dt);
}

template <class Evolve>
Trajectory staged(const ModelParams& p, double t_final, const GateOptions& opts, Evolve&& evolve) {
  const double t1 = opts.drive_off_after;
  if (t1 <= 0 || t1 >= t_final) return evolve(p, std::nullopt, 0.0, t_final);
  Trajectory first = evolve(p, std::nullopt, 0.0, t1);
  ModelParams off = p;
  off.omega = 0;
  Trajectory second = evolve(off, std::optional<Eigen::MatrixXcd>(first.final_state), t1, t_final - t1);
  append(first, std::move(second));
  return first;
}

std::array<double, 4> predicted_local_corrections(const PredictedPhases& pred) {
  const double gf = -pred.phase[static_cast<int>(QubitBasis::gf)];
  const double fg = -pred.phase[static_cast<int>(QubitBasis::fg)];
  return {gf + fg, gf, fg, 0.0};
}

double fidelity_with_corrections(const Eigen::Matrix4cd& block, const std::array<double, 4>& corr, double theta) {
  Eigen::Vector4cd ideal(std::polar(0.5, theta), 0.5, 0.5, 0.5);
  Eigen::Vector4cd d;
  for (int k = 0; k < 4; ++k) d(k) = std::polar(1.0, corr[k]);
  const Eigen::Matrix4cd corrected = d.asDiagonal() * block * d.conjugate().asDiagonal();
  return std::clamp(std::real(ideal.dot(corrected * ideal)), 0.0, 1.0);
}

}  // namespace

GateReport run_gate(const ModelParams& p, double t_final, Engine engine, const GateOptions& opts) {
  check_fields(p);
  if (!(t_final > 0)) throw ParameterError("t_final", "must be > 0");
  const HilbertSpace space(p.n_max);
  const std::vector<Observable> observables{{"atom_excitation", excited_number(space)},
                                            {"photon_number", photon_number(space)}};

  GateReport report;
  report.engine = engine;
  report.n_max = p.n_max;
  report.gate_time = t_final;
  const PredictedPhases pred = predicted_phases(p, t_final, opts.hamiltonian.constants);
  report.predicted_conditional_phase = wrap_phase(pred.conditional);
  report.local_correction = predicted_local_corrections(pred);

  auto basis = [&](QubitBasis b) { return basis_state(space, atom1_level(b), atom2_level(b)); };

  if (engine == Engine::full_lindblad) {
    Eigen::VectorXcd plus = Eigen::VectorXcd::Zero(space.dim());
    for (QubitBasis b : kQubitBasis) plus += 0.5 * basis(b).amplitudes();
    const Eigen::MatrixXcd rho0 = plus * plus.adjoint();
    IntegratorConfig icfg = opts.integrator;
    icfg.store_states = false;
    // Total jump rate sum_k rate_k L_k^dagger L_k; its integral is the expected number of decay events.
    std::vector<Observable> lobs = observables;
    {
      QOperator loss = zero_operator(space);
      const CollapseSet all = gate_collapse_set(space, p, opts.branching_to_g, opts.decay_basis);
      for (const auto& ch : all.channels()) {
        loss += ch.rate * (ch.op.adjoint() * ch.op);
      }
      lobs.push_back({"loss_rate", loss});
    }
    Trajectory traj = staged(p, t_final, opts,
                             [&](const ModelParams& q, std::optional<Eigen::MatrixXcd> start, double t0, double dur) {
                               const TimeDependentOperator h = h_full(space, q);
                               const CollapseSet c = gate_collapse_set(space, q, opts.branching_to_g, opts.decay_basis);
                               return evolve_lindblad(h, start ? *start : rho0, c, dur, icfg, lobs, t0);
                             });
    std::array<int, 4> idx{};
    for (int k = 0; k < 4; ++k) idx[k] = space.index({atom1_level(kQubitBasis[k]), atom2_level(kQubitBasis[k]), 0, 0, 0});
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) report.qubit_block(i, j) = traj.final_state(idx[i], idx[j]);
    }
    const int ff = static_cast<int>(QubitBasis::ff);
    for (int k = 0; k < 4; ++k) {
      report.magnitudes[k] = std::sqrt(std::max(0.0, 4 * report.qubit_block(k, k).real()));
      const cplx coherence = 4.0 * report.qubit_block(k, ff);
      if (std::abs(coherence) < 0.25) {
        throw LeakageError(basis_name(kQubitBasis[k]), std::string("coherence with |ff> lost for basis state ") +
                                                           basis_name(kQubitBasis[k]) + "; phase is ill-defined");
      }
      report.phases[k] = k == ff ? 0.0 : std::arg(coherence);
    }
    report.max_atom_excitation = traj.peaks.at("atom_excitation");
    report.max_field_excitation = traj.peaks.at("photon_number");
    report.peak_atom_excitation.fill(report.max_atom_excitation);
    report.peak_field_excitation.fill(report.max_field_excitation);
    report.trajectories.emplace_back("rho", std::move(traj));
  } else {
    std::array<Trajectory, 4> trajs;
    std::array<cplx, 4> amps{};
    std::array<double, 4> unwrapped{};
    parallel_for(4, opts.jobs, [&](int k) {
      const QubitBasis b = kQubitBasis[k];
      const QState psi0 = basis(b);
      try {
        trajs[k] = staged(p, t_final, opts,
                          [&](const ModelParams& q, std::optional<Eigen::MatrixXcd> start, double t0, double dur) {
                            const TimeDependentOperator h = engine_hamiltonian(space, q, engine, opts);
                            if (start) return evolve_pure(h, Eigen::VectorXcd(start->col(0)), dur, opts.integrator, observables, t0);
                            return evolve_pure(h, psi0, dur, opts.integrator, observables, t0);
                          });
        amps[k] = psi0.amplitudes().dot(trajs[k].final_state.col(0));
        unwrapped[k] = phase_of(trajs[k], psi0).back();
      } catch (const LeakageError& e) {
        throw LeakageError(basis_name(b), std::string("basis state ") + basis_name(b) + ": " + e.what());
      }
    });
    report.set_amplitudes(amps);
    for (int k = 0; k < 4; ++k) {
      report.phases[k] = unwrapped[k];
      report.peak_atom_excitation[k] = trajs[k].peaks.at("atom_excitation");
      report.peak_field_excitation[k] = trajs[k].peaks.at("photon_number");
      report.max_atom_excitation = std::max(report.max_atom_excitation, report.peak_atom_excitation[k]);
      report.max_field_excitation = std::max(report.max_field_excitation, report.peak_field_excitation[k]);
    }
    const int ff = static_cast<int>(QubitBasis::ff);
    const Eigen::VectorXcd ff0 = basis(QubitBasis::ff).amplitudes();
    for (const auto& s : trajs[ff].states) report.ff_deviation = std::max(report.ff_deviation, (s.col(0) - ff0).norm());
    for (int k = 0; k < 4; ++k) report.trajectories.emplace_back(basis_name(kQubitBasis[k]), std::move(trajs[k]));
  }

  const auto& ph = report.phases;
  report.conditional_phase = wrap_phase(ph[0] - ph[1] - ph[2] + ph[3]);
  report.fidelity = gate_fidelity(report, report.predicted_conditional_phase);
  if (opts.fit_local_phases) report.fitted_fidelity = fitted_gate_fidelity(report, report.predicted_conditional_phase);
  return report;
}

double gate_fidelity(const GateReport& report, double target_conditional_phase) {
  return fidelity_with_corrections(report.qubit_block, report.local_correction, target_conditional_phase);
}

double fitted_gate_fidelity(const GateReport& report, double target_conditional_phase) {
  // Local phases a (atom 1 in g) and b (atom 2 in g): gg gets a + b.
  const Eigen::Matrix4cd& r = report.qubit_block;
  auto fid = [&](double a, double b) {
    return fidelity_with_corrections(r, {a + b, a, b, 0.0}, target_conditional_phase);
  };
  const int gf = static_cast<int>(QubitBasis::gf), fg = static_cast<int>(QubitBasis::fg),
            ff = static_cast<int>(QubitBasis::ff);
  // Start by aligning gf and fg with ff, then refine by golden-section sweeps.
  double a = std::arg(r(ff, gf));
  double b = std::arg(r(ff, fg));
  const double golden = (std::sqrt(5.0) - 1) / 2;
  auto line = [&](auto&& g, double x0) {
    double lo = x0 - 0.5, hi = x0 + 0.5;
    double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    for (int i = 0; i < 80; ++i) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + golden * (hi - lo);
        f2 = g(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - golden * (hi - lo);
        f1 = g(x1);
      }
    }
    return (lo + hi) / 2;
  };
  for (int sweep = 0; sweep < 4; ++sweep) {
    a = line([&](double x) { return fid(x, b); }, a);
    b = line([&](double x) { return fid(a, x); }, b);
  }
  return std::max(fid(a, b), gate_fidelity(report, target_conditional_phase));
}

LeakageCheck leakage_check(const GateReport& report, const DerivedConstants& constants, double factor) {
  LeakageCheck c;
  c.atom_bound = factor * constants.p1;
  c.field_bound = factor * constants.p2;
  c.atom_pass = report.max_atom_excitation <= c.atom_bound;
  c.field_pass = report.max_field_excitation <= c.field_bound;
  return c;
}

AsymmetryScan asymmetry_scan(const ModelParams& p, const std::vector<double>& r_values, double t_final, Engine engine,
                             const GateOptions& opts) {
  AsymmetryScan scan;
  scan.r = r_values;
  scan.conditional_phase.assign(r_values.size(), 0.0);
  for (double r : r_values) {
    if (!(r >= 0)) throw ParameterError("r", "scan values must be >= 0");
  }
  GateOptions inner = opts;
  inner.jobs = 1;
  parallel_for(static_cast<int>(r_values.size()), opts.jobs, [&](int i) {
    ModelParams q = p;
    q.r = r_values[i];
    scan.conditional_phase[i] = run_gate(q, t_final, engine, inner).conditional_phase;
  });
  double num = 0, den = 0;
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    num += r_values[i] * scan.conditional_phase[i];
    den += r_values[i] * r_values[i];
  }
  scan.slope = den > 0 ? num / den : 0;
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    scan.max_residual = std::max(scan.max_residual, std::abs(scan.conditional_phase[i] - scan.slope * r_values[i]));
  }
  return scan;
}

void write_report(const GateReport& report, std::ostream& os) {
  char buf[128];
  auto kv = [&](const std::string& key, double v) {
    std::snprintf(buf, sizeof buf, "%.14e", v == 0.0 ? 0.0 : v);
    os << key << " = " << buf << '\n';
  };
  os << "engine = " << engine_name(report.engine) << '\n';
  os << "n_max = " << report.n_max << '\n';
  kv("gate_time", report.gate_time);
  for (int k = 0; k < 4; ++k) kv(std::string("phase_") + basis_name(kQubitBasis[k]), report.phases[k]);
  for (int k = 0; k < 4; ++k) kv(std::string("magnitude_") + basis_name(kQubitBasis[k]), report.magnitudes[k]);
  for (int k = 0; k < 4; ++k) kv(std::string("local_correction_") + basis_name(kQubitBasis[k]), report.local_correction[k]);
  kv("conditional_phase", report.conditional_phase);
  kv("predicted_conditional_phase", report.predicted_conditional_phase);
  kv("fidelity", report.fidelity);
  if (!std::isnan(report.fitted_fidelity)) kv("fitted_fidelity", report.fitted_fidelity);
  kv("max_atom_excitation", report.max_atom_excitation);
  kv("max_field_excitation", report.max_field_excitation);
  if (report.engine != Engine::full_lindblad) kv("ff_deviation", report.ff_deviation);
}

}  // namespace fibergate
