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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fibergate/config.h"
#include "fibergate/errors.h"
#include "fibergate/gate.h"
#include "fibergate/hamiltonian.h"
#include "fibergate/parallel.h"
#include "fibergate/verify.h"

namespace fs = std::filesystem;
using namespace fibergate;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kInvalid = 2, kLeakage = 3, kIntegrator = 4 };

struct Flags {
  std::string config;
  std::string engine;
  std::string target_phase;
  std::string out;
  bool xi1_as_printed = false;
  bool fit_local_phases = false;
  double threshold = 0;
  double t_final = 0;
  double g_si = 0;
  int jobs = 0;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key = value config file");
  cmd->add_option("--engine", f.engine, "full-unitary, full-lindblad or effective");
  cmd->add_option("--target-phase", f.target_phase, "target conditional phase, radians or e.g. 0.15pi");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_flag("--xi1-as-printed", f.xi1_as_printed, "use the printed xi1 expression");
  cmd->add_flag("--fit-local-phases", f.fit_local_phases, "also report the best fidelity over local phases");
  cmd->add_option("--threshold", f.threshold, "validity ratio threshold");
  cmd->add_option("--t-final", f.t_final, "gate time in 1/g (default: closed-form time for the target phase)");
  cmd->add_option("--g-si", f.g_si, "g in rad/s for SI output");
  cmd->add_option("--jobs", f.jobs, "worker threads");
}

RunConfig resolve(const Flags& f, const RunConfig& defaults = {}) {
  RunConfig cfg = f.config.empty() ? defaults : load_config(f.config);
  if (!f.engine.empty()) cfg.engine = parse_engine(f.engine);
  if (!f.target_phase.empty()) cfg.target_phase = parse_phase(f.target_phase);
  if (!f.out.empty()) cfg.out = f.out;
  if (f.xi1_as_printed) cfg.xi1 = Xi1Form::as_printed;
  if (f.fit_local_phases) cfg.fit_local_phases = true;
  if (f.threshold > 0) cfg.threshold = f.threshold;
  if (f.t_final > 0) cfg.t_final = f.t_final;
  if (f.g_si > 0) cfg.g_si = f.g_si;
  return cfg;
}

// Writes to <out>/<name> when an output directory is set, and always to stdout.
void emit(const RunConfig& cfg, const std::string& name, const std::string& text) {
  std::cout << text;
  if (cfg.out.empty()) return;
  fs::create_directories(cfg.out);
  std::ofstream(fs::path(cfg.out) / name) << text;
}

double gate_time(const RunConfig& cfg) {
  if (cfg.t_final) return *cfg.t_final;
  return gate_time_for_phase(cfg.params, cfg.target_or_default(), cfg.constants_options());
}

int cmd_constants(const RunConfig& cfg) {
  std::ostringstream os;
  write_metadata("constants", cfg, os);
  write_constants_report(cfg, os);
  emit(cfg, "constants.txt", os.str());
  const ValidityReport v = validate(cfg.params, cfg.threshold);
  if (!v.all_pass()) {
    for (const auto& name : v.failures()) {
      std::fprintf(stderr, "validity check failed: |%s| = %.6g < %g\n", name.c_str(), std::abs(v.at(name).ratio),
                   cfg.threshold);
    }
    return kInvalid;
  }
  if (conditional_phase_rate(cfg.params, cfg.constants_options()) == 0) {
    std::fprintf(stderr, "warning: zero conditional phase rate\n");
  }
  return kOk;
}

void write_operators(const RunConfig& cfg) {
  const HilbertSpace space(cfg.params.n_max);
  const fs::path dir = fs::path(cfg.out) / "operators";
  fs::create_directories(dir);
  const TimeDependentOperator h = cfg.engine == Engine::effective
                                      ? TimeDependentOperator(h_effective(space, cfg.params, {cfg.constants_options()}))
                                      : h_full(space, cfg.params);
  {
    std::ofstream os(dir / "static.txt");
    h.static_part().export_triplets(os);
  }
  std::ofstream index(dir / "terms.txt");
  for (std::size_t i = 0; i < h.terms().size(); ++i) {
    const auto& t = h.terms()[i];
    const std::string name = "term" + std::to_string(i) + ".txt";
    std::ofstream os(dir / name);
    t.op.export_triplets(os);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s frequency = %.15g amplitude = %.15g %+.15gi\n", name.c_str(), t.frequency,
                  t.amplitude.real(), t.amplitude.imag());
    index << buf;
  }
}

int cmd_simulate(const RunConfig& cfg, bool export_operators) {
  const ValidityReport v = validate(cfg.params, cfg.threshold);
  for (const auto& name : v.failures()) {
    std::fprintf(stderr, "warning: validity check %s fails at threshold %g\n", name.c_str(), cfg.threshold);
  }
  const double t = gate_time(cfg);
  const GateReport rep = run_gate(cfg.params, t, cfg.engine, cfg.gate_options());
  const DerivedConstants c = derive_constants(cfg.params, cfg.constants_options());
  const LeakageCheck leak = leakage_check(rep, c, cfg.leakage_factor);

  std::ostringstream os;
  write_metadata("simulate", cfg, os);
  write_report(rep, os);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.14e", leak.atom_bound);
  os << "leakage.atom_bound = " << buf << "\nleakage.atom_pass = " << (leak.atom_pass ? "true" : "false") << '\n';
  std::snprintf(buf, sizeof buf, "%.14e", leak.field_bound);
  os << "leakage.field_bound = " << buf << "\nleakage.field_pass = " << (leak.field_pass ? "true" : "false") << '\n';
  emit(cfg, "report.txt", os.str());

  if (!cfg.out.empty()) {
    for (const auto& [name, traj] : rep.trajectories) {
      std::ofstream csv(fs::path(cfg.out) / ("trajectory_" + name + ".csv"));
      traj.write_csv(csv);
    }
    if (export_operators) write_operators(cfg);
  }
  return kOk;
}

std::string csv_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int cmd_sweep(const RunConfig& cfg, int jobs) {
  if (cfg.sweep.empty()) throw ConfigError("sweep needs at least one sweep.<field> axis in the config");
  const std::vector<ModelParams> points = sweep_points(cfg);
  std::vector<std::string> rows(points.size());
  const bool sim = cfg.sweep_simulate;

  std::string header;
  for (const auto& axis : cfg.sweep) header += axis.field + ",";
  header += "p1,p2,mu0,mu1,mu2,eta,rate,valid,gate_time,predicted_conditional_phase,infidelity_estimate";
  if (sim) header += ",conditional_phase,fidelity,max_atom_excitation,max_field_excitation";
  header += ",error";

  GateOptions gopts = cfg.gate_options();
  gopts.jobs = 1;
  parallel_for(static_cast<int>(points.size()), jobs, [&](int i) {
    const ModelParams& p = points[i];
    std::string row;
    for (const auto& axis : cfg.sweep) row += csv_num(get_param(p, axis.field)) + ",";
    const std::size_t numeric = sim ? 15 : 11;
    std::vector<std::string> cells;
    std::string error;
    try {
      check_fields(p);
      const ConstantsOptions copts = cfg.constants_options();
      const DerivedConstants c = derive_constants(p, copts);
      const ValidityReport v = validate(p, cfg.threshold);
      const double rate = conditional_phase_rate(p, copts);
      cells = {csv_num(c.p1), csv_num(c.p2), csv_num(c.mu0), csv_num(c.mu1), csv_num(c.mu2), csv_num(c.eta),
               csv_num(rate), v.all_pass() ? "1" : "0"};
      const double t = cfg.t_final ? *cfg.t_final : gate_time_for_phase(p, cfg.target_or_default(), copts);
      cells.push_back(csv_num(t));
      cells.push_back(csv_num(wrap_phase(rate * t)));
      cells.push_back(csv_num(infidelity_for_time(p, t, copts)));
      if (sim) {
        const GateReport rep = run_gate(p, t, cfg.engine, gopts);
        cells.push_back(csv_num(rep.conditional_phase));
        cells.push_back(csv_num(rep.fidelity));
        cells.push_back(csv_num(rep.max_atom_excitation));
        cells.push_back(csv_num(rep.max_field_excitation));
      }
    } catch (const std::exception& e) {
      error = e.what();
      for (char& ch : error) {
        if (ch == ',' || ch == '\n') ch = ';';
      }
    }
    cells.resize(numeric);
    for (const auto& cell : cells) row += cell + ",";
    rows[i] = row + error;
  });

  std::ostringstream os;
  os << header << '\n';
  for (const auto& r : rows) os << r << '\n';
  emit(cfg, "sweep.csv", os.str());
  return kOk;
}

int cmd_verify(const RunConfig& cfg, const VerifyOptions& base) {
  VerifyOptions opts = base;
  opts.params = cfg.params;
  opts.constants = cfg.constants_options();
  opts.constants.lambda0_scale = base.constants.lambda0_scale;
  opts.leakage_factor = cfg.leakage_factor;
  std::ostringstream os;
  write_metadata("verify", cfg, os);
  std::cout << os.str() << std::flush;
  std::vector<std::string> failed;
  const auto results = run_acceptance(opts, [&](const CriterionResult& r) {
    const std::string line = r.line() + "\n";
    os << line;
    std::cout << line << std::flush;
    if (!r.pass()) failed.push_back(std::to_string(r.id) + " " + r.title);
  });
  if (!cfg.out.empty()) {
    fs::create_directories(cfg.out);
    std::ofstream(fs::path(cfg.out) / "verify.txt") << os.str();
  }
  if (failed.empty()) {
    std::cout << "verify: all checks passed\n";
    return kOk;
  }
  std::cerr << "verify: failed checks:\n";
  for (const auto& f : failed) std::cerr << "  " << f << '\n';
  return kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fibergate: two-atom conditional phase gate through a fiber-coupled cavity pair"};
  app.require_subcommand(1);
  Flags flags;

  auto* constants = app.add_subcommand("constants", "derived constants, validity ratios and gate-time estimates");
  add_common(constants, flags);
  auto* simulate = app.add_subcommand("simulate", "run the gate and write the report and trajectories");
  add_common(simulate, flags);
  bool export_operators = false;
  simulate->add_flag("--export-operators", export_operators, "write Hamiltonian triplets under <out>/operators");
  auto* sweep = app.add_subcommand("sweep", "grid over sweep.<field> axes from the config");
  add_common(sweep, flags);
  auto* verify = app.add_subcommand("verify", "acceptance checklist");
  add_common(verify, flags);
  VerifyOptions vopts;
  double lambda0_scale = 1;
  verify->add_option("--criteria", vopts.criteria, "criteria to run (default all)")->delimiter(',');
  verify->add_option("--lindblad-horizon", vopts.lindblad_horizon, "density-matrix horizon, 0 for the whole gate");
  verify->add_option("--convergence", [&](const std::vector<std::string>& v) {
        vopts.convergence_low = std::stoi(v.at(0));
        vopts.convergence_high = std::stoi(v.at(1));
        return true;
      }, "the two n_max values of the truncation check")
      ->expected(2);
  verify->add_option("--debug-scale-lambda0", lambda0_scale, "multiply lambda0 (sensitivity canary)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*constants) return cmd_constants(resolve(flags));
    if (*simulate) return cmd_simulate(resolve(flags), export_operators);
    if (*sweep) return cmd_sweep(resolve(flags), flags.jobs);
    if (*verify) {
      RunConfig defaults;
      defaults.params = ModelParams::reference_operating_point();
      vopts.jobs = flags.jobs;
      vopts.constants.lambda0_scale = lambda0_scale;
      return cmd_verify(resolve(flags, defaults), vopts);
    }
  } catch (const LeakageError& e) {
    std::fprintf(stderr, "leakage error (%s): %s\n", e.basis().c_str(), e.what());
    return kLeakage;
  } catch (const IntegratorError& e) {
    std::fprintf(stderr, "integrator error: %s\n", e.what());
    return kIntegrator;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvalid;
  }
  return kOk;
}
