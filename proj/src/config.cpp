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

#include "fibergate/config.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "fibergate/errors.h"

namespace fibergate {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt15(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.14e", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  const char* begin = t.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (t.empty() || end != begin + t.size()) throw ParameterError(key, "'" + t + "' is not a number");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ParameterError(key, "'" + text + "' is not a boolean");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return {};
  // start:stop:count, endpoints included
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw ParameterError(key, "range must be start:stop:count");
    const double a = to_double(key, parts[0]), b = to_double(key, parts[1]);
    const double n = to_double(key, parts[2]);
    if (!(n >= 1) || n != std::floor(n)) throw ParameterError(key, "range count must be a positive integer");
    const int count = static_cast<int>(n);
    if (count == 1) {
      if (a != b) throw ParameterError(key, "a one-point range needs start == stop");
      return {a};
    }
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = i == count - 1 ? b : a + (b - a) * i / (count - 1);
    return v;
  }
  std::vector<double> v;
  for (const auto& item : split(t, ',')) v.push_back(to_double(key, item));
  return v;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt17(v[i]);
  return s;
}

bool strictly_ordered(const std::vector<double>& v) {
  bool up = true, down = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    up = up && v[i] > v[i - 1];
    down = down && v[i] < v[i - 1];
  }
  return up || down;
}

const char* method_name(Method m) { return m == Method::rk4 ? "rk4" : "dopri5"; }

std::string phase_label(double target) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6gpi", target / std::numbers::pi);
  return buf;
}

}  // namespace

const std::vector<std::string>& param_keys() {
  static const std::vector<std::string> keys{"g",   "omega", "delta_big", "delta_small", "nu",
                                             "phi", "gamma", "kappa",     "r",           "n_max"};
  return keys;
}

void set_param(ModelParams& p, const std::string& key, double v) {
  if (key == "g") p.g = v;
  else if (key == "omega") p.omega = v;
  else if (key == "delta_big") p.delta_big = v;
  else if (key == "delta_small") p.delta_small = v;
  else if (key == "nu") p.nu = v;
  else if (key == "phi") p.phi = v;
  else if (key == "gamma") p.gamma = v;
  else if (key == "kappa") p.kappa = v;
  else if (key == "r") p.r = v;
  else if (key == "n_max") {
    if (!(v >= 1) || v != std::floor(v) || v > 64) throw ParameterError("n_max", "must be an integer in [1, 64]");
    p.n_max = static_cast<int>(v);
  } else {
    throw ConfigError("unknown parameter '" + key + "'");
  }
}

double get_param(const ModelParams& p, const std::string& key) {
  if (key == "g") return p.g;
  if (key == "omega") return p.omega;
  if (key == "delta_big") return p.delta_big;
  if (key == "delta_small") return p.delta_small;
  if (key == "nu") return p.nu;
  if (key == "phi") return p.phi;
  if (key == "gamma") return p.gamma;
  if (key == "kappa") return p.kappa;
  if (key == "r") return p.r;
  if (key == "n_max") return p.n_max;
  throw ConfigError("unknown parameter '" + key + "'");
}

double parse_phase(const std::string& text) {
  std::string t = lower(trim(text));
  t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    std::string coeff = t.substr(0, t.size() - 2);
    if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
    double c = 1;
    if (coeff == "-") c = -1;
    else if (!coeff.empty() && coeff != "+") c = to_double("target_phase", coeff);
    return c * std::numbers::pi;
  }
  return to_double("target_phase", t);
}

ConstantsOptions RunConfig::constants_options() const { return {.xi1 = xi1}; }

GateOptions RunConfig::gate_options() const {
  GateOptions o;
  o.integrator = integrator;
  o.hamiltonian.constants = constants_options();
  o.branching_to_g = branching_to_g;
  o.decay_basis = decay_basis;
  o.drive_off_after = drive_off_after;
  o.fit_local_phases = fit_local_phases;
  return o;
}

double RunConfig::target_or_default() const { return target_phase.value_or(kQuotedGatePhase); }

RunConfig parse_config(std::istream& is, const std::string& source) {
  RunConfig cfg;
  std::map<std::string, int> seen;
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!seen.emplace(key, lineno).second) throw ConfigError(where + ": duplicate key '" + key + "'");

    try {
      if (std::find(param_keys().begin(), param_keys().end(), key) != param_keys().end()) {
        set_param(cfg.params, key, key == "phi" ? parse_phase(value) : to_double(key, value));
      } else if (key.rfind("sweep.", 0) == 0) {
        const std::string field = key.substr(6);
        if (std::find(param_keys().begin(), param_keys().end(), field) == param_keys().end()) {
          throw ConfigError(where + ": cannot sweep unknown parameter '" + field + "'");
        }
        SweepAxis axis{field, to_list(key, value)};
        if (axis.values.empty()) throw ParameterError(key, "sweep range is empty");
        if (!strictly_ordered(axis.values)) throw ParameterError(key, "sweep values must be strictly ordered");
        cfg.sweep.push_back(std::move(axis));
        if (cfg.sweep.size() > 2) throw ConfigError(where + ": at most two sweep axes");
      } else if (key == "target_phase") {
        cfg.target_phase = parse_phase(value);
      } else if (key == "t_final") {
        cfg.t_final = to_double(key, value);
        if (!(*cfg.t_final > 0) || !std::isfinite(*cfg.t_final)) throw ParameterError(key, "must be > 0");
      } else if (key == "engine") {
        cfg.engine = parse_engine(value);
      } else if (key == "r_values") {
        cfg.r_values = to_list(key, value);
      } else if (key == "sweep_simulate") {
        cfg.sweep_simulate = to_bool(key, value);
      } else if (key == "out") {
        cfg.out = value;
      } else if (key == "threshold") {
        cfg.threshold = to_double(key, value);
        if (!(cfg.threshold > 0)) throw ParameterError(key, "must be > 0");
      } else if (key == "xi1") {
        if (value == "corrected") cfg.xi1 = Xi1Form::corrected;
        else if (value == "as_printed") cfg.xi1 = Xi1Form::as_printed;
        else throw ParameterError(key, "expected corrected or as_printed");
      } else if (key == "gate_time_mode") {
        if (value == "closed_form") cfg.gate_time_mode = GateTimeMode::closed_form;
        else if (value == "quoted") cfg.gate_time_mode = GateTimeMode::quoted;
        else throw ParameterError(key, "expected closed_form or quoted");
      } else if (key == "fit_local_phases") {
        cfg.fit_local_phases = to_bool(key, value);
      } else if (key == "drive_off_after") {
        cfg.drive_off_after = to_double(key, value);
      } else if (key == "leakage_factor") {
        cfg.leakage_factor = to_double(key, value);
        if (!(cfg.leakage_factor > 0)) throw ParameterError(key, "must be > 0");
      } else if (key == "branching_to_g") {
        cfg.branching_to_g = to_double(key, value);
        if (!(cfg.branching_to_g >= 0 && cfg.branching_to_g <= 1)) throw ParameterError(key, "must be in [0, 1]");
      } else if (key == "decay_basis") {
        if (value == "physical") cfg.decay_basis = ModeDecayBasis::physical;
        else if (value == "normal") cfg.decay_basis = ModeDecayBasis::normal;
        else throw ParameterError(key, "expected physical or normal");
      } else if (key == "g_si") {
        cfg.g_si = to_double(key, value);
        if (!(cfg.g_si > 0)) throw ParameterError(key, "must be > 0");
      } else if (key == "integrator.method") {
        if (value == "rk4") cfg.integrator.method = Method::rk4;
        else if (value == "dopri5") cfg.integrator.method = Method::dopri5;
        else throw ParameterError(key, "expected rk4 or dopri5");
      } else if (key == "integrator.dt") {
        cfg.integrator.dt = to_double(key, value);
        if (!(cfg.integrator.dt >= 0)) throw ParameterError(key, "must be >= 0");
      } else if (key == "integrator.max_dt") {
        cfg.integrator.max_dt = to_double(key, value);
        if (!(cfg.integrator.max_dt > 0)) throw ParameterError(key, "must be > 0");
      } else if (key == "integrator.tolerance") {
        cfg.integrator.tolerance = to_double(key, value);
        if (!(cfg.integrator.tolerance > 0)) throw ParameterError(key, "must be > 0");
      } else if (key == "integrator.max_steps") {
        const double v = to_double(key, value);
        if (!(v >= 1) || v != std::floor(v)) throw ParameterError(key, "must be a positive integer");
        cfg.integrator.max_steps = static_cast<long>(v);
      } else if (key == "integrator.record_stride") {
        cfg.integrator.record_stride = to_double(key, value);
        if (!(cfg.integrator.record_stride > 0)) throw ParameterError(key, "must be > 0");
      } else if (key == "integrator.drift_abort") {
        cfg.integrator.drift_abort = to_double(key, value);
        if (!(cfg.integrator.drift_abort > 0)) throw ParameterError(key, "must be > 0");
      } else if (key == "integrator.check_positivity") {
        cfg.integrator.check_positivity = to_bool(key, value);
      } else {
        throw ConfigError(where + ": unknown key '" + key + "'");
      }
    } catch (const ParameterError& e) {
      throw ParameterError(e.field(), where + ": " + e.what());
    }
  }
  check_fields(cfg.params);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in, path.string());
}

void write_config(const RunConfig& cfg, std::ostream& os) {
  for (const auto& key : param_keys()) {
    if (key == "n_max") os << "n_max = " << cfg.params.n_max << '\n';
    else os << key << " = " << fmt17(get_param(cfg.params, key)) << '\n';
  }
  if (cfg.target_phase) os << "target_phase = " << fmt17(*cfg.target_phase) << '\n';
  if (cfg.t_final) os << "t_final = " << fmt17(*cfg.t_final) << '\n';
  os << "engine = " << engine_name(cfg.engine) << '\n';
  if (!cfg.r_values.empty()) os << "r_values = " << join(cfg.r_values) << '\n';
  for (const auto& axis : cfg.sweep) os << "sweep." << axis.field << " = " << join(axis.values) << '\n';
  os << "sweep_simulate = " << (cfg.sweep_simulate ? "true" : "false") << '\n';
  if (!cfg.out.empty()) os << "out = " << cfg.out << '\n';
  os << "threshold = " << fmt17(cfg.threshold) << '\n';
  os << "xi1 = " << (cfg.xi1 == Xi1Form::corrected ? "corrected" : "as_printed") << '\n';
  os << "gate_time_mode = " << (cfg.gate_time_mode == GateTimeMode::closed_form ? "closed_form" : "quoted") << '\n';
  os << "fit_local_phases = " << (cfg.fit_local_phases ? "true" : "false") << '\n';
  os << "drive_off_after = " << fmt17(cfg.drive_off_after) << '\n';
  os << "leakage_factor = " << fmt17(cfg.leakage_factor) << '\n';
  os << "branching_to_g = " << fmt17(cfg.branching_to_g) << '\n';
  os << "decay_basis = " << (cfg.decay_basis == ModeDecayBasis::physical ? "physical" : "normal") << '\n';
  os << "g_si = " << fmt17(cfg.g_si) << '\n';
  const auto& in = cfg.integrator;
  os << "integrator.method = " << method_name(in.method) << '\n';
  os << "integrator.dt = " << fmt17(in.dt) << '\n';
  os << "integrator.max_dt = " << fmt17(in.max_dt) << '\n';
  os << "integrator.tolerance = " << fmt17(in.tolerance) << '\n';
  os << "integrator.max_steps = " << in.max_steps << '\n';
  os << "integrator.record_stride = " << fmt17(in.record_stride) << '\n';
  os << "integrator.drift_abort = " << fmt17(in.drift_abort) << '\n';
  os << "integrator.check_positivity = " << (in.check_positivity ? "true" : "false") << '\n';
}

std::vector<ModelParams> sweep_points(const RunConfig& cfg) {
  std::vector<ModelParams> points{cfg.params};
  for (const auto& axis : cfg.sweep) {
    std::vector<ModelParams> next;
    for (const auto& base : points) {
      for (double v : axis.values) {
        ModelParams q = base;
        set_param(q, axis.field, v);
        next.push_back(q);
      }
    }
    points = std::move(next);
  }
  return points;
}

void write_metadata(const std::string& command, const RunConfig& cfg, std::ostream& os) {
  os << "# fibergate " << command << '\n';
  std::ostringstream body;
  write_config(cfg, body);
  std::istringstream lines(body.str());
  std::string line;
  while (std::getline(lines, line)) os << "# config " << line << '\n';
}

void write_constants_report(const RunConfig& cfg, std::ostream& os) {
  const ModelParams& p = cfg.params;
  const ConstantsOptions copts = cfg.constants_options();
  const DerivedConstants c = derive_constants(p, copts);
  auto kv = [&](const std::string& key, double v) { os << key << " = " << fmt15(v) << '\n'; };

  kv("lambda0", c.lambda0);
  kv("lambda1", c.lambda1);
  kv("lambda2", c.lambda2);
  kv("xi0", c.xi0);
  kv("xi1", c.xi1);
  kv("xi2", c.xi2);
  kv("eta", c.eta);
  kv("eps0", c.eps0);
  kv("eps1", c.eps1);
  kv("eps2", c.eps2);
  kv("mu0", c.mu0);
  kv("mu1", c.mu1);
  kv("mu2", c.mu2);
  kv("p1", c.p1);
  kv("p2", c.p2);
  kv("gamma_eff", c.gamma_eff);
  kv("kappa_eff", c.kappa_eff);
  kv("conditional_phase_rate", conditional_phase_rate(p, copts));

  const ValidityReport v = validate(p, cfg.threshold);
  kv("validity.threshold", v.threshold);
  for (const auto& check : v.checks) {
    kv("validity." + check.name, check.ratio);
    os << "validity." << check.name << ".pass = " << (check.pass ? "true" : "false") << '\n';
  }
  os << "validity.all_pass = " << (v.all_pass() ? "true" : "false") << '\n';

  const double target = cfg.target_or_default();
  const std::string label = phase_label(target);
  kv("target_phase", target);
  double t_closed = std::numeric_limits<double>::infinity();
  try {
    t_closed = gate_time_for_phase(p, target, copts);
  } catch (const ZeroRateError&) {
    os << "warning = zero conditional phase rate; no finite gate time\n";
  }
  const double t_quoted = quoted_gate_time_for_phase(target);
  kv("gate_time_" + label, t_closed);
  kv("gate_time_" + label + "_quoted", t_quoted);
  kv("gate_time_" + label + "_si_s", t_closed * p.g / cfg.g_si);
  kv("gate_time_" + label + "_quoted_si_s", t_quoted * p.g / cfg.g_si);
  os << "gate_time_mode = " << (cfg.gate_time_mode == GateTimeMode::closed_form ? "closed_form" : "quoted") << '\n';
  const double t_used = cfg.gate_time_mode == GateTimeMode::closed_form ? t_closed : t_quoted;
  kv("infidelity_" + label, std::isfinite(t_used) ? infidelity_for_time(p, t_used, copts) : t_used);
  // Linear extrapolation of the same budget to a pi gate.
  kv("infidelity_pi_linear", std::isfinite(t_used) ? infidelity_for_time(p, t_used, copts) * std::numbers::pi / target
                                                   : t_used);
}

}  // namespace fibergate
