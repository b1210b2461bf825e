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

#include "fibergate/params.h"

#include <algorithm>
#include <cmath>

#include "fibergate/errors.h"

namespace fibergate {

namespace {

void require_finite(const std::string& field, double value) {
  if (!std::isfinite(value)) throw ParameterError(field, "must be finite");
}

void require_nonzero_denominator(double value, double scale, const char* what) {
  if (std::abs(value) <= 1e-12 * scale) {
    throw DegenerateDetuningError(std::string("degenerate detuning: ") + what + " vanishes");
  }
}

}  // namespace

ModelParams ModelParams::reference_operating_point() {
  ModelParams p;
  p.gamma = 0.01;
  p.kappa = 0.01;
  return p;
}

void check_fields(const ModelParams& p) {
  require_finite("g", p.g);
  require_finite("omega", p.omega);
  require_finite("delta_big", p.delta_big);
  require_finite("delta_small", p.delta_small);
  require_finite("nu", p.nu);
  require_finite("phi", p.phi);
  require_finite("gamma", p.gamma);
  require_finite("kappa", p.kappa);
  require_finite("r", p.r);
  if (p.g <= 0) throw ParameterError("g", "must be > 0");
  if (p.omega < 0) throw ParameterError("omega", "must be >= 0");
  if (p.nu < 0) throw ParameterError("nu", "must be >= 0");
  if (p.gamma < 0) throw ParameterError("gamma", "must be >= 0");
  if (p.kappa < 0) throw ParameterError("kappa", "must be >= 0");
  // r = 0 is the decoupled-second-atom limit used by asymmetry scans.
  if (p.r < 0) throw ParameterError("r", "must be >= 0");
  if (p.n_max < 1) throw ParameterError("n_max", "must be >= 1");
  if (p.phi < 0 || p.phi >= 2 * std::numbers::pi) throw ParameterError("phi", "must lie in [0, 2pi)");
}

bool ValidityReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidityCheck& c) { return c.pass; });
}

const ValidityCheck& ValidityReport::at(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error("no validity check named '" + name + "'");
}

std::vector<std::string> ValidityReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.pass) out.push_back(c.name);
  }
  return out;
}

namespace {

// Closed forms evaluated without any degeneracy guard; IEEE inf/NaN are
// allowed to propagate so validate() can report them as failing ratios.
DerivedConstants evaluate_closed_forms(const ModelParams& p, const ConstantsOptions& opts) {
  const double g = p.g;
  const double om = p.omega;
  const double big = p.delta_big;
  const double small = p.delta_small;
  const double s = std::numbers::sqrt2 * p.nu;
  const double drive = big - small;

  DerivedConstants c;
  c.lambda0 = std::numbers::sqrt2 * g * om / 4 * (1 / big + 1 / drive) * opts.lambda0_scale;
  c.lambda1 = g * om / 4 * (1 / (big - s) + 1 / drive);
  c.lambda2 = g * om / 4 * (1 / (big + s) + 1 / drive);
  c.xi1 = opts.xi1 == Xi1Form::corrected ? g * g / 4 * (1 / (big - s) + 1 / (big + s))
                                         : g * g / 4 * (2 / (big + s));
  c.xi2 = std::numbers::sqrt2 * g * g / 4 * (1 / (big - s) + 1 / big);
  c.xi0 = std::numbers::sqrt2 * g * g / 4 * (1 / (big + s) + 1 / big);
  c.eta = om * om / drive;
  c.eps0 = g * g / (4 * big);
  c.eps1 = g * g / (4 * (big - s));
  c.eps2 = g * g / (4 * (big + s));
  c.mu0 = c.lambda0 * c.lambda0 / small;
  c.mu1 = c.lambda1 * c.lambda1 / (small - s);
  c.mu2 = c.lambda2 * c.lambda2 / (small + s);
  c.p1 = om * om / (big * big);
  c.p2 = c.lambda0 * c.lambda0 / (small * small) +
         c.lambda1 * c.lambda1 / ((small - s) * (small - s)) +
         c.lambda2 * c.lambda2 / ((small + s) * (small + s));
  c.gamma_eff = c.p1 * p.gamma;
  c.kappa_eff = c.p2 * p.kappa;
  return c;
}

}  // namespace

ValidityReport validate(const ModelParams& p, double threshold) {
  check_fields(p);
  const DerivedConstants c = evaluate_closed_forms(p, {});
  const double s = std::numbers::sqrt2 * p.nu;
  const double small = p.delta_small;

  ValidityReport report;
  report.threshold = threshold;
  auto add = [&](const char* name, double num, double den) {
    const double ratio = num / den;
    // NaN compares false, so 0/0 fails.
    report.checks.push_back({name, ratio, std::abs(ratio) >= threshold});
  };
  add("delta_big/sqrt2nu", p.delta_big, s);
  add("delta_big/delta_small", p.delta_big, small);
  add("delta_big/g", p.delta_big, p.g);
  add("delta_big/omega", p.delta_big, p.omega);
  add("delta_small/lambda0", small, c.lambda0);
  add("(delta_small-sqrt2nu)/lambda1", small - s, c.lambda1);
  add("(delta_small+sqrt2nu)/lambda2", small + s, c.lambda2);
  add("sqrt2nu/xi0", s, c.xi0);
  add("sqrt2nu/xi1", s, c.xi1);
  add("sqrt2nu/xi2", s, c.xi2);
  return report;
}

DerivedConstants derive_constants(const ModelParams& p, const ConstantsOptions& opts) {
  check_fields(p);
  const double s = std::numbers::sqrt2 * p.nu;
  const double scale = std::max({1.0, std::abs(p.delta_big), std::abs(p.delta_small), s});
  require_nonzero_denominator(p.delta_big, scale, "Delta");
  require_nonzero_denominator(p.delta_big - p.delta_small, scale, "Delta - delta");
  require_nonzero_denominator(p.delta_big - s, scale, "Delta - sqrt2 nu");
  require_nonzero_denominator(p.delta_big + s, scale, "Delta + sqrt2 nu");
  require_nonzero_denominator(p.delta_small, scale, "delta");
  require_nonzero_denominator(p.delta_small - s, scale, "delta - sqrt2 nu");
  require_nonzero_denominator(p.delta_small + s, scale, "delta + sqrt2 nu");
  return evaluate_closed_forms(p, opts);
}

double conditional_phase_rate(const ModelParams& p, const ConstantsOptions& opts) {
  const DerivedConstants c = derive_constants(p, opts);
  return -2 * p.r * (c.mu1 + c.mu2 - c.mu0);
}

double gate_time_for_phase(const ModelParams& p, double target_phase, const ConstantsOptions& opts) {
  const double rate = conditional_phase_rate(p, opts);
  if (target_phase == 0) return 0;
  if (rate == 0) throw ZeroRateError("conditional phase rate is zero; no gate time reaches a nonzero phase");
  const double t = target_phase / rate;
  if (t < 0) {
    throw ParameterError("target_phase", "sign must match the conditional phase rate");
  }
  return t;
}

double infidelity_estimate(const ModelParams& p, double target_phase, const ConstantsOptions& opts) {
  return infidelity_for_time(p, gate_time_for_phase(p, target_phase, opts), opts);
}

double infidelity_for_time(const ModelParams& p, double gate_time, const ConstantsOptions& opts) {
  const DerivedConstants c = derive_constants(p, opts);
  return (c.gamma_eff + c.kappa_eff) * gate_time;
}

double quoted_gate_time_for_phase(double target_phase) {
  return kQuotedGateTime * target_phase / kQuotedGatePhase;
}

double max_fiber_length(double nu_bar, double mode_bound) {
  if (!(nu_bar > 0)) throw ParameterError("nu_bar", "must be > 0");
  if (!(mode_bound > 0)) throw ParameterError("mode_bound", "must be > 0");
  return mode_bound * 2 * std::numbers::pi * kSpeedOfLight / nu_bar;
}

}  // namespace fibergate
