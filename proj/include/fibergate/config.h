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

#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fibergate/dynamics.h"
#include "fibergate/gate.h"
#include "fibergate/params.h"

namespace fibergate {

enum class GateTimeMode { closed_form, quoted };

struct SweepAxis {
  std::string field;  // any ModelParams key
  std::vector<double> values;
  bool operator==(const SweepAxis&) const = default;
};

struct RunConfig {
  ModelParams params;
  std::optional<double> target_phase;  // rad
  std::optional<double> t_final;
  Engine engine = Engine::full_unitary;
  std::vector<double> r_values;
  std::vector<SweepAxis> sweep;
  // Sweep rows also run the gate with `engine`.
  bool sweep_simulate = false;
  std::string out;
  IntegratorConfig integrator;
  double threshold = kDefaultValidityThreshold;
  Xi1Form xi1 = Xi1Form::corrected;
  bool fit_local_phases = false;
  double drive_off_after = 0;
  double leakage_factor = kDefaultLeakageFactor;
  double branching_to_g = 0.5;
  ModeDecayBasis decay_basis = ModeDecayBasis::physical;
  // Which gate time the constants report uses for its infidelity estimate.
  GateTimeMode gate_time_mode = GateTimeMode::closed_form;
  // g in rad/s, used only for SI output.
  double g_si = 2 * std::numbers::pi * 34e6;

  bool operator==(const RunConfig&) const = default;

  ConstantsOptions constants_options() const;
  GateOptions gate_options() const;
  /// target_phase if set, otherwise 0.15 pi.
  double target_or_default() const;
};

/// Accepts a plain number of radians, "pi", "<x>pi" or "<x>*pi".
double parse_phase(const std::string& text);

/// `key = value` lines, `#` comments, comma lists. Throws ConfigError naming
/// the line for syntax errors and unknown keys, ParameterError for bad values.
RunConfig parse_config(std::istream& is, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Every key, with doubles at 17 significant digits so parsing restores the value.
void write_config(const RunConfig& cfg, std::ostream& os);

/// Sets one ModelParams field by its config key.
void set_param(ModelParams& p, const std::string& key, double value);
double get_param(const ModelParams& p, const std::string& key);
const std::vector<std::string>& param_keys();

/// Grid points of up to two axes, first axis outermost.
std::vector<ModelParams> sweep_points(const RunConfig& cfg);

/// Constants, validity ratios, gate times and infidelity estimates, 15 significant digits.
void write_constants_report(const RunConfig& cfg, std::ostream& os);

/// `#`-prefixed header naming the command and echoing the configuration.
void write_metadata(const std::string& command, const RunConfig& cfg, std::ostream& os);

}  // namespace fibergate
