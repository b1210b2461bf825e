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

#include <functional>
#include <string>
#include <vector>

#include "fibergate/params.h"

namespace fibergate {

struct SubCheck {
  enum class Kind { relative, absolute, at_most, factor, within };
  std::string name;
  Kind kind = Kind::relative;
  double value = 0;
  double expected = 0;
  // relative/absolute: allowed deviation; at_most: bound is `expected`;
  // factor: value in [expected / tol, expected * tol]; within: value in [expected, tolerance].
  double tolerance = 0;
  bool pass = false;

  std::string describe() const;
};

SubCheck check_relative(std::string name, double value, double expected, double tol);
SubCheck check_absolute(std::string name, double value, double expected, double tol);
SubCheck check_at_most(std::string name, double value, double bound);
SubCheck check_factor(std::string name, double value, double expected, double factor);
SubCheck check_within(std::string name, double value, double lo, double hi);

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<SubCheck> checks;
  std::vector<std::string> notes;
  std::string error;  // set when the criterion threw
  double seconds = 0;

  bool pass() const;
  /// One line: PASS/FAIL, id, title and every sub-check with its margin.
  std::string line() const;
};

inline constexpr int kCriterionCount = 10;

struct VerifyOptions {
  ModelParams params = ModelParams::reference_operating_point();
  ConstantsOptions constants;
  double leakage_factor = 4.0;
  int convergence_low = 2;
  int convergence_high = 3;
  // Horizon of the density-matrix run; 0 runs the whole gate.
  double lindblad_horizon = 0;
  int jobs = 0;
  std::vector<int> criteria;  // empty: all
};

inline constexpr double kPinnedGateTime = 297.18494062585685;

CriterionResult run_criterion(int id, const VerifyOptions& opts);

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace fibergate
