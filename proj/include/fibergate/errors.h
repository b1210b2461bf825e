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

#include <stdexcept>
#include <string>

namespace fibergate {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ModelParams field is non-finite or outside its allowed range.
class ParameterError : public Error {
 public:
  ParameterError(std::string field, const std::string& what)
      : Error("invalid parameter '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A perturbative denominator (Δ, Δ−δ, Δ±√2ν, δ, δ±√2ν) vanishes.
class DegenerateDetuningError : public Error {
 public:
  using Error::Error;
};

/// μ₁+μ₂−μ₀ = 0, so no finite gate time reaches a nonzero phase.
class ZeroRateError : public Error {
 public:
  using Error::Error;
};

/// Overlap with a reference state dropped below the phase-extraction floor.
class LeakageError : public Error {
 public:
  LeakageError(std::string basis, const std::string& what)
      : Error(what), basis_(std::move(basis)) {}
  const std::string& basis() const noexcept { return basis_; }

 private:
  std::string basis_;
};

/// Step limit exceeded, step bound violated, or norm/trace drift abort.
class IntegratorError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fibergate
