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
#include <random>
#include <sstream>

#include "fibergate/config.h"
#include "fibergate/errors.h"

using namespace fibergate;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

}  // namespace

TEST_CASE("parse parameters, comments and options") {
  const RunConfig c = parse(
      "# operating point\n"
      "g = 1\n"
      "omega = 0.5   # weaker drive\n"
      "delta_big = 40\n"
      "phi = 0.25pi\n"
      "n_max = 3\n"
      "\n"
      "target_phase = 0.15pi\n"
      "engine = effective\n"
      "r_values = 0.8, 1.0, 1.2\n"
      "integrator.method = dopri5\n"
      "integrator.tolerance = 1e-9\n");
  CHECK(c.params.omega == 0.5);
  CHECK(c.params.delta_big == 40);
  CHECK(c.params.phi == doctest::Approx(std::numbers::pi / 4));
  CHECK(c.params.n_max == 3);
  CHECK(c.params.nu == std::numbers::sqrt2);
  CHECK(*c.target_phase == doctest::Approx(0.15 * std::numbers::pi));
  CHECK(c.engine == Engine::effective);
  CHECK(c.r_values == std::vector<double>{0.8, 1.0, 1.2});
  CHECK(c.integrator.method == Method::dopri5);
  CHECK(c.integrator.tolerance == 1e-9);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("g 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("g = 1\ng = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("g = abc\n"), ParameterError);
  CHECK_THROWS_AS(parse("g = -1\n"), ParameterError);
  CHECK_THROWS_AS(parse("n_max = 1.5\n"), ParameterError);
  CHECK_THROWS_AS(parse("engine = exact\n"), ConfigError);
  CHECK_THROWS_AS(parse("sweep.delta_big = 30, 20, 40\n"), ParameterError);
  CHECK_THROWS_AS(parse("sweep.delta_big = 30, 30\n"), ParameterError);
  CHECK_THROWS_AS(parse("sweep.bogus = 1, 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("sweep.delta_big = \n"), ParameterError);
  CHECK_THROWS_AS(parse("sweep.r = 1,2\nsweep.nu = 1,2\nsweep.omega = 1,2\n"), ConfigError);
  try {
    parse("g = 1\nomega = x\n");
  } catch (const ParameterError& e) {
    CHECK(e.field() == "omega");
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("phase strings") {
  const double pi = std::numbers::pi;
  CHECK(parse_phase("0.15pi") == doctest::Approx(0.15 * pi));
  CHECK(parse_phase("0.15*pi") == doctest::Approx(0.15 * pi));
  CHECK(parse_phase("pi") == doctest::Approx(pi));
  CHECK(parse_phase("-pi") == doctest::Approx(-pi));
  CHECK(parse_phase(" 0.4712 ") == 0.4712);
  CHECK_THROWS(parse_phase("half"));
}

TEST_CASE("sweep ranges and grid order") {
  const RunConfig c = parse("sweep.delta_big = 20:60:5\nsweep.r = 0.8, 1.2\n");
  REQUIRE(c.sweep.size() == 2);
  CHECK(c.sweep[0].values == std::vector<double>{20, 30, 40, 50, 60});
  const std::vector<ModelParams> pts = sweep_points(c);
  REQUIRE(pts.size() == 10);
  CHECK(pts[0].delta_big == 20);
  CHECK(pts[0].r == 0.8);
  CHECK(pts[1].r == 1.2);
  CHECK(pts[2].delta_big == 30);
  const RunConfig d = parse("sweep.n_max = 1:3:3\n");
  CHECK(sweep_points(d)[2].n_max == 3);
}

TEST_CASE("round trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int i = 0; i < 20; ++i) {
    RunConfig c;
    c.params.g = u(rng);
    c.params.omega = u(rng);
    c.params.delta_big = 30 * u(rng);
    c.params.delta_small = u(rng) / 3;
    c.params.nu = u(rng);
    c.params.phi = u(rng);
    c.params.gamma = u(rng) / 100;
    c.params.kappa = u(rng) / 100;
    c.params.r = u(rng);
    c.params.n_max = 1 + i % 3;
    if (i % 2) c.target_phase = u(rng);
    if (i % 3 == 0) c.t_final = 100 * u(rng);
    c.engine = i % 2 ? Engine::full_lindblad : Engine::effective;
    c.r_values = {u(rng), u(rng)};
    c.sweep = {{"omega", {0.5, u(rng) + 1}}};
    c.sweep_simulate = i % 2;
    c.out = "out dir";
    c.threshold = 5 + u(rng);
    c.xi1 = i % 2 ? Xi1Form::as_printed : Xi1Form::corrected;
    c.gate_time_mode = i % 2 ? GateTimeMode::quoted : GateTimeMode::closed_form;
    c.fit_local_phases = i % 2;
    c.drive_off_after = u(rng);
    c.leakage_factor = 1 + u(rng);
    c.branching_to_g = u(rng) / 2;
    c.decay_basis = i % 2 ? ModeDecayBasis::normal : ModeDecayBasis::physical;
    c.g_si = 1e8 * u(rng);
    c.integrator.method = i % 2 ? Method::dopri5 : Method::rk4;
    c.integrator.dt = u(rng) / 1000;
    c.integrator.max_dt = u(rng) / 100;
    c.integrator.tolerance = u(rng) * 1e-9;
    c.integrator.max_steps = 1000 + i;
    c.integrator.record_stride = u(rng);
    c.integrator.drift_abort = u(rng) * 1e-6;
    c.integrator.check_positivity = i % 2;
    std::ostringstream os;
    write_config(c, os);
    const RunConfig back = parse(os.str());
    REQUIRE(back == c);
  }
}

TEST_CASE("constants report") {
  RunConfig c;
  c.params = ModelParams::reference_operating_point();
  c.gate_time_mode = GateTimeMode::quoted;
  std::ostringstream a, b;
  write_constants_report(c, a);
  write_constants_report(c, b);
  CHECK(a.str() == b.str());
  const std::string s = a.str();
  CHECK(s.find("p1 = 1.11111111111111e-03\n") != std::string::npos);
  CHECK(s.find("infidelity_0.15pi = 6.43797355256738e-03\n") != std::string::npos);
  CHECK(s.find("gate_time_0.15pi = 2.97184940625857e+02\n") != std::string::npos);
  CHECK(s.find("validity.all_pass = true\n") != std::string::npos);
  CHECK(s.find("infidelity_pi_linear = 4.29198236837826e-02\n") != std::string::npos);

  RunConfig z;
  z.params.omega = 0;
  std::ostringstream zs;
  write_constants_report(z, zs);
  CHECK(zs.str().find("mu0 = 0.00000000000000e+00\n") != std::string::npos);
  CHECK(zs.str().find("warning = ") != std::string::npos);
}

TEST_CASE("metadata header") {
  RunConfig c;
  std::ostringstream os;
  write_metadata("constants", c, os);
  std::istringstream is(os.str());
  std::string line;
  while (std::getline(is, line)) CHECK(line.front() == '#');
}
