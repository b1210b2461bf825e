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

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "fibergate/errors.h"
#include "fibergate/params.h"

using namespace fibergate;
using big = boost::multiprecision::cpp_dec_float_50;

namespace {

// 50-digit evaluation of the closed forms, written independently of params.cpp.
struct Oracle {
  big l0, l1, l2, x0, x1, x2, eta, e0, e1, e2, m0, m1, m2, p1, p2;
};

Oracle oracle(const ModelParams& q) {
  const big g = q.g, om = q.omega, D = q.delta_big, d = q.delta_small;
  const big s = sqrt(big(2)) * big(q.nu);
  const big r2 = sqrt(big(2));
  const big w = D - d;
  Oracle o;
  o.l0 = r2 * g * om / 4 * (1 / D + 1 / w);
  o.l1 = g * om / 4 * (1 / (D - s) + 1 / w);
  o.l2 = g * om / 4 * (1 / (D + s) + 1 / w);
  o.x1 = g * g / 4 * (1 / (D - s) + 1 / (D + s));
  o.x2 = r2 * g * g / 4 * (1 / (D - s) + 1 / D);
  o.x0 = r2 * g * g / 4 * (1 / (D + s) + 1 / D);
  o.eta = om * om / w;
  o.e0 = g * g / (4 * D);
  o.e1 = g * g / (4 * (D - s));
  o.e2 = g * g / (4 * (D + s));
  o.m0 = o.l0 * o.l0 / d;
  o.m1 = o.l1 * o.l1 / (d - s);
  o.m2 = o.l2 * o.l2 / (d + s);
  o.p1 = om * om / (D * D);
  o.p2 = o.l0 * o.l0 / (d * d) + o.l1 * o.l1 / ((d - s) * (d - s)) + o.l2 * o.l2 / ((d + s) * (d + s));
  return o;
}

void require_close(double actual, const big& expected, double rel) {
  const double e = expected.convert_to<double>();
  INFO("actual " << actual << " expected " << e);
  REQUIRE(std::abs(actual - e) <= rel * std::abs(e) + 1e-300);
}

}  // namespace

TEST_CASE("constants at the operating point match frozen high-precision values") {
  const DerivedConstants c = derive_constants(ModelParams{});
  const double tol = 1e-13;
  CHECK(c.lambda0 == doctest::Approx(0.023976609247130059735).epsilon(tol));
  CHECK(c.lambda1 == doctest::Approx(0.017549261083743842365).epsilon(tol));
  CHECK(c.lambda2 == doctest::Approx(0.016433189655172413793).epsilon(tol));
  CHECK(c.xi1 == doctest::Approx(0.016741071428571428571).epsilon(tol));
  CHECK(c.xi2 == doctest::Approx(0.024412019826678426438).epsilon(tol));
  CHECK(c.xi0 == doctest::Approx(0.022833656475815597142).epsilon(tol));
  CHECK(c.eta == doctest::Approx(0.034482758620689655172).epsilon(tol));
  CHECK(c.eps0 == doctest::Approx(0.0083333333333333333333).epsilon(tol));
  CHECK(c.eps1 == doctest::Approx(0.0089285714285714285714).epsilon(tol));
  CHECK(c.eps2 == doctest::Approx(0.0078125).epsilon(tol));
  CHECK(c.mu0 == doctest::Approx(0.00057487779098956268992).epsilon(tol));
  CHECK(c.mu1 == doctest::Approx(-0.00030797656458540610061).epsilon(tol));
  CHECK(c.mu2 == doctest::Approx(0.000090016574080955212049).epsilon(tol));
  CHECK(c.p1 == doctest::Approx(1.0 / 900).epsilon(tol));
  CHECK(c.p2 == doctest::Approx(0.00091285988026862052788).epsilon(tol));
  CHECK(conditional_phase_rate(ModelParams{}) == doctest::Approx(0.001585675562988027157).epsilon(tol));
  CHECK(gate_time_for_phase(ModelParams{}, kQuotedGatePhase) == doctest::Approx(297.18494062585685091).epsilon(tol));
}

TEST_CASE("closed forms agree with a 50-digit evaluation over random parameters") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int i = 0; i < 50; ++i) {
    ModelParams q;
    q.g = u(rng);
    q.omega = u(rng);
    q.delta_big = 20 + 20 * u(rng);
    q.delta_small = u(rng);
    q.nu = u(rng);
    const Oracle o = oracle(q);
    const DerivedConstants c = derive_constants(q);
    const double tol = 1e-11;
    require_close(c.lambda0, o.l0, tol);
    require_close(c.lambda1, o.l1, tol);
    require_close(c.lambda2, o.l2, tol);
    require_close(c.xi0, o.x0, tol);
    require_close(c.xi1, o.x1, tol);
    require_close(c.xi2, o.x2, tol);
    require_close(c.eta, o.eta, tol);
    require_close(c.eps0, o.e0, tol);
    require_close(c.eps1, o.e1, tol);
    require_close(c.eps2, o.e2, tol);
    // mu1, mu2 can nearly cancel against delta -+ sqrt2 nu; keep a looser bound there
    require_close(c.mu0, o.m0, 1e-9);
    require_close(c.mu1, o.m1, 1e-9);
    require_close(c.mu2, o.m2, 1e-9);
    require_close(c.p1, o.p1, tol);
    require_close(c.p2, o.p2, 1e-9);
  }
}

TEST_CASE("printed xi1 form") {
  const DerivedConstants c = derive_constants(ModelParams{}, {.xi1 = Xi1Form::as_printed});
  CHECK(c.xi1 == doctest::Approx(0.015625).epsilon(1e-14));
  // only xi1 changes
  const DerivedConstants d = derive_constants(ModelParams{});
  CHECK(c.mu0 == d.mu0);
  CHECK(c.p2 == d.p2);
}

TEST_CASE("error budget at the quoted gate time") {
  const ModelParams p = ModelParams::reference_operating_point();
  CHECK(infidelity_for_time(p, kQuotedGateTime) == doctest::Approx(0.0064379735525673833514).epsilon(1e-12));
  CHECK(infidelity_for_time(p, quoted_gate_time_for_phase(std::numbers::pi)) ==
        doctest::Approx(0.042919823683782555676).epsilon(1e-12));
  CHECK(infidelity_estimate(p, kQuotedGatePhase) == doctest::Approx(0.0060149369890164217534).epsilon(1e-12));
}

TEST_CASE("scaling properties") {
  ModelParams p;
  const DerivedConstants c1 = derive_constants(p);
  p.omega = 2;
  const DerivedConstants c2 = derive_constants(p);
  CHECK(c2.p1 == doctest::Approx(4 * c1.p1));
  CHECK(c2.mu0 == doctest::Approx(4 * c1.mu0));
  CHECK(c2.mu1 == doctest::Approx(4 * c1.mu1));
  CHECK(c2.p2 == doctest::Approx(4 * c1.p2));

  ModelParams q;
  q.r = 0.5;
  CHECK(conditional_phase_rate(q) == doctest::Approx(0.5 * conditional_phase_rate(ModelParams{})));
  q.r = 0;
  CHECK(conditional_phase_rate(q) == 0);

  ModelParams d = ModelParams::reference_operating_point();
  CHECK(infidelity_for_time(d, 200) == doctest::Approx(2 * infidelity_for_time(d, 100)));
}

TEST_CASE("gate time edge cases") {
  CHECK(gate_time_for_phase(ModelParams{}, 0) == 0);
  ModelParams p;
  p.omega = 0;
  CHECK_THROWS_AS(gate_time_for_phase(p, 1.0), ZeroRateError);
  // the rate is positive at the operating point, so a negative target is unreachable
  CHECK_THROWS_AS(gate_time_for_phase(ModelParams{}, -1.0), ParameterError);
  CHECK(quoted_gate_time_for_phase(kQuotedGatePhase) == doctest::Approx(kQuotedGateTime));
}

TEST_CASE("field validation") {
  auto bad = [](auto mutate, const char* field) {
    ModelParams p;
    mutate(p);
    try {
      check_fields(p);
      FAIL("accepted invalid " << field);
    } catch (const ParameterError& e) {
      CHECK(e.field() == field);
    }
  };
  bad([](ModelParams& p) { p.g = 0; }, "g");
  bad([](ModelParams& p) { p.omega = -1; }, "omega");
  bad([](ModelParams& p) { p.nu = std::nan(""); }, "nu");
  bad([](ModelParams& p) { p.gamma = -0.1; }, "gamma");
  bad([](ModelParams& p) { p.kappa = INFINITY; }, "kappa");
  bad([](ModelParams& p) { p.r = -0.5; }, "r");
  bad([](ModelParams& p) { p.n_max = 0; }, "n_max");
  bad([](ModelParams& p) { p.phi = 2 * std::numbers::pi; }, "phi");
  ModelParams ok;
  ok.r = 0;
  CHECK_NOTHROW(check_fields(ok));
}

TEST_CASE("degenerate detunings") {
  ModelParams p;
  p.delta_small = 2;  // delta == sqrt2 nu
  CHECK_THROWS_AS(derive_constants(p), DegenerateDetuningError);
  p = ModelParams{};
  p.delta_big = 2;  // Delta == sqrt2 nu
  CHECK_THROWS_AS(derive_constants(p), DegenerateDetuningError);
  p = ModelParams{};
  p.delta_big = 1;  // drive on resonance
  CHECK_THROWS_AS(derive_constants(p), DegenerateDetuningError);
  // validate never throws, it reports
  const ValidityReport v = validate(p);
  CHECK_FALSE(v.all_pass());
}

TEST_CASE("validity report") {
  const ValidityReport v = validate(ModelParams{});
  CHECK(v.all_pass());
  CHECK(v.checks.size() == 10);
  CHECK(v.at("delta_big/sqrt2nu").ratio == doctest::Approx(15));
  CHECK(v.at("delta_big/delta_small").ratio == doctest::Approx(30));
  ModelParams p;
  p.delta_big = 10;
  const ValidityReport w = validate(p);
  CHECK_FALSE(w.all_pass());
  CHECK(w.failures().front() == "delta_big/sqrt2nu");
  CHECK(validate(ModelParams{}, 20).failures() == std::vector<std::string>{"delta_big/sqrt2nu"});
  CHECK_THROWS(v.at("nonexistent"));
}

TEST_CASE("fiber length bound") {
  CHECK(max_fiber_length(1e9, 1) == doctest::Approx(1.88369895509244).epsilon(1e-12));
  CHECK(max_fiber_length(1e9, 2) == doctest::Approx(2 * 1.88369895509244));
  CHECK_THROWS_AS(max_fiber_length(0), ParameterError);
}

TEST_CASE("lambda0 canary changes p2") {
  ConstantsOptions o;
  o.lambda0_scale = 2;
  const DerivedConstants c = derive_constants(ModelParams{}, o);
  const DerivedConstants d = derive_constants(ModelParams{});
  CHECK(c.lambda0 == doctest::Approx(2 * d.lambda0));
  CHECK(std::abs(c.p2 / 0.917e-3 - 1) > 0.01);
}
