#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "subres/direct_solver.hpp"
#include "subres/error.hpp"

using namespace subres;

namespace {

OscillatorParams free_oscillator() {
  OscillatorParams params;
  params.delta = 0.0;
  params.epsilon = 0.0;
  params.n_terms = 100;
  return params;
}

OscillatorParams forced(double delta, double epsilon) {
  OscillatorParams params;
  params.delta = delta;
  params.epsilon = epsilon;
  params.n_terms = 100;
  return params;
}

double final_envelope(const OscillatorParams& params, double t_end, double dt) {
  const auto traj = integrate(params, {0.0, 1.0, 0.0}, t_end, dt, 1);
  const auto& last = traj.samples.back();
  return envelope({last.t, last.u, last.du}, params.omega());
}

}  // namespace

TEST_CASE("free oscillator reproduces cos t") {
  const auto traj = integrate(free_oscillator(), {0.0, 1.0, 0.0}, 100.0, 0.01, 1);
  REQUIRE(traj.samples.size() == 10001);
  double worst = 0.0;
  for (const auto& s : traj.samples) worst = std::max(worst, std::abs(s.u - std::cos(s.t)));
  CHECK(worst <= 1e-6);
  CHECK_FALSE(traj.truncated);
}

TEST_CASE("trajectory sample layout") {
  const auto traj = integrate(forced(0.01, 0.1), {0.0, 1.0, 0.0}, 100.0, 0.02, 50);
  REQUIRE(traj.samples.size() == 101);
  CHECK(traj.samples.front().t == 0.0);
  CHECK(traj.samples.back().t == doctest::Approx(100.0));
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    CHECK(traj.samples[i].t > traj.samples[i - 1].t);
    CHECK(traj.samples[i].envelope >= 0.0);
  }
  const auto again = integrate(forced(0.01, 0.1), {0.0, 1.0, 0.0}, 100.0, 0.02, 50);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) CHECK(again.samples[i].u == traj.samples[i].u);
}

TEST_CASE("envelope identities") {
  const double omega = 1.3;
  for (double t : {0.0, 0.4, 2.0, 17.5}) {
    CHECK(envelope({t, std::cos(omega * t), -omega * std::sin(omega * t)}, omega) ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(envelope({0.0, 0.0, 0.0}, omega) == 0.0);
}

TEST_CASE("envelope tracks the local oscillation maximum") {
  const auto params = forced(0.01, 0.1);
  const auto traj = integrate(params, {0.0, 1.0, 0.0}, 400.0, 0.01, 1);
  const std::size_t period = static_cast<std::size_t>(2.0 * M_PI / params.omega() / 0.01);
  for (std::size_t start = 0; start + period < traj.samples.size(); start += 5 * period) {
    double max_u = 0.0;
    for (std::size_t i = start; i < start + period; ++i) max_u = std::max(max_u, std::abs(traj.samples[i].u));
    const double env = traj.samples[start + period / 2].envelope;
    CHECK(std::abs(env - max_u) <= 3.0 * params.epsilon * max_u);
  }
}

TEST_CASE("Wronskian of the free oscillator") {
  CHECK(wronskian_drift(free_oscillator(), 100.0, 0.01) <= 1e-8);
}

TEST_CASE("Wronskian drift converges at fourth order") {
  const auto params = forced(0.01, 0.1);
  const double coarse = wronskian_drift(params, 200.0, 0.04);
  const double fine = wronskian_drift(params, 200.0, 0.02);
  CAPTURE(coarse);
  CAPTURE(fine);
  CHECK(coarse > fine);
  CHECK(coarse / fine >= 12.0);
  CHECK(coarse / fine <= 40.0);
}

TEST_CASE("envelope at fixed time converges at fourth order") {
  const auto params = forced(0.01, 0.1);
  const double ref = final_envelope(params, 100.0, 0.0025);
  const double e1 = std::abs(final_envelope(params, 100.0, 0.04) - ref);
  const double e2 = std::abs(final_envelope(params, 100.0, 0.02) - ref);
  CAPTURE(e1);
  CAPTURE(e2);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 3.5);
  CHECK(order <= 4.5);
}

TEST_CASE("time reversal of the free oscillator") {
  const auto params = free_oscillator();
  const auto forward = integrate(params, {0.0, 0.3, -0.7}, 100.0, 0.01, 100);
  const auto& end = forward.samples.back();
  const auto back = integrate(params, {0.0, end.u, -end.du}, 100.0, 0.01, 100);
  const auto& ret = back.samples.back();
  CHECK(std::abs(ret.u - 0.3) <= 1e-6);
  CHECK(std::abs(-ret.du - (-0.7)) <= 1e-6);
}

TEST_CASE("linearity in the initial state") {
  const auto params = forced(0.00347, 0.1);
  const auto base = integrate(params, {0.0, 0.8, 0.25}, 500.0, 0.02, 10);
  for (double c : {2.0, -1.0}) {
    const auto scaled = integrate(params, {0.0, c * 0.8, c * 0.25}, 500.0, 0.02, 10);
    REQUIRE(scaled.samples.size() == base.samples.size());
    for (std::size_t i = 0; i < base.samples.size(); ++i) {
      // scaling by 2 or -1 is exact in binary floating point
      CHECK(scaled.samples[i].u == c * base.samples[i].u);
      CHECK(scaled.samples[i].du == c * base.samples[i].du);
    }
  }
}

TEST_CASE("classification of the free oscillator") {
  const auto traj = integrate(free_oscillator(), {0.0, 1.0, 0.0}, 1000.0, 0.02, 50);
  CHECK(classify_growth(traj) == Verdict::bounded);
  CHECK(growth_ratio(traj) == doctest::Approx(1.0).epsilon(1e-6));
  const auto short_run = integrate(free_oscillator(), {0.0, 1.0, 0.0}, 10.0, 0.02, 50);
  CHECK_THROWS_AS(classify_growth(short_run), DomainError);
}

TEST_CASE("preconditions") {
  auto params = forced(0.01, 0.1);
  params.n_terms = 39;
  CHECK_THROWS_AS(integrate(params, {0.0, 1.0, 0.0}, 1e5, 0.02), HorizonError);
  params.n_terms = 40;
  CHECK_NOTHROW(integrate(params, {0.0, 1.0, 0.0}, 1.0, 0.02));
  CHECK_THROWS_AS(integrate(params, {0.0, 1.0, 0.0}, 1.0, 0.06), DomainError);
  CHECK_THROWS_AS(integrate(params, {0.0, 1.0, 0.0}, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(integrate(params, {0.0, NAN, 0.0}, 1.0, 0.02), DomainError);
}

TEST_CASE("tabulated coefficient matches direct evaluation on an audit segment") {
  auto params = forced(0.00347, 0.1);
  params.n_terms = 1000;
  const State init{5e4, 1.0, 0.0};
  const double dt = 0.02;
  const double t_end = init.t + 1000 * dt;
  const auto direct = integrate(params, init, t_end, dt, 1, {CoefficientMode::direct});
  const auto table = integrate(params, init, t_end, dt, 1, {CoefficientMode::tabulated});
  REQUIRE(direct.samples.size() == 1001);
  REQUIRE(table.samples.size() == 1001);
  double worst = 0.0;
  for (std::size_t i = 0; i < direct.samples.size(); ++i) {
    worst = std::max(worst, std::abs(direct.samples[i].u - table.samples[i].u));
    worst = std::max(worst, std::abs(direct.samples[i].du - table.samples[i].du));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("overflow truncates instead of throwing") {
  // epsilon q dominates omega^2 and drives growth far past double range
  OscillatorParams params = forced(-0.99, 50.0);
  Trajectory traj;
  CHECK_NOTHROW(traj = integrate(params, {0.0, 1.0, 0.0}, 2000.0, 0.05, 50));
  CHECK(traj.truncated);
  for (const auto& s : traj.samples) CHECK(std::isfinite(s.u));
  CHECK(classify_growth(traj) == Verdict::growing);
}

TEST_CASE("log-envelope trace follows growth beyond double range") {
  OscillatorParams params = forced(-0.99, 50.0);
  const auto trace = trace_log_envelope(params, {0.0, 1.0, 0.0}, 2000.0, 0.05, 50);
  REQUIRE_FALSE(trace.log_envelope.empty());
  CHECK(trace.log_peak > 800.0);
  for (double v : trace.log_envelope) CHECK(std::isfinite(v));
}
