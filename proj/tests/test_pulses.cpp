#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "grover/hamiltonians.hpp"
#include "grover/pulses.hpp"

using namespace grover;

namespace {

// Ratio through the mixing angle: sin(theta) = eps sqrt(f) A - sqrt(1 - f).
double ratio_via_angle(double x, double f) {
  const double s = x * std::sqrt(f) - std::sqrt(1.0 - f);
  const double c = std::sqrt(1.0 - s * s);
  return -std::sqrt(f / (1.0 - f)) * s / c;
}

}  // namespace

TEST_CASE("envelope evaluation") {
  CHECK(eval_pulse(Gaussian{1.0, 1.0}, 0.0) == 1.0);
  CHECK(eval_pulse(Gaussian{1.0, 1.0}, 1.0) == doctest::Approx(0.367879).epsilon(1e-6));
  CHECK(eval_pulse(TailoredGaussian{1.0, 1.0, 1.5}, 0.75) == 1.0);
  // Gaussian switch-on before the plateau.
  CHECK(eval_pulse(TailoredGaussian{2.0, 1.0, 1.5}, -1.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  CHECK(eval_pulse(TailoredGaussian{2.0, 1.0, 1.5}, 2.5) == doctest::Approx(2.0 * std::exp(-1.0)));
}

TEST_CASE("tailored Gaussian is continuous at its junctions") {
  const TailoredGaussian g{3.0, 0.7, 1.5};
  for (double t : {0.0, 1.5 * 0.7}) {
    CHECK(eval_pulse(g, t - 1e-12) == doctest::Approx(eval_pulse(g, t + 1e-12)).epsilon(1e-10));
    CHECK(eval_pulse(g, t) == 3.0);
  }
}

TEST_CASE("sampled pulses interpolate linearly and vanish outside") {
  const SampledPulse p{0.0, 0.5, {0.0, 1.0, 3.0}};
  CHECK(eval_pulse(p, 0.25) == doctest::Approx(0.5));
  CHECK(eval_pulse(p, 0.75) == doctest::Approx(2.0));
  CHECK(eval_pulse(p, -0.1) == 0.0);
  CHECK(eval_pulse(p, 1.1) == 0.0);
  CHECK(pulse_area(p, 0.0, 1.0) == doctest::Approx(0.25 + 1.0));
}

TEST_CASE("pulse area against closed forms") {
  CHECK(pulse_area(TailoredGaussian{2.0, 1.0, 10.0}, 1.0, 4.0) == doctest::Approx(6.0).epsilon(1e-12));
  const double erf_oracle = std::sqrt(std::numbers::pi) * std::erf(4.0);
  CHECK(std::abs(pulse_area(Gaussian{1.0, 1.0}, -4.0, 4.0) - erf_oracle) < 1e-10 * 8.0);
  CHECK(erf_oracle == doctest::Approx(1.772454).epsilon(1e-6));
  CHECK(pulse_area(Gaussian{1.0, 1.0}, 0.0, 0.0) == 0.0);
  // Tailored: half Gaussian + plateau + half Gaussian.
  const double full = std::sqrt(std::numbers::pi) * std::erf(4.0) + 1.5;
  CHECK(std::abs(pulse_area(TailoredGaussian{1.0, 1.0, 1.5}, -4.0, 5.5) - full) < 1e-10 * 9.5);
  try {
    pulse_area(Gaussian{1.0, 1.0}, 1.0, 0.0);
    FAIL("expected BackwardInterval");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BackwardInterval);
  }
}

TEST_CASE("cumulative area is nondecreasing and inverts") {
  const CumulativeArea a(Gaussian{2.0, 1.0}, -4.0, 4.0, 80000);
  for (std::size_t k = 1; k < a.nodes().size(); ++k) REQUIRE(a.nodes()[k] >= a.nodes()[k - 1]);
  CHECK(a.total() == doctest::Approx(2.0 * std::sqrt(std::numbers::pi) * std::erf(4.0)).epsilon(1e-12));
  const double t = a.time_at_area(0.5 * a.total());
  CHECK(std::abs(t) < 1e-6);
}

TEST_CASE("local adiabatic ratio") {
  CHECK(local_adiabatic_ratio(0.0, 0.05, 0.375) == doctest::Approx(1.0).epsilon(1e-15));
  const double xmax = std::sqrt(0.625 / 0.375);
  CHECK(std::abs(local_adiabatic_ratio(xmax / 0.05, 0.05, 0.375)) < 1e-12);
  CHECK(local_adiabatic_ratio(0.5 / 0.05, 0.05, 0.5) == doctest::Approx(0.377964).epsilon(1e-6));
  CHECK(0.5 * std::sqrt(0.5) - std::sqrt(0.5) == doctest::Approx(-0.353553).epsilon(1e-6));
  try {
    local_adiabatic_ratio(1.01 * xmax / 0.05, 0.05, 0.375);
    FAIL("expected OutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfRange);
  }
}

TEST_CASE("ratio matches the mixing-angle form and decreases strictly") {
  for (double f : {1.0 / 64, 0.1, 0.375, 0.5, 0.9}) {
    const double xmax = std::sqrt((1.0 - f) / f);
    double prev = 2.0;
    for (int k = 0; k <= 2000; ++k) {
      const double x = xmax * k / 2000.0;
      const double r = local_adiabatic_ratio(x, 1.0, f);
      REQUIRE(std::abs(r - ratio_via_angle(x, f)) <= 1e-12);
      REQUIRE(r < prev);
      prev = r;
    }
  }
}

TEST_CASE("area-duration relation") {
  CHECK(area_duration_relation(0.05, 0.375) == doctest::Approx(25.8199).epsilon(1e-6));
  CHECK(area_duration_relation(1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(area_duration_relation(0.05, 1.0 / 64) == doctest::Approx(158.745).epsilon(1e-6));
}

TEST_CASE("designed locally adiabatic pair") {
  const double eps = 0.05;
  const double f = 0.375;
  const double w0 = std::sqrt((1 - f) / f) / (eps * std::sqrt(std::numbers::pi));
  const PulsePair pair = design_local_adiabatic_pair(Gaussian{w0, 1.0}, eps, f, -4.0, 4.0);
  const auto& la = std::get<LocalAdiabatic>(pair.design());

  SUBCASE("area relation at t_f") {
    CHECK(std::abs(la.effective_epsilon * pair.pump_area(pair.t_end()) - std::sqrt((1 - f) / f)) <
          1e-10);
    CHECK(pair.pump_area(pair.t_end()) * w0 / w0 ==
          doctest::Approx(25.8199 * eps / la.effective_epsilon).epsilon(1e-5));
  }
  SUBCASE("boundary conditions") {
    CHECK(std::abs(pair.stokes(pair.t_start()) / pair.pump(pair.t_start()) - 1.0) < 1e-12);
    CHECK(std::abs(pair.stokes(pair.t_end()) / pair.pump(pair.t_end())) < 1e-12);
    const double theta_i = mixing_angle(pair.pump(pair.t_start()), pair.stokes(pair.t_start()), f);
    CHECK(std::abs(theta_i + std::atan(std::sqrt((1 - f) / f))) < 1e-10);
    CHECK(std::abs(mixing_angle(pair.pump(pair.t_end()), pair.stokes(pair.t_end()), f)) < 1e-10);
  }
  SUBCASE("window and silence outside it") {
    CHECK(pair.t_start() == -4.0);
    CHECK(pair.t_end() <= 4.0);
    CHECK(pair.pump(pair.t_end() + 0.1) == 0.0);
    CHECK(pair.stokes(-4.1) == 0.0);
  }
}

TEST_CASE("design reports insufficient area") {
  try {
    design_local_adiabatic_pair(Gaussian{1.0, 1.0}, 0.05, 1.0 / 64, -1.0, 1.0);
    FAIL("expected InsufficientArea");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientArea);
  }
}

TEST_CASE("tailored pair switches on together") {
  const PulsePair pair = tailored_pair(5.0, 1.5);
  for (double t = -4.0; t <= 0.0; t += 0.25) CHECK(pair.stokes(t) == doctest::Approx(pair.pump(t)));
  CHECK(pair.t_end() == 5.5);
  CHECK(pair.pump(1.0) == 5.0);
}

TEST_CASE("pulse CSV round trip") {
  const PulsePair pair = tailored_pair(5.0, 1.5);
  const SampledPulse s = sample_envelope(pair, Envelope::Stokes, 200);
  std::stringstream buf;
  write_pulse_csv(buf, s);
  CHECK(buf.str().rfind("time,envelope\n", 0) == 0);
  const SampledPulse back = read_pulse_csv(buf);
  REQUIRE(back.values.size() == s.values.size());
  for (std::size_t k = 0; k < s.values.size(); ++k) CHECK(back.values[k] == doctest::Approx(s.values[k]).epsilon(1e-14));
  CHECK(back.dt == doctest::Approx(s.dt).epsilon(1e-12));

  std::stringstream bad("time,envelope\n0,1\n1,1\n3,1\n");
  CHECK_THROWS_AS(read_pulse_csv(bad), Error);
}
