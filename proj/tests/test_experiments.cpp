#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "grover/experiments.hpp"

using namespace grover;

TEST_CASE("problem from fraction") {
  const SearchProblem p = problem_from_fraction(0.375);
  CHECK(p.n_atoms() == 8);
  CHECK(p.n_marked() == 3);
  CHECK(problem_from_fraction(1.0 / 64).n_atoms() == 64);
  CHECK_THROWS_AS(problem_from_fraction(0.0), Error);
  CHECK(problem_from_fraction(1.0).n_marked() == 1);
  CHECK_THROWS_AS(problem_from_fraction(1.5), Error);
}

TEST_CASE("tailored calibration reaches the target") {
  const CalibrationResult c = calibrate_amplitude(0.125, 1.5);
  CHECK(std::abs(c.achieved_fidelity - 0.99) <= 1e-4);
  // Independent re-evaluation at the returned amplitude.
  CHECK(tailored_final_fidelity(0.125, 1.5, c.omega0T) ==
        doctest::Approx(c.achieved_fidelity).epsilon(1e-12));
  CHECK(c.bracket[0] <= c.omega0T);
  CHECK(c.omega0T <= c.bracket[1]);
  CHECK(c.n_steps >= 20000);

  const CalibrationResult easier = calibrate_amplitude(0.375, 1.5);
  CHECK(easier.omega0T < c.omega0T);
}

TEST_CASE("calibration rejects bad targets") {
  CalibrationOptions o;
  o.target = 0.0;
  CHECK_THROWS_AS(calibrate_amplitude(0.125, 1.5, o), Error);
  o.target = 1.0;
  CHECK_THROWS_AS(calibrate_amplitude(0.125, 1.5, o), Error);
}

TEST_CASE("calibration without a crossing below the cap") {
  CalibrationOptions o;
  o.bracket_cap = 4.0;
  try {
    calibrate_amplitude(1.0 / 64, 1.5, o);
    FAIL("expected NoBracket");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoBracket);
  }
}

TEST_CASE("locally adiabatic calibration") {
  CHECK(epsilon_for_target(0.99) == doctest::Approx(std::sqrt((1 - 0.99499) / (1 + 0.99499))).epsilon(1e-4));
  const double eps = epsilon_for_target(0.99);
  CHECK(std::pow((1 - eps * eps) / (1 + eps * eps), 2) == doctest::Approx(0.99).epsilon(1e-12));
  const CalibrationResult c = calibrate_local_adiabatic(0.125);
  CHECK(c.achieved_fidelity >= 0.99 - 1e-4);
  CHECK(c.omega0T == doctest::Approx(std::sqrt(7.0) / eps / std::sqrt(M_PI)).epsilon(1e-6));
}

TEST_CASE("ordinary least squares") {
  const LineFit two = ols_fit({1.0, 3.0}, {2.0, 5.0});
  CHECK(two.slope == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(two.intercept == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(two.residual <= 1e-12);

  const LineFit three = ols_fit({0.0, 1.0, 2.0}, {0.0, 1.0, 4.0});
  CHECK(three.slope == doctest::Approx(2.0));
  CHECK(three.intercept == doctest::Approx(-1.0 / 3.0));

  CHECK_THROWS_AS(ols_fit({1.0}, {1.0}), Error);
  CHECK_THROWS_AS(ols_fit({2.0, 2.0}, {1.0, 3.0}), Error);
}

TEST_CASE("scaling sweep input checks") {
  try {
    scaling_sweep({0.25, 0.25, 0.125}, Design::Tailored, 1.5);
    FAIL("expected DuplicatePoints");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicatePoints);
  }
  CHECK_THROWS_AS(scaling_sweep({0.5, 0.25}, Design::Tailored, 1.5), Error);
}

ScalingPoint make_point(double f, double y, bool censored) {
  ScalingPoint p;
  p.f = f;
  p.x = std::log(1.0 / f);
  p.y = y;
  p.censored = censored;
  return p;
}

TEST_CASE("censored fit is a lower bound") {
  const double cap = std::exp(2.5);
  std::vector<ScalingPoint> pts;
  for (int k = 1; k <= 5; ++k) {
    const double f = std::ldexp(1.0, -k);
    const double y = 1.0 + 0.6 * std::log(1.0 / f);
    pts.push_back(make_point(f, std::min(y, 2.5), y >= 2.5));
  }
  const ScalingFit fit = fit_scaling(pts, cap);
  CHECK(fit.censored == 2);
  CHECK(fit.lower_bound_valid);
  CHECK(fit.beta < 0.6);
  CHECK(!fit.warnings.empty());

  // Raising a censored point above the cap can only increase the slope.
  std::vector<ScalingPoint> raised = fit.points;
  raised.back().y += 1.0;
  raised.back().censored = false;
  CHECK(fit_scaling(raised, cap).beta > fit.beta);
}

TEST_CASE("exact power law is recovered") {
  std::vector<ScalingPoint> pts;
  for (int k = 1; k <= 6; ++k) {
    const double f = std::ldexp(1.0, -k);
    pts.push_back(make_point(f, 0.3 + 0.5 * std::log(1.0 / f), false));
  }
  const ScalingFit fit = fit_scaling(pts, 1e9);
  CHECK(fit.beta == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(fit.monotone);
  CHECK(fit.censored == 0);
}

TEST_CASE("sweeps are deterministic and thread-independent") {
  const std::vector<double> fs = dyadic_fractions(1, 3);
  REQUIRE(fs.size() == 3);
  CHECK(fs[2] == 0.125);
  const ScalingFit a = scaling_sweep(fs, Design::Tailored, 1.5, {}, Execution::Serial);
  const ScalingFit b = scaling_sweep(fs, Design::Tailored, 1.5, {}, Execution::Parallel);
  const ScalingFit c = scaling_sweep(fs, Design::Tailored, 1.5, {}, Execution::Parallel);
  CHECK(a.beta == b.beta);
  CHECK(b.beta == c.beta);
  for (size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].y == b.points[i].y);
  }
  CHECK(a.monotone);
  CHECK(a.beta > 0.0);
}

TEST_CASE("parallel job runner rethrows in input order") {
  std::vector<int> out(16, 0);
  parallel_for_jobs(16, [&](int i) { out[i] = i * i; }, Execution::Parallel);
  for (int i = 0; i < 16; ++i) CHECK(out[i] == i * i);
  try {
    parallel_for_jobs(
        8,
        [](int i) {
          if (i == 3) throw Error(ErrorCode::InvalidArgument, "three");
          if (i == 6) throw Error(ErrorCode::OutOfRange, "six");
        },
        Execution::Parallel);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("feasibility") {
  const FeasibilityResult ok = feasibility_check(1e10, 1e-8, 1e7);
  CHECK(ok.ratio == doctest::Approx(1e5));
  CHECK(ok.pass);
  const FeasibilityResult edge = feasibility_check(1e9, 1e-8, 1e8);
  CHECK(edge.ratio == doctest::Approx(100.0));
  CHECK(edge.pass);
  const FeasibilityResult low = feasibility_check(1e8, 1e-8, 1e8);
  CHECK(low.ratio == doctest::Approx(1.0));
  CHECK(!low.pass);
  CHECK_THROWS_AS(feasibility_check(0.0, 1e-8, 1e7), Error);
  CHECK_THROWS_AS(feasibility_check(1e10, 1e-8, -1.0), Error);
}

TEST_CASE("model hierarchy converges with N and G") {
  const PulsePair pair = tailored_pair(1.0, 1.5);
  ConsistencyOptions o;
  o.n_steps = 8000;
  const ConsistencyTable t10 = model_consistency({4, 16}, 0.25, 10.0, pair, o);
  REQUIRE(t10.rows.size() == 2);
  const double n_ratio = t10.rows[0].delta_effective / t10.rows[1].delta_effective;
  CHECK(n_ratio >= 2.0);
  CHECK(n_ratio <= 8.0);
  const double c_ratio = t10.rows[0].max_correction / t10.rows[1].max_correction;
  CHECK(c_ratio == doctest::Approx(4.0).epsilon(0.1));
  REQUIRE(t10.rows[0].delta_register);
  CHECK(*t10.rows[0].delta_register <= 1e-9);

  const ConsistencyTable t20 = model_consistency({16}, 0.25, 20.0, pair, o);
  const double g_ratio = t10.rows[1].delta_effective / t20.rows[0].delta_effective;
  CHECK(g_ratio >= 2.0);
  CHECK(g_ratio <= 8.0);

  CHECK_THROWS_AS(model_consistency({6}, 0.25, 10.0, pair, o), Error);
}

TEST_CASE("scenario runs") {
  ScenarioConfig sc;
  sc.n_steps = 0;
  CHECK_THROWS_AS(run_scenario(sc), Error);

  sc.n_steps = 20000;
  sc.sample_stride = 100;
  const ScenarioResult r = run_scenario(sc);
  CHECK(r.populations.size() == 201);
  CHECK(r.populations.column("P_m").back() >= 0.99);
  REQUIRE(r.comparison);

  const auto dir = std::filesystem::temp_directory_path() / "grover_scenario_test";
  std::filesystem::remove_all(dir);
  const auto files = write_scenario_artifacts(r, dir);
  CHECK(files.size() == 5);
  for (const auto& f : files) CHECK(std::filesystem::file_size(f) > 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("tailored scenario calibrates on demand") {
  ScenarioConfig sc;
  sc.problem = SearchProblem(8, 1);
  sc.pulses.design = Design::Tailored;
  sc.sample_stride = 200;
  const ScenarioResult r = run_scenario(sc);
  REQUIRE(r.calibration);
  CHECK(r.omega0T == r.calibration->omega0T);
  CHECK(!r.comparison);
  CHECK(std::abs(r.populations.column("P_m").back() - 0.99) <= 2e-4);
}
