#include "grover/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <numbers>

#include "grover/json_io.hpp"

namespace grover {

namespace {

void check_fraction(double f) {
  if (!(f > 0.0 && f < 1.0)) {
    throw Error(ErrorCode::DegenerateFraction, "fraction must lie in (0, 1)");
  }
}

void check_target(double target) {
  if (!(target > 0.0 && target < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "target fidelity must lie in (0, 1)");
  }
}

// Area of exp(-(t/T)^2) over [-lead T, tail T] for T = 1.
double truncated_gaussian_area(double lead, double tail) {
  return 0.5 * std::sqrt(std::numbers::pi) * (std::erf(lead) + std::erf(tail));
}

double final_marked_population(const HamiltonianProvider& provider, const TimeGrid& grid) {
  const StateVector psi0 = uniform_initial_state(provider.basis(), provider.problem());
  const Trajectory traj = propagate(provider, psi0, grid, grid.n_steps());
  return populations(traj, provider.problem()).column("P_m").back();
}

std::vector<double> validated_fractions(const std::vector<double>& f_list) {
  if (f_list.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "a scaling sweep needs >= 3 fractions");
  }
  std::vector<double> sorted = f_list;
  for (double f : sorted) check_fraction(f);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::DuplicatePoints, "fraction list contains duplicates");
  }
  return sorted;
}

// NoBracket becomes a censored point; every other failure propagates.
ScalingPoint calibrate_point(double f, Design design, double alpha,
                             const CalibrationOptions& options) {
  ScalingPoint p;
  p.f = f;
  p.x = std::log(1.0 / f);
  try {
    p.calibration = design == Design::Tailored ? calibrate_amplitude(f, alpha, options)
                                               : calibrate_local_adiabatic(f, options);
    p.y = std::log(p.calibration.omega0T);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoBracket) throw;
    p.censored = true;
    p.y = std::log(options.bracket_cap);
  }
  return p;
}

}  // namespace

SearchProblem problem_from_fraction(double f, double cavity_coupling, double detuning) {
  if (!(f > 0.0 && f <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "fraction must lie in (0, 1]");
  }
  for (int n = 1; n <= (1 << 20); ++n) {
    const double m = std::round(f * n);
    if (m >= 1.0 && std::abs(m / n - f) <= 1e-12) {
      return SearchProblem(n, static_cast<int>(m), cavity_coupling, detuning);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "fraction is not a ratio with denominator <= 2^20");
}

// ---------------------------------------------------------------------------

int tailored_steps(double alpha, double omega0T, const CalibrationOptions& options) {
  const double radians = (options.lead + alpha + options.tail) * omega0T;
  const double wanted = std::ceil(radians * options.steps_per_radian);
  return std::max(options.min_steps, static_cast<int>(std::min(wanted, 1e9)));
}

double tailored_final_fidelity(double f, double alpha, double omega0T,
                               const CalibrationOptions& options) {
  const PulsePair pair = tailored_pair(omega0T / options.width, alpha, options.width,
                                       options.lead, options.tail);
  const HamiltonianProvider provider(ModelTier::Effective3, problem_from_fraction(f), pair);
  const TimeGrid grid(pair.t_start(), pair.t_end(), tailored_steps(alpha, omega0T, options));
  return final_marked_population(provider, grid);
}

CalibrationResult calibrate_amplitude(double f, double alpha, const CalibrationOptions& options) {
  check_fraction(f);
  check_target(options.target);
  if (!(alpha >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 0");
  const double target = options.target;
  auto fidelity = [&](double w) { return tailored_final_fidelity(f, alpha, w, options); };

  double lo = options.bracket_low;
  if (fidelity(lo) >= target) {
    throw Error(ErrorCode::NoBracket, "target already met at the lower bracket end");
  }
  double hi = 2.0 * lo;
  while (fidelity(hi) < target) {
    hi *= 2.0;
    if (hi > options.bracket_cap) {
      throw Error(ErrorCode::NoBracket, "target fidelity not reached for Omega_0 T <= cap");
    }
  }

  CalibrationResult result;
  // Coarse log-spaced pre-scan; take the largest upward crossing.
  const int n = std::max(2, options.prescan_points);
  std::vector<double> xs(n);
  std::vector<bool> above(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = i == 0 ? lo : i == n - 1 ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    above[i] = i == 0 ? false : i == n - 1 ? true : fidelity(xs[i]) >= target;
  }
  int changes = 0;
  int last = 0;
  for (int i = 0; i + 1 < n; ++i) {
    if (above[i] != above[i + 1]) ++changes;
    if (!above[i] && above[i + 1]) last = i;
  }
  result.non_monotone = changes > 1;
  double a = xs[last];
  double b = xs[last + 1];

  double best = b;
  double best_p = fidelity(b);
  while (result.iterations < options.max_iterations) {
    const double mid = 0.5 * (a + b);
    const double p = fidelity(mid);
    ++result.iterations;
    if (std::abs(p - target) < std::abs(best_p - target)) {
      best = mid;
      best_p = p;
    }
    if (std::abs(p - target) <= options.tolerance) {
      best = mid;
      best_p = p;
      break;
    }
    (p < target ? a : b) = mid;
    if (b - a < options.min_width) break;
  }
  result.omega0T = best;
  result.achieved_fidelity = best_p;
  result.bracket = {a, b};
  result.n_steps = tailored_steps(alpha, best, options);
  return result;
}

double epsilon_for_target(double target) {
  check_target(target);
  const double r = std::sqrt(target);
  return std::sqrt((1.0 - r) / (1.0 + r));
}

CalibrationResult calibrate_local_adiabatic(double f, const CalibrationOptions& options) {
  check_fraction(f);
  PulseConfig pulses;
  pulses.design = Design::LocalAdiabatic;
  pulses.epsilon = epsilon_for_target(options.target);
  pulses.width = options.width;
  pulses.lead = options.lead;
  pulses.tail = options.tail;
  double omega0T = 0.0;
  const PulsePair pair = build_pair(pulses, f, &omega0T);
  const HamiltonianProvider provider(ModelTier::Effective3, problem_from_fraction(f), pair);
  const double radians = (pair.t_end() - pair.t_start()) * omega0T / options.width;
  const int steps = std::max(options.min_steps,
                             static_cast<int>(std::ceil(radians * options.steps_per_radian)));
  CalibrationResult result;
  result.omega0T = omega0T;
  result.achieved_fidelity =
      final_marked_population(provider, TimeGrid(pair.t_start(), pair.t_end(), steps));
  result.bracket = {omega0T, omega0T};
  result.n_steps = steps;
  return result;
}

// ---------------------------------------------------------------------------

LineFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "least squares needs >= 2 paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::DuplicatePoints, "abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

ScalingFit fit_scaling(std::vector<ScalingPoint> points, double cap) {
  std::sort(points.begin(), points.end(),
            [](const ScalingPoint& a, const ScalingPoint& b) { return a.f > b.f; });
  ScalingFit out;
  std::vector<double> x, y;
  for (const auto& p : points) {
    x.push_back(p.x);
    y.push_back(p.y);
    if (p.censored) ++out.censored;
  }
  const LineFit line = ols_fit(x, y);
  out.beta = line.slope;
  out.intercept = line.intercept;
  out.residual = line.residual;

  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!points[i].censored && !points[i + 1].censored && !(points[i + 1].y > points[i].y)) {
      out.monotone = false;
    }
    if (points[i].censored && !points[i + 1].censored) out.monotone = false;
  }
  if (!out.monotone) {
    out.warnings.push_back("Omega_0 T* is not strictly increasing as f decreases");
  }

  if (out.censored > 0) {
    // beta = sum_i w_i y_i with w_i = (x_i - mean) / Sxx. Raising a censored
    // suffix monotonically cannot lower beta while every suffix sum of w over
    // it is non-negative.
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double sxx = 0.0;
    for (double v : x) sxx += (v - mean) * (v - mean);
    double suffix = 0.0;
    for (std::size_t i = points.size(); i-- > 0;) {
      if (!points[i].censored) break;
      suffix += (x[i] - mean) / sxx;
      if (suffix < 0.0) out.lower_bound_valid = false;
    }
    const bool suffix_only = std::all_of(points.end() - out.censored, points.end(),
                                         [](const ScalingPoint& p) { return p.censored; });
    if (!suffix_only) out.lower_bound_valid = false;
    out.warnings.push_back(std::to_string(out.censored) +
                           " point(s) censored at Omega_0 T = " + std::to_string(cap) +
                           (out.lower_bound_valid ? "; beta is a lower bound"
                                                  : "; beta is not a rigorous bound"));
  }
  out.points = std::move(points);
  return out;
}

int sweep_threads() {
  if (const char* env = std::getenv("GROVER_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return omp_get_max_threads();
}

void parallel_for_jobs(int n, const std::function<void(int)>& job, Execution execution) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(std::max(n, 0)));
  if (execution == Execution::Serial || n < 2) {
    for (int i = 0; i < n; ++i) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
#pragma omp parallel for schedule(dynamic, 1) num_threads(sweep_threads())
    for (int i = 0; i < n; ++i) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

ScalingFit scaling_sweep(const std::vector<double>& f_list, Design design, double alpha,
                         const CalibrationOptions& options, Execution execution) {
  const std::vector<double> fs = validated_fractions(f_list);
  std::vector<ScalingPoint> points(fs.size());
  parallel_for_jobs(
      static_cast<int>(fs.size()),
      [&](int i) { points[i] = calibrate_point(fs[i], design, alpha, options); }, execution);
  return fit_scaling(std::move(points), options.bracket_cap);
}

std::vector<AlphaRow> alpha_sweep(const std::vector<double>& alpha_list,
                                  const std::vector<double>& f_list,
                                  const CalibrationOptions& options, Execution execution) {
  const std::vector<double> fs = validated_fractions(f_list);
  for (double a : alpha_list) {
    if (!(a >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 0");
  }
  const int n_f = static_cast<int>(fs.size());
  const int n_jobs = static_cast<int>(alpha_list.size()) * n_f;
  std::vector<ScalingPoint> points(static_cast<std::size_t>(n_jobs));
  // Largest amplitudes first so the slowest jobs do not trail.
  std::vector<int> order(n_jobs);
  for (int i = 0; i < n_jobs; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return fs[a % n_f] < fs[b % n_f]; });
  parallel_for_jobs(
      n_jobs,
      [&](int j) {
        const int i = order[j];
        points[i] = calibrate_point(fs[i % n_f], Design::Tailored, alpha_list[i / n_f], options);
      },
      execution);

  std::vector<AlphaRow> rows;
  for (std::size_t a = 0; a < alpha_list.size(); ++a) {
    std::vector<ScalingPoint> mine(points.begin() + a * n_f, points.begin() + (a + 1) * n_f);
    rows.push_back({alpha_list[a], fit_scaling(std::move(mine), options.bracket_cap)});
  }
  return rows;
}

std::vector<double> dyadic_fractions(int k_first, int k_last) {
  if (k_first < 1 || k_last < k_first || k_last > 30) {
    throw Error(ErrorCode::InvalidArgument, "dyadic grid needs 1 <= k_first <= k_last <= 30");
  }
  std::vector<double> out;
  for (int k = k_first; k <= k_last; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

// ---------------------------------------------------------------------------

ConsistencyTable model_consistency(const std::vector<int>& n_list, double marked_fraction,
                                   double cavity_coupling, const PulsePair& pair,
                                   const ConsistencyOptions& options, Execution execution) {
  if (!(cavity_coupling > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "cavity coupling must be > 0");
  }
  std::vector<SearchProblem> problems;
  for (int n : n_list) {
    const double m = marked_fraction * n;
    if (n < 2 || std::abs(m - std::round(m)) > 1e-9 || std::round(m) < 1.0 ||
        std::round(m) > n) {
      throw Error(ErrorCode::InvalidCounts,
                  "marked fraction must give an integer M in [1, N] with N >= 2");
    }
    problems.emplace_back(n, static_cast<int>(std::round(m)), cavity_coupling);
  }

  ConsistencyTable table;
  table.cavity_coupling = cavity_coupling;
  table.rows.resize(problems.size());
  std::vector<std::string> warnings(problems.size());
  const TimeGrid grid(pair.t_start(), pair.t_end(), options.n_steps);

  parallel_for_jobs(
      static_cast<int>(problems.size()),
      [&](int i) {
        const SearchProblem& problem = problems[i];
        ConsistencyRow& row = table.rows[i];
        row.n_atoms = problem.n_atoms();
        row.n_marked = problem.n_marked();
        row.pm_effective = final_marked_population(
            HamiltonianProvider(ModelTier::Effective3, problem, pair), grid);
        row.pm_collective = final_marked_population(
            HamiltonianProvider(ModelTier::Collective5, problem, pair, true), grid);
        row.delta_effective = std::abs(row.pm_effective - row.pm_collective);
        if (problem.n_atoms() <= options.register_max_atoms) {
          row.pm_register = final_marked_population(
              HamiltonianProvider(ModelTier::FullRegister, problem, pair, true), grid);
          row.delta_register = std::abs(*row.pm_register - row.pm_collective);
        }
        double envelope = 0.0;
        const int samples = std::max(2, options.correction_samples);
        for (int k = 0; k < samples; ++k) {
          const double t =
              pair.t_start() + (pair.t_end() - pair.t_start()) * k / (samples - 1);
          envelope = std::max({envelope, pair.pump(t), pair.stokes(t)});
          row.max_correction =
              std::max(row.max_correction, partition_correction(t, problem, pair).magnitude);
        }
        if (std::sqrt(static_cast<double>(problem.n_atoms())) * cavity_coupling <
            5.0 * envelope) {
          warnings[i] = "N = " + std::to_string(problem.n_atoms()) +
                        ": sqrt(N) G is not large against the pulse envelope";
        }
      },
      execution);
  for (auto& w : warnings)
    if (!w.empty()) table.warnings.push_back(std::move(w));
  return table;
}

FeasibilityResult feasibility_check(double omega0, double width, double gamma, double threshold) {
  for (double v : {omega0, width, gamma, threshold}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::NonPositiveInput, "feasibility inputs must be finite and > 0");
    }
  }
  FeasibilityResult r;
  const double area = omega0 * width;
  r.ratio = area * area / (gamma * width);
  r.threshold = threshold;
  r.pass = r.ratio >= threshold;
  return r;
}

// ---------------------------------------------------------------------------

PulsePair build_pair(const PulseConfig& pulses, double f, double* omega0T,
                     std::optional<CalibrationResult>* calibration) {
  if (!(pulses.width > 0.0)) throw Error(ErrorCode::InvalidArgument, "pulse width must be > 0");
  double w0T = pulses.omega0T;
  if (pulses.design == Design::LocalAdiabatic) {
    if (!(pulses.epsilon > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0");
    }
    if (w0T <= 0.0) {
      w0T = area_duration_relation(pulses.epsilon, f) /
            truncated_gaussian_area(pulses.lead, pulses.tail);
    }
    if (omega0T) *omega0T = w0T;
    return design_local_adiabatic_pair(Gaussian{w0T / pulses.width, pulses.width},
                                       pulses.epsilon, f, -pulses.lead * pulses.width,
                                       pulses.tail * pulses.width);
  }
  if (w0T <= 0.0) {
    CalibrationOptions options;
    options.target = pulses.target;
    options.width = pulses.width;
    options.lead = pulses.lead;
    options.tail = pulses.tail;
    const CalibrationResult c = calibrate_amplitude(f, pulses.alpha, options);
    w0T = c.omega0T;
    if (calibration) *calibration = c;
  }
  if (omega0T) *omega0T = w0T;
  return tailored_pair(w0T / pulses.width, pulses.alpha, pulses.width, pulses.lead,
                       pulses.tail);
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  const DesignKind kind = config.pulses.design == Design::LocalAdiabatic
                              ? DesignKind::LocalAdiabatic
                              : DesignKind::Tailored;
  const SearchProblem problem = validate_problem(config.problem, kind);
  if (config.n_steps < 1) throw Error(ErrorCode::InvalidArgument, "grid needs >= 1 step");
  const double f = problem.fraction();

  double omega0T = 0.0;
  std::optional<CalibrationResult> calibration;
  PulsePair pair = build_pair(config.pulses, f, &omega0T, &calibration);
  const HamiltonianProvider provider(config.tier, problem, pair, config.rwa);
  const TimeGrid grid(pair.t_start(), pair.t_end(), config.n_steps);
  Trajectory traj = propagate(provider, uniform_initial_state(provider.basis(), problem), grid,
                              config.sample_stride);
  PopulationSeries pops = populations(traj, problem);

  std::optional<ScenarioComparison> comparison;
  if (const auto* la = std::get_if<LocalAdiabatic>(&pair.design())) {
    ScenarioComparison cmp;
    const std::vector<double> taus = tau_series(f, pair, grid);
    const CollectiveVectors proj = tier_projectors(provider.basis(), problem);
    const Eigen::VectorXcd gm = proj.vectors[proj.index_of("g_m")].cast<cplx>();
    const Eigen::VectorXcd gu = proj.vectors[proj.index_of("g_u")].cast<cplx>();
    const auto& pm = pops.column("P_m");
    const auto& pe = pops.column("P_eperp");
    for (std::size_t s = 0; s < traj.states.size(); ++s) {
      const double t = traj.times[s];
      const double theta = mixing_angle(pair.pump(t), pair.stokes(t), f);
      const double tau = taus[traj.sample_steps[s]];
      const AnalyticPopulations a = analytic_populations(theta, tau, la->effective_epsilon);
      const cplx dark = std::cos(theta) * gm.dot(traj.states[s]) -
                        std::sin(theta) * gu.dot(traj.states[s]);
      cmp.theta.push_back(theta);
      cmp.tau.push_back(tau);
      cmp.analytic.push_back(a);
      cmp.max_pm_gap = std::max(cmp.max_pm_gap, std::abs(pm[s] - a.pm));
      cmp.max_pe_numeric = std::max(cmp.max_pe_numeric, pe[s]);
      cmp.min_p0_numeric = std::min(cmp.min_p0_numeric, std::norm(dark));
    }
    cmp.final_pm_analytic = cmp.analytic.back().pm;
    cmp.final_pm_gap = std::abs(pm.back() - cmp.final_pm_analytic);
    cmp.report = discrepancy_report(la->effective_epsilon, taus.back());
    comparison = std::move(cmp);
  }

  return ScenarioResult{config, std::move(pair), omega0T, calibration, std::move(traj),
                        std::move(pops), std::move(comparison)};
}

std::vector<std::filesystem::path> write_scenario_artifacts(const ScenarioResult& result,
                                                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string& name = result.config.name;
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::string& suffix) {
    written.push_back(dir / (name + suffix));
    std::ofstream out(written.back(), std::ios::binary);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + written.back().string());
    return out;
  };

  {
    auto out = open("_trajectory.csv");
    write_trajectory_csv(out, result.populations);
  }
  {
    auto out = open("_pump.csv");
    write_pulse_csv(out, sample_envelope(result.pair, Envelope::Pump, result.config.pulse_samples));
  }
  {
    auto out = open("_stokes.csv");
    write_pulse_csv(out,
                    sample_envelope(result.pair, Envelope::Stokes, result.config.pulse_samples));
  }
  if (result.comparison) {
    auto out = open("_analytic.csv");
    write_analytic_csv(out, result);
  }
  {
    auto out = open("_summary.json");
    out << scenario_summary(result).dump(2) << '\n';
  }
  return written;
}

}  // namespace grover
