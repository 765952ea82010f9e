#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "grover/analytics.hpp"
#include "grover/core.hpp"
#include "grover/hamiltonians.hpp"
#include "grover/propagator.hpp"
#include "grover/pulses.hpp"

namespace grover {

// Smallest N <= 2^20 with f = M/N exactly (to 1e-12).
SearchProblem problem_from_fraction(double f, double cavity_coupling = 10.0,
                                    double detuning = 50.0);

// ---------------------------------------------------------------------------
// Calibration

struct CalibrationOptions {
  double target = 0.99;
  double tolerance = 1e-4;     // stop when |P_m - target| <= tolerance
  double min_width = 1e-6;     // or when the bracket is narrower than this
  double bracket_low = 1.0;
  double bracket_cap = 65536.0;
  int prescan_points = 8;
  int max_iterations = 200;
  int min_steps = 20000;
  double steps_per_radian = 1.0;  // steps >= window * Omega_0 * this
  double width = 1.0;
  double lead = 4.0;
  double tail = 4.0;
};

struct CalibrationResult {
  double omega0T = 0.0;
  double achieved_fidelity = 0.0;
  int iterations = 0;
  std::array<double, 2> bracket{0.0, 0.0};
  bool non_monotone = false;  // the pre-scan saw more than one crossing
  int n_steps = 0;
};

// Final P_m of the Effective3 model driven by the tailored pair.
double tailored_final_fidelity(double f, double alpha, double omega0T,
                               const CalibrationOptions& options = {});
int tailored_steps(double alpha, double omega0T, const CalibrationOptions& options);

// Bisection on Omega_0 T for the tailored scheme.
CalibrationResult calibrate_amplitude(double f, double alpha,
                                      const CalibrationOptions& options = {});

// Locally adiabatic design: eps is fixed from the target through the P_0
// bound, Omega_0 T then follows from the area relation for a Gaussian
// truncated to [-lead, tail]. The achieved fidelity is checked numerically.
double epsilon_for_target(double target);
CalibrationResult calibrate_local_adiabatic(double f, const CalibrationOptions& options = {});

// ---------------------------------------------------------------------------
// Scaling fits

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS
};

// Ordinary least squares; needs >= 2 distinct abscissae.
LineFit ols_fit(const std::vector<double>& x, const std::vector<double>& y);

enum class Design { LocalAdiabatic, Tailored };

struct ScalingPoint {
  double f = 0.0;
  double x = 0.0;  // ln(1/f)
  double y = 0.0;  // ln(Omega_0 T); ln(cap) when censored
  bool censored = false;
  CalibrationResult calibration;
};

struct ScalingFit {
  std::vector<ScalingPoint> points;  // ordered by decreasing f
  double beta = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  bool monotone = true;  // Omega_0 T* strictly increasing as f decreases
  // Points whose calibration hit the bracket cap enter the fit at ln(cap).
  // When the OLS weights allow it, `beta` is then a rigorous lower bound on
  // the slope any larger (monotone) values would give.
  int censored = 0;
  bool lower_bound_valid = true;
  std::vector<std::string> warnings;
};

enum class Execution { Serial, Parallel };

// Thread cap for sweep jobs: GROVER_LAB_THREADS if set and positive, else the
// OpenMP default.
int sweep_threads();

// Runs `job(i)` for i in [0, n). Results land in input order; the first
// exception (in input order) is rethrown after all jobs finish.
void parallel_for_jobs(int n, const std::function<void(int)>& job, Execution execution);

ScalingFit fit_scaling(std::vector<ScalingPoint> points, double cap);

ScalingFit scaling_sweep(const std::vector<double>& f_list, Design design, double alpha,
                         const CalibrationOptions& options = {},
                         Execution execution = Execution::Parallel);

struct AlphaRow {
  double alpha = 0.0;
  ScalingFit fit;
};

std::vector<AlphaRow> alpha_sweep(const std::vector<double>& alpha_list,
                                  const std::vector<double>& f_list,
                                  const CalibrationOptions& options = {},
                                  Execution execution = Execution::Parallel);

// Default sweep grid f = 2^-k for k in [k_first, k_last].
std::vector<double> dyadic_fractions(int k_first, int k_last);

// ---------------------------------------------------------------------------
// Model hierarchy

struct ConsistencyOptions {
  int n_steps = 20000;
  int register_max_atoms = 32;
  int correction_samples = 2001;
};

struct ConsistencyRow {
  int n_atoms = 0;
  int n_marked = 0;
  double pm_effective = 0.0;
  double pm_collective = 0.0;
  std::optional<double> pm_register;
  double delta_effective = 0.0;  // |P_m(Effective3) - P_m(Collective5)| at t_f
  std::optional<double> delta_register;
  double max_correction = 0.0;   // max partition-correction magnitude on [t_i, t_f]
};

struct ConsistencyTable {
  double cavity_coupling = 0.0;
  std::vector<ConsistencyRow> rows;
  std::vector<std::string> warnings;
};

// M = marked_fraction * N must be a positive integer for every N.
ConsistencyTable model_consistency(const std::vector<int>& n_list, double marked_fraction,
                                   double cavity_coupling, const PulsePair& pair,
                                   const ConsistencyOptions& options = {},
                                   Execution execution = Execution::Parallel);

// ---------------------------------------------------------------------------
// Feasibility

struct FeasibilityResult {
  double ratio = 0.0;  // (Omega_0 T)^2 / (Gamma T)
  double threshold = 100.0;
  bool pass = false;  // ratio >= threshold
};

FeasibilityResult feasibility_check(double omega0, double width, double gamma,
                                    double threshold = 100.0);

// ---------------------------------------------------------------------------
// Scenarios

struct PulseConfig {
  Design design = Design::LocalAdiabatic;
  double epsilon = 0.05;
  // Omega_0 T. Zero selects the area relation (locally adiabatic) or a
  // calibration against `target` (tailored).
  double omega0T = 0.0;
  double alpha = 1.5;
  double width = 1.0;
  double lead = 4.0;
  double tail = 4.0;
  double target = 0.99;
};

struct ScenarioConfig {
  std::string name = "scenario";
  SearchProblem problem{8, 3};
  ModelTier tier = ModelTier::Effective3;
  bool rwa = true;
  PulseConfig pulses;
  int n_steps = 20000;
  int sample_stride = 10;
  int pulse_samples = 2000;
};

struct ScenarioComparison {
  double max_pm_gap = 0.0;  // max over samples |P_m(numeric) - P_m(closed form)|
  double final_pm_gap = 0.0;
  double final_pm_analytic = 0.0;
  double max_pe_numeric = 0.0;
  double min_p0_numeric = 1.0;
  std::vector<double> theta;
  std::vector<double> tau;
  std::vector<AnalyticPopulations> analytic;
  DiscrepancyReport report;
};

struct ScenarioResult {
  ScenarioConfig config;
  PulsePair pair;
  double omega0T = 0.0;
  std::optional<CalibrationResult> calibration;
  Trajectory trajectory;
  PopulationSeries populations;
  std::optional<ScenarioComparison> comparison;  // locally adiabatic runs only
};

PulsePair build_pair(const PulseConfig& pulses, double f, double* omega0T = nullptr,
                     std::optional<CalibrationResult>* calibration = nullptr);

ScenarioResult run_scenario(const ScenarioConfig& config);

// Writes <name>_trajectory.csv, <name>_pump.csv, <name>_stokes.csv,
// <name>_analytic.csv (locally adiabatic runs) and <name>_summary.json.
std::vector<std::filesystem::path> write_scenario_artifacts(const ScenarioResult& result,
                                                            const std::filesystem::path& dir);

}  // namespace grover
