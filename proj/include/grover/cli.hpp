#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "grover/experiments.hpp"

namespace grover::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kNumericalError = 3,
};

struct Overrides {
  std::optional<std::string> fraction;  // "M/N" or a decimal
  std::optional<double> epsilon;
  std::optional<double> alpha;
  std::optional<std::string> tier;
  std::optional<bool> rwa;
  std::optional<std::string> out;
};

struct RunConfig {
  std::string name = "run";
  ScenarioConfig scenario;
  CalibrationOptions calibration;
  Design sweep_design = Design::Tailored;
  std::vector<double> f_list = dyadic_fractions(1, 6);
  std::vector<double> alpha_list{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  std::vector<int> n_list{4, 16, 64};
  double marked_fraction = 0.25;
  int consistency_steps = 20000;
  double omega0 = 1e10;  // 1/s
  double pulse_width = 1e-8;  // s
  double gamma = 1e7;    // 1/s
  double threshold = 100.0;
  std::filesystem::path out_dir = "results";
};

// Parses the JSON config (sections problem, pulses, grid, experiment and the
// key `name`) and applies the overrides. Throws Error(ConfigError).
RunConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});
RunConfig parse_config(const std::string& text, const Overrides& overrides = {});

// Maps a library error to the process exit code.
int exit_code_for(ErrorCode code);

int run(int argc, char** argv);

}  // namespace grover::cli
