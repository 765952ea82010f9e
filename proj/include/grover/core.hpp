#pragma once

// Shared domain types for the cavity-laser-atom search model.
//
// Units: hbar = 1, time in units of the pulse width T, frequencies in 1/T.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace grover {

using cplx = std::complex<double>;

enum class ErrorCode {
  InvalidCounts,
  DegenerateFraction,
  InvalidArgument,
  BackwardInterval,
  OutOfRange,
  InsufficientArea,
  UndefinedAngle,
  DegenerateDenominator,
  NormDriftExceeded,
  DimensionMismatch,
  NoBracket,
  DuplicatePoints,
  NonPositiveInput,
  ConfigError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class DesignKind { LocalAdiabatic, Tailored, Explicit };

class SearchProblem {
 public:
  SearchProblem(int n_atoms, int n_marked, double cavity_coupling = 10.0,
                double detuning = 50.0);

  int n_atoms() const noexcept { return n_atoms_; }
  int n_marked() const noexcept { return n_marked_; }
  int n_unmarked() const noexcept { return n_atoms_ - n_marked_; }
  // Always derived from the counts.
  double fraction() const noexcept {
    return static_cast<double>(n_marked_) / n_atoms_;
  }
  double cavity_coupling() const noexcept { return cavity_coupling_; }
  double detuning() const noexcept { return detuning_; }

 private:
  int n_atoms_;
  int n_marked_;
  double cavity_coupling_;
  double detuning_;
};

// Checks the register-size invariant (N >= 2) and, for local-adiabatic
// designs, that f < 1 (the pulse ratio divides by sqrt(1 - f)).
SearchProblem validate_problem(const SearchProblem& problem, DesignKind design);

enum class ModelTier { Effective3, Collective5, FullRegister };

const char* to_string(ModelTier tier);
ModelTier parse_tier(const std::string& name);

// Basis conventions:
//   Effective3   = (|g'_m,0>, |g'_u,0>, |e_perp,0>)
//   Collective5  = (|g'_m,0>, |g'_u,0>, |e_m,0>, |e_u,0>, |g,1>)
//   FullRegister = (|g'_1..N,0>, |e_1..N,0>, |g,1>), marked atoms first.
struct BasisTag {
  ModelTier tier = ModelTier::Effective3;
  int n_atoms = 0;
  int n_marked = 0;

  static BasisTag effective() { return {ModelTier::Effective3, 0, 0}; }
  static BasisTag collective() { return {ModelTier::Collective5, 0, 0}; }
  static BasisTag full_register(int n_atoms, int n_marked) {
    return {ModelTier::FullRegister, n_atoms, n_marked};
  }

  int dimension() const;
  bool operator==(const BasisTag&) const = default;
};

enum class Level {
  MarkedGround,     // |g'_m,0>
  UnmarkedGround,   // |g'_u,0>
  ExcitedPerp,      // |e_perp,0>
  MarkedExcited,    // |e_m,0>
  UnmarkedExcited,  // |e_u,0>
  CavityPhoton,     // |g,1>
  AtomGround,       // |g'_j,0>
  AtomExcited,      // |e_j,0>
};

struct BasisLabel {
  Level level;
  int atom = 0;  // 1-based atom index for AtomGround / AtomExcited

  bool operator==(const BasisLabel&) const = default;
};

BasisLabel basis_label(const BasisTag& tag, int index);
int basis_index(const BasisTag& tag, const BasisLabel& label);
std::string to_string(const BasisLabel& label);

class StateVector {
 public:
  StateVector(BasisTag tag, Eigen::VectorXcd amplitudes);

  const BasisTag& basis() const noexcept { return tag_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  int dimension() const { return static_cast<int>(amplitudes_.size()); }

 private:
  BasisTag tag_;
  Eigen::VectorXcd amplitudes_;
};

// The uniform superposition |g',0> = sqrt(f)|g'_m,0> + sqrt(1-f)|g'_u,0>
// expressed in the given basis. For Effective3/Collective5 the fraction is
// taken from `problem`.
StateVector uniform_initial_state(const BasisTag& tag, const SearchProblem& problem);

class TimeGrid {
 public:
  TimeGrid(double t_start, double t_end, int n_steps);

  double t_start() const noexcept { return t_start_; }
  double t_end() const noexcept { return t_end_; }
  int n_steps() const noexcept { return n_steps_; }
  double dt() const noexcept { return (t_end_ - t_start_) / n_steps_; }
  double time(int step) const noexcept { return t_start_ + step * dt(); }

 private:
  double t_start_;
  double t_end_;
  int n_steps_;
};

}  // namespace grover
