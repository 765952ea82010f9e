#include "grover/core.hpp"

#include <cmath>

namespace grover {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidCounts: return "InvalidCounts";
    case ErrorCode::DegenerateFraction: return "DegenerateFraction";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BackwardInterval: return "BackwardInterval";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InsufficientArea: return "InsufficientArea";
    case ErrorCode::UndefinedAngle: return "UndefinedAngle";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::NormDriftExceeded: return "NormDriftExceeded";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

SearchProblem::SearchProblem(int n_atoms, int n_marked, double cavity_coupling,
                             double detuning)
    : n_atoms_(n_atoms),
      n_marked_(n_marked),
      cavity_coupling_(cavity_coupling),
      detuning_(detuning) {
  if (n_atoms < 1 || n_marked < 1 || n_marked > n_atoms) {
    throw Error(ErrorCode::InvalidCounts,
                "need 1 <= M <= N, got N=" + std::to_string(n_atoms) +
                    " M=" + std::to_string(n_marked));
  }
  if (!(cavity_coupling > 0.0) || !(detuning > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "cavity coupling and detuning must be > 0");
  }
}

SearchProblem validate_problem(const SearchProblem& problem, DesignKind design) {
  if (problem.n_atoms() < 2) {
    throw Error(ErrorCode::InvalidCounts, "register needs N >= 2");
  }
  if (design == DesignKind::LocalAdiabatic && problem.n_marked() == problem.n_atoms()) {
    throw Error(ErrorCode::DegenerateFraction,
                "f = 1 leaves nothing to search; local-adiabatic ratio is undefined");
  }
  return problem;
}

const char* to_string(ModelTier tier) {
  switch (tier) {
    case ModelTier::Effective3: return "effective3";
    case ModelTier::Collective5: return "collective5";
    case ModelTier::FullRegister: return "full_register";
  }
  return "unknown";
}

ModelTier parse_tier(const std::string& name) {
  if (name == "effective3") return ModelTier::Effective3;
  if (name == "collective5") return ModelTier::Collective5;
  if (name == "full_register") return ModelTier::FullRegister;
  throw Error(ErrorCode::ConfigError, "unknown tier '" + name + "'");
}

int BasisTag::dimension() const {
  switch (tier) {
    case ModelTier::Effective3: return 3;
    case ModelTier::Collective5: return 5;
    case ModelTier::FullRegister: return 2 * n_atoms + 1;
  }
  return 0;
}

namespace {

constexpr Level kEffectiveLevels[] = {Level::MarkedGround, Level::UnmarkedGround,
                                      Level::ExcitedPerp};
constexpr Level kCollectiveLevels[] = {Level::MarkedGround, Level::UnmarkedGround,
                                       Level::MarkedExcited, Level::UnmarkedExcited,
                                       Level::CavityPhoton};

void check_index(const BasisTag& tag, int index) {
  if (index < 0 || index >= tag.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                "basis index " + std::to_string(index) + " out of range");
  }
}

}  // namespace

BasisLabel basis_label(const BasisTag& tag, int index) {
  check_index(tag, index);
  switch (tag.tier) {
    case ModelTier::Effective3: return {kEffectiveLevels[index]};
    case ModelTier::Collective5: return {kCollectiveLevels[index]};
    case ModelTier::FullRegister: {
      const int n = tag.n_atoms;
      if (index < n) return {Level::AtomGround, index + 1};
      if (index < 2 * n) return {Level::AtomExcited, index - n + 1};
      return {Level::CavityPhoton};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown tier");
}

int basis_index(const BasisTag& tag, const BasisLabel& label) {
  switch (tag.tier) {
    case ModelTier::Effective3:
      for (int i = 0; i < 3; ++i)
        if (kEffectiveLevels[i] == label.level) return i;
      break;
    case ModelTier::Collective5:
      for (int i = 0; i < 5; ++i)
        if (kCollectiveLevels[i] == label.level) return i;
      break;
    case ModelTier::FullRegister: {
      const int n = tag.n_atoms;
      if (label.level == Level::CavityPhoton) return 2 * n;
      if (label.atom >= 1 && label.atom <= n) {
        if (label.level == Level::AtomGround) return label.atom - 1;
        if (label.level == Level::AtomExcited) return n + label.atom - 1;
      }
      break;
    }
  }
  throw Error(ErrorCode::DimensionMismatch, "label " + to_string(label) +
                                                " does not belong to this basis");
}

std::string to_string(const BasisLabel& label) {
  switch (label.level) {
    case Level::MarkedGround: return "|g'_m,0>";
    case Level::UnmarkedGround: return "|g'_u,0>";
    case Level::ExcitedPerp: return "|e_perp,0>";
    case Level::MarkedExcited: return "|e_m,0>";
    case Level::UnmarkedExcited: return "|e_u,0>";
    case Level::CavityPhoton: return "|g,1>";
    case Level::AtomGround: return "|g'_" + std::to_string(label.atom) + ",0>";
    case Level::AtomExcited: return "|e_" + std::to_string(label.atom) + ",0>";
  }
  return "?";
}

StateVector::StateVector(BasisTag tag, Eigen::VectorXcd amplitudes)
    : tag_(tag), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != tag_.dimension()) {
    throw Error(ErrorCode::DimensionMismatch,
                "state has " + std::to_string(amplitudes_.size()) +
                    " amplitudes, basis needs " + std::to_string(tag_.dimension()));
  }
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidArgument, "state vector is not normalized");
  }
}

StateVector uniform_initial_state(const BasisTag& tag, const SearchProblem& problem) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(tag.dimension());
  const double f = problem.fraction();
  switch (tag.tier) {
    case ModelTier::Effective3:
    case ModelTier::Collective5:
      psi(0) = std::sqrt(f);
      psi(1) = std::sqrt(1.0 - f);
      break;
    case ModelTier::FullRegister:
      psi.head(tag.n_atoms).setConstant(1.0 / std::sqrt(double(tag.n_atoms)));
      break;
  }
  return StateVector(tag, std::move(psi));
}

TimeGrid::TimeGrid(double t_start, double t_end, int n_steps)
    : t_start_(t_start), t_end_(t_end), n_steps_(n_steps) {
  if (!(t_end > t_start) || n_steps < 1) {
    throw Error(ErrorCode::InvalidArgument, "time grid needs t_end > t_start and n_steps >= 1");
  }
}

}  // namespace grover
