#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grover/core.hpp"
#include "grover/hamiltonians.hpp"

namespace grover {

struct Trajectory {
  std::optional<BasisTag> basis;  // empty for ad hoc dense generators
  TimeGrid grid{0.0, 1.0, 1};
  std::vector<int> sample_steps;
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
  double norm_drift = 0.0;  // max | |psi| - 1 | over every step
};

struct PropagationOptions {
  int sample_stride = 1;
  double max_norm_drift = 1e-6;
  int krylov_dim = 12;
  bool serial_kernel = false;  // use the reference matvec for the register tier
};

// Exponential-midpoint propagation: psi <- exp(-i H(t + dt/2) dt) psi.
// Dense tiers use a scaling-and-squaring matrix exponential, the register
// tier a Lanczos approximation of the exponential's action. Snapshots are
// taken every `sample_stride` steps and always at the last step.
Trajectory propagate(const HamiltonianProvider& provider, const StateVector& psi0,
                     const TimeGrid& grid, int sample_stride = 1);
Trajectory propagate(const HamiltonianProvider& provider, const StateVector& psi0,
                     const TimeGrid& grid, const PropagationOptions& options);

using DenseGenerator = std::function<Eigen::MatrixXcd(double)>;

Trajectory propagate_dense(const DenseGenerator& hamiltonian, const Eigen::VectorXcd& psi0,
                           const TimeGrid& grid, const PropagationOptions& options = {});

// One Lanczos step exp(-i H dt) psi with at most `krylov_dim` basis vectors.
Eigen::VectorXcd krylov_step(const SparseHamiltonian& h, const Eigen::VectorXcd& psi, double dt,
                             int krylov_dim, bool serial_kernel = false);

// Column names follow the trajectory CSV: P_m, P_u, P_eperp, then P_g1, P_e
// and leakage for tiers that carry the cavity states.
struct PopulationSeries {
  std::vector<std::string> columns;
  std::vector<double> times;
  std::vector<std::vector<double>> data;  // data[column][sample]
  std::vector<double> norms;

  const std::vector<double>& column(const std::string& name) const;
  bool has(const std::string& name) const;
  std::size_t size() const { return times.size(); }
};

PopulationSeries project_populations(const Trajectory& trajectory,
                                     const CollectiveVectors& projectors);

// Projects with the standard collective states of the trajectory's tier.
PopulationSeries populations(const Trajectory& trajectory, const SearchProblem& problem);

// Header `t,P_m,P_u,P_eperp[,P_g1,P_e,leakage],norm`, 15 significant digits.
void write_trajectory_csv(std::ostream& out, const PopulationSeries& series);

// Survival probability of |0> under the two-level block [[0, -i eps], [i eps, 1]]
// obtained from the adiabatic-frame matrix with +Lambda on both bright states.
double two_level_oracle(double epsilon, double tau);

enum class FrameConvention {
  AsPrinted,             // +Lambda on both |+Lambda> and |-Lambda>
  EigenvalueConsistent,  // +Lambda and -Lambda
};

// Constant adiabatic-frame Hamiltonian divided by Lambda in the basis
// (|0>, |+Lambda>, |-Lambda>) when d(theta)/dt = eps Lambda.
Eigen::Matrix3cd adiabatic_frame_matrix(double epsilon, FrameConvention convention);

struct FrameAmplitudes {
  cplx dark;
  cplx plus;
  cplx minus;
};

// Exact evolution of |0> under the constant frame matrix, by Hermitian
// eigendecomposition.
FrameAmplitudes adiabatic_frame_oracle(double epsilon, double tau,
                                       FrameConvention convention);

}  // namespace grover
