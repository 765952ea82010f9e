#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grover/core.hpp"
#include "grover/pulses.hpp"

namespace grover {

using Matrix5cd = Eigen::Matrix<cplx, 5, 5>;

// Effective three-state Hamiltonian in (|g'_m,0>, |g'_u,0>, |e_perp,0>).
Eigen::Matrix3cd effective_matrix(double t, double f, const PulsePair& pair);

// Laser couplings (Sigma, Sigma') of the unmarked and marked transitions.
// Without the rotating-wave approximation each picks up the other laser with
// phase exp(-/+ i delta (t - t_i)).
struct LaserCouplings {
  cplx unmarked;  // Sigma
  cplx marked;    // Sigma'
};
LaserCouplings laser_couplings(double t, const SearchProblem& problem, const PulsePair& pair,
                               bool rwa);

// Five-state Hamiltonian in (|g'_m,0>, |g'_u,0>, |e_m,0>, |e_u,0>, |g,1>).
Matrix5cd collective_matrix(double t, const SearchProblem& problem, const PulsePair& pair,
                            bool rwa);

// CSR matrix with a fixed sparsity pattern; only values change in time.
class SparseHamiltonian {
 public:
  struct Pattern {
    int dim = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
  };

  SparseHamiltonian(std::shared_ptr<const Pattern> pattern, std::vector<cplx> values);

  int dimension() const { return pattern_->dim; }
  const Pattern& pattern() const { return *pattern_; }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }

  // y = H x. The serial kernel is the reference for the OpenMP one.
  void apply_serial(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;

  Eigen::MatrixXcd to_dense() const;

 private:
  std::shared_ptr<const Pattern> pattern_;
  std::vector<cplx> values_;
};

// Rows at or above this dimension use the OpenMP kernel.
inline constexpr int kParallelRowThreshold = 2048;

// Star-plus-rungs register Hamiltonian in (|g'_1..N,0>, |e_1..N,0>, |g,1>).
SparseHamiltonian full_register_matrix(double t, const SearchProblem& problem,
                                       const PulsePair& pair, bool rwa);

struct CollectiveVectors {
  std::vector<std::string> names;
  std::vector<Eigen::VectorXd> vectors;
  bool has_unmarked = true;

  int index_of(const std::string& name) const;
};

// |g'_m,0>, |g'_u,0>, |e,0>, |e_perp,0>, |g,1> in the full-register basis.
// For M = N the unmarked members (|g'_u,0>, |e_perp,0>) are absent.
CollectiveVectors collective_projectors(int n_atoms, int n_marked);

// The same collective states expressed in the basis of any tier.
CollectiveVectors tier_projectors(const BasisTag& basis, const SearchProblem& problem);

// Mixing angle with tan(theta) = -sqrt((1-f)/f) Omega'/Omega, theta in (-pi/2, 0].
double mixing_angle(double pump, double stokes, double f);

// Gap Lambda = sqrt((1-f) Omega'^2 + f Omega^2).
double adiabatic_gap(double pump, double stokes, double f);

struct AdiabaticFrame {
  double theta = 0.0;
  double lambda_gap = 0.0;
  double tau = 0.0;            // integral of the gap since t_i
  double lambda_factor = 1.0;  // sqrt(1 + eps^2)
};

AdiabaticFrame adiabatic_frame(double t, double f, const PulsePair& pair, double epsilon);

// tau at every node of `grid`, by per-step Simpson on the gap.
std::vector<double> tau_series(double f, const PulsePair& pair, const TimeGrid& grid);

struct PartitionCorrection {
  Eigen::Matrix3cd block;  // H_{e_perp e} W_{e e_perp} + h.c. in the Effective3 basis
  double magnitude = 0.0;  // operator 2-norm
};

// Leading correction to the effective Hamiltonian from the states coupled
// through the cavity (eigenvalues +/- sqrt(N) G).
PartitionCorrection partition_correction(double t, const SearchProblem& problem,
                                         const PulsePair& pair);

class HamiltonianProvider {
 public:
  HamiltonianProvider(ModelTier tier, SearchProblem problem, PulsePair pair, bool rwa = true);

  ModelTier tier() const { return tier_; }
  BasisTag basis() const;
  int dimension() const { return basis().dimension(); }
  const SearchProblem& problem() const { return problem_; }
  const PulsePair& pair() const { return pair_; }
  bool rwa() const { return rwa_; }

  Eigen::MatrixXcd dense(double t) const;
  SparseHamiltonian sparse(double t) const;
  // Refresh the time-dependent values of `h` (built by `sparse`) in place.
  void update(double t, SparseHamiltonian& h) const;

 private:
  ModelTier tier_;
  SearchProblem problem_;
  PulsePair pair_;
  bool rwa_;
};

}  // namespace grover
