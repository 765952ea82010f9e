#include "grover/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <unsupported/Eigen/MatrixFunctions>

#include "grover/detail/csv.hpp"

namespace grover {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Sampler {
  Trajectory& traj;
  int stride;
  int n_steps;

  void maybe_record(int step, double t, const Eigen::VectorXcd& psi) {
    if (step % stride == 0 || step == n_steps) {
      traj.sample_steps.push_back(step);
      traj.times.push_back(t);
      traj.states.push_back(psi);
    }
  }
};

void check_drift(const Trajectory& traj, double limit) {
  if (traj.norm_drift > limit) {
    throw Error(ErrorCode::NormDriftExceeded,
                "norm drift " + std::to_string(traj.norm_drift) + " exceeds " +
                    std::to_string(limit));
  }
}

template <int Dim>
void run_fixed(const HamiltonianProvider& provider, Eigen::VectorXcd& psi_dyn,
               const TimeGrid& grid, Sampler& sampler, Trajectory& traj) {
  using Mat = Eigen::Matrix<cplx, Dim, Dim>;
  using Vec = Eigen::Matrix<cplx, Dim, 1>;
  Vec psi = psi_dyn;
  const double dt = grid.dt();
  const double f = provider.problem().fraction();
  for (int k = 0; k < grid.n_steps(); ++k) {
    const double t_mid = grid.time(k) + 0.5 * dt;
    Mat h;
    if constexpr (Dim == 3) {
      h = effective_matrix(t_mid, f, provider.pair());
    } else {
      h = collective_matrix(t_mid, provider.problem(), provider.pair(), provider.rwa());
    }
    const Mat u = (-kI * dt * h).exp();
    psi = u * psi;
    traj.norm_drift = std::max(traj.norm_drift, std::abs(psi.norm() - 1.0));
    psi_dyn = psi;
    sampler.maybe_record(k + 1, grid.time(k + 1), psi_dyn);
  }
}

}  // namespace

Eigen::VectorXcd krylov_step(const SparseHamiltonian& h, const Eigen::VectorXcd& psi, double dt,
                             int krylov_dim, bool serial_kernel) {
  const int dim = h.dimension();
  const int m_max = std::max(1, std::min(krylov_dim, dim));
  const double beta0 = psi.norm();
  if (beta0 == 0.0) return psi;

  std::vector<Eigen::VectorXcd> basis;
  basis.reserve(m_max);
  basis.push_back(psi / beta0);
  std::vector<double> alpha;
  std::vector<double> beta;
  Eigen::VectorXcd w(dim);
  double scale = 0.0;

  for (int j = 0; j < m_max; ++j) {
    if (serial_kernel) {
      h.apply_serial(basis[j], w);
    } else {
      h.apply(basis[j], w);
    }
    const double a = basis[j].dot(w).real();
    alpha.push_back(a);
    // Full reorthogonalization; the basis is tiny.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& v : basis) w -= v.dot(w) * v;
    const double b = w.norm();
    scale = std::max({scale, std::abs(a), b});
    if (j + 1 == m_max || b <= 1e-12 * std::max(scale, 1.0)) break;
    beta.push_back(b);
    basis.push_back(w / b);
  }

  const int m = static_cast<int>(alpha.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    t(j, j) = alpha[j];
    if (j + 1 < m) t(j, j + 1) = t(j + 1, j) = beta[j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
  const Eigen::MatrixXd& q = solver.eigenvectors();
  Eigen::VectorXcd phases(m);
  for (int j = 0; j < m; ++j) phases[j] = std::exp(-kI * solver.eigenvalues()[j] * dt);
  const Eigen::VectorXcd coeff = q.cast<cplx>() * phases.cwiseProduct(q.row(0).transpose().cast<cplx>());

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  for (int j = 0; j < m; ++j) out += coeff[j] * basis[j];
  return beta0 * out;
}

Trajectory propagate(const HamiltonianProvider& provider, const StateVector& psi0,
                     const TimeGrid& grid, int sample_stride) {
  PropagationOptions options;
  options.sample_stride = sample_stride;
  return propagate(provider, psi0, grid, options);
}

Trajectory propagate(const HamiltonianProvider& provider, const StateVector& psi0,
                     const TimeGrid& grid, const PropagationOptions& options) {
  if (!(psi0.basis() == provider.basis())) {
    throw Error(ErrorCode::DimensionMismatch, "initial state basis does not match the tier");
  }
  if (options.sample_stride < 1) {
    throw Error(ErrorCode::InvalidArgument, "sample stride must be >= 1");
  }
  Trajectory traj;
  traj.basis = provider.basis();
  traj.grid = grid;
  Sampler sampler{traj, options.sample_stride, grid.n_steps()};
  Eigen::VectorXcd psi = psi0.amplitudes();
  sampler.maybe_record(0, grid.t_start(), psi);
  traj.norm_drift = std::abs(psi.norm() - 1.0);

  switch (provider.tier()) {
    case ModelTier::Effective3:
      run_fixed<3>(provider, psi, grid, sampler, traj);
      break;
    case ModelTier::Collective5:
      run_fixed<5>(provider, psi, grid, sampler, traj);
      break;
    case ModelTier::FullRegister: {
      const double dt = grid.dt();
      SparseHamiltonian h = provider.sparse(grid.t_start());
      for (int k = 0; k < grid.n_steps(); ++k) {
        provider.update(grid.time(k) + 0.5 * dt, h);
        psi = krylov_step(h, psi, dt, options.krylov_dim, options.serial_kernel);
        traj.norm_drift = std::max(traj.norm_drift, std::abs(psi.norm() - 1.0));
        sampler.maybe_record(k + 1, grid.time(k + 1), psi);
      }
      break;
    }
  }
  check_drift(traj, options.max_norm_drift);
  return traj;
}

Trajectory propagate_dense(const DenseGenerator& hamiltonian, const Eigen::VectorXcd& psi0,
                           const TimeGrid& grid, const PropagationOptions& options) {
  if (options.sample_stride < 1) {
    throw Error(ErrorCode::InvalidArgument, "sample stride must be >= 1");
  }
  Trajectory traj;
  traj.grid = grid;
  Sampler sampler{traj, options.sample_stride, grid.n_steps()};
  Eigen::VectorXcd psi = psi0;
  sampler.maybe_record(0, grid.t_start(), psi);
  traj.norm_drift = std::abs(psi.norm() - 1.0);
  const double dt = grid.dt();
  for (int k = 0; k < grid.n_steps(); ++k) {
    const Eigen::MatrixXcd h = hamiltonian(grid.time(k) + 0.5 * dt);
    if (h.rows() != psi.size() || h.cols() != psi.size()) {
      throw Error(ErrorCode::DimensionMismatch, "generator dimension does not match state");
    }
    const Eigen::MatrixXcd u = (-kI * dt * h).exp();
    psi = u * psi;
    traj.norm_drift = std::max(traj.norm_drift, std::abs(psi.norm() - 1.0));
    sampler.maybe_record(k + 1, grid.time(k + 1), psi);
  }
  check_drift(traj, options.max_norm_drift);
  return traj;
}

const std::vector<double>& PopulationSeries::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return data[i];
  throw Error(ErrorCode::InvalidArgument, "no population column '" + name + "'");
}

bool PopulationSeries::has(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

PopulationSeries project_populations(const Trajectory& trajectory,
                                     const CollectiveVectors& projectors) {
  const long dim = trajectory.states.empty() ? 0 : trajectory.states.front().size();
  for (const auto& v : projectors.vectors) {
    if (v.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch, "projector dimension does not match trajectory");
    }
  }
  const bool cavity = projectors.index_of("g1") >= 0;
  PopulationSeries out;
  out.columns = {"P_m", "P_u", "P_eperp"};
  if (cavity) out.columns.insert(out.columns.end(), {"P_g1", "P_e", "leakage"});
  const std::pair<const char*, const char*> source[] = {
      {"P_m", "g_m"}, {"P_u", "g_u"}, {"P_eperp", "e_perp"}, {"P_g1", "g1"}, {"P_e", "e"}};

  out.times = trajectory.times;
  out.data.assign(out.columns.size(), std::vector<double>(trajectory.states.size(), 0.0));
  out.norms.reserve(trajectory.states.size());
  for (std::size_t s = 0; s < trajectory.states.size(); ++s) {
    const Eigen::VectorXcd& psi = trajectory.states[s];
    const double norm2 = psi.squaredNorm();
    double captured = 0.0;
    for (std::size_t c = 0; c < out.columns.size(); ++c) {
      for (const auto& [column, vec] : source) {
        if (out.columns[c] != column) continue;
        const int idx = projectors.index_of(vec);
        if (idx < 0) break;
        const double p = std::norm(projectors.vectors[idx].cast<cplx>().dot(psi));
        out.data[c][s] = p;
        captured += p;
      }
    }
    if (cavity) out.data.back()[s] = std::max(0.0, norm2 - captured);
    out.norms.push_back(std::sqrt(norm2));
  }
  return out;
}

PopulationSeries populations(const Trajectory& trajectory, const SearchProblem& problem) {
  if (!trajectory.basis) {
    throw Error(ErrorCode::InvalidArgument, "trajectory carries no basis tag");
  }
  return project_populations(trajectory, tier_projectors(*trajectory.basis, problem));
}

void write_trajectory_csv(std::ostream& out, const PopulationSeries& series) {
  out << 't';
  for (const auto& c : series.columns) out << ',' << c;
  out << ",norm\n";
  std::vector<double> row(series.columns.size() + 2);
  for (std::size_t s = 0; s < series.size(); ++s) {
    row[0] = series.times[s];
    for (std::size_t c = 0; c < series.columns.size(); ++c) row[c + 1] = series.data[c][s];
    row.back() = series.norms[s];
    detail::write_row(out, row.data(), static_cast<int>(row.size()));
  }
}

double two_level_oracle(double epsilon, double tau) {
  const double e2 = epsilon * epsilon;
  const double s = std::sin(std::sqrt(1.0 + 4.0 * e2) * tau / 2.0);
  return 1.0 - 4.0 * e2 / (1.0 + 4.0 * e2) * s * s;
}

Eigen::Matrix3cd adiabatic_frame_matrix(double epsilon, FrameConvention convention) {
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(1, 1) = 1.0;
  h(2, 2) = convention == FrameConvention::AsPrinted ? 1.0 : -1.0;
  const cplx c = kI * epsilon / std::sqrt(2.0);
  h(1, 0) = c;
  h(2, 0) = c;
  h(0, 1) = std::conj(c);
  h(0, 2) = std::conj(c);
  return h;
}

FrameAmplitudes adiabatic_frame_oracle(double epsilon, double tau,
                                       FrameConvention convention) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(
      adiabatic_frame_matrix(epsilon, convention));
  const Eigen::Matrix3cd& v = solver.eigenvectors();
  Eigen::Vector3cd phases;
  for (int j = 0; j < 3; ++j) phases[j] = std::exp(-kI * solver.eigenvalues()[j] * tau);
  const Eigen::Vector3cd amp = v * phases.cwiseProduct(v.row(0).adjoint());
  return {amp[0], amp[1], amp[2]};
}

}  // namespace grover
