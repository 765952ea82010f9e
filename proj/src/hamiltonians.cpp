#include "grover/hamiltonians.hpp"

#include <cmath>
#include <numbers>

#include "grover/detail/quadrature.hpp"

namespace grover {

Eigen::Matrix3cd effective_matrix(double t, double f, const PulsePair& pair) {
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(0, 2) = std::sqrt(1.0 - f) * pair.stokes(t);
  h(1, 2) = -std::sqrt(f) * pair.pump(t);
  h(2, 0) = std::conj(h(0, 2));
  h(2, 1) = std::conj(h(1, 2));
  return h;
}

LaserCouplings laser_couplings(double t, const SearchProblem& problem, const PulsePair& pair,
                               bool rwa) {
  const double pump = pair.pump(t);
  const double stokes = pair.stokes(t);
  if (rwa) return {pump, stokes};
  const double phase = problem.detuning() * (t - pair.t_start());
  const cplx rot = std::polar(1.0, phase);
  return {pump + std::conj(rot) * stokes, stokes + rot * pump};
}

Matrix5cd collective_matrix(double t, const SearchProblem& problem, const PulsePair& pair,
                            bool rwa) {
  const auto [sigma, sigma_prime] = laser_couplings(t, problem, pair, rwa);
  const double g = problem.cavity_coupling();
  Matrix5cd h = Matrix5cd::Zero();
  h(0, 2) = sigma_prime;
  h(1, 3) = sigma;
  h(2, 4) = std::sqrt(double(problem.n_marked())) * g;
  h(3, 4) = std::sqrt(double(problem.n_unmarked())) * g;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) h(j, i) = std::conj(h(i, j));
  return h;
}

SparseHamiltonian::SparseHamiltonian(std::shared_ptr<const Pattern> pattern,
                                     std::vector<cplx> values)
    : pattern_(std::move(pattern)), values_(std::move(values)) {
  if (values_.size() != pattern_->col.size()) {
    throw Error(ErrorCode::DimensionMismatch, "value count does not match sparsity pattern");
  }
}

void SparseHamiltonian::apply_serial(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  const auto& p = *pattern_;
  y.resize(p.dim);
  for (int r = 0; r < p.dim; ++r) {
    cplx acc = 0.0;
    for (int k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k) acc += values_[k] * x[p.col[k]];
    y[r] = acc;
  }
}

void SparseHamiltonian::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  const auto& p = *pattern_;
  y.resize(p.dim);
  const int* row_ptr = p.row_ptr.data();
  const int* col = p.col.data();
  const cplx* val = values_.data();
  const cplx* xs = x.data();
  cplx* ys = y.data();
  const int dim = p.dim;
#pragma omp parallel for schedule(static) if (dim >= kParallelRowThreshold)
  for (int r = 0; r < dim; ++r) {
    cplx acc = 0.0;
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * xs[col[k]];
    ys[r] = acc;
  }
}

Eigen::MatrixXcd SparseHamiltonian::to_dense() const {
  const auto& p = *pattern_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(p.dim, p.dim);
  for (int r = 0; r < p.dim; ++r)
    for (int k = p.row_ptr[r]; k < p.row_ptr[r + 1]; ++k) m(r, p.col[k]) += values_[k];
  return m;
}

namespace {

// Row layout: |g'_j> -> (e_j); |e_j> -> (g'_j, g1); |g,1> -> (e_1..e_N).
std::shared_ptr<const SparseHamiltonian::Pattern> register_pattern(int n) {
  auto p = std::make_shared<SparseHamiltonian::Pattern>();
  p->dim = 2 * n + 1;
  p->row_ptr.reserve(p->dim + 1);
  p->row_ptr.push_back(0);
  for (int j = 0; j < n; ++j) {
    p->col.push_back(n + j);
    p->row_ptr.push_back(static_cast<int>(p->col.size()));
  }
  for (int j = 0; j < n; ++j) {
    p->col.push_back(j);
    p->col.push_back(2 * n);
    p->row_ptr.push_back(static_cast<int>(p->col.size()));
  }
  for (int j = 0; j < n; ++j) p->col.push_back(n + j);
  p->row_ptr.push_back(static_cast<int>(p->col.size()));
  return p;
}

void fill_register_values(double t, const SearchProblem& problem, const PulsePair& pair,
                          bool rwa, std::vector<cplx>& values) {
  const int n = problem.n_atoms();
  const int m = problem.n_marked();
  const double g = problem.cavity_coupling();
  const auto [sigma, sigma_prime] = laser_couplings(t, problem, pair, rwa);
  values.resize(static_cast<std::size_t>(4 * n));
  for (int j = 0; j < n; ++j) {
    const cplx rung = j < m ? sigma_prime : sigma;
    values[j] = rung;
    values[n + 2 * j] = std::conj(rung);
    values[n + 2 * j + 1] = g;
    values[3 * n + j] = g;
  }
}

}  // namespace

SparseHamiltonian full_register_matrix(double t, const SearchProblem& problem,
                                       const PulsePair& pair, bool rwa) {
  std::vector<cplx> values;
  fill_register_values(t, problem, pair, rwa, values);
  return SparseHamiltonian(register_pattern(problem.n_atoms()), std::move(values));
}

int CollectiveVectors::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

CollectiveVectors collective_projectors(int n_atoms, int n_marked) {
  if (n_atoms < 1 || n_marked < 1 || n_marked > n_atoms) {
    throw Error(ErrorCode::InvalidCounts, "need 1 <= M <= N");
  }
  const int n = n_atoms;
  const int m = n_marked;
  const int dim = 2 * n + 1;
  const double f = double(m) / n;
  const bool unmarked = m < n;

  auto group = [&](int offset, int first, int last) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    const double amp = 1.0 / std::sqrt(double(last - first));
    for (int j = first; j < last; ++j) v[offset + j] = amp;
    return v;
  };
  const Eigen::VectorXd g_m = group(0, 0, m);
  const Eigen::VectorXd e_m = group(n, 0, m);
  Eigen::VectorXd g1 = Eigen::VectorXd::Zero(dim);
  g1[2 * n] = 1.0;

  CollectiveVectors out;
  out.has_unmarked = unmarked;
  if (unmarked) {
    const Eigen::VectorXd g_u = group(0, m, n);
    const Eigen::VectorXd e_u = group(n, m, n);
    out.names = {"g_m", "g_u", "e", "e_perp", "g1"};
    out.vectors = {g_m, g_u, std::sqrt(f) * e_m + std::sqrt(1.0 - f) * e_u,
                   std::sqrt(1.0 - f) * e_m - std::sqrt(f) * e_u, g1};
  } else {
    out.names = {"g_m", "e", "g1"};
    out.vectors = {g_m, e_m, g1};
  }
  return out;
}

CollectiveVectors tier_projectors(const BasisTag& basis, const SearchProblem& problem) {
  const double f = problem.fraction();
  CollectiveVectors out;
  switch (basis.tier) {
    case ModelTier::Effective3:
      out.names = {"g_m", "g_u", "e_perp"};
      out.vectors = {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(),
                     Eigen::Vector3d::UnitZ()};
      return out;
    case ModelTier::Collective5: {
      auto unit = [](int i) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(5);
        v[i] = 1.0;
        return v;
      };
      out.names = {"g_m", "g_u", "e", "e_perp", "g1"};
      out.vectors = {unit(0), unit(1), std::sqrt(f) * unit(2) + std::sqrt(1.0 - f) * unit(3),
                     std::sqrt(1.0 - f) * unit(2) - std::sqrt(f) * unit(3), unit(4)};
      return out;
    }
    case ModelTier::FullRegister:
      return collective_projectors(basis.n_atoms, basis.n_marked);
  }
  return out;
}

double mixing_angle(double pump, double stokes, double f) {
  if (!(pump > 0.0)) {
    throw Error(ErrorCode::UndefinedAngle, "mixing angle needs Omega > 0");
  }
  return std::atan(-std::sqrt((1.0 - f) / f) * stokes / pump);
}

double adiabatic_gap(double pump, double stokes, double f) {
  return std::sqrt((1.0 - f) * stokes * stokes + f * pump * pump);
}

AdiabaticFrame adiabatic_frame(double t, double f, const PulsePair& pair, double epsilon) {
  AdiabaticFrame frame;
  const double pump = pair.pump(t);
  const double stokes = pair.stokes(t);
  frame.theta = mixing_angle(pump, stokes, f);
  frame.lambda_gap = adiabatic_gap(pump, stokes, f);
  const double t_i = pair.t_start();
  const double t_clamped = std::min(t, pair.t_end());
  if (t_clamped > t_i) {
    frame.tau = detail::simpson(
        [&](double s) { return adiabatic_gap(pair.pump(s), pair.stokes(s), f); }, t_i,
        t_clamped, detail::panels_for(t_clamped - t_i, 1e-3));
  }
  frame.lambda_factor = std::sqrt(1.0 + epsilon * epsilon);
  return frame;
}

std::vector<double> tau_series(double f, const PulsePair& pair, const TimeGrid& grid) {
  std::vector<double> tau(static_cast<std::size_t>(grid.n_steps()) + 1, 0.0);
  auto gap = [&](double s) { return adiabatic_gap(pair.pump(s), pair.stokes(s), f); };
  const double dt = grid.dt();
  double left = gap(grid.time(0));
  for (int k = 0; k < grid.n_steps(); ++k) {
    const double t = grid.time(k);
    const double right = gap(t + dt);
    tau[k + 1] = tau[k] + dt / 6.0 * (left + 4.0 * gap(t + 0.5 * dt) + right);
    left = right;
  }
  return tau;
}

PartitionCorrection partition_correction(double t, const SearchProblem& problem,
                                         const PulsePair& pair) {
  const double f = problem.fraction();
  const double pump = pair.pump(t);
  const double stokes = pair.stokes(t);
  const double gap = adiabatic_gap(pump, stokes, f);
  const double g = problem.cavity_coupling();
  const double denom = problem.n_atoms() * g * g - gap * gap;
  if (std::abs(denom) < 1e-12) {
    throw Error(ErrorCode::DegenerateDenominator, "N G^2 coincides with Lambda^2");
  }
  // Lambda cos(theta) / Omega = sqrt(f), which keeps the prefactor finite when
  // both envelopes vanish.
  const double prefactor =
      std::sqrt(f * (1.0 - f)) * (pump * pump - stokes * stokes) / denom;

  Eigen::Matrix3cd coupling = Eigen::Matrix3cd::Zero();
  coupling(0, 2) = prefactor * std::sqrt(f) * stokes;
  coupling(1, 2) = prefactor * std::sqrt(1.0 - f) * pump;

  PartitionCorrection out;
  out.block = coupling + coupling.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(out.block, Eigen::EigenvaluesOnly);
  out.magnitude = solver.eigenvalues().cwiseAbs().maxCoeff();
  return out;
}

HamiltonianProvider::HamiltonianProvider(ModelTier tier, SearchProblem problem,
                                         PulsePair pair, bool rwa)
    : tier_(tier), problem_(problem), pair_(std::move(pair)), rwa_(rwa) {}

BasisTag HamiltonianProvider::basis() const {
  switch (tier_) {
    case ModelTier::Effective3: return BasisTag::effective();
    case ModelTier::Collective5: return BasisTag::collective();
    case ModelTier::FullRegister:
      return BasisTag::full_register(problem_.n_atoms(), problem_.n_marked());
  }
  return BasisTag::effective();
}

Eigen::MatrixXcd HamiltonianProvider::dense(double t) const {
  switch (tier_) {
    case ModelTier::Effective3: return effective_matrix(t, problem_.fraction(), pair_);
    case ModelTier::Collective5: return collective_matrix(t, problem_, pair_, rwa_);
    case ModelTier::FullRegister: return sparse(t).to_dense();
  }
  return {};
}

SparseHamiltonian HamiltonianProvider::sparse(double t) const {
  if (tier_ != ModelTier::FullRegister) {
    throw Error(ErrorCode::DimensionMismatch, "sparse form exists only for the full register");
  }
  return full_register_matrix(t, problem_, pair_, rwa_);
}

void HamiltonianProvider::update(double t, SparseHamiltonian& h) const {
  if (h.dimension() != dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "sparse Hamiltonian has the wrong dimension");
  }
  fill_register_values(t, problem_, pair_, rwa_, h.values());
}

}  // namespace grover
