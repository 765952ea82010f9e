#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "grover/propagator.hpp"

using namespace grover;

namespace {

double final_pm(ModelTier tier, const SearchProblem& p, const PulsePair& pair, int steps,
                bool rwa = true) {
  const HamiltonianProvider prov(tier, p, pair, rwa);
  const Trajectory tr = propagate(prov, uniform_initial_state(prov.basis(), p),
                                  TimeGrid(pair.t_start(), pair.t_end(), steps), steps);
  return populations(tr, p).column("P_m").back();
}

}  // namespace

TEST_CASE("resonant Rabi oscillation") {
  const double c = 1.3;
  Eigen::MatrixXcd h(2, 2);
  h << 0.0, c, c, 0.0;
  Eigen::VectorXcd psi(2);
  psi << 1.0, 0.0;
  const double period = std::acos(-1.0) / c;
  const Trajectory tr = propagate_dense([&](double) { return h; }, psi, TimeGrid(0.0, period, 2000));
  double gap = 0.0;
  for (std::size_t s = 0; s < tr.states.size(); ++s) {
    gap = std::max(gap, std::abs(std::norm(tr.states[s][1]) - std::pow(std::sin(c * tr.times[s]), 2)));
  }
  CHECK(gap <= 1e-10);
  CHECK(std::norm(tr.states.back()[0]) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("zero Hamiltonian is the identity") {
  Eigen::VectorXcd psi(3);
  psi << cplx(0.6, 0.0), cplx(0.0, 0.48), cplx(0.64, 0.0);
  const Trajectory tr = propagate_dense([](double) { return Eigen::MatrixXcd::Zero(3, 3); }, psi,
                                        TimeGrid(0.0, 5.0, 100));
  for (const auto& s : tr.states) CHECK(s == psi);
}

TEST_CASE("snapshots follow the stride and always include the end") {
  const SearchProblem p(8, 3);
  const PulsePair pair = tailored_pair(2.0, 1.5);
  const HamiltonianProvider prov(ModelTier::Effective3, p, pair);
  const Trajectory tr = propagate(prov, uniform_initial_state(prov.basis(), p),
                                  TimeGrid(pair.t_start(), pair.t_end(), 1000), 300);
  CHECK(tr.sample_steps == std::vector<int>{0, 300, 600, 900, 1000});
  CHECK(tr.times.back() == pair.t_end());
}

TEST_CASE("initial populations of the uniform state") {
  const SearchProblem p(8, 3);
  const PulsePair pair = tailored_pair(2.0, 1.5);
  for (ModelTier tier : {ModelTier::Effective3, ModelTier::Collective5, ModelTier::FullRegister}) {
    const HamiltonianProvider prov(tier, p, pair);
    const Trajectory tr = propagate(prov, uniform_initial_state(prov.basis(), p),
                                    TimeGrid(pair.t_start(), pair.t_end(), 200), 20);
    const PopulationSeries s = populations(tr, p);
    CHECK(s.column("P_m").front() == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(s.column("P_u").front() == doctest::Approx(0.625).epsilon(1e-14));
    CHECK(s.column("P_eperp").front() == 0.0);
    for (const auto& col : s.data)
      for (double v : col) {
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0 + 1e-12);
      }
    // Closure: the populations account for the whole norm.
    for (std::size_t k = 0; k < s.size(); ++k) {
      double sum = 0.0;
      for (const char* c : {"P_m", "P_u", "P_eperp", "P_g1", "P_e", "leakage"})
        if (s.has(c)) sum += s.column(c)[k];
      CHECK(std::abs(sum - s.norms[k] * s.norms[k]) <= tr.norm_drift + 1e-12);
    }
  }
}

TEST_CASE("Krylov step against the dense exponential") {
  const SearchProblem p(6, 2);
  const PulsePair pair = tailored_pair(3.0, 1.5);
  const SparseHamiltonian h = full_register_matrix(0.4, p, pair, false);
  Eigen::VectorXcd psi(h.dimension());
  for (int i = 0; i < psi.size(); ++i) psi[i] = cplx(std::cos(0.7 * i), std::sin(0.3 * i));
  psi.normalize();
  for (double dt : {1e-3, 1e-2, 5e-2}) {
    const Eigen::VectorXcd exact = (cplx(0.0, -dt) * h.to_dense()).exp() * psi;
    CHECK((krylov_step(h, psi, dt, 12) - exact).norm() < 1e-12);
    CHECK((krylov_step(h, psi, dt, 12, true) - exact).norm() < 1e-12);
  }
}

TEST_CASE("Krylov step handles an invariant starting vector") {
  const SparseHamiltonian h = full_register_matrix(0.4, SearchProblem(1, 1), tailored_pair(2.0, 1.5), true);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.to_dense());
  const Eigen::VectorXcd v = es.eigenvectors().col(2);
  const Eigen::VectorXcd out = krylov_step(h, v, 0.1, 12);
  const Eigen::VectorXcd expect = std::exp(cplx(0.0, -0.1 * es.eigenvalues()[2])) * v;
  CHECK((out - expect).norm() < 1e-13);
}

TEST_CASE("register and collective tiers agree") {
  const SearchProblem p(6, 2, 10.0, 50.0);
  const PulsePair pair = tailored_pair(2.0, 1.5);
  for (bool rwa : {true, false}) {
    const TimeGrid grid(pair.t_start(), pair.t_end(), 4000);
    const HamiltonianProvider full(ModelTier::FullRegister, p, pair, rwa);
    const HamiltonianProvider col(ModelTier::Collective5, p, pair, rwa);
    const PopulationSeries a =
        populations(propagate(full, uniform_initial_state(full.basis(), p), grid, 40), p);
    const PopulationSeries b =
        populations(propagate(col, uniform_initial_state(col.basis(), p), grid, 40), p);
    double gap = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) gap = std::max(gap, std::abs(a.column("P_m")[k] - b.column("P_m")[k]));
    CHECK(gap <= 1e-10);
  }
}

TEST_CASE("register permutation symmetry and span closure") {
  const SearchProblem p(6, 2);
  const PulsePair pair = tailored_pair(2.0, 1.5);
  const HamiltonianProvider prov(ModelTier::FullRegister, p, pair, false);
  const Trajectory tr = propagate(prov, uniform_initial_state(prov.basis(), p),
                                  TimeGrid(pair.t_start(), pair.t_end(), 8000), 80);
  double spread = 0.0;
  for (const auto& psi : tr.states) {
    for (int off : {0, 6}) {
      spread = std::max(spread, std::abs(psi[off + 1] - psi[off + 0]));
      for (int j = 3; j < 6; ++j) spread = std::max(spread, std::abs(psi[off + j] - psi[off + 2]));
    }
  }
  CHECK(spread <= 1e-10);
  const PopulationSeries s = populations(tr, p);
  for (double v : s.column("leakage")) CHECK(v <= 1e-10);
  CHECK(tr.norm_drift <= 1e-8);
}

TEST_CASE("second-order convergence in dt") {
  const SearchProblem p(8, 1);
  const PulsePair pair = tailored_pair(8.0, 1.5);
  const double ref = final_pm(ModelTier::Effective3, p, pair, 64000);
  double prev = std::abs(final_pm(ModelTier::Effective3, p, pair, 250) - ref);
  for (int n : {500, 1000, 2000}) {
    const double err = std::abs(final_pm(ModelTier::Effective3, p, pair, n) - ref);
    CHECK(prev / err >= 3.5);
    prev = err;
  }
}

TEST_CASE("strong cavity coupling makes the tiers agree") {
  const SearchProblem p(16, 4, 50.0);
  const PulsePair pair = tailored_pair(2.0, 1.5);
  const double a = final_pm(ModelTier::Effective3, p, pair, 20000);
  const double b = final_pm(ModelTier::Collective5, p, pair, 20000);
  CHECK(std::abs(a - b) <= 1e-3);
}

TEST_CASE("contract violations") {
  const SearchProblem p(8, 3);
  const PulsePair pair = tailored_pair(2.0, 1.5);
  const HamiltonianProvider prov(ModelTier::Collective5, p, pair);
  try {
    propagate(prov, uniform_initial_state(BasisTag::effective(), p), TimeGrid(-4, 5.5, 10));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }

  Eigen::VectorXcd psi(2);
  psi << 1.0, 0.0;
  const Eigen::MatrixXcd lossy = cplx(0.0, -1e-3) * Eigen::MatrixXcd::Identity(2, 2);
  try {
    propagate_dense([&](double) { return lossy; }, psi, TimeGrid(0.0, 1.0, 10));
    FAIL("expected NormDriftExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NormDriftExceeded);
  }

  CollectiveVectors wrong = collective_projectors(4, 1);
  const Trajectory tr = propagate(prov, uniform_initial_state(prov.basis(), p), TimeGrid(-4, 5.5, 10));
  CHECK_THROWS_AS(project_populations(tr, wrong), Error);
}

TEST_CASE("trajectory CSV layout") {
  const SearchProblem p(8, 3);
  const PulsePair pair = tailored_pair(2.0, 1.5);
  std::ostringstream eff, col;
  for (auto [tier, out] : {std::pair{ModelTier::Effective3, &eff}, std::pair{ModelTier::Collective5, &col}}) {
    const HamiltonianProvider prov(tier, p, pair);
    write_trajectory_csv(*out, populations(propagate(prov, uniform_initial_state(prov.basis(), p),
                                                     TimeGrid(-4, 5.5, 10), 5),
                                           p));
  }
  CHECK(eff.str().rfind("t,P_m,P_u,P_eperp,norm\n", 0) == 0);
  CHECK(col.str().rfind("t,P_m,P_u,P_eperp,P_g1,P_e,leakage,norm\n", 0) == 0);
  CHECK(eff.str().find("0.375") != std::string::npos);
}

TEST_CASE("two-level oracle") {
  for (double tau : {0.0, 1.0, 7.3}) CHECK(two_level_oracle(0.0, tau) == 1.0);
  const double eps = 0.05;
  const double c = std::sqrt(1 + 4 * eps * eps);
  CHECK(two_level_oracle(eps, std::acos(-1.0) / c) == doctest::Approx(1.0 / (1 + 4 * eps * eps)).epsilon(1e-14));
  CHECK(1.0 / (1 + 4 * eps * eps) == doctest::Approx(0.990099).epsilon(1e-6));

  // Propagating the constant printed frame matrix reproduces the formula.
  const Eigen::MatrixXcd h = adiabatic_frame_matrix(eps, FrameConvention::AsPrinted);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(3);
  psi[0] = 1.0;
  const Trajectory tr = propagate_dense([&](double) { return h; }, psi, TimeGrid(0.0, 40.0, 800));
  double gap = 0.0;
  for (std::size_t s = 0; s < tr.states.size(); ++s)
    gap = std::max(gap, std::abs(std::norm(tr.states[s][0]) - two_level_oracle(eps, tr.times[s])));
  CHECK(gap <= 1e-10);
}

TEST_CASE("frame matrix conventions") {
  const double eps = 0.07;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> good(
      adiabatic_frame_matrix(eps, FrameConvention::EigenvalueConsistent));
  const double lam = std::sqrt(1 + eps * eps);
  CHECK(good.eigenvalues()[0] == doctest::Approx(-lam).epsilon(1e-14));
  CHECK(std::abs(good.eigenvalues()[1]) < 1e-14);
  CHECK(good.eigenvalues()[2] == doctest::Approx(lam).epsilon(1e-14));

  // The exact survival amplitude is (1 + eps^2 cos(lam tau)) / (1 + eps^2).
  for (double tau : {0.0, 0.9, 4.2, 17.0}) {
    const FrameAmplitudes a = adiabatic_frame_oracle(eps, tau, FrameConvention::EigenvalueConsistent);
    CHECK(std::abs(a.dark - (1 + eps * eps * std::cos(lam * tau)) / (1 + eps * eps)) < 1e-14);
    CHECK(std::norm(a.dark) + std::norm(a.plus) + std::norm(a.minus) == doctest::Approx(1.0).epsilon(1e-14));
    const FrameAmplitudes b = adiabatic_frame_oracle(eps, tau, FrameConvention::AsPrinted);
    CHECK(std::norm(b.dark) == doctest::Approx(two_level_oracle(eps, tau)).epsilon(1e-13));
  }
}
