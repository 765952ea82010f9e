#include "grover/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "grover/core.hpp"
#include "grover/propagator.hpp"

namespace grover {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be a finite value >= 0");
  }
}

double survival_amplitude(double tau, double e2, double lambda) {
  return (1.0 + e2 * std::cos(lambda * tau)) / (1.0 + e2);
}

}  // namespace

double survival_probability(double tau, double epsilon) {
  check_epsilon(epsilon);
  const double e2 = epsilon * epsilon;
  const double a0 = survival_amplitude(tau, e2, std::sqrt(1.0 + e2));
  return a0 * a0;
}

AnalyticPopulations analytic_populations(double theta, double tau, double epsilon) {
  check_epsilon(epsilon);
  const double e2 = epsilon * epsilon;
  const double lambda = std::sqrt(1.0 + e2);
  const double a0 = survival_amplitude(tau, e2, lambda);
  const double as = epsilon / lambda * std::sin(lambda * tau);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double one_minus = 1.0 - std::cos(lambda * tau);

  AnalyticPopulations out;
  out.lambda = lambda;
  out.p0 = a0 * a0;
  out.pm = std::pow(as * s + a0 * c, 2);
  out.pu = std::pow(as * c - a0 * s, 2);
  out.pe = 2.0 * e2 / ((1.0 + e2) * (1.0 + e2)) * one_minus * one_minus;
  out.pe_exact = e2 / ((1.0 + e2) * (1.0 + e2)) * one_minus * one_minus;
  return out;
}

FinalBounds final_bounds(double epsilon) {
  check_epsilon(epsilon);
  if (epsilon >= 1.0) {
    throw Error(ErrorCode::InvalidArgument, "final bounds need epsilon < 1");
  }
  const double e2 = epsilon * epsilon;
  const double b = std::pow((1.0 - e2) / (1.0 + e2), 2);
  return {b, b};
}

ExactPopulations exact_populations(double theta, double tau, double epsilon) {
  check_epsilon(epsilon);
  const FrameAmplitudes a =
      adiabatic_frame_oracle(epsilon, tau, FrameConvention::EigenvalueConsistent);
  const cplx bright = (a.plus + a.minus) / std::numbers::sqrt2;
  const cplx excited = (a.plus - a.minus) / std::numbers::sqrt2;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  ExactPopulations out;
  out.p0 = std::norm(a.dark);
  out.pm = std::norm(a.dark * c + bright * s);
  out.pu = std::norm(bright * c - a.dark * s);
  out.pe = std::norm(excited);
  return out;
}

DiscrepancyReport discrepancy_report(double epsilon, double tau_max, int samples) {
  check_epsilon(epsilon);
  if (!(tau_max >= 0.0) || samples < 2) {
    throw Error(ErrorCode::InvalidArgument, "discrepancy report needs tau_max >= 0, samples >= 2");
  }
  const double e2 = epsilon * epsilon;
  DiscrepancyReport r;
  r.epsilon = epsilon;
  r.tau_max = tau_max;
  r.samples = samples;
  r.survival_limit = 10.0 * e2 * e2;
  r.excited_limit = 8.0 * e2;
  r.lambda_closed_form = std::sqrt(1.0 + e2);
  r.lambda_two_level = std::sqrt(1.0 + 4.0 * e2);
  r.excited_max_two_level = 4.0 * e2 / (1.0 + 4.0 * e2);
  r.excited_prose_bound = e2;

  // Closure is probed at a generic interior angle.
  const double theta = -0.5 * std::acos(0.0);
  for (int k = 0; k < samples; ++k) {
    const double tau = tau_max * k / (samples - 1);
    const AnalyticPopulations a = analytic_populations(theta, tau, epsilon);
    const ExactPopulations x = exact_populations(theta, tau, epsilon);
    r.survival_gap = std::max(r.survival_gap, std::abs(a.p0 - x.p0));
    r.survival_gap_two_level =
        std::max(r.survival_gap_two_level, std::abs(a.p0 - two_level_oracle(epsilon, tau)));
    r.excited_gap = std::max(r.excited_gap, std::abs(a.pe - x.pe));
    r.excited_max_printed = std::max(r.excited_max_printed, a.pe);
    r.excited_max_exact = std::max(r.excited_max_exact, x.pe);
    r.closure_gap_printed =
        std::max(r.closure_gap_printed, std::abs(a.pm + a.pu + a.pe - 1.0));
    r.closure_gap_exact =
        std::max(r.closure_gap_exact, std::abs(a.pm + a.pu + a.pe_exact - 1.0));
  }
  return r;
}

}  // namespace grover
