#pragma once

// Closed-form populations of the locally adiabatic passage, used as oracles
// for the numerics. Inputs are the mixing angle theta(t), the accumulated gap
// tau(t) and the adiabaticity ratio eps.

namespace grover {

struct AnalyticPopulations {
  double p0 = 1.0;  // survival of the dark state |0(t)>
  double pm = 0.0;
  double pu = 0.0;
  double pe = 0.0;        // excited population, closed form as printed
  double pe_exact = 0.0;  // excited population of the exact frame solution
  double lambda = 1.0;    // sqrt(1 + eps^2)
};

// [(1 + eps^2 cos(lambda tau)) / (1 + eps^2)]^2.
double survival_probability(double tau, double epsilon);

// P_m = |(eps/lambda) sin(lambda tau) sin(theta) + a0 cos(theta)|^2 with a0 the
// survival amplitude. P_u carries the opposite relative sign,
// |(eps/lambda) sin(lambda tau) cos(theta) - a0 sin(theta)|^2, so that the
// populations close at O(eps^4).
AnalyticPopulations analytic_populations(double theta, double tau, double epsilon);

struct FinalBounds {
  double p0_min = 1.0;
  double pm_final_min = 1.0;
};

// Both bounds are [(1 - eps^2)/(1 + eps^2)]^2. Requires 0 <= eps < 1.
FinalBounds final_bounds(double epsilon);

struct ExactPopulations {
  double p0 = 1.0;
  double pm = 0.0;
  double pu = 0.0;
  double pe = 0.0;
};

// Populations from the exact evolution of the eigenvalue-consistent frame
// matrix, rotated back with theta.
ExactPopulations exact_populations(double theta, double tau, double epsilon);

// Uniform-in-tau comparison of the closed forms against the exact oracles.
struct DiscrepancyReport {
  double epsilon = 0.0;
  double tau_max = 0.0;
  int samples = 0;

  // survival: closed form vs exact frame solution (gated on 10 eps^4)
  double survival_gap = 0.0;
  double survival_limit = 0.0;
  // survival: closed form vs the two-level reduction of the printed matrix
  double survival_gap_two_level = 0.0;
  // frequencies: lambda = sqrt(1 + eps^2) vs sqrt(1 + 4 eps^2)
  double lambda_closed_form = 1.0;
  double lambda_two_level = 1.0;

  // excited population: printed closed form vs exact (gated on 8 eps^2)
  double excited_gap = 0.0;
  double excited_limit = 0.0;
  double excited_max_printed = 0.0;
  double excited_max_exact = 0.0;
  double excited_max_two_level = 0.0;  // 4 eps^2 / (1 + 4 eps^2)
  double excited_prose_bound = 0.0;    // eps^2

  // |P_m + P_u + P_e - 1| with the printed and the exact excited population
  double closure_gap_printed = 0.0;
  double closure_gap_exact = 0.0;

  bool survival_ok() const { return survival_gap <= survival_limit; }
  bool excited_ok() const { return excited_gap <= excited_limit; }
};

DiscrepancyReport discrepancy_report(double epsilon, double tau_max, int samples = 4001);

}  // namespace grover
