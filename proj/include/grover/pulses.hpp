#pragma once

#include <iosfwd>
#include <memory>
#include <variant>
#include <vector>

namespace grover {

// Omega_0 exp(-(t/T)^2)
struct Gaussian {
  double peak = 1.0;
  double width = 1.0;
};

// Gaussian rise to the peak at t = 0, held for plateau * width, Gaussian fall.
struct TailoredGaussian {
  double peak = 1.0;
  double width = 1.0;
  double plateau = 0.0;
};

// Uniformly sampled envelope, linearly interpolated, zero outside the grid.
struct SampledPulse {
  double t_start = 0.0;
  double dt = 1.0;
  std::vector<double> values;

  double t_end() const { return t_start + dt * (static_cast<double>(values.size()) - 1.0); }
};

using PulseShape = std::variant<Gaussian, TailoredGaussian, SampledPulse>;

void check_shape(const PulseShape& shape);
double eval_pulse(const PulseShape& shape, double t);
double peak_amplitude(const PulseShape& shape);

// Integral of the envelope over [t_i, t] by composite Simpson, split at the
// shape's breakpoints. Sampled shapes are integrated exactly.
double pulse_area(const PulseShape& shape, double t_i, double t);

// Cumulative area cached at uniform nodes, linear interpolation in between.
class CumulativeArea {
 public:
  CumulativeArea(const PulseShape& shape, double t_start, double t_end, int n_intervals);

  double operator()(double t) const;
  double total() const { return nodes_.back(); }
  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  double spacing() const { return h_; }
  const std::vector<double>& nodes() const { return nodes_; }

  // Bisection (<= 100 iterations) for the time at which the area reaches `area`.
  double time_at_area(double area) const;

 private:
  double t_start_;
  double t_end_;
  double h_;
  std::vector<double> nodes_;
};

// Stokes/pump ratio Omega'/Omega enforcing a constant adiabaticity ratio
// epsilon, as a function of the accumulated pump area.
double local_adiabatic_ratio(double area, double epsilon, double f);

// Required pump area Omega_0 * duration for a given epsilon: (1/eps) sqrt((1-f)/f).
double area_duration_relation(double epsilon, double f);

struct LocalAdiabatic {
  double epsilon = 0.05;
  // Ratio actually realized; differs from `epsilon` only when the base pulse
  // falls short of the required area by less than the design slack.
  double effective_epsilon = 0.05;
};
struct TailoredScheme {
  double plateau = 1.5;
};
struct ExplicitDesign {};

using PairDesign = std::variant<LocalAdiabatic, TailoredScheme, ExplicitDesign>;

struct DesignOptions {
  int quadrature_intervals = 200000;
  double area_slack = 1e-6;
};

class PulsePair {
 public:
  static PulsePair explicit_pair(PulseShape pump, PulseShape stokes, double t_start,
                                 double t_end);

  // Omega(t) and Omega'(t). Both vanish outside [t_start, t_end].
  double pump(double t) const;
  double stokes(double t) const;

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  const PairDesign& design() const { return design_; }
  const PulseShape& pump_shape() const { return pump_; }
  double peak() const;

  // Pump area accumulated since t_start.
  double pump_area(double t) const;

 private:
  struct AdiabaticStokes {
    CumulativeArea area;
    double epsilon;
    double f;
  };

  PulsePair(PulseShape pump, PulseShape stokes, double t_start, double t_end,
            PairDesign design);
  PulsePair(PulseShape pump, std::shared_ptr<const AdiabaticStokes> stokes,
            double t_start, double t_end, PairDesign design);

  friend PulsePair design_local_adiabatic_pair(const PulseShape&, double, double,
                                               double, double, const DesignOptions&);
  friend PulsePair tailored_pair(double, double, double, double, double);

  PulseShape pump_;
  PulseShape stokes_shape_;
  std::shared_ptr<const AdiabaticStokes> adiabatic_;
  double t_start_;
  double t_end_;
  PairDesign design_;
};

// Builds Omega' = ratio(A(t)) * Omega(t) on [t_start, t_f], where t_f is the
// time at which eps * A(t_f) = sqrt((1-f)/f). The search for t_f runs over the
// base pulse support [t_start, support_end].
PulsePair design_local_adiabatic_pair(const PulseShape& base, double epsilon, double f,
                                      double t_start, double support_end,
                                      const DesignOptions& options = {});

// Omega = tailored Gaussian with plateau, Omega' = plain Gaussian, both with
// peak omega0; window [-lead*T, (plateau + tail)*T].
PulsePair tailored_pair(double omega0, double plateau, double width = 1.0,
                        double lead = 4.0, double tail = 4.0);

enum class Envelope { Pump, Stokes };

SampledPulse sample_envelope(const PulsePair& pair, Envelope which, int n_intervals);

// Two-column CSV `time,envelope` with a header row.
void write_pulse_csv(std::ostream& out, const SampledPulse& pulse);
SampledPulse read_pulse_csv(std::istream& in);

}  // namespace grover
