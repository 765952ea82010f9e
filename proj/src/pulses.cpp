#include "grover/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "grover/core.hpp"
#include "grover/detail/csv.hpp"
#include "grover/detail/quadrature.hpp"

namespace grover {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Simpson panel width relative to the pulse width.
constexpr double kPanelWidth = 1e-3;

double sampled_value(const SampledPulse& p, double t) {
  if (p.values.empty() || t < p.t_start || t > p.t_end()) return 0.0;
  const double u = (t - p.t_start) / p.dt;
  const auto n = p.values.size();
  auto k = static_cast<std::size_t>(u);
  if (k >= n - 1) return p.values.back();
  const double w = u - static_cast<double>(k);
  return (1.0 - w) * p.values[k] + w * p.values[k + 1];
}

// Exact integral of the piecewise-linear interpolant.
double sampled_area(const SampledPulse& p, double a, double b) {
  if (p.values.size() < 2) return 0.0;
  a = std::max(a, p.t_start);
  b = std::min(b, p.t_end());
  if (b <= a) return 0.0;
  const auto last = static_cast<long>(p.values.size()) - 2;
  long k0 = std::clamp(static_cast<long>(std::floor((a - p.t_start) / p.dt)), 0L, last);
  long k1 = std::clamp(static_cast<long>(std::floor((b - p.t_start) / p.dt)), 0L, last);
  double total = 0.0;
  for (long k = k0; k <= k1; ++k) {
    const double lo = std::max(a, p.t_start + k * p.dt);
    const double hi = std::min(b, p.t_start + (k + 1) * p.dt);
    if (hi > lo) total += 0.5 * (hi - lo) * (sampled_value(p, lo) + sampled_value(p, hi));
  }
  return total;
}

double smooth_area(const PulseShape& shape, double a, double b, double width) {
  if (b <= a) return 0.0;
  return detail::simpson([&](double t) { return eval_pulse(shape, t); }, a, b,
                         detail::panels_for(b - a, kPanelWidth * width));
}

}  // namespace

void check_shape(const PulseShape& shape) {
  std::visit(overloaded{
                 [](const Gaussian& g) {
                   if (!(g.peak > 0.0) || !(g.width > 0.0))
                     throw Error(ErrorCode::InvalidArgument, "Gaussian needs peak > 0 and width > 0");
                 },
                 [](const TailoredGaussian& g) {
                   if (!(g.peak > 0.0) || !(g.width > 0.0) || !(g.plateau >= 0.0))
                     throw Error(ErrorCode::InvalidArgument,
                                 "tailored Gaussian needs peak > 0, width > 0, plateau >= 0");
                 },
                 [](const SampledPulse& p) {
                   if (p.values.size() < 2 || !(p.dt > 0.0))
                     throw Error(ErrorCode::InvalidArgument, "sampled pulse needs >= 2 values and dt > 0");
                   for (double v : p.values)
                     if (!(v >= 0.0))
                       throw Error(ErrorCode::InvalidArgument, "sampled envelope must be >= 0");
                 },
             },
             shape);
}

double eval_pulse(const PulseShape& shape, double t) {
  return std::visit(
      overloaded{
          [t](const Gaussian& g) {
            const double u = t / g.width;
            return g.peak * std::exp(-u * u);
          },
          [t](const TailoredGaussian& g) {
            const double u = t / g.width;
            if (u <= 0.0) return g.peak * std::exp(-u * u);
            if (u <= g.plateau) return g.peak;
            const double v = u - g.plateau;
            return g.peak * std::exp(-v * v);
          },
          [t](const SampledPulse& p) { return sampled_value(p, t); },
      },
      shape);
}

double peak_amplitude(const PulseShape& shape) {
  return std::visit(overloaded{
                        [](const Gaussian& g) { return g.peak; },
                        [](const TailoredGaussian& g) { return g.peak; },
                        [](const SampledPulse& p) {
                          return p.values.empty()
                                     ? 0.0
                                     : *std::max_element(p.values.begin(), p.values.end());
                        },
                    },
                    shape);
}

double pulse_area(const PulseShape& shape, double t_i, double t) {
  if (t < t_i) {
    throw Error(ErrorCode::BackwardInterval, "pulse area needs t >= t_i");
  }
  return std::visit(
      overloaded{
          [&](const Gaussian& g) { return smooth_area(shape, t_i, t, g.width); },
          [&](const TailoredGaussian& g) {
            // Split at the junctions so every Simpson panel sees a smooth integrand.
            const double breaks[] = {0.0, g.plateau * g.width};
            double total = 0.0;
            double lo = t_i;
            for (double b : breaks) {
              if (b > lo && b < t) {
                total += smooth_area(shape, lo, b, g.width);
                lo = b;
              }
            }
            return total + smooth_area(shape, lo, t, g.width);
          },
          [&](const SampledPulse& p) { return sampled_area(p, t_i, t); },
      },
      shape);
}

CumulativeArea::CumulativeArea(const PulseShape& shape, double t_start, double t_end,
                               int n_intervals)
    : t_start_(t_start), t_end_(t_end) {
  if (!(t_end > t_start) || n_intervals < 1) {
    throw Error(ErrorCode::InvalidArgument, "cumulative area needs t_end > t_start");
  }
  h_ = (t_end - t_start) / n_intervals;
  nodes_.resize(static_cast<std::size_t>(n_intervals) + 1);
  nodes_[0] = 0.0;
  double left = eval_pulse(shape, t_start);
  for (int k = 0; k < n_intervals; ++k) {
    const double a = t_start + k * h_;
    const double mid = eval_pulse(shape, a + 0.5 * h_);
    const double right = eval_pulse(shape, a + h_);
    nodes_[k + 1] = nodes_[k] + h_ / 6.0 * (left + 4.0 * mid + right);
    left = right;
  }
}

double CumulativeArea::operator()(double t) const {
  if (t <= t_start_) return 0.0;
  if (t >= t_end_) return nodes_.back();
  const double u = (t - t_start_) / h_;
  auto k = static_cast<std::size_t>(u);
  if (k >= nodes_.size() - 1) return nodes_.back();
  const double w = u - static_cast<double>(k);
  return (1.0 - w) * nodes_[k] + w * nodes_[k + 1];
}

double CumulativeArea::time_at_area(double area) const {
  if (area <= 0.0) return t_start_;
  if (area >= total()) return t_end_;
  double lo = t_start_;
  double hi = t_end_;
  for (int iter = 0; iter < 100 && hi - lo > 0.0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((*this)(mid) < area) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double local_adiabatic_ratio(double area, double epsilon, double f) {
  if (!(f > 0.0 && f < 1.0)) {
    throw Error(ErrorCode::DegenerateFraction, "pulse ratio needs 0 < f < 1");
  }
  const double x_max = std::sqrt((1.0 - f) / f);
  double x = epsilon * area;
  if (x < 0.0) {
    throw Error(ErrorCode::OutOfRange, "negative accumulated area");
  }
  if (x - x_max > 1e-12 * std::max(1.0, x_max)) {
    throw Error(ErrorCode::OutOfRange, "pulse over-run: eps*A exceeds sqrt((1-f)/f)");
  }
  x = std::min(x, x_max);
  return (1.0 - x / x_max) / std::sqrt(1.0 + x * (2.0 * x_max - x));
}

double area_duration_relation(double epsilon, double f) {
  if (!(f > 0.0 && f < 1.0) || !(epsilon > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < f < 1 and epsilon > 0");
  }
  return std::sqrt((1.0 - f) / f) / epsilon;
}

PulsePair::PulsePair(PulseShape pump, PulseShape stokes, double t_start, double t_end,
                     PairDesign design)
    : pump_(std::move(pump)),
      stokes_shape_(std::move(stokes)),
      t_start_(t_start),
      t_end_(t_end),
      design_(design) {
  if (!(t_end > t_start)) {
    throw Error(ErrorCode::InvalidArgument, "pulse window needs t_end > t_start");
  }
  check_shape(pump_);
  check_shape(stokes_shape_);
}

PulsePair::PulsePair(PulseShape pump, std::shared_ptr<const AdiabaticStokes> stokes,
                     double t_start, double t_end, PairDesign design)
    : pump_(std::move(pump)),
      adiabatic_(std::move(stokes)),
      t_start_(t_start),
      t_end_(t_end),
      design_(design) {}

PulsePair PulsePair::explicit_pair(PulseShape pump, PulseShape stokes, double t_start,
                                   double t_end) {
  return PulsePair(std::move(pump), std::move(stokes), t_start, t_end, ExplicitDesign{});
}

double PulsePair::pump(double t) const {
  if (t < t_start_ || t > t_end_) return 0.0;
  return eval_pulse(pump_, t);
}

double PulsePair::stokes(double t) const {
  if (t < t_start_ || t > t_end_) return 0.0;
  if (!adiabatic_) return eval_pulse(stokes_shape_, t);
  if (t >= t_end_) return 0.0;
  const double ratio =
      local_adiabatic_ratio(adiabatic_->area(t), adiabatic_->epsilon, adiabatic_->f);
  return ratio * eval_pulse(pump_, t);
}

double PulsePair::peak() const {
  // A designed Stokes pulse never exceeds the pump (ratio <= 1).
  if (adiabatic_) return peak_amplitude(pump_);
  return std::max(peak_amplitude(pump_), peak_amplitude(stokes_shape_));
}

double PulsePair::pump_area(double t) const {
  t = std::clamp(t, t_start_, t_end_);
  if (adiabatic_) return adiabatic_->area(t);
  return pulse_area(pump_, t_start_, t);
}

PulsePair design_local_adiabatic_pair(const PulseShape& base, double epsilon, double f,
                                      double t_start, double support_end,
                                      const DesignOptions& options) {
  if (!(f > 0.0 && f < 1.0)) {
    throw Error(ErrorCode::DegenerateFraction, "local-adiabatic design needs 0 < f < 1");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
  }
  check_shape(base);

  CumulativeArea area(base, t_start, support_end, options.quadrature_intervals);
  const double x_max = std::sqrt((1.0 - f) / f);
  const double required = x_max / epsilon;
  const double available = area.total();

  double t_f = support_end;
  double realized = epsilon;
  if (available >= required) {
    t_f = area.time_at_area(required);
    // Re-normalize against the interpolated area so the ratio closes exactly at t_f.
    realized = x_max / area(t_f);
  } else if (required - available <= options.area_slack * required) {
    realized = x_max / available;
  } else {
    throw Error(ErrorCode::InsufficientArea,
                "base pulse supplies area " + std::to_string(available) + ", design needs " +
                    std::to_string(required));
  }

  auto stokes = std::make_shared<const PulsePair::AdiabaticStokes>(
      PulsePair::AdiabaticStokes{std::move(area), realized, f});
  return PulsePair(base, std::move(stokes), t_start, t_f,
                   LocalAdiabatic{epsilon, realized});
}

PulsePair tailored_pair(double omega0, double plateau, double width, double lead,
                        double tail) {
  if (!(lead > 0.0) || !(tail > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "lead and tail must be > 0");
  }
  return PulsePair(TailoredGaussian{omega0, width, plateau}, Gaussian{omega0, width},
                   -lead * width, (plateau + tail) * width, TailoredScheme{plateau});
}

SampledPulse sample_envelope(const PulsePair& pair, Envelope which, int n_intervals) {
  if (n_intervals < 1) throw Error(ErrorCode::InvalidArgument, "need >= 1 interval");
  SampledPulse out;
  out.t_start = pair.t_start();
  out.dt = (pair.t_end() - pair.t_start()) / n_intervals;
  out.values.reserve(static_cast<std::size_t>(n_intervals) + 1);
  for (int k = 0; k <= n_intervals; ++k) {
    const double t = k == n_intervals ? pair.t_end() : pair.t_start() + k * out.dt;
    out.values.push_back(which == Envelope::Pump ? pair.pump(t) : pair.stokes(t));
  }
  return out;
}

void write_pulse_csv(std::ostream& out, const SampledPulse& pulse) {
  out << "time,envelope\n";
  for (std::size_t k = 0; k < pulse.values.size(); ++k) {
    const double row[2] = {pulse.t_start + static_cast<double>(k) * pulse.dt, pulse.values[k]};
    detail::write_row(out, row, 2);
  }
}

SampledPulse read_pulse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("time,envelope", 0) != 0) {
    throw Error(ErrorCode::InvalidArgument, "pulse CSV must start with header 'time,envelope'");
  }
  std::vector<double> times;
  SampledPulse pulse;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "malformed pulse CSV row: " + line);
    }
    try {
      times.push_back(std::stod(line.substr(0, comma)));
      pulse.values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidArgument, "non-numeric pulse CSV row: " + line);
    }
  }
  if (times.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "pulse CSV needs at least two rows");
  }
  pulse.t_start = times.front();
  pulse.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double expected = pulse.t_start + static_cast<double>(k) * pulse.dt;
    if (std::abs(times[k] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw Error(ErrorCode::InvalidArgument, "pulse CSV time grid is not uniform");
    }
  }
  check_shape(pulse);
  return pulse;
}

}  // namespace grover
