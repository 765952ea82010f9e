#pragma once

#include <algorithm>
#include <cmath>

namespace grover::detail {

// Composite Simpson over [a, b] with `panels` subintervals of equal width,
// each integrated with its midpoint.
template <class F>
double simpson(F&& fn, double a, double b, long panels) {
  if (b <= a || panels < 1) return 0.0;
  const double h = (b - a) / static_cast<double>(panels);
  double ends = fn(a) + fn(b);
  double mids = 0.0;
  double inner = 0.0;
  for (long k = 0; k < panels; ++k) {
    mids += fn(a + (k + 0.5) * h);
    if (k > 0) inner += fn(a + k * h);
  }
  return h / 6.0 * (ends + 4.0 * mids + 2.0 * inner);
}

// Panel count giving a panel width of at most `max_width`.
inline long panels_for(double length, double max_width) {
  return std::max(1L, static_cast<long>(std::ceil(length / max_width)));
}

}  // namespace grover::detail
