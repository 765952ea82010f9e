#pragma once

#include <ostream>
#include <string>

namespace grover::detail {

// 15 significant digits, '.' decimal separator regardless of locale.
std::string format_number(double value);

void write_row(std::ostream& out, const double* values, int n);

}  // namespace grover::detail
