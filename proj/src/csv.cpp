#include "grover/detail/csv.hpp"

#include <charconv>

namespace grover::detail {

std::string format_number(double value) {
  char buffer[64];
  auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 15);
  return std::string(buffer, result.ptr);
}

void write_row(std::ostream& out, const double* values, int n) {
  for (int i = 0; i < n; ++i) {
    if (i) out << ',';
    out << format_number(values[i]);
  }
  out << '\n';
}

}  // namespace grover::detail
