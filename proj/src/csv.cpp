#include "wavedrift/io/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace wavedrift::io {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void CsvWriter::row(std::initializer_list<Cell> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out_ << ',';
    out_ << c.text();
    first = false;
  }
  out_ << '\n';
}

}  // namespace wavedrift::io
