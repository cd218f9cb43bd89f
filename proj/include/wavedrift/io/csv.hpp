#pragma once

#include <initializer_list>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace wavedrift::io {

/// Number rendering for all text output: '.' separator, 17 significant
/// digits, independent of the global locale.
std::string format_number(double value);

/// One CSV cell: a number, an absent number (empty cell) or a text token.
class Cell {
 public:
  Cell(double value) : text_(format_number(value)) {}
  Cell(std::optional<double> value) : text_(value ? format_number(*value) : std::string()) {}
  Cell(std::string_view text) : text_(text) {}
  Cell(const char* text) : text_(text) {}

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

/// Writes rows separated by ',' and terminated by '\n'.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(std::initializer_list<Cell> cells);
  void header(std::initializer_list<Cell> names) { row(names); }

 private:
  std::ostream& out_;
};

}  // namespace wavedrift::io
