#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wavedrift/wave_field.hpp"

namespace wavedrift::io {

struct Check {
  std::string name;
  bool pass;
  /// Measured quantity; NaN when the check aborted with an error.
  double value;
  double threshold;
  /// Human-readable detail for the text report (not part of the JSON).
  std::string note;
};

struct ValidationReport {
  std::vector<Check> checks;

  /// Conjunction of the individual statuses.
  bool overall() const;
};

/// Runs the invariant suite of every module. All random sampling is drawn
/// from one generator seeded with `seed`, in a fixed order, so equal inputs
/// give identical reports.
ValidationReport run_validation(const WaveParamsd& params, double tol, std::uint64_t seed);

/// {"checks":[{"name","pass","value","threshold"}],"overall"} with a
/// trailing newline. Non-finite values are written as null.
std::string to_json(const ValidationReport& report);

/// One line per check followed by an overall line.
std::string to_text(const ValidationReport& report);

}  // namespace wavedrift::io
