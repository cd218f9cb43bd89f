#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "wavedrift/errors.hpp"
#include "wavedrift/io/validation.hpp"
#include "wavedrift/wave_field.hpp"

namespace wavedrift::io {

enum class OutputFormat { Csv, Svg, Both };

OutputFormat parse_format(std::string_view text);
bool wants_csv(OutputFormat f);
bool wants_svg(OutputFormat f);

/// Settings shared by every command.
struct RunConfig {
  double epsilon{0.1};
  double k{1.0};
  double g{9.81};
  double tol{1e-10};
  /// Directory for output files; empty writes CSV/JSON to standard output.
  std::string output_dir;
  OutputFormat format{OutputFormat::Csv};
  std::uint64_t seed{20240101};
  /// Skip the physical validity condition when building parameters.
  bool unchecked{false};
  /// Added to omega after construction (fault injection for validate).
  double omega_offset{0.0};
};

/// Validates the tolerance and builds the wave parameters.
WaveParamsd make_run_params(const RunConfig& config);

/// Process exit code for a library error: 2 for invalid input, 3 for a
/// violated domain precondition, 1 otherwise.
int exit_code_for(ErrorKind kind);

/// Uniform grid "lo:hi:n" (n >= 1 nodes; n = 1 gives lo only).
struct GridSpec {
  double lo;
  double hi;
  std::size_t n;

  double node(std::size_t i) const;
};

/// Parses "lo:hi:n"; errors name the offending flag.
GridSpec parse_grid(std::string_view text, std::string_view flag);

/// {a*-2, a*-1, a*, a*+1, a*+2, -kM}; the last level passes through the
/// surface trough (pi, 0).
std::vector<double> auto_alphas(const WaveParamsd& p);

/// "auto" or a comma-separated list of finite numbers.
std::vector<double> parse_alphas(std::string_view text, const WaveParamsd& p);

/// Header x,y,eta,u,v,P; x-major, one row per grid node.
void cmd_field(const RunConfig& config, double t, const GridSpec& xs, const GridSpec& ys,
               double P0, std::ostream& csv);

/// Header alpha,branch,X,Y for the sampled half-plane X in [0, pi]; the SVG
/// shows X in [-pi, pi] by even reflection. Either stream may be null.
void cmd_portrait(const RunConfig& config, const std::vector<double>& alphas, std::size_t n,
                  std::optional<double> y_max, std::ostream* csv, std::ostream* svg);

/// Orbit from the trough at physical height y0 over whole periods.
/// Header t,x,y,X,Y,H. Either stream may be null.
void cmd_trajectory(const RunConfig& config, double y0, int periods, std::ostream* csv,
                    std::ostream* svg);

/// Header Y,a,theta_quad,theta_closed,theta_ode,drift_quad,drift_ode; the
/// ODE cells are empty unless requested.
void cmd_drift(const RunConfig& config, double y_top, double y_bottom, std::size_t n,
               bool include_ode, std::ostream& csv);

ValidationReport cmd_validate(const RunConfig& config);

}  // namespace wavedrift::io
