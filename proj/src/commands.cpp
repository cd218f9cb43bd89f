#include "wavedrift/io/commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "wavedrift/drift_analysis.hpp"
#include "wavedrift/io/csv.hpp"
#include "wavedrift/io/svg.hpp"
#include "wavedrift/phase_portrait.hpp"
#include "wavedrift/trajectory.hpp"

namespace wavedrift::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_finite(std::string_view s) {
  s = trim(s);
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string short_number(double v) {
  std::array<char, 32> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 5);
  return std::string(buf.data(), res.ptr);
}

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b",
                                "#e377c2", "#17becf", "#bcbd22"};

}  // namespace

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "svg") return OutputFormat::Svg;
  if (text == "both") return OutputFormat::Both;
  throw Error(ErrorKind::InvalidArgument,
              "--format: expected csv, svg or both, got '" + std::string(text) + "'");
}

bool wants_csv(OutputFormat f) { return f != OutputFormat::Svg; }
bool wants_svg(OutputFormat f) { return f != OutputFormat::Csv; }

WaveParamsd make_run_params(const RunConfig& config) {
  check_tolerance(config.tol);
  const WaveParamsd p = make_params(config.epsilon, config.k, config.g, config.unchecked);
  return config.omega_offset == 0.0 ? p : p.with_omega_offset(config.omega_offset);
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveParameter:
    case ErrorKind::ValidityViolation:
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidTolerance:
    case ErrorKind::EmptyInput:
      return 2;
    case ErrorKind::AboveSeparatrix:
    case ErrorKind::AboveCritical:
    case ErrorKind::NotSuperCritical:
    case ErrorKind::OutOfDomain:
      return 3;
    default:
      return 1;
  }
}

double GridSpec::node(std::size_t i) const {
  if (n == 1) return lo;
  if (i + 1 == n) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

GridSpec parse_grid(std::string_view text, std::string_view flag) {
  auto fail = [&] {
    return Error(ErrorKind::InvalidArgument,
                 std::string(flag) + ": malformed grid spec '" + std::string(text) +
                     "' (expected lo:hi:n with finite lo <= hi and integer n >= 1)");
  };
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
    throw fail();
  }
  const auto lo = parse_finite(text.substr(0, c1));
  const auto hi = parse_finite(text.substr(c1 + 1, c2 - c1 - 1));
  const std::string_view n_text = trim(text.substr(c2 + 1));
  std::size_t n = 0;
  const auto res = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
  if (!lo || !hi || *hi < *lo || res.ec != std::errc() ||
      res.ptr != n_text.data() + n_text.size() || n < 1 || n > 1'000'000) {
    throw fail();
  }
  return {*lo, *hi, n};
}

std::vector<double> auto_alphas(const WaveParamsd& p) {
  const double a = p.alpha_star();
  return {a - 2, a - 1, a, a + 1, a + 2, -p.kM()};
}

std::vector<double> parse_alphas(std::string_view text, const WaveParamsd& p) {
  if (trim(text) == "auto") return auto_alphas(p);
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    const auto v = parse_finite(text.substr(0, comma));
    if (!v) {
      throw Error(ErrorKind::InvalidArgument,
                  "--alphas: expected 'auto' or a comma-separated list of finite numbers");
    }
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void cmd_field(const RunConfig& config, double t, const GridSpec& xs, const GridSpec& ys,
               double P0, std::ostream& csv) {
  const WaveParamsd p = make_run_params(config);
  CsvWriter w(csv);
  w.header({"x", "y", "eta", "u", "v", "P"});
  for (std::size_t i = 0; i < xs.n; ++i) {
    const double x = xs.node(i);
    for (std::size_t j = 0; j < ys.n; ++j) {
      const double y = ys.node(j);
      const FieldSample<double> s = sample_field(p, t, x, y, P0);
      w.row({x, y, s.eta, s.u, s.v, s.P});
    }
  }
}

void cmd_portrait(const RunConfig& config, const std::vector<double>& alphas, std::size_t n,
                  std::optional<double> y_max, std::ostream* csv, std::ostream* svg) {
  const WaveParamsd p = make_run_params(config);
  const double top = y_max.value_or(default_y_max(p));
  const auto curves = portrait(p, alphas, n, top);

  if (csv) {
    CsvWriter w(*csv);
    w.header({"alpha", "branch", "X", "Y"});
    for (const auto& c : curves) {
      for (const auto& pt : c.lower_branch) w.row({c.alpha, "lower", pt.x(), pt.y()});
      for (const auto& pt : c.upper_branch) w.row({c.alpha, "upper", pt.x(), pt.y()});
    }
  }
  if (!svg) return;

  double y_min = top;
  for (const auto& c : curves) y_min = std::min(y_min, c.domain.y_pi);
  const double pad = 0.05 * (top - y_min);
  const double pi_d = pi<double>();
  SvgDocument doc(900, 640, {-pi_d, pi_d, y_min - pad, top + pad});
  doc.axes("X = kx - omega t", "Y = ky", "Level curves H = alpha in the moving frame");
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const bool critical = c.level_class == LevelClass::Critical;
    const char* colour = critical ? "#d62728" : kPalette[i % std::size(kPalette)];
    auto reflect = [](const std::vector<PhasePoint<double>>& branch) {
      std::vector<Eigen::Vector2d> right, left;
      for (const auto& pt : branch) {
        right.emplace_back(pt.x(), pt.y());
        left.emplace_back(-pt.x(), pt.y());
      }
      return std::vector<std::vector<Eigen::Vector2d>>{left, right};
    };
    const std::string label = "alpha=" + format_number(c.alpha);
    doc.path(reflect(c.lower_branch), colour, label + " lower", critical ? 2.0 : 1.5);
    if (c.has_upper_branch()) {
      doc.path(reflect(c.upper_branch), colour, label + " upper", critical ? 2.0 : 1.5);
    }
    const auto& anchor = c.lower_branch.front();
    doc.text({anchor.x() - 0.9, anchor.y()},
             std::string(to_string(c.level_class)) + " alpha=" + short_number(c.alpha), 10);
  }
  const CriticalPoint<double> cp = critical_point(p);
  doc.circle({cp.point.x(), cp.point.y()}, 4, "#d62728");
  doc.text({cp.point.x() + 0.08, cp.point.y() + 0.08}, "critical point (0, Y*)", 11);
  *svg << doc.str();
}

void cmd_trajectory(const RunConfig& config, double y0, int periods, std::ostream* csv,
                    std::ostream* svg) {
  const WaveParamsd p = make_run_params(config);
  const TrajectoryRecord<double> rec = integrate_periods(p, y0 * p.k(), periods, config.tol);

  if (csv) {
    CsvWriter w(*csv);
    w.header({"t", "x", "y", "X", "Y", "H"});
    for (std::size_t i = 0; i < rec.t.size(); ++i) {
      w.row({rec.t[i], rec.physical[i].x(), rec.physical[i].y(), rec.phase[i].x(),
             rec.phase[i].y(), hamiltonian(p, rec.phase[i])});
    }
  }
  if (!svg) return;

  const TrajectoryRecord<double> fine =
      integrate_periods<double>(p, y0 * p.k(), periods, config.tol, nullptr, 240);
  const std::vector<Eigen::Vector2d> path(fine.physical.begin(), fine.physical.end());
  const Viewport view = Viewport::fit(path, 0.08).equal_aspect(900 - 120, 640 - 120);
  SvgDocument doc(900, 640, view);
  doc.axes("x [m]", "y [m]", "Particle path over " + std::to_string(periods) + " orbit periods");
  doc.polyline(path, "#1f77b4", 1.5);
  doc.circle(path.front(), 4, "#2ca02c");
  doc.circle(path.back(), 4, "#d62728");
  doc.text(path.front(), "start", 11);
  doc.text(path.back(), "end", 11);
  *svg << doc.str();
}

void cmd_drift(const RunConfig& config, double y_top, double y_bottom, std::size_t n,
               bool include_ode, std::ostream& csv) {
  const WaveParamsd p = make_run_params(config);
  const DriftProfile<double> prof = drift_profile(p, y_top, y_bottom, n, include_ode, config.tol);
  CsvWriter w(csv);
  w.header({"Y", "a", "theta_quad", "theta_closed", "theta_ode", "drift_quad", "drift_ode"});
  for (std::size_t i = 0; i < prof.size(); ++i) {
    std::optional<double> theta_ode, drift_ode;
    if (include_ode) {
      theta_ode = (*prof.theta_ode)[i];
      drift_ode = (*prof.drift_ode)[i];
    }
    w.row({prof.Y_values[i], prof.a_values[i], prof.theta_quad[i], prof.theta_closed[i],
           theta_ode, prof.drift_quad[i], drift_ode});
  }
}

ValidationReport cmd_validate(const RunConfig& config) {
  const WaveParamsd p = make_run_params(config);
  return run_validation(p, config.tol, config.seed);
}

}  // namespace wavedrift::io
