#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wavedrift/io/commands.hpp"

namespace {

namespace io = wavedrift::io;

const CLI::Validator kFinite(
    [](std::string& value) -> std::string {
      double v = 0;
      const char* end = value.data() + value.size();
      const auto res = std::from_chars(value.data(), end, v);
      if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
        return "expected a finite number, got '" + value + "'";
      }
      return {};
    },
    "FINITE");

/// Raised for command-line combinations the parser itself cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Either a file under the output directory or standard output.
class Sink {
 public:
  Sink(const std::string& dir, const std::string& name) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    path_ = std::filesystem::path(dir) / name;
    file_.open(path_, std::ios::binary);
    if (!file_) throw std::runtime_error("cannot open " + path_.string() + " for writing");
  }

  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  void close() {
    if (!file_.is_open()) return;
    file_.close();
    if (!file_) throw std::runtime_error("failed writing " + path_.string());
    std::cerr << "wrote " << path_.string() << '\n';
  }

 private:
  std::filesystem::path path_;
  std::ofstream file_;
};

io::OutputFormat resolve_format(const std::string& text, const io::RunConfig& config,
                                bool svg_supported, const char* verb) {
  const io::OutputFormat f = io::parse_format(text);
  if (io::wants_svg(f) && !svg_supported) {
    throw UsageError(std::string("--format ") + text + " is not available for '" + verb +
                     "' (csv only)");
  }
  if (io::wants_svg(f) && config.output_dir.empty()) {
    throw UsageError("--format " + text + " needs --out <dir> for the SVG file");
  }
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Particle orbits and Stokes drift under a linear deep-water wave."};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat 'key = value' file; flags override its values");
  app.allow_config_extras(CLI::config_extras_mode::error);

  io::RunConfig config;
  std::string format_text = "csv";
  app.add_option("--epsilon", config.epsilon, "Wave amplitude [m]")->check(kFinite)->capture_default_str();
  app.add_option("--k", config.k, "Wavenumber [1/m]")->check(kFinite)->capture_default_str();
  app.add_option("--g", config.g, "Gravitational acceleration [m/s^2]")->check(kFinite)->capture_default_str();
  app.add_option("--tol", config.tol, "Integration tolerance in [1e-13, 1e-3]")->check(kFinite)->capture_default_str();
  app.add_option("--out", config.output_dir, "Output directory (default: standard output)");
  app.add_option("--format", format_text, "csv, svg or both")->capture_default_str();
  app.add_option("--seed", config.seed, "Seed for randomized checks")->capture_default_str();
  app.add_flag("--unchecked", config.unchecked, "Skip the physical validity condition");

  auto* field = app.add_subcommand("field", "Sample eta, u, v and P on a grid")->fallthrough();
  double field_t = 0.0, field_p0 = 0.0;
  std::string grid_x = "0:6.283185307179586:9", grid_y = "-3:0:7";
  field->add_option("--t", field_t, "Time [s]")->check(kFinite)->capture_default_str();
  field->add_option("--x", grid_x, "x grid lo:hi:n [m]")->capture_default_str();
  field->add_option("--y", grid_y, "y grid lo:hi:n [m]")->capture_default_str();
  field->add_option("--p0", field_p0, "Reference pressure")->check(kFinite)->capture_default_str();

  auto* portrait = app.add_subcommand("portrait", "Level curves of the moving-frame Hamiltonian")->fallthrough();
  std::string alphas_text = "auto";
  std::size_t portrait_n = 200;
  std::optional<double> y_max;
  portrait->add_option("--alphas", alphas_text, "'auto' or comma-separated levels")->capture_default_str();
  portrait->add_option("--n", portrait_n, "Samples per branch")->check(CLI::Range(2, 1'000'000))->capture_default_str();
  portrait->add_option("--ymax", y_max, "Upper sampling height (default 3 Y*)")->check(kFinite);

  auto* trajectory = app.add_subcommand("trajectory", "Particle orbit from the trough")->fallthrough();
  double y0 = -1.0;
  int periods = 3;
  trajectory->add_option("--y0", y0, "Lowest height of the orbit [m]")->check(kFinite)->capture_default_str();
  trajectory->add_option("--periods", periods, "Number of orbit periods")->check(CLI::Range(1, 100'000))->capture_default_str();

  auto* drift = app.add_subcommand("drift", "Orbit period and drift versus depth")->fallthrough();
  double y_top = 0.0, y_bottom = -6.0;
  std::size_t drift_n = 13;
  bool with_ode = false;
  drift->add_option("--y-top", y_top, "Top of the Y range")->check(kFinite)->capture_default_str();
  drift->add_option("--y-bottom", y_bottom, "Bottom of the Y range")->check(kFinite)->capture_default_str();
  drift->add_option("--n", drift_n, "Number of rows")->check(CLI::Range(2, 1'000'000))->capture_default_str();
  drift->add_flag("--ode", with_ode, "Add the integrated period and drift columns");

  auto* validate = app.add_subcommand("validate", "Run the invariant suite")->fallthrough();
  validate->add_option("--omega-offset", config.omega_offset,
                       "Add this to omega after construction (fault injection)")
      ->check(kFinite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*field) {
      resolve_format(format_text, config, false, "field");
      const io::GridSpec xs = io::parse_grid(grid_x, "--x");
      const io::GridSpec ys = io::parse_grid(grid_y, "--y");
      Sink out(config.output_dir, "field.csv");
      io::cmd_field(config, field_t, xs, ys, field_p0, out.stream());
      out.close();
    } else if (*portrait) {
      const io::OutputFormat f = resolve_format(format_text, config, true, "portrait");
      const auto alphas = io::parse_alphas(alphas_text, io::make_run_params(config));
      std::ostringstream csv, svg;
      io::cmd_portrait(config, alphas, portrait_n, y_max, io::wants_csv(f) ? &csv : nullptr,
                       io::wants_svg(f) ? &svg : nullptr);
      if (io::wants_csv(f)) {
        Sink out(config.output_dir, "portrait.csv");
        out.stream() << csv.str();
        out.close();
      }
      if (io::wants_svg(f)) {
        Sink out(config.output_dir, "portrait.svg");
        out.stream() << svg.str();
        out.close();
      }
    } else if (*trajectory) {
      const io::OutputFormat f = resolve_format(format_text, config, true, "trajectory");
      std::ostringstream csv, svg;
      io::cmd_trajectory(config, y0, periods, io::wants_csv(f) ? &csv : nullptr,
                         io::wants_svg(f) ? &svg : nullptr);
      if (io::wants_csv(f)) {
        Sink out(config.output_dir, "trajectory.csv");
        out.stream() << csv.str();
        out.close();
      }
      if (io::wants_svg(f)) {
        Sink out(config.output_dir, "trajectory.svg");
        out.stream() << svg.str();
        out.close();
      }
    } else if (*drift) {
      resolve_format(format_text, config, false, "drift");
      std::ostringstream csv;
      io::cmd_drift(config, y_top, y_bottom, drift_n, with_ode, csv);
      Sink out(config.output_dir, "drift.csv");
      out.stream() << csv.str();
      out.close();
    } else if (*validate) {
      io::parse_format(format_text);
      const io::ValidationReport report = io::cmd_validate(config);
      std::cerr << io::to_text(report);
      Sink out(config.output_dir, "validation.json");
      out.stream() << io::to_json(report);
      out.close();
      return report.overall() ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const wavedrift::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return io::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
