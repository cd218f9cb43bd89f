#include "wavedrift/io/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "wavedrift/drift_analysis.hpp"
#include "wavedrift/io/csv.hpp"
#include "wavedrift/phase_portrait.hpp"
#include "wavedrift/trajectory.hpp"

namespace wavedrift::io {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Outcome {
  double value;
  bool pass;
  std::string note{};
};

/// Draws uniform samples in a fixed order from one seeded generator.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * std::generate_canonical<double, 53>(gen_);
  }

 private:
  std::mt19937_64 gen_;
};

class Suite {
 public:
  Suite(ValidationReport& report) : report_(report) {}

  /// Runs one check; any exception turns into a failed entry with a NaN value.
  void run(const std::string& name, double threshold, const std::function<Outcome()>& body) {
    try {
      Outcome o = body();
      report_.checks.push_back({name, o.pass && std::isfinite(o.value), o.value, threshold,
                                std::move(o.note)});
    } catch (const std::exception& e) {
      report_.checks.push_back({name, false, kNaN, threshold, e.what()});
    }
  }

 private:
  ValidationReport& report_;
};

Outcome at_most(double value, double threshold) { return {value, value <= threshold}; }

Outcome below(double value, double threshold) { return {value, value < threshold}; }

Outcome above(double value, double threshold) { return {value, value > threshold}; }

// ---------------------------------------------------------------- wave field

void wave_field_checks(Suite& suite, const WaveParamsd& p, Sampler& rng) {
  suite.run("wave_field.dispersion", 1e-15, [&] {
    const double gk = p.g() * p.k();
    return at_most(std::abs(p.omega() * p.omega() - gk) / gk, 1e-15);
  });

  suite.run("wave_field.validity_margin", 0.0,
            [&] { return above(validity_margin(p), 0.0); });

  struct FieldPoint {
    double t, x, y;
  };
  std::vector<FieldPoint> points;
  for (int i = 0; i < 200; ++i) {
    const double t = rng.uniform(0.0, 10.0 * 2.0 * pi<double>() / p.omega());
    const double x = rng.uniform(-2.0 * p.lambda(), 2.0 * p.lambda());
    const double y = rng.uniform(-p.lambda() / 2.0, p.epsilon());
    points.push_back({t, x, y});
  }
  auto fd_step = [](double c) { return 1e-5 * std::max(1.0, std::abs(c)); };
  const double flow_scale = p.epsilon() * p.omega() * p.k();

  suite.run("wave_field.incompressibility", 1e-6, [&] {
    double worst = 0.0;
    for (const auto& q : points) {
      const double hx = fd_step(q.x), hy = fd_step(q.y);
      const double ux = (velocity(p, q.t, q.x + hx, q.y).x() - velocity(p, q.t, q.x - hx, q.y).x()) /
                        (2 * hx);
      const double vy = (velocity(p, q.t, q.x, q.y + hy).y() - velocity(p, q.t, q.x, q.y - hy).y()) /
                        (2 * hy);
      worst = std::max(worst, std::abs(ux + vy) / flow_scale);
    }
    return at_most(worst, 1e-6);
  });

  suite.run("wave_field.irrotationality", 1e-6, [&] {
    double worst = 0.0;
    for (const auto& q : points) {
      const double hx = fd_step(q.x), hy = fd_step(q.y);
      const double uy = (velocity(p, q.t, q.x, q.y + hy).x() - velocity(p, q.t, q.x, q.y - hy).x()) /
                        (2 * hy);
      const double vx = (velocity(p, q.t, q.x + hx, q.y).y() - velocity(p, q.t, q.x - hx, q.y).y()) /
                        (2 * hx);
      worst = std::max(worst, std::abs(uy - vx) / flow_scale);
    }
    return at_most(worst, 1e-6);
  });

  suite.run("wave_field.time_periodicity", 1e-12, [&] {
    const double period = 2.0 * pi<double>() / p.omega();
    double worst = 0.0;
    for (const auto& q : points) {
      const double t = std::fmod(q.t, period);
      const auto a = sample_field(p, t, q.x, q.y, 0.0);
      const auto b = sample_field(p, t + period, q.x, q.y, 0.0);
      const double amp_uv = p.M() * std::exp(p.k() * q.y);
      worst = std::max({worst, std::abs(a.eta - b.eta) / p.epsilon(),
                        std::abs(a.u - b.u) / amp_uv, std::abs(a.v - b.v) / amp_uv});
    }
    return at_most(worst, 1e-12);
  });

  suite.run("wave_field.depth_decay", 1e-13, [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
      const double x = points[i].x;
      const double y = rng.uniform(-p.lambda(), 0.0);
      const double ratio = velocity(p, 0.0, x, y).norm() / velocity(p, 0.0, x, 0.0).norm();
      const double expected = std::exp(p.k() * y);
      worst = std::max(worst, std::abs(ratio - expected) / expected);
    }
    return at_most(worst, 1e-13);
  });
}

// ------------------------------------------------------------- phase portrait

void phase_portrait_checks(Suite& suite, const WaveParamsd& p, Sampler& rng) {
  const double a_star = p.alpha_star();
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(a_star - 10.0 + 20.0 * i / 49.0);

  suite.run("phase_portrait.level_residual", 1e-10, [&] {
    const std::vector<double> alphas = {a_star - 2, a_star - 1, a_star, a_star + 1,
                                        a_star + 2, -p.kM()};
    const auto curves = portrait(p, alphas, 200, default_y_max(p));
    double worst = 0.0;
    for (const auto& c : curves) {
      for (const auto* branch : {&c.lower_branch, &c.upper_branch}) {
        for (const auto& pt : *branch) {
          worst = std::max(worst, std::abs(hamiltonian(p, pt) - c.alpha) / (1 + std::abs(c.alpha)));
        }
      }
    }
    return at_most(worst, 1e-10);
  });

  suite.run("phase_portrait.y_pi_decreasing", 0.0, [&] {
    double largest_step = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < grid.size(); ++i) {
      largest_step = std::max(largest_step, solve_Y_pi(p, grid[i]) - solve_Y_pi(p, grid[i - 1]));
    }
    return below(largest_step, 0.0);
  });

  std::vector<BranchPoints<double>> branches;
  std::vector<double> super;
  for (const double a : grid) {
    if (classify_level(p, a) == LevelClass::SuperCritical) super.push_back(a);
  }

  suite.run("phase_portrait.y1_decreasing_below_y_star", 0.0, [&] {
    branches.clear();
    for (const double a : super) branches.push_back(solve_branch_points(p, a));
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < branches.size(); ++i) {
      worst = std::max(worst, branches[i].y1 - p.y_star());
      if (i) worst = std::max(worst, branches[i].y1 - branches[i - 1].y1);
    }
    return below(worst, 0.0);
  });

  suite.run("phase_portrait.y2_increasing_above_y_star", 0.0, [&] {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < super.size(); ++i) {
      const auto b = solve_branch_points(p, super[i]);
      worst = std::max(worst, p.y_star() - b.y2);
      if (i) worst = std::max(worst, solve_branch_points(p, super[i - 1]).y2 - b.y2);
    }
    return below(worst, 0.0);
  });

  suite.run("phase_portrait.gap_vanishing", 1e-2, [&] {
    const double g1 = solve_branch_points(p, a_star + 1).gap;
    const double g10 = solve_branch_points(p, a_star + 10).gap;
    const double g100 = solve_branch_points(p, a_star + 100).gap;
    Outcome o = below(g100, 1e-2);
    o.pass = o.pass && g100 < g10 && g10 < g1;
    std::ostringstream note;
    note << "gap(a*+1) = " << g1 << ", gap(a*+10) = " << g10 << ", gap(a*+100) = " << g100;
    o.note = note.str();
    return o;
  });

  suite.run("phase_portrait.gap_decreasing", 0.0, [&] {
    double worst = -std::numeric_limits<double>::infinity();
    double prev = std::numeric_limits<double>::infinity();
    for (const double a : super) {
      const double gap = solve_branch_points(p, a).gap;
      worst = std::max(worst, gap - prev);
      prev = gap;
    }
    return below(worst, 0.0);
  });

  suite.run("phase_portrait.symmetry_periodicity", 1e-13, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const PhasePoint<double> z(rng.uniform(-pi<double>(), pi<double>()),
                                 rng.uniform(-5.0, p.y_star() + 1.0));
      const double h = hamiltonian(p, z);
      const double scale = 1 + std::abs(h);
      const double mirrored = hamiltonian(p, PhasePoint<double>(-z.x(), z.y()));
      const double shifted = hamiltonian(p, PhasePoint<double>(z.x() + 2 * pi<double>(), z.y()));
      worst = std::max({worst, std::abs(mirrored - h) / scale, std::abs(shifted - h) / scale});
    }
    return at_most(worst, 1e-13);
  });

  suite.run("phase_portrait.branch_monotonicity", 0.0, [&] {
    double worst = -std::numeric_limits<double>::infinity();
    for (const double a : {a_star + 1, a_star + 2, -p.kM()}) {
      const auto c = sample_level_curve(p, a, 200, default_y_max(p));
      for (std::size_t i = 1; i < c.lower_branch.size(); ++i) {
        worst = std::max(worst, c.lower_branch[i].x() - c.lower_branch[i - 1].x());
      }
      for (std::size_t i = 1; i < c.upper_branch.size(); ++i) {
        worst = std::max(worst, c.upper_branch[i - 1].x() - c.upper_branch[i].x());
      }
    }
    return below(worst, 0.0);
  });

  suite.run("phase_portrait.gradient_finite_difference", 1e-6, [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const PhasePoint<double> z(rng.uniform(-pi<double>(), pi<double>()),
                                 rng.uniform(-5.0, p.y_star() + 1.0));
      const double hx = 1e-5 * std::max(1.0, std::abs(z.x()));
      const double hy = 1e-5 * std::max(1.0, std::abs(z.y()));
      const Vector2<double> fd(
          (hamiltonian(p, PhasePoint<double>(z.x() + hx, z.y())) -
           hamiltonian(p, PhasePoint<double>(z.x() - hx, z.y()))) / (2 * hx),
          (hamiltonian(p, PhasePoint<double>(z.x(), z.y() + hy)) -
           hamiltonian(p, PhasePoint<double>(z.x(), z.y() - hy))) / (2 * hy));
      const Vector2<double> g = grad_hamiltonian(p, z);
      worst = std::max(worst, (fd - g).lpNorm<Eigen::Infinity>() / g.lpNorm<Eigen::Infinity>());
    }
    return at_most(worst, 1e-6);
  });

  suite.run("phase_portrait.saddle_eigenvalues", 1e-10, [&] {
    const Vector2<double> ev = hessian_at_critical(p);
    return at_most(std::max(std::abs(ev(0) + p.omega()), std::abs(ev(1) - p.omega())), 1e-10);
  });
}

// ----------------------------------------------------------------- trajectory

void trajectory_checks(Suite& suite, const WaveParamsd& p, double tol) {
  const PhasePoint<double> start(pi<double>(), -1.0);
  const double wave_period = 2 * pi<double>() / p.omega();

  suite.run("trajectory.hamiltonian_conservation", 100 * tol, [&] {
    const auto rec = integrate_periods(p, -1.0, 20, tol);
    return at_most(rec.max_H_drift, rec.H_budget);
  });

  suite.run("trajectory.convergence_order", 4.0, [&] {
    const auto study = convergence_study(p, start, 2 * wave_period,
                                         std::vector<double>{1e-6, 1e-7, 1e-8, 1e-9, 1e-10});
    return Outcome{study.observed_order, study.observed_order >= 4.0};
  });

  suite.run("trajectory.frame_equivalence", 10 * tol, [&] {
    const auto rec = integrate_phase(p, start, 2 * wave_period, tol);
    const auto path = integrate_physical(p, rec.physical.front(), 2 * wave_period, tol);
    double worst = 0.0;
    for (std::size_t i = 0; i < rec.t.size(); ++i) {
      worst = std::max(worst, (path(rec.t[i]) - rec.physical[i]).lpNorm<Eigen::Infinity>());
    }
    return at_most(worst, 10 * tol);
  });

  suite.run("trajectory.orbit_non_closure", 0.0, [&] {
    double smallest = std::numeric_limits<double>::infinity();
    for (const double y0 : {0.0, -0.5, -1.0, -2.0, -4.0}) {
      smallest = std::min(smallest, measure_period_and_drift(p, y0, tol).drift_direct);
    }
    return above(smallest, 0.0);
  });

  suite.run("trajectory.direct_drift_agreement", 1e-12, [&] {
    const auto run = measure_period_run(p, -1.0, tol);
    const double scale = std::max(std::abs(run.record.physical.front().x()),
                                  std::abs(run.record.physical.back().x()));
    return at_most(std::abs(run.measurement.drift_direct - run.measurement.drift) / scale, 1e-12);
  });

  suite.run("trajectory.time_reversal", 100 * tol, [&] {
    const double theta = measure_period_and_drift(p, -1.0, tol).theta;
    const auto fwd = integrate_phase_between(p, start, 0.0, theta, tol);
    const auto back = integrate_phase_between(p, fwd.phase.back(), theta, 0.0, tol);
    return at_most((back.phase.back() - start).lpNorm<Eigen::Infinity>(), 100 * tol);
  });

  suite.run("trajectory.sign_pattern", 0.0, [&] {
    std::size_t violations = 0;
    bool populated = true;
    for (const double y0 : {-1.0, -4.0}) {
      const auto report = tally_signs(measure_period_run(p, y0, tol).record, false);
      for (std::size_t q = 0; q < 4; ++q) {
        violations += report.violations[q];
        populated = populated && report.samples[q] > 0;
      }
    }
    Outcome o = at_most(static_cast<double>(violations), 0.0);
    o.pass = o.pass && populated;
    if (!populated) o.note = "a quadrant received no samples";
    return o;
  });

  suite.run("trajectory.batch_determinism", 0.0, [&] {
    const std::vector<PhasePoint<double>> starts = {
        {pi<double>(), -0.5}, {pi<double>(), -1.0}, {1.0, -2.0}, {-2.0, 0.0}};
    const auto par = integrate_batch(p, starts, wave_period, tol, true);
    const auto seq = integrate_batch(p, starts, wave_period, tol, false);
    double mismatches = 0;
    for (std::size_t i = 0; i < starts.size(); ++i) {
      if (par[i].t != seq[i].t || par[i].phase != seq[i].phase) ++mismatches;
    }
    return at_most(mismatches, 0.0);
  });
}

// ------------------------------------------------------------- drift analysis

void drift_checks(Suite& suite, const WaveParamsd& p, double tol, Sampler& rng) {
  std::vector<double> depths;
  for (int i = 0; i < 50; ++i) depths.push_back(rng.uniform(-10.0, p.y_star() - 0.01));
  std::vector<double> deep;
  for (int i = 0; i < 50; ++i) deep.push_back(rng.uniform(-30.0, -2.0));

  suite.run("drift.theta_oracle_agreement", 1e-10, [&] {
    double worst = 0.0;
    for (const double Y : depths) {
      const double closed = theta_closed_form(p, Y);
      worst = std::max(worst, std::abs(theta_quadrature(p, Y) - closed) / closed);
    }
    return at_most(worst, 1e-10);
  });

  suite.run("drift.positivity", 0.0, [&] {
    double smallest = std::numeric_limits<double>::infinity();
    for (const double Y : depths) {
      smallest = std::min({smallest, drift_quadrature(p, Y), drift_closed_form(p, Y)});
    }
    for (const double Y : deep) smallest = std::min(smallest, drift_closed_form(p, Y));
    return above(smallest, 0.0);
  });

  suite.run("drift.monotone_decay", 0.0, [&] {
    std::vector<double> ys = depths;
    ys.insert(ys.end(), deep.begin(), deep.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < ys.size(); ++i) {
      worst = std::max(worst, drift_closed_form(p, ys[i - 1]) - drift_closed_form(p, ys[i]));
    }
    return below(worst, 0.0);
  });

  // drift <= (pi/k) r^2 / (1 - r^2) with r = eps k e^Y, so below Y = -2 the
  // constant pi eps^2 k / (1 - (eps k e^-2)^2) bounds drift / e^{2Y}.
  const double r2 = p.epsilon() * p.k() * std::exp(-2.0);
  const double decay_constant = pi<double>() * p.epsilon() * p.epsilon() * p.k() / (1 - r2 * r2);
  suite.run("drift.vanishing_at_depth", decay_constant, [&] {
    double worst = 0.0;
    for (const double Y : deep) {
      worst = std::max(worst, drift_closed_form(p, Y) / std::exp(2 * Y));
    }
    worst = std::max(worst, drift_closed_form(p, -2.0) / std::exp(-4.0));
    return at_most(worst, decay_constant);
  });

  suite.run("drift.period_floor", 0.0, [&] {
    const double floor = 2 * pi<double>() / p.omega();
    double smallest = std::numeric_limits<double>::infinity();
    for (const double Y : depths) {
      smallest = std::min({smallest, theta_closed_form(p, Y) - floor,
                           theta_quadrature(p, Y) - floor});
    }
    return above(smallest, 0.0);
  });

  suite.run("drift.ode_discrepancy_shrinks_with_depth", 0.0, [&] {
    double prev = std::numeric_limits<double>::infinity();
    double worst = -std::numeric_limits<double>::infinity();
    std::ostringstream note;
    note << "relative ODE - closed discrepancy at Y = 0, -1, -2, -4:";
    for (const double Y : {0.0, -1.0, -2.0, -4.0}) {
      const double closed = drift_closed_form(p, Y);
      const double rel = std::abs(drift_per_period(p, Y, DriftMethod::Ode, tol) - closed) / closed;
      note << ' ' << format_number(rel);
      worst = std::max(worst, rel - prev);
      prev = rel;
    }
    Outcome o = below(worst, 0.0);
    o.note = note.str();
    return o;
  });

  suite.run("drift.profile_strictly_decreasing", 0.0, [&] {
    const double top = std::min(0.0, separatrix_floor(p) - 0.5);
    const auto prof = drift_profile(p, top, top - 6.0, 13, true, tol);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < prof.size(); ++i) {
      worst = std::max({worst, prof.drift_quad[i] - prof.drift_quad[i - 1],
                        (*prof.drift_ode)[i] - (*prof.drift_ode)[i - 1]});
    }
    return below(worst, 0.0);
  });
}

}  // namespace

bool ValidationReport::overall() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ValidationReport run_validation(const WaveParamsd& params, double tol, std::uint64_t seed) {
  check_tolerance(tol);
  ValidationReport report;
  Suite suite(report);
  Sampler rng(seed);
  wave_field_checks(suite, params, rng);
  phase_portrait_checks(suite, params, rng);
  trajectory_checks(suite, params, tol);
  drift_checks(suite, params, tol, rng);
  return report;
}

std::string to_json(const ValidationReport& report) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json entry;
    entry["name"] = c.name;
    entry["pass"] = c.pass;
    entry["value"] = std::isfinite(c.value) ? nlohmann::ordered_json(c.value) : nullptr;
    entry["threshold"] = c.threshold;
    checks.push_back(std::move(entry));
  }
  nlohmann::ordered_json doc;
  doc["checks"] = std::move(checks);
  doc["overall"] = report.overall();
  return doc.dump(2) + "\n";
}

std::string to_text(const ValidationReport& report) {
  std::ostringstream out;
  for (const auto& c : report.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << "  value=" << format_number(c.value)
        << "  threshold=" << format_number(c.threshold);
    if (!c.note.empty()) out << "  (" << c.note << ')';
    out << '\n';
  }
  out << "overall: " << (report.overall() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

}  // namespace wavedrift::io
