#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <optional>
#include <sstream>
#include <span>
#include <vector>

#include "wavedrift/dormand_prince.hpp"
#include "wavedrift/errors.hpp"
#include "wavedrift/phase_portrait.hpp"
#include "wavedrift/wave_field.hpp"

namespace wavedrift {

/// Moving-frame vector field (dX/dt, dY/dt) = (dH/dY, -dH/dX).
template <typename Scalar>
Vector2<Scalar> rhs_phase(const WaveParams<Scalar>& p, const PhasePoint<Scalar>& pt) {
  using std::cos;
  using std::exp;
  using std::sin;
  const Scalar a = p.kM() * exp(pt.y());
  return {a * cos(pt.x()) - p.omega(), a * sin(pt.x())};
}

/// Particle velocity in the laboratory frame at (t, x, y).
template <typename Scalar>
Vector2<Scalar> rhs_physical(const WaveParams<Scalar>& p, Scalar t, Scalar x, Scalar y) {
  return velocity(p, t, x, y);
}

/// Laboratory position of a moving-frame state at time t.
template <typename Scalar>
Vector2<Scalar> to_physical(const WaveParams<Scalar>& p, Scalar t, const PhasePoint<Scalar>& pt) {
  return {pt.x() / p.k() + p.omega() / p.k() * t, pt.y() / p.k()};
}

enum class RunStatus {
  Completed,
  /// Stopped early because Y exceeded Y* + 20 (orbit above the separatrix).
  Diverged,
};

template <typename Scalar>
struct TrajectoryRecord {
  WaveParams<Scalar> params;
  std::vector<Scalar> t;
  std::vector<PhasePoint<Scalar>> phase;
  std::vector<Vector2<Scalar>> physical;
  Scalar H0;
  /// max |H(t) - H0| / (1 + |H0|) over the samples.
  Scalar max_H_drift;
  /// Declared Hamiltonian budget for the run, 100 tol.
  Scalar H_budget;
  RunStatus status;
  std::size_t rejected_steps;

  bool within_budget() const { return max_H_drift <= H_budget; }
};

/// Height above Y* at which runs are declared divergent.
inline constexpr double kDivergenceMargin = 20.0;

template <typename Scalar>
void check_tolerance(Scalar tol) {
  if (!(tol >= Scalar(1e-13) && tol <= Scalar(1e-3))) {
    std::ostringstream os;
    os << "tolerance " << tol << " outside [1e-13, 1e-3]";
    throw Error(ErrorKind::InvalidTolerance, os.str());
  }
}

namespace detail {

template <typename Scalar>
StepControl<Scalar> phase_control(Scalar tol) {
  StepControl<Scalar> c;
  c.abs_tol = tol;
  c.rel_tol = Scalar(0);
  return c;
}

/// Integrates the moving-frame system from (t0, start) to t_end, recording
/// every accepted step plus the states at the requested mark times.
template <typename Scalar>
TrajectoryRecord<Scalar> run_phase(const WaveParams<Scalar>& p, const PhasePoint<Scalar>& start,
                                   Scalar t0, Scalar t_end, Scalar tol,
                                   std::span<const Scalar> marks = {},
                                   DenseTrajectory<Scalar, 2>* dense = nullptr) {
  using std::abs;
  check_tolerance(tol);
  const Scalar H0 = hamiltonian(p, start);
  const Scalar y_limit = p.y_star() + Scalar(kDivergenceMargin);

  TrajectoryRecord<Scalar> rec{p, {}, {}, {}, H0, Scalar(0), Scalar(100) * tol,
                               RunStatus::Completed, 0};
  auto push = [&](Scalar t, const PhasePoint<Scalar>& z) {
    rec.t.push_back(t);
    rec.phase.push_back(z);
    rec.physical.push_back(to_physical(p, t, z));
    const Scalar drift = abs(hamiltonian(p, z) - H0) / (Scalar(1) + abs(H0));
    if (drift > rec.max_H_drift) rec.max_H_drift = drift;
  };
  push(t0, start);

  const Scalar dir = t_end < t0 ? Scalar(-1) : Scalar(1);
  std::size_t next_mark = 0;
  auto rhs = [&p](Scalar, const State<Scalar, 2>& z) { return rhs_phase<Scalar>(p, z); };
  auto observer = [&](const DenseStep<Scalar, 2>& step, Scalar t, const State<Scalar, 2>& z) {
    if (dense) dense->push_back(step);
    while (next_mark < marks.size() && dir * (marks[next_mark] - t) < Scalar(0)) {
      const Scalar tm = marks[next_mark++];
      if (dir * (tm - rec.t.back()) > Scalar(0)) push(tm, step(tm));
    }
    if (next_mark < marks.size() && marks[next_mark] == t) ++next_mark;
    push(t, z);
    if (z.y() > y_limit) {
      rec.status = RunStatus::Diverged;
      return false;
    }
    return true;
  };
  const auto outcome =
      integrate_dopri5<Scalar, 2>(rhs, t0, start, t_end, phase_control(tol), observer);
  rec.rejected_steps = outcome.rejected;
  return rec;
}

}  // namespace detail

/// Adaptive 5(4) integration of a particle orbit in the moving frame over
/// [0, t_end]. The physical path uses x0 = X(0)/k. Orbits above the
/// separatrix are cut off once Y > Y* + 20 and flagged Diverged.
template <typename Scalar>
TrajectoryRecord<Scalar> integrate_phase(const WaveParams<Scalar>& p,
                                         const PhasePoint<Scalar>& start, Scalar t_end,
                                         Scalar tol) {
  if (!(t_end > Scalar(0))) throw Error(ErrorKind::InvalidArgument, "t_end must be positive");
  return detail::run_phase(p, start, Scalar(0), t_end, tol);
}

/// Same as integrate_phase but between arbitrary times (t_end < t0 runs backwards).
template <typename Scalar>
TrajectoryRecord<Scalar> integrate_phase_between(const WaveParams<Scalar>& p,
                                                 const PhasePoint<Scalar>& start, Scalar t0,
                                                 Scalar t_end, Scalar tol) {
  return detail::run_phase(p, start, t0, t_end, tol);
}

/// Independent orbits integrated concurrently; each result is bitwise identical
/// to a sequential integrate_phase call.
template <typename Scalar>
std::vector<TrajectoryRecord<Scalar>> integrate_batch(const WaveParams<Scalar>& p,
                                                      const std::vector<PhasePoint<Scalar>>& starts,
                                                      Scalar t_end, Scalar tol,
                                                      bool parallel = true) {
  const auto policy = parallel ? std::launch::async : std::launch::deferred;
  std::vector<std::future<TrajectoryRecord<Scalar>>> jobs;
  jobs.reserve(starts.size());
  for (const auto& s : starts) {
    jobs.push_back(std::async(policy, [&p, s, t_end, tol] {
      return integrate_phase(p, s, t_end, tol);
    }));
  }
  std::vector<TrajectoryRecord<Scalar>> out;
  out.reserve(starts.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

/// Laboratory-frame integration of dx/dt = u, dy/dt = v with the same
/// integrator, kept as a dense trajectory for comparisons at arbitrary times.
template <typename Scalar>
DenseTrajectory<Scalar, 2> integrate_physical(const WaveParams<Scalar>& p,
                                              const Vector2<Scalar>& start, Scalar t_end,
                                              Scalar tol) {
  check_tolerance(tol);
  DenseTrajectory<Scalar, 2> path;
  auto rhs = [&p](Scalar t, const State<Scalar, 2>& z) {
    return rhs_physical<Scalar>(p, t, z.x(), z.y());
  };
  integrate_dopri5<Scalar, 2>(rhs, Scalar(0), start, t_end, detail::phase_control(tol),
                              [&path](const DenseStep<Scalar, 2>& step, Scalar,
                                      const State<Scalar, 2>&) {
                                path.push_back(step);
                                return true;
                              });
  return path;
}

template <typename Scalar>
struct PeriodMeasurement {
  /// Time for X to travel from pi to -pi.
  Scalar theta;
  /// (theta omega - 2 pi) / k.
  Scalar drift;
  /// x(theta) - x(0) taken from the mapped physical path.
  Scalar drift_direct;
  Scalar Y0;
  /// |Y(theta) - Y0|.
  Scalar return_error;
  int crossings;
};

template <typename Scalar>
struct PeriodRun {
  PeriodMeasurement<Scalar> measurement;
  /// Accepted steps over [0, theta], closed by the exact crossing state.
  TrajectoryRecord<Scalar> record;
};

/// Lowest starting height still below the separatrix crossing of X = pi.
template <typename Scalar>
Scalar separatrix_floor(const WaveParams<Scalar>& p) {
  return solve_Y_pi(p, p.alpha_star());
}

/// Integrates one orbit from the trough (pi, Y0) until X first reaches -pi.
/// The crossing time is located by bisection on the continuous extension.
template <typename Scalar>
PeriodRun<Scalar> measure_period_run(const WaveParams<Scalar>& p, Scalar Y0, Scalar tol) {
  using std::abs;
  check_tolerance(tol);
  const Scalar floor = separatrix_floor(p);
  if (!(Y0 < floor)) {
    std::ostringstream os;
    os << "Y0 = " << Y0 << " is not below the separatrix crossing Y_pi(alpha*) = " << floor;
    throw Error(ErrorKind::AboveSeparatrix, os.str());
  }
  const Scalar pi_s = pi<Scalar>();
  const PhasePoint<Scalar> start(pi_s, Y0);
  const Scalar H0 = hamiltonian(p, start);

  TrajectoryRecord<Scalar> rec{p, {}, {}, {}, H0, Scalar(0), Scalar(100) * tol,
                               RunStatus::Completed, 0};
  auto push = [&](Scalar t, const PhasePoint<Scalar>& z) {
    rec.t.push_back(t);
    rec.phase.push_back(z);
    rec.physical.push_back(to_physical(p, t, z));
    const Scalar drift = abs(hamiltonian(p, z) - H0) / (Scalar(1) + abs(H0));
    if (drift > rec.max_H_drift) rec.max_H_drift = drift;
  };
  push(Scalar(0), start);

  std::optional<Scalar> theta;
  PhasePoint<Scalar> at_theta = start;
  auto observer = [&](const DenseStep<Scalar, 2>& step, Scalar t, const State<Scalar, 2>& z) {
    if (z.x() > -pi_s) {
      push(t, z);
      return true;
    }
    // X(t) + pi changes sign inside this step.
    Scalar lo = step.t0;
    Scalar hi = t;
    while (true) {
      const Scalar mid = (lo + hi) / Scalar(2);
      if (hi - lo <= Scalar(1e-13) * hi || !(mid > lo && mid < hi)) break;
      if (step(mid).x() > -pi_s) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    theta = (lo + hi) / Scalar(2);
    at_theta = step(*theta);
    push(*theta, at_theta);
    return false;
  };
  auto rhs = [&p](Scalar, const State<Scalar, 2>& z) { return rhs_phase<Scalar>(p, z); };
  // Periods below the separatrix are a bounded multiple of the wave period.
  const Scalar horizon = Scalar(1000) * Scalar(2) * pi_s / p.omega();
  const auto outcome =
      integrate_dopri5<Scalar, 2>(rhs, Scalar(0), start, horizon, detail::phase_control(tol),
                                  observer);
  rec.rejected_steps = outcome.rejected;
  if (!theta) throw Error(ErrorKind::ConvergenceFailure, "orbit did not reach X = -pi");

  PeriodMeasurement<Scalar> m;
  m.theta = *theta;
  m.drift = (m.theta * p.omega() - Scalar(2) * pi_s) / p.k();
  m.drift_direct = rec.physical.back().x() - rec.physical.front().x();
  m.Y0 = Y0;
  m.return_error = abs(at_theta.y() - Y0);
  m.crossings = 1;

  const Scalar return_tol = Scalar(1e-8) > Scalar(100) * tol ? Scalar(1e-8) : Scalar(100) * tol;
  if (m.return_error > return_tol) {
    std::ostringstream os;
    os << "orbit returned to Y = " << at_theta.y() << " instead of " << Y0;
    throw Error(ErrorKind::ConvergenceFailure, os.str());
  }
  return {m, std::move(rec)};
}

template <typename Scalar>
PeriodMeasurement<Scalar> measure_period_and_drift(const WaveParams<Scalar>& p, Scalar Y0,
                                                   Scalar tol) {
  return measure_period_run(p, Y0, tol).measurement;
}

/// Orbit of `periods` successive loops from the trough (pi, Y0). The exact
/// period marks i*theta are included as samples, plus `samples_per_period`
/// evenly spaced interpolated samples per loop when nonzero.
template <typename Scalar>
TrajectoryRecord<Scalar> integrate_periods(const WaveParams<Scalar>& p, Scalar Y0, int periods,
                                           Scalar tol, Scalar* theta_out = nullptr,
                                           std::size_t samples_per_period = 0) {
  if (periods < 1) throw Error(ErrorKind::InvalidArgument, "periods must be at least 1");
  const Scalar theta = measure_period_and_drift(p, Y0, tol).theta;
  if (theta_out) *theta_out = theta;
  const std::size_t per = samples_per_period > 0 ? samples_per_period : 1;
  std::vector<Scalar> marks;
  for (std::size_t i = 1; i < per * static_cast<std::size_t>(periods); ++i) {
    marks.push_back(theta * Scalar(i) / Scalar(per));
  }
  return detail::run_phase(p, PhasePoint<Scalar>(pi<Scalar>(), Y0), Scalar(0),
                           theta * Scalar(periods), tol, std::span<const Scalar>(marks));
}

/// Per-quadrant tally of the laboratory velocity signs over one orbit.
/// Quadrants: X in (-pi,-pi/2), (-pi/2,0), (0,pi/2), (pi/2,pi).
struct SignReport {
  std::array<std::size_t, 4> samples{};
  std::array<std::size_t, 4> violations{};

  bool pass() const {
    for (std::size_t q = 0; q < 4; ++q) {
      if (violations[q] != 0 || samples[q] == 0) return false;
    }
    return true;
  }
};

/// Expected (sign dx/dt, sign dy/dt) per quadrant.
inline constexpr std::array<std::array<int, 2>, 4> kQuadrantSigns = {{
    {-1, -1}, {+1, -1}, {+1, +1}, {-1, +1}}};

template <typename Scalar>
SignReport tally_signs(const TrajectoryRecord<Scalar>& rec, bool throw_on_violation = true) {
  using std::abs;
  const WaveParams<Scalar>& p = rec.params;
  const Scalar half_pi = pi<Scalar>() / Scalar(2);
  const Scalar band(1e-12);
  SignReport report;
  for (std::size_t i = 0; i < rec.t.size(); ++i) {
    const Scalar X = rec.phase[i].x();
    std::optional<std::size_t> q;
    for (std::size_t j = 0; j < 4; ++j) {
      const Scalar lo = half_pi * Scalar(static_cast<int>(j) - 2);
      if (X > lo + band && X < lo + half_pi - band) q = j;
    }
    if (!q) continue;
    const Vector2<Scalar> v =
        rhs_physical(p, rec.t[i], rec.physical[i].x(), rec.physical[i].y());
    ++report.samples[*q];
    const bool ok = (v.x() > Scalar(0) ? 1 : -1) == kQuadrantSigns[*q][0] &&
                    (v.y() > Scalar(0) ? 1 : -1) == kQuadrantSigns[*q][1] &&
                    v.x() != Scalar(0) && v.y() != Scalar(0);
    if (!ok) {
      ++report.violations[*q];
      if (throw_on_violation) {
        std::ostringstream os;
        os << "at t = " << rec.t[i] << ", X = " << X << ": (dx/dt, dy/dt) = (" << v.x() << ", "
           << v.y() << ")";
        throw Error(ErrorKind::SignViolation, os.str());
      }
    }
  }
  return report;
}

/// Checks the quadrant-wise signs of the laboratory velocity at every accepted
/// step of one measured orbit from (pi, Y0).
template <typename Scalar>
SignReport sign_pattern_check(const WaveParams<Scalar>& p, Scalar Y0, Scalar tol) {
  return tally_signs(measure_period_run(p, Y0, tol).record);
}

template <typename Scalar>
struct SeparatrixApproach {
  std::vector<Scalar> t;
  /// Y* - Y along the lower separatrix arc.
  std::vector<Scalar> depth_below_saddle;
  std::vector<Scalar> X;
  /// Euclidean distance to the critical point in the moving frame.
  std::vector<Scalar> distance;
};

namespace detail {
/// 1 - (1 - u) e^u without cancellation for small u.
template <typename Scalar>
Scalar separatrix_defect(Scalar u) {
  using std::abs;
  using std::exp;
  if (abs(u) < Scalar(0.1)) {
    // sum_{n>=2} (n-1) u^n / n!
    Scalar term = u;  // u^n / n! for n = 1
    Scalar sum(0);
    for (int n = 2; n < 30; ++n) {
      term *= u / Scalar(n);
      sum += Scalar(n - 1) * term;
    }
    return sum;
  }
  return Scalar(1) - (Scalar(1) - u) * exp(u);
}
}  // namespace detail

/// Motion along the lower separatrix arc, reduced to the height variable
/// u = Y* - Y. On H = alpha* one has g = (1 - u) e^u, so
/// du/dt = -omega e^{-u} sqrt(q (2 - q)) with q = 1 - g. Integrating u with
/// relative error control follows the approach to the saddle far below the
/// resolution of Y itself.
template <typename Scalar>
SeparatrixApproach<Scalar> separatrix_approach(const WaveParams<Scalar>& p, Scalar Y0,
                                               Scalar t_end, Scalar tol) {
  using std::asin;
  using std::exp;
  using std::sqrt;
  check_tolerance(tol);
  const Scalar y_pi = separatrix_floor(p);
  if (!(Y0 > y_pi && Y0 < p.y_star())) {
    throw Error(ErrorKind::InvalidArgument,
                "start must lie strictly between Y_pi(alpha*) and Y* on the lower arc");
  }
  const Scalar w = p.omega();
  SeparatrixApproach<Scalar> out;
  auto push = [&](Scalar t, Scalar u) {
    const Scalar q = detail::separatrix_defect(u);
    // arccos(1 - q), well conditioned for small q.
    const Scalar X = Scalar(2) * asin(sqrt(q / Scalar(2)));
    out.t.push_back(t);
    out.depth_below_saddle.push_back(u);
    out.X.push_back(X);
    out.distance.push_back(sqrt(X * X + u * u));
  };
  const Scalar u0 = p.y_star() - Y0;
  push(Scalar(0), u0);

  auto rhs = [w](Scalar, const State<Scalar, 1>& s) {
    const Scalar u = s(0);
    const Scalar q = detail::separatrix_defect(u);
    const Scalar r = q * (Scalar(2) - q);
    State<Scalar, 1> d;
    d(0) = -w * exp(-u) * sqrt(r > Scalar(0) ? r : Scalar(0));
    return d;
  };
  StepControl<Scalar> control;
  control.abs_tol = Scalar(0);
  control.rel_tol = tol;
  State<Scalar, 1> s0;
  s0(0) = u0;
  integrate_dopri5<Scalar, 1>(rhs, Scalar(0), s0, t_end, control,
                              [&](const DenseStep<Scalar, 1>&, Scalar t,
                                  const State<Scalar, 1>& s) {
                                push(t, s(0));
                                return true;
                              });
  return out;
}

template <typename Scalar>
struct ConvergenceStudy {
  std::vector<Scalar> tolerances;
  std::vector<Scalar> errors;
  std::vector<std::size_t> steps;
  /// Least-squares slope of -log(error) against log(steps).
  Scalar observed_order;
};

/// Endpoint error of integrate_phase at each tolerance against a tol = 1e-13
/// reference, and the order fitted from error versus accepted step count.
template <typename Scalar>
ConvergenceStudy<Scalar> convergence_study(const WaveParams<Scalar>& p,
                                           const PhasePoint<Scalar>& start, Scalar t_end,
                                           const std::vector<Scalar>& tolerances) {
  using std::log;
  const TrajectoryRecord<Scalar> ref = integrate_phase(p, start, t_end, Scalar(1e-13));
  const PhasePoint<Scalar> z_ref = ref.phase.back();
  ConvergenceStudy<Scalar> study{tolerances, {}, {}, Scalar(0)};
  Scalar sx(0), sy(0), sxx(0), sxy(0);
  for (const Scalar tol : tolerances) {
    const TrajectoryRecord<Scalar> r = integrate_phase(p, start, t_end, tol);
    const Scalar err = (r.phase.back() - z_ref).template lpNorm<Eigen::Infinity>();
    const std::size_t n = r.t.size() - 1;
    study.errors.push_back(err);
    study.steps.push_back(n);
    const Scalar x = log(Scalar(n));
    const Scalar y = -log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const Scalar m = Scalar(tolerances.size());
  study.observed_order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return study;
}

}  // namespace wavedrift
