#pragma once

#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <sstream>
#include <vector>

#include "wavedrift/errors.hpp"
#include "wavedrift/phase_portrait.hpp"
#include "wavedrift/quadrature.hpp"
#include "wavedrift/trajectory.hpp"
#include "wavedrift/wave_field.hpp"

namespace wavedrift {

enum class DriftMethod { Quadrature, Closed, Ode };

namespace detail {

/// r = kM e^Y / omega = 1/a, rejecting heights at or above the critical point.
template <typename Scalar>
Scalar orbit_ratio(const WaveParams<Scalar>& p, Scalar Y) {
  using std::exp;
  const Scalar r = p.kM() * exp(Y) / p.omega();
  if (!(r <= Scalar(1) - Scalar(1e-12))) {
    std::ostringstream os;
    os << "Y = " << Y << " is not below Y* = " << p.y_star()
       << " (kM e^Y must stay below omega)";
    throw Error(ErrorKind::AboveCritical, os.str());
  }
  return r;
}

inline constexpr double kQuadratureRelTol = 1e-13;

}  // namespace detail

/// a = omega / (kM e^Y); exceeds 1 strictly below the critical point.
template <typename Scalar>
Scalar a_parameter(const WaveParams<Scalar>& p, Scalar Y) {
  return Scalar(1) / detail::orbit_ratio(p, Y);
}

/// theta(Y) = 2 int_0^pi ds / (omega - kM e^Y cos s), by adaptive quadrature.
template <typename Scalar>
Scalar theta_quadrature(const WaveParams<Scalar>& p, Scalar Y) {
  using std::cos;
  const Scalar r = detail::orbit_ratio(p, Y);
  const Scalar w = p.omega();
  const Scalar b = r * w;
  auto integrand = [w, b](Scalar s) { return Scalar(1) / (w - b * cos(s)); };
  const auto q = integrate_adaptive(integrand, Scalar(0), pi<Scalar>(),
                                    Scalar(detail::kQuadratureRelTol));
  return Scalar(2) * q.value;
}

/// Elementary evaluation of the same integral: 2 pi / sqrt(omega^2 - (kM e^Y)^2).
template <typename Scalar>
Scalar theta_closed_form(const WaveParams<Scalar>& p, Scalar Y) {
  using std::sqrt;
  const Scalar r = detail::orbit_ratio(p, Y);
  return Scalar(2) * pi<Scalar>() / (p.omega() * sqrt((Scalar(1) - r) * (Scalar(1) + r)));
}

/// (theta omega - 2 pi) / k with theta from the quadrature. The excess
/// theta omega - 2 pi = 2 int_0^pi r cos s / (1 - r cos s) ds is integrated
/// after removing its zero-mean part r cos s, leaving the positive integrand
/// r^2 cos^2 s / (1 - r cos s) so that deep orbits keep full relative accuracy.
template <typename Scalar>
Scalar drift_quadrature(const WaveParams<Scalar>& p, Scalar Y) {
  using std::cos;
  const Scalar r = detail::orbit_ratio(p, Y);
  auto integrand = [r](Scalar s) {
    const Scalar c = cos(s);
    return c * c / (Scalar(1) - r * c);
  };
  const auto q = integrate_adaptive(integrand, Scalar(0), pi<Scalar>(),
                                    Scalar(detail::kQuadratureRelTol));
  return Scalar(2) * r * r * q.value / p.k();
}

/// (2 pi / k)(1/sqrt(1 - r^2) - 1), written without cancellation.
template <typename Scalar>
Scalar drift_closed_form(const WaveParams<Scalar>& p, Scalar Y) {
  using std::sqrt;
  const Scalar r = detail::orbit_ratio(p, Y);
  const Scalar root = sqrt((Scalar(1) - r) * (Scalar(1) + r));
  return Scalar(2) * pi<Scalar>() / p.k() * r * r / (root * (Scalar(1) + root));
}

/// Forward displacement over one orbit period for a particle whose lowest
/// point is at moving-frame height Y.
template <typename Scalar>
Scalar drift_per_period(const WaveParams<Scalar>& p, Scalar Y, DriftMethod method,
                        Scalar ode_tol = Scalar(1e-10)) {
  switch (method) {
    case DriftMethod::Quadrature: return drift_quadrature(p, Y);
    case DriftMethod::Closed: return drift_closed_form(p, Y);
    case DriftMethod::Ode: return measure_period_and_drift(p, Y, ode_tol).drift;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown drift method");
}

template <typename Scalar>
struct DriftProfile {
  /// Descending.
  std::vector<Scalar> Y_values;
  std::vector<Scalar> a_values;
  std::vector<Scalar> theta_quad;
  std::vector<Scalar> theta_closed;
  std::vector<Scalar> drift_quad;
  std::vector<Scalar> drift_closed;
  /// Present only when the profile was built with the ODE column.
  std::optional<std::vector<Scalar>> theta_ode;
  std::optional<std::vector<Scalar>> drift_ode;

  std::size_t size() const { return Y_values.size(); }
};

namespace detail {
template <typename Scalar>
void require_decreasing(const std::vector<Scalar>& column, const std::vector<Scalar>& Y,
                        const char* name) {
  for (std::size_t i = 1; i < column.size(); ++i) {
    if (!(column[i] < column[i - 1])) {
      std::ostringstream os;
      os << name << " does not decrease from Y = " << Y[i - 1] << " (" << column[i - 1]
         << ") to Y = " << Y[i] << " (" << column[i] << ")";
      throw Error(ErrorKind::MonotonicityViolation, os.str());
    }
  }
}
}  // namespace detail

/// Periods and drifts on a uniform descending grid from Y_top to Y_bottom.
/// Rows are evaluated concurrently and assembled in grid order.
template <typename Scalar>
DriftProfile<Scalar> drift_profile(const WaveParams<Scalar>& p, Scalar Y_top, Scalar Y_bottom,
                                   std::size_t n, bool include_ode,
                                   Scalar ode_tol = Scalar(1e-10), bool parallel = true) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "profile needs at least two rows");
  if (!(Y_bottom < Y_top)) throw Error(ErrorKind::InvalidArgument, "Y_bottom must be below Y_top");
  detail::orbit_ratio(p, Y_top);
  if (include_ode) {
    const Scalar floor = separatrix_floor(p);
    if (!(Y_top < floor)) {
      std::ostringstream os;
      os << "Y_top = " << Y_top << " is not below Y_pi(alpha*) = " << floor;
      throw Error(ErrorKind::AboveSeparatrix, os.str());
    }
  }

  struct Row {
    Scalar a, theta_q, theta_c, drift_q, drift_c, theta_o, drift_o;
  };
  DriftProfile<Scalar> prof;
  const Scalar step = (Y_top - Y_bottom) / Scalar(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    prof.Y_values.push_back(i + 1 == n ? Y_bottom : Y_top - step * Scalar(i));
  }

  const auto policy = parallel ? std::launch::async : std::launch::deferred;
  std::vector<std::future<Row>> jobs;
  for (const Scalar Y : prof.Y_values) {
    jobs.push_back(std::async(policy, [&p, Y, include_ode, ode_tol] {
      Row r{a_parameter(p, Y), theta_quadrature(p, Y), theta_closed_form(p, Y),
            drift_quadrature(p, Y), drift_closed_form(p, Y), Scalar(0), Scalar(0)};
      if (include_ode) {
        const PeriodMeasurement<Scalar> m = measure_period_and_drift(p, Y, ode_tol);
        r.theta_o = m.theta;
        r.drift_o = m.drift;
      }
      return r;
    }));
  }
  if (include_ode) {
    prof.theta_ode.emplace();
    prof.drift_ode.emplace();
  }
  for (auto& j : jobs) {
    const Row r = j.get();
    prof.a_values.push_back(r.a);
    prof.theta_quad.push_back(r.theta_q);
    prof.theta_closed.push_back(r.theta_c);
    prof.drift_quad.push_back(r.drift_q);
    prof.drift_closed.push_back(r.drift_c);
    if (include_ode) {
      prof.theta_ode->push_back(r.theta_o);
      prof.drift_ode->push_back(r.drift_o);
    }
  }

  detail::require_decreasing(prof.drift_quad, prof.Y_values, "drift_quad");
  detail::require_decreasing(prof.drift_closed, prof.Y_values, "drift_closed");
  if (include_ode) detail::require_decreasing(*prof.drift_ode, prof.Y_values, "drift_ode");
  return prof;
}

}  // namespace wavedrift
