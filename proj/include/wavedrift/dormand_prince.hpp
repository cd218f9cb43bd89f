#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "wavedrift/errors.hpp"

namespace wavedrift {

template <typename Scalar, int N>
using State = Eigen::Matrix<Scalar, N, 1>;

template <typename Scalar>
struct StepControl {
  /// Per-component local error bound: abs_tol + rel_tol * |y_i|.
  Scalar abs_tol{1e-10};
  Scalar rel_tol{0};
  /// Zero selects an automatic initial step.
  Scalar initial_step{0};
  Scalar max_step{std::numeric_limits<double>::infinity()};
  std::size_t max_steps{10'000'000};
};

/// Continuous extension of one accepted Dormand-Prince step (fourth order,
/// exact at both ends).
template <typename Scalar, int N>
struct DenseStep {
  Scalar t0;
  Scalar h;
  State<Scalar, N> r1, r2, r3, r4, r5;

  Scalar t1() const { return t0 + h; }

  State<Scalar, N> operator()(Scalar t) const {
    const Scalar s = (t - t0) / h;
    const Scalar s1 = Scalar(1) - s;
    return r1 + s * (r2 + s1 * (r3 + s * (r4 + s1 * r5)));
  }
};

template <typename Scalar, int N>
struct IntegrationOutcome {
  Scalar t;
  State<Scalar, N> y;
  std::size_t accepted;
  std::size_t rejected;
  std::size_t evaluations;
  /// False when the observer asked to stop before the end time.
  bool reached_end;
};

namespace dopri {
// Butcher tableau of the 5(4) pair (c, a, b) plus error weights b - b* and
// the coefficients of the continuous extension.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
}  // namespace dopri

/// Adaptive explicit Runge-Kutta integration with the Dormand-Prince 5(4)
/// pair, local extrapolation, FSAL and PI step-size control.
///
/// `rhs(t, y)` returns dy/dt. `observer(step, t, y)` is called after every
/// accepted step with its continuous extension and the new state; returning
/// false stops the integration. Integration runs backwards when t_end < t0.
///
/// Throws StepSizeUnderflow when the step shrinks below 1e-15 |t_end - t0|.
template <typename Scalar, int N, typename Rhs, typename Observer>
IntegrationOutcome<Scalar, N> integrate_dopri5(Rhs&& rhs, Scalar t0, const State<Scalar, N>& y0,
                                               Scalar t_end, const StepControl<Scalar>& control,
                                               Observer&& observer) {
  using std::abs;
  using std::isfinite;
  using std::max;
  using std::min;
  using std::pow;
  using S = State<Scalar, N>;
  namespace c = dopri;

  const Scalar span = t_end - t0;
  const Scalar dir = span < Scalar(0) ? Scalar(-1) : Scalar(1);
  const Scalar h_min = Scalar(1e-15) * abs(span);
  IntegrationOutcome<Scalar, N> out{t0, y0, 0, 0, 0, true};
  if (span == Scalar(0)) return out;

  auto scale = [&](const S& a, const S& b) -> S {
    return (control.abs_tol + control.rel_tol * a.cwiseAbs().cwiseMax(b.cwiseAbs()).array())
        .matrix();
  };

  Scalar t = t0;
  S y = y0;
  S k1 = rhs(t, y);
  std::size_t evals = 1;

  Scalar h = control.initial_step;
  if (h <= Scalar(0)) {
    const S sc = scale(y, y);
    const Scalar d0 = y.cwiseQuotient(sc).template lpNorm<Eigen::Infinity>();
    const Scalar d1 = k1.cwiseQuotient(sc).template lpNorm<Eigen::Infinity>();
    h = (d0 < Scalar(1e-5) || d1 < Scalar(1e-5)) ? Scalar(1e-6) : Scalar(0.01) * d0 / d1;
    const S y1 = y + dir * h * k1;
    const S k2 = rhs(t + dir * h, y1);
    ++evals;
    const Scalar d2 = (k2 - k1).cwiseQuotient(sc).template lpNorm<Eigen::Infinity>() / h;
    const Scalar dm = max(d1, d2);
    const Scalar h1 = dm <= Scalar(1e-15) ? max(Scalar(1e-6), h * Scalar(1e-3))
                                          : pow(Scalar(0.01) / dm, Scalar(0.2));
    h = min(Scalar(100) * h, h1);
  }
  h = min({h, control.max_step, abs(span)});

  // PI controller constants (Hairer, Norsett & Wanner).
  const Scalar beta(0.04);
  const Scalar expo = Scalar(0.2) - beta * Scalar(0.75);
  const Scalar safety(0.9);
  Scalar err_old(1e-4);
  bool last_rejected = false;

  while (dir * (t_end - t) > Scalar(0)) {
    if (out.accepted + out.rejected >= control.max_steps) {
      throw Error(ErrorKind::StepSizeUnderflow, "maximum number of steps exceeded");
    }
    bool last = false;
    const Scalar remaining = abs(t_end - t);
    if (h >= remaining) {
      h = remaining;
      last = true;
    } else if (h < h_min) {
      std::ostringstream os;
      os << "step " << h << " below " << h_min << " at t = " << t;
      throw Error(ErrorKind::StepSizeUnderflow, os.str());
    }
    const Scalar hs = dir * h;

    const S k2 = rhs(t + Scalar(c::c2) * hs, y + hs * Scalar(c::a21) * k1);
    const S k3 = rhs(t + Scalar(c::c3) * hs, y + hs * (Scalar(c::a31) * k1 + Scalar(c::a32) * k2));
    const S k4 = rhs(t + Scalar(c::c4) * hs,
                     y + hs * (Scalar(c::a41) * k1 + Scalar(c::a42) * k2 + Scalar(c::a43) * k3));
    const S k5 = rhs(t + Scalar(c::c5) * hs,
                     y + hs * (Scalar(c::a51) * k1 + Scalar(c::a52) * k2 + Scalar(c::a53) * k3 +
                               Scalar(c::a54) * k4));
    const S k6 = rhs(t + hs, y + hs * (Scalar(c::a61) * k1 + Scalar(c::a62) * k2 +
                                       Scalar(c::a63) * k3 + Scalar(c::a64) * k4 +
                                       Scalar(c::a65) * k5));
    const S y_new = y + hs * (Scalar(c::a71) * k1 + Scalar(c::a73) * k3 + Scalar(c::a74) * k4 +
                              Scalar(c::a75) * k5 + Scalar(c::a76) * k6);
    const Scalar t_new = last ? t_end : t + hs;
    const S k7 = rhs(t_new, y_new);
    evals += 6;

    const S err_vec = hs * (Scalar(c::e1) * k1 + Scalar(c::e3) * k3 + Scalar(c::e4) * k4 +
                            Scalar(c::e5) * k5 + Scalar(c::e6) * k6 + Scalar(c::e7) * k7);
    Scalar err = err_vec.cwiseQuotient(scale(y, y_new)).template lpNorm<Eigen::Infinity>();
    if (!isfinite(err) || !y_new.allFinite()) err = std::numeric_limits<Scalar>::infinity();

    if (err <= Scalar(1)) {
      DenseStep<Scalar, N> step;
      step.t0 = t;
      step.h = t_new - t;
      step.r1 = y;
      step.r2 = y_new - y;
      step.r3 = step.h * k1 - step.r2;
      step.r4 = step.r2 - step.h * k7 - step.r3;
      step.r5 = step.h * (Scalar(c::d1) * k1 + Scalar(c::d3) * k3 + Scalar(c::d4) * k4 +
                          Scalar(c::d5) * k5 + Scalar(c::d6) * k6 + Scalar(c::d7) * k7);

      t = t_new;
      y = y_new;
      k1 = k7;
      ++out.accepted;

      const Scalar fac11 = pow(max(err, Scalar(1e-16)), expo);
      Scalar fac = fac11 / pow(err_old, beta) / safety;
      fac = max(Scalar(0.1), min(Scalar(5), fac));
      Scalar h_new = h / fac;
      if (last_rejected) h_new = min(h_new, h);
      err_old = max(err, Scalar(1e-4));
      last_rejected = false;

      if (!observer(step, t, y)) {
        out.reached_end = false;
        break;
      }
      h = min(h_new, control.max_step);
    } else {
      ++out.rejected;
      const Scalar fac11 = isfinite(err) ? pow(err, expo) : Scalar(5);
      h = h / min(Scalar(5), fac11 / safety);
      last_rejected = true;
    }
  }
  out.t = t;
  out.y = y;
  out.evaluations = evals;
  return out;
}

/// Piecewise continuous extension over a whole integration, in step order.
template <typename Scalar, int N>
class DenseTrajectory {
 public:
  void push_back(const DenseStep<Scalar, N>& step) { steps_.push_back(step); }
  bool empty() const { return steps_.empty(); }
  std::size_t size() const { return steps_.size(); }
  const DenseStep<Scalar, N>& step(std::size_t i) const { return steps_[i]; }
  Scalar t_begin() const { return steps_.front().t0; }
  Scalar t_end() const { return steps_.back().t1(); }

  /// State at time t, which must lie in the integrated range.
  State<Scalar, N> operator()(Scalar t) const {
    const bool forward = steps_.front().h > Scalar(0);
    auto it = std::lower_bound(steps_.begin(), steps_.end(), t,
                               [forward](const DenseStep<Scalar, N>& s, Scalar value) {
                                 return forward ? s.t1() < value : s.t1() > value;
                               });
    if (it == steps_.end()) --it;
    return (*it)(t);
  }

 private:
  std::vector<DenseStep<Scalar, N>> steps_;
};

/// Overload without an observer.
template <typename Scalar, int N, typename Rhs>
IntegrationOutcome<Scalar, N> integrate_dopri5(Rhs&& rhs, Scalar t0, const State<Scalar, N>& y0,
                                               Scalar t_end, const StepControl<Scalar>& control) {
  return integrate_dopri5(std::forward<Rhs>(rhs), t0, y0, t_end, control,
                          [](const DenseStep<Scalar, N>&, Scalar, const State<Scalar, N>&) {
                            return true;
                          });
}

}  // namespace wavedrift
