#pragma once

#include <cmath>
#include <sstream>
#include <utility>

#include "wavedrift/errors.hpp"

namespace wavedrift {

template <typename Scalar>
struct RootResult {
  Scalar root;
  int iterations;
};

namespace detail {
template <typename Scalar>
bool same_sign(Scalar a, Scalar b) {
  return (a > Scalar(0)) == (b > Scalar(0));
}
}  // namespace detail

/// Root of a function known to change sign on [lo, hi].
///
/// `fdf(x)` returns the pair (f(x), f'(x)). Every iteration shrinks the
/// bracket using the sign of f; a Newton iterate is taken only when it lands
/// strictly inside the current bracket, otherwise the midpoint is used.
/// Terminates when the bracket (or the accepted Newton correction) falls below
/// rel_tol * (1 + |x|).
template <typename Scalar, typename Fn>
RootResult<Scalar> bisect_newton(Fn&& fdf, Scalar lo, Scalar hi, Scalar rel_tol = Scalar(1e-14),
                                 int max_iter = 200) {
  using std::abs;
  if (hi < lo) std::swap(lo, hi);
  Scalar f_lo = fdf(lo).first;
  const Scalar f_hi = fdf(hi).first;
  if (f_lo == Scalar(0)) return {lo, 0};
  if (f_hi == Scalar(0)) return {hi, 0};
  if (detail::same_sign(f_lo, f_hi)) {
    std::ostringstream os;
    os << "root not bracketed on [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }

  Scalar x = (lo + hi) / Scalar(2);
  for (int it = 1; it <= max_iter; ++it) {
    const auto [fx, dfx] = fdf(x);
    if (fx == Scalar(0)) return {x, it};
    if (detail::same_sign(fx, f_lo)) {
      lo = x;
      f_lo = fx;
    } else {
      hi = x;
    }
    const Scalar tol = rel_tol * (Scalar(1) + abs(x));
    if (hi - lo <= tol) return {(lo + hi) / Scalar(2), it};

    if (dfx != Scalar(0)) {
      const Scalar newton = x - fx / dfx;
      if (newton > lo && newton < hi) {
        const Scalar step = newton - x;
        x = newton;
        if (abs(step) <= tol / Scalar(2)) return {x, it};
        continue;
      }
    }
    x = (lo + hi) / Scalar(2);
  }
  std::ostringstream os;
  os << "no convergence after " << max_iter << " iterations, bracket [" << lo << ", " << hi
     << "]";
  throw Error(ErrorKind::ConvergenceFailure, os.str());
}

/// Symmetric doubling of [lo, hi] until f changes sign across it.
template <typename Scalar, typename F>
std::pair<Scalar, Scalar> expand_bracket(F&& f, Scalar lo, Scalar hi, int max_doublings = 200) {
  Scalar f_lo = f(lo);
  Scalar f_hi = f(hi);
  for (int i = 0; i < max_doublings; ++i) {
    if (!detail::same_sign(f_lo, f_hi) || f_lo == Scalar(0) || f_hi == Scalar(0)) {
      return {lo, hi};
    }
    lo *= Scalar(2);
    hi *= Scalar(2);
    f_lo = f(lo);
    f_hi = f(hi);
  }
  throw Error(ErrorKind::ConvergenceFailure, "bracket expansion did not find a sign change");
}

/// Moves the upper end of [lo, lo + step] outward with doubling steps until
/// f(hi) has the opposite sign of f(lo).
template <typename Scalar, typename F>
Scalar expand_upper(F&& f, Scalar lo, Scalar step, int max_doublings = 200) {
  const Scalar f_lo = f(lo);
  for (int i = 0; i < max_doublings; ++i) {
    const Scalar hi = lo + step;
    const Scalar f_hi = f(hi);
    if (!detail::same_sign(f_lo, f_hi) || f_hi == Scalar(0)) return hi;
    step *= Scalar(2);
  }
  throw Error(ErrorKind::ConvergenceFailure, "upper bracket expansion did not find a sign change");
}

}  // namespace wavedrift
