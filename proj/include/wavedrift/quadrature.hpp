#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <sstream>
#include <vector>

#include "wavedrift/errors.hpp"

namespace wavedrift {

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss-Legendre rule on [-1, 1].
// Index 0 is the centre; the Gauss nodes are the even-indexed Kronrod nodes.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.000000000000000000000000000000000,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
};

}  // namespace detail

template <typename Scalar>
struct RuleEstimate {
  Scalar kronrod;
  Scalar gauss;
};

/// Single G7/K15 evaluation on [a, b].
template <typename Scalar, typename F>
RuleEstimate<Scalar> gauss_kronrod15(F&& f, Scalar a, Scalar b) {
  const Scalar centre = (a + b) / Scalar(2);
  const Scalar half = (b - a) / Scalar(2);
  const Scalar f0 = f(centre);
  Scalar k = Scalar(detail::kKronrodWeights[0]) * f0;
  Scalar g = Scalar(detail::kGaussWeights[0]) * f0;
  for (std::size_t i = 1; i < detail::kKronrodNodes.size(); ++i) {
    const Scalar dx = half * Scalar(detail::kKronrodNodes[i]);
    const Scalar sum = f(centre - dx) + f(centre + dx);
    k += Scalar(detail::kKronrodWeights[i]) * sum;
    if (i % 2 == 0) g += Scalar(detail::kGaussWeights[i / 2]) * sum;
  }
  return {k * half, g * half};
}

template <typename Scalar>
struct QuadratureResult {
  Scalar value;
  Scalar error_estimate;
  std::size_t intervals;
};

/// Globally adaptive Gauss-Kronrod integration: the interval with the largest
/// |K15 - G7| is bisected until the summed estimate drops below
/// max(abs_tol, rel_tol * |I|).
template <typename Scalar, typename F>
QuadratureResult<Scalar> integrate_adaptive(F&& f, Scalar a, Scalar b, Scalar rel_tol,
                                            Scalar abs_tol = Scalar(0),
                                            std::size_t max_intervals = 2000) {
  using std::abs;
  struct Piece {
    Scalar a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  auto evaluate = [&](Scalar lo, Scalar hi) {
    const RuleEstimate<Scalar> r = gauss_kronrod15(f, lo, hi);
    return Piece{lo, hi, r.kronrod, abs(r.kronrod - r.gauss)};
  };

  std::priority_queue<Piece> pieces;
  Piece first = evaluate(a, b);
  Scalar total = first.value;
  Scalar error = first.error;
  pieces.push(first);

  auto converged = [&] {
    const Scalar target = rel_tol * abs(total);
    return error <= (abs_tol > target ? abs_tol : target);
  };

  while (!converged()) {
    if (pieces.size() >= max_intervals) {
      std::ostringstream os;
      os << "error estimate " << error << " after " << pieces.size() << " intervals";
      throw Error(ErrorKind::QuadratureNonConvergence, os.str());
    }
    const Piece worst = pieces.top();
    pieces.pop();
    const Scalar mid = (worst.a + worst.b) / Scalar(2);
    const Piece left = evaluate(worst.a, mid);
    const Piece right = evaluate(mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    pieces.push(left);
    pieces.push(right);
    // Round-off floor: a piece whose width is at machine resolution cannot improve.
    if (!(mid > worst.a && mid < worst.b)) break;
  }

  // Re-sum to shed the accumulated update round-off.
  Scalar sum_value(0);
  Scalar sum_error(0);
  const std::size_t count = pieces.size();
  while (!pieces.empty()) {
    sum_value += pieces.top().value;
    sum_error += pieces.top().error;
    pieces.pop();
  }
  return {sum_value, sum_error, count};
}

}  // namespace wavedrift
