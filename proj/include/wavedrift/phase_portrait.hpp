#pragma once

#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "wavedrift/errors.hpp"
#include "wavedrift/roots.hpp"
#include "wavedrift/wave_field.hpp"

namespace wavedrift {

/// Point of the moving frame: x() is X = kx - omega t, y() is Y = ky.
template <typename Scalar>
using PhasePoint = Vector2<Scalar>;

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// H(X, Y) = kM e^Y cos X - omega Y, constant along particle orbits in the
/// moving frame.
template <typename Scalar>
Scalar hamiltonian(const WaveParams<Scalar>& p, const PhasePoint<Scalar>& pt) {
  using std::cos;
  using std::exp;
  return p.kM() * exp(pt.y()) * cos(pt.x()) - p.omega() * pt.y();
}

/// (dH/dX, dH/dY).
template <typename Scalar>
Vector2<Scalar> grad_hamiltonian(const WaveParams<Scalar>& p, const PhasePoint<Scalar>& pt) {
  using std::cos;
  using std::exp;
  using std::sin;
  const Scalar a = p.kM() * exp(pt.y());
  return {-a * sin(pt.x()), a * cos(pt.x()) - p.omega()};
}

template <typename Scalar>
Matrix2<Scalar> hessian(const WaveParams<Scalar>& p, const PhasePoint<Scalar>& pt) {
  using std::cos;
  using std::exp;
  using std::sin;
  const Scalar a = p.kM() * exp(pt.y());
  Matrix2<Scalar> h;
  h << -a * cos(pt.x()), -a * sin(pt.x()),
       -a * sin(pt.x()),  a * cos(pt.x());
  return h;
}

template <typename Scalar>
struct CriticalPoint {
  PhasePoint<Scalar> point;
  Scalar alpha_star;
};

/// The unique stationary point (0, ln(omega/kM)) in [0, pi] x R and its level.
template <typename Scalar>
CriticalPoint<Scalar> critical_point(const WaveParams<Scalar>& p) {
  return {PhasePoint<Scalar>(Scalar(0), p.y_star()), p.alpha_star()};
}

/// Eigenvalues (ascending) of the Hessian of H at the critical point. They are
/// -omega and +omega, so the stationary point is a saddle.
template <typename Scalar>
Vector2<Scalar> hessian_at_critical(const WaveParams<Scalar>& p) {
  Eigen::SelfAdjointEigenSolver<Matrix2<Scalar>> solver(hessian(p, critical_point(p).point),
                                                         Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

/// g_alpha(Y) = (alpha + omega Y) / (kM e^Y); the level set H = alpha meets
/// the horizontal line at height Y iff g_alpha(Y) lies in [-1, 1].
template <typename Scalar>
Scalar g_alpha(const WaveParams<Scalar>& p, Scalar alpha, Scalar Y) {
  using std::exp;
  return (alpha + p.omega() * Y) / (p.kM() * exp(Y));
}

enum class LevelClass { SubCritical, Critical, SuperCritical };

inline const char* to_string(LevelClass c) {
  switch (c) {
    case LevelClass::SubCritical: return "SubCritical";
    case LevelClass::Critical: return "Critical";
    case LevelClass::SuperCritical: return "SuperCritical";
  }
  return "?";
}

template <typename Scalar>
LevelClass classify_level(const WaveParams<Scalar>& p, Scalar alpha) {
  using std::abs;
  const Scalar a_star = p.alpha_star();
  const Scalar tol = Scalar(1e-12) * (Scalar(1) + abs(a_star));
  if (abs(alpha - a_star) <= tol) return LevelClass::Critical;
  return alpha < a_star ? LevelClass::SubCritical : LevelClass::SuperCritical;
}

/// Height at which the level curve H = alpha crosses X = pi, i.e. the unique
/// root of -kM e^Y - omega Y = alpha. Defined for every real alpha and
/// strictly decreasing in alpha.
template <typename Scalar>
Scalar solve_Y_pi(const WaveParams<Scalar>& p, Scalar alpha) {
  using std::exp;
  const Scalar w = p.omega();
  const Scalar kM = p.kM();
  // alpha - h(Y) = kM e^Y (g_alpha(Y) + 1), strictly increasing in Y.
  auto f = [&](Scalar Y) { return alpha + w * Y + kM * exp(Y); };
  auto fdf = [&](Scalar Y) {
    const Scalar e = kM * exp(Y);
    return std::pair<Scalar, Scalar>(alpha + w * Y + e, w + e);
  };
  const auto [lo, hi] = expand_bracket(f, Scalar(-1), Scalar(1));
  return bisect_newton(fdf, lo, hi).root;
}

template <typename Scalar>
struct BranchPoints {
  Scalar y_pi;
  Scalar y1;
  Scalar y2;
  /// y1 - Y_pi, solved directly so that it stays accurate when it is far
  /// below the resolution of y1 itself.
  Scalar gap;
};

/// The two heights where g_alpha = 1 for a supercritical level. Y_1 ends the
/// closed-loop branch through X = pi, Y_2 starts the unbounded branch.
template <typename Scalar>
BranchPoints<Scalar> solve_branch_points(const WaveParams<Scalar>& p, Scalar alpha) {
  using std::exp;
  if (classify_level(p, alpha) != LevelClass::SuperCritical) {
    std::ostringstream os;
    os << "alpha = " << alpha << " is not above alpha* = " << p.alpha_star();
    throw Error(ErrorKind::NotSuperCritical, os.str());
  }
  const Scalar w = p.omega();
  const Scalar kM = p.kM();
  const Scalar y_pi = solve_Y_pi(p, alpha);
  // Maximum of g_alpha.
  const Scalar y_peak = (w - alpha) / w;

  // Y_1 = Y_pi + delta. Using alpha + omega Y_pi = -kM e^Y_pi, the condition
  // g_alpha(Y_pi + delta) = 1 becomes omega delta = kM e^Y_pi (1 + e^delta),
  // which is free of the cancellation in alpha + omega Y.
  const Scalar base = kM * exp(y_pi);
  auto gap_fdf = [&](Scalar d) {
    const Scalar e = base * exp(d);
    return std::pair<Scalar, Scalar>(w * d - base - e, w - e);
  };
  const Scalar gap = bisect_newton(gap_fdf, Scalar(0), y_peak - y_pi).root;

  // alpha + omega Y - kM e^Y = kM e^Y (g_alpha(Y) - 1), concave in Y.
  auto upper = [&](Scalar Y) { return alpha + w * Y - kM * exp(Y); };
  auto upper_fdf = [&](Scalar Y) {
    const Scalar e = kM * exp(Y);
    return std::pair<Scalar, Scalar>(alpha + w * Y - e, w - e);
  };
  const Scalar y2_hi = expand_upper(upper, y_peak, Scalar(1));
  const Scalar y2 = bisect_newton(upper_fdf, y_peak, y2_hi).root;

  return {y_pi, y_pi + gap, y2, gap};
}

/// Which side of [-1, 1] an out-of-domain height violates.
enum class DomainSide { AboveOne, BelowMinusOne };

/// X = arccos(g_alpha(Y)) in [0, pi]: the unique abscissa in [0, pi] on the
/// level curve H = alpha at height Y.
template <typename Scalar>
Scalar f_alpha(const WaveParams<Scalar>& p, Scalar alpha, Scalar Y) {
  using std::acos;
  constexpr double kEdge = 1e-12;
  Scalar g = g_alpha(p, alpha, Y);
  if (g > Scalar(1 + kEdge) || g < Scalar(-1 - kEdge)) {
    std::ostringstream os;
    os << "Y = " << Y << " outside the domain of f_alpha for alpha = " << alpha
       << (g > Scalar(1) ? " (g > 1)" : " (g < -1)");
    throw Error(ErrorKind::OutOfDomain, os.str());
  }
  if (g > Scalar(1)) g = Scalar(1);
  if (g < Scalar(-1)) g = Scalar(-1);
  return acos(g);
}

/// Side of the domain violated at Y, or nothing when Y is admissible.
template <typename Scalar>
std::optional<DomainSide> domain_violation(const WaveParams<Scalar>& p, Scalar alpha, Scalar Y) {
  const Scalar g = g_alpha(p, alpha, Y);
  if (g > Scalar(1 + 1e-12)) return DomainSide::AboveOne;
  if (g < Scalar(-1 - 1e-12)) return DomainSide::BelowMinusOne;
  return std::nullopt;
}

template <typename Scalar>
struct LevelDomain {
  Scalar y_pi;
  std::optional<Scalar> y1;
  std::optional<Scalar> y2;
};

template <typename Scalar>
LevelDomain<Scalar> level_domain(const WaveParams<Scalar>& p, Scalar alpha) {
  if (classify_level(p, alpha) == LevelClass::SuperCritical) {
    const BranchPoints<Scalar> b = solve_branch_points(p, alpha);
    return {b.y_pi, b.y1, b.y2};
  }
  return {solve_Y_pi(p, alpha), std::nullopt, std::nullopt};
}

template <typename Scalar>
struct LevelCurve {
  Scalar alpha;
  LevelClass level_class;
  LevelDomain<Scalar> domain;
  /// Starts at (pi, Y_pi); X in [0, pi].
  std::vector<PhasePoint<Scalar>> lower_branch;
  /// Empty unless the level is supercritical; X in [0, pi/2).
  std::vector<PhasePoint<Scalar>> upper_branch;

  bool has_upper_branch() const { return !upper_branch.empty(); }
};

/// Default upper sampling height for portraits, 3 Y*.
template <typename Scalar>
Scalar default_y_max(const WaveParams<Scalar>& p) {
  return Scalar(3) * p.y_star();
}

/// Samples H = alpha restricted to [0, pi] x (-inf, Y_max] as graphs X = f_alpha(Y),
/// uniformly in Y on each branch.
template <typename Scalar>
LevelCurve<Scalar> sample_level_curve(const WaveParams<Scalar>& p, Scalar alpha,
                                      std::size_t n_samples, Scalar y_max) {
  if (n_samples < 2) throw Error(ErrorKind::InvalidArgument, "n_samples must be at least 2");

  LevelCurve<Scalar> curve{alpha, classify_level(p, alpha), level_domain(p, alpha), {}, {}};
  const LevelDomain<Scalar>& d = curve.domain;
  const Scalar top = d.y2 ? *d.y2 : d.y_pi;
  if (!(y_max > top)) {
    std::ostringstream os;
    os << "Y_max = " << y_max << " must exceed the domain lower endpoint " << top;
    throw Error(ErrorKind::InvalidArgument, os.str());
  }

  auto fill = [&](std::vector<PhasePoint<Scalar>>& out, Scalar y0, Scalar y1) {
    out.reserve(n_samples);
    const Scalar step = (y1 - y0) / Scalar(n_samples - 1);
    for (std::size_t i = 0; i < n_samples; ++i) {
      const Scalar Y = i + 1 == n_samples ? y1 : y0 + step * Scalar(i);
      out.emplace_back(f_alpha(p, alpha, Y), Y);
    }
  };

  if (curve.level_class == LevelClass::SuperCritical) {
    fill(curve.lower_branch, d.y_pi, *d.y1);
    fill(curve.upper_branch, *d.y2, y_max);
    // Endpoints are known exactly; arccos is ill-conditioned there.
    curve.lower_branch.back().x() = Scalar(0);
    curve.upper_branch.front().x() = Scalar(0);
  } else {
    fill(curve.lower_branch, d.y_pi, y_max);
  }
  curve.lower_branch.front().x() = pi<Scalar>();
  return curve;
}

/// One sampled level curve per alpha, in input order. Levels are computed
/// concurrently; the result does not depend on scheduling.
template <typename Scalar>
std::vector<LevelCurve<Scalar>> portrait(const WaveParams<Scalar>& p,
                                         const std::vector<Scalar>& alphas,
                                         std::size_t n_samples, Scalar y_max,
                                         bool parallel = true) {
  if (alphas.empty()) throw Error(ErrorKind::EmptyInput, "no alpha values given");

  const auto policy = parallel ? std::launch::async : std::launch::deferred;
  std::vector<std::future<LevelCurve<Scalar>>> jobs;
  jobs.reserve(alphas.size());
  for (const Scalar alpha : alphas) {
    jobs.push_back(std::async(policy, [&p, alpha, n_samples, y_max] {
      return sample_level_curve(p, alpha, n_samples, y_max);
    }));
  }

  std::vector<LevelCurve<Scalar>> curves;
  curves.reserve(alphas.size());
  std::ostringstream failures;
  std::optional<ErrorKind> first_kind;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      curves.push_back(jobs[i].get());
    } catch (const Error& e) {
      if (!first_kind) first_kind = e.kind();
      if (failures.tellp() > 0) failures << "; ";
      failures << "alpha[" << i
               << "] = " << alphas[i] << ": " << e.what();
    }
  }
  if (first_kind) throw Error(*first_kind, failures.str());
  return curves;
}

}  // namespace wavedrift
