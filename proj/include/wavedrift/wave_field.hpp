#pragma once

#include <cmath>
#include <sstream>

#include <Eigen/Core>

#include "wavedrift/errors.hpp"

namespace wavedrift {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

/// pi in the working precision (std::numbers only covers builtin types).
template <typename Scalar>
Scalar pi() {
  using std::acos;
  return acos(Scalar(-1));
}

template <typename Scalar>
class WaveParams;

template <typename Scalar>
WaveParams<Scalar> make_params(Scalar epsilon, Scalar k, Scalar g, bool unchecked = false);

/// Parameters of a linear deep-water wave together with the constants derived
/// from them. Instances are immutable and can only be obtained from
/// make_params(), which enforces positivity and (unless unchecked) the
/// condition eps*k*exp(eps*k) <= 1 that keeps the critical point above the
/// wave crest.
template <typename Scalar>
class WaveParams {
 public:
  using scalar_type = Scalar;

  Scalar epsilon() const { return epsilon_; }
  Scalar k() const { return k_; }
  Scalar g() const { return g_; }
  Scalar omega() const { return omega_; }
  /// Velocity scale eps*omega.
  Scalar M() const { return epsilon_ * omega_; }
  Scalar kM() const { return k_ * M(); }
  /// Phase speed omega/k.
  Scalar c() const { return omega_ / k_; }
  Scalar lambda() const { return Scalar(2) * pi<Scalar>() / k_; }
  /// Moving-frame ordinate of the stagnation point, ln(omega/(kM)).
  Scalar y_star() const {
    using std::log;
    return log(omega_ / kM());
  }
  /// Hamiltonian level through the stagnation point.
  Scalar alpha_star() const { return omega_ * (Scalar(1) - y_star()); }
  bool unchecked() const { return unchecked_; }

  /// Copy whose frequency is shifted away from the dispersion relation.
  /// Only meant for fault-injection runs of the validation suite.
  WaveParams with_omega_offset(Scalar delta) const {
    WaveParams copy = *this;
    copy.omega_ += delta;
    return copy;
  }

 private:
  WaveParams(Scalar epsilon, Scalar k, Scalar g, bool unchecked)
      : epsilon_(epsilon), k_(k), g_(g), unchecked_(unchecked) {
    using std::sqrt;
    omega_ = sqrt(g_ * k_);
  }

  template <typename S>
  friend WaveParams<S> make_params(S epsilon, S k, S g, bool unchecked);

  Scalar epsilon_;
  Scalar k_;
  Scalar g_;
  Scalar omega_;
  bool unchecked_;
};

using WaveParamsd = WaveParams<double>;

/// 1 - eps*k*exp(eps*k); non-negative when the model is physically valid.
template <typename Scalar>
Scalar validity_margin(const WaveParams<Scalar>& p) {
  using std::exp;
  const Scalar ek = p.epsilon() * p.k();
  return Scalar(1) - ek * exp(ek);
}

template <typename Scalar>
WaveParams<Scalar> make_params(Scalar epsilon, Scalar k, Scalar g, bool unchecked) {
  using std::isfinite;
  auto require_positive = [](Scalar v, const char* name) {
    if (!(v > Scalar(0)) || !isfinite(v)) {
      std::ostringstream os;
      os << name << " must be positive and finite, got " << v;
      throw Error(ErrorKind::NonPositiveParameter, os.str());
    }
  };
  require_positive(epsilon, "epsilon");
  require_positive(k, "k");
  require_positive(g, "g");

  WaveParams<Scalar> p(epsilon, k, g, unchecked);
  if (!unchecked && validity_margin(p) < Scalar(0)) {
    std::ostringstream os;
    os << "eps*k*exp(eps*k) = " << Scalar(1) - validity_margin(p) << " exceeds 1";
    throw Error(ErrorKind::ValidityViolation, os.str());
  }
  return p;
}

/// Field values of the linear solution at one space-time point.
template <typename Scalar>
struct FieldSample {
  Scalar eta;
  Scalar u;
  Scalar v;
  Scalar P;
  /// Set when the evaluation height lies above the crest (y > eps), where
  /// the linear solution is only a formal continuation.
  bool above_wave_zone;
};

template <typename Scalar>
Scalar wave_phase(const WaveParams<Scalar>& p, Scalar t, Scalar x) {
  return p.k() * x - p.omega() * t;
}

template <typename Scalar>
Scalar surface_elevation(const WaveParams<Scalar>& p, Scalar t, Scalar x) {
  using std::cos;
  return p.epsilon() * cos(wave_phase(p, t, x));
}

template <typename Scalar>
Vector2<Scalar> velocity(const WaveParams<Scalar>& p, Scalar t, Scalar x, Scalar y) {
  using std::cos;
  using std::exp;
  using std::sin;
  const Scalar amp = p.M() * exp(p.k() * y);
  const Scalar phase = wave_phase(p, t, x);
  return {amp * cos(phase), amp * sin(phase)};
}

/// Pressure for unit density; the reference pressure P0 is supplied by the caller.
template <typename Scalar>
Scalar pressure(const WaveParams<Scalar>& p, Scalar t, Scalar x, Scalar y, Scalar P0) {
  using std::cos;
  using std::exp;
  return P0 - p.g() * y + p.epsilon() * p.g() * exp(p.k() * y) * cos(wave_phase(p, t, x));
}

template <typename Scalar>
FieldSample<Scalar> sample_field(const WaveParams<Scalar>& p, Scalar t, Scalar x, Scalar y,
                                 Scalar P0) {
  const Vector2<Scalar> uv = velocity(p, t, x, y);
  return {surface_elevation(p, t, x), uv.x(), uv.y(), pressure(p, t, x, y, P0),
          y > p.epsilon()};
}

}  // namespace wavedrift
