#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "wavedrift/drift_analysis.hpp"

using namespace wavedrift;

namespace {

const WaveParamsd R = make_params(0.1, 1.0, 9.81);
const oracle::Params O(0.1, 1.0, 9.81);

// max over Y <= -2 of drift(Y) / e^{2Y} for R-params, attained at Y = -2.
constexpr double kDecayConstant = 0.03142025;

double oracle_theta(double Y) { return static_cast<double>(oracle::theta(O, oracle::Big(Y))); }
double oracle_drift(double Y) { return static_cast<double>(oracle::drift(O, oracle::Big(Y))); }

}  // namespace

TEST(Period, AnchorValues) {
  EXPECT_NEAR(theta_closed_form(R, 0.0), 2.016172874045728, 1e-14);
  EXPECT_NEAR(theta_closed_form(R, -1.0), 2.007425518118271, 1e-14);
  EXPECT_NEAR(theta_quadrature(R, -1.0), 2.0074256, 1e-6);
  EXPECT_NEAR(theta_quadrature(R, 0.0) / 2.016171 - 1, 0.0, 1e-6);
  EXPECT_NEAR(a_parameter(R, 0.0), 10.0, 1e-13);
}

TEST(Period, MatchesHighPrecisionClosedForm) {
  for (const double Y : {2.3, 2.0, 1.0, 0.0, -0.5, -1.0, -2.0, -4.0, -6.0, -30.0}) {
    EXPECT_NEAR(theta_quadrature(R, Y), oracle_theta(Y), 1e-13 * oracle_theta(Y)) << Y;
    EXPECT_NEAR(theta_closed_form(R, Y), oracle_theta(Y), 1e-14 * oracle_theta(Y)) << Y;
  }
}

TEST(Drift, ClosedFormAnchors) {
  // Independent 50-digit evaluation of (theta omega - 2 pi) / k.
  EXPECT_NEAR(drift_closed_form(R, 0.0), 0.031653526816966, 1e-6 * 0.031653526816966);
  EXPECT_NEAR(drift_closed_form(R, -1.0), 0.004256003709409, 1e-6 * 0.004256003709409);
  for (const double Y : {0.0, -0.5, -1.0, -2.0, -4.0, -6.0, -30.0}) {
    EXPECT_NEAR(drift_closed_form(R, Y), oracle_drift(Y), 1e-13 * oracle_drift(Y)) << Y;
    EXPECT_NEAR(drift_quadrature(R, Y), oracle_drift(Y), 1e-11 * oracle_drift(Y)) << Y;
  }
  EXPECT_NEAR(drift_closed_form(R, -30.0), 2.7509389883e-28, 1e-37);
  EXPECT_LE(drift_closed_form(R, -30.0), 1e-10);
}

TEST(Drift, MethodDispatch) {
  EXPECT_EQ(drift_per_period(R, -1.0, DriftMethod::Closed), drift_closed_form(R, -1.0));
  EXPECT_EQ(drift_per_period(R, -1.0, DriftMethod::Quadrature), drift_quadrature(R, -1.0));
  EXPECT_NEAR(drift_per_period(R, -1.0, DriftMethod::Ode, 1e-12), reference::kOdeOrbits[2].drift,
              5e-11);
}

TEST(Drift, RejectsHeightsAtOrAboveCriticalPoint) {
  for (const double Y : {R.y_star(), 3.0}) {
    try {
      drift_closed_form(R, Y);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::AboveCritical);
    }
  }
}

TEST(Drift, VanishesAtDepthWithFrozenConstant) {
  EXPECT_NEAR(drift_closed_form(R, -2.0) / std::exp(-4.0), 0.031420242715, 1e-11);
  for (double Y = -2.0; Y >= -40.0; Y -= 0.25) {
    EXPECT_LE(drift_closed_form(R, Y), kDecayConstant * std::exp(2 * Y)) << Y;
  }
}

TEST(Drift, OdeExceedsClosedFormByShrinkingFactor) {
  // The fixed-height estimate misses the orbit's excursion; the ODE drift is
  // larger, and the relative gap shrinks with depth.
  double prev = 1e9;
  for (const auto& ref : reference::kOdeOrbits) {
    const double closed = drift_closed_form(R, ref.Y0);
    const double rel = (drift_per_period(R, ref.Y0, DriftMethod::Ode, 1e-12) - closed) / closed;
    EXPECT_GT(rel, 0.0);
    EXPECT_LT(rel, prev) << "Y0 = " << ref.Y0;
    prev = rel;
  }
  EXPECT_NEAR(prev, 1.0, 2e-3);
}

TEST(DriftProfile, ColumnsAndMonotonicity) {
  const auto prof = drift_profile(R, 0.0, -6.0, 13, true, 1e-10);
  ASSERT_EQ(prof.size(), 13u);
  ASSERT_TRUE(prof.drift_ode.has_value());
  EXPECT_EQ(prof.Y_values.front(), 0.0);
  EXPECT_EQ(prof.Y_values.back(), -6.0);
  for (std::size_t i = 0; i < prof.size(); ++i) {
    EXPECT_NEAR(prof.Y_values[i], -0.5 * i, 1e-15);
    EXPECT_NEAR(prof.theta_quad[i], prof.theta_closed[i], 1e-10 * prof.theta_closed[i]);
    EXPECT_GT((*prof.drift_ode)[i], 0.0);
    if (i) {
      EXPECT_LT(prof.drift_quad[i], prof.drift_quad[i - 1]);
      EXPECT_LT((*prof.drift_ode)[i], (*prof.drift_ode)[i - 1]);
    }
  }
  EXPECT_NEAR((*prof.theta_ode)[2], reference::kOdeOrbits[2].theta, 2e-10);
}

TEST(DriftProfile, WithoutOdeColumns) {
  const auto prof = drift_profile(R, 2.0, -10.0, 5, false);
  EXPECT_FALSE(prof.theta_ode.has_value());
  EXPECT_FALSE(prof.drift_ode.has_value());
  EXPECT_EQ(prof.a_values.size(), 5u);
}

TEST(DriftProfile, ArgumentErrors) {
  auto kind = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::ConvergenceFailure;
  };
  EXPECT_EQ(kind([] { drift_profile(R, 0.0, -1.0, 1, false); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind([] { drift_profile(R, -1.0, 0.0, 3, false); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind([] { drift_profile(R, 2.5, 0.0, 3, false); }), ErrorKind::AboveCritical);
  EXPECT_EQ(kind([] { drift_profile(R, 1.5, 0.0, 3, true); }), ErrorKind::AboveSeparatrix);
}

TEST(DriftProperty, QuadratureMatchesClosedForm) {
  gen::Source src(61);
  for (int i = 0; i < 50; ++i) {
    const WaveParamsd p = i < 25 ? R : src.params();
    const double Y = src.uniform(-10.0, p.y_star() - 0.01);
    const double closed = theta_closed_form(p, Y);
    EXPECT_LE(std::abs(theta_quadrature(p, Y) - closed), 1e-10 * closed) << "Y = " << Y;
    const double trap = oracle::theta_trapezoid(p.omega(), p.kM() * std::exp(Y), 1 << 15);
    EXPECT_NEAR(closed, trap, 1e-10 * closed) << "Y = " << Y;
  }
}

TEST(DriftProperty, PositiveMonotoneAndAboveWavePeriod) {
  gen::Source src(62);
  for (int trial = 0; trial < 20; ++trial) {
    const WaveParamsd p = src.params();
    std::vector<double> ys;
    for (int i = 0; i < 40; ++i) ys.push_back(src.uniform(-12.0, p.y_star() - 0.01));
    std::sort(ys.begin(), ys.end());
    for (std::size_t i = 0; i < ys.size(); ++i) {
      EXPECT_GT(drift_quadrature(p, ys[i]), 0.0);
      EXPECT_GT(drift_closed_form(p, ys[i]), 0.0);
      EXPECT_GT(theta_quadrature(p, ys[i]), 2 * M_PI / p.omega());
      if (i > 0) {
        EXPECT_LT(drift_closed_form(p, ys[i - 1]), drift_closed_form(p, ys[i]));
      }
    }
  }
}

TEST(Drift, LongDoubleInstantiation) {
  const auto p = make_params<long double>(0.1L, 1.0L, 9.81L);
  EXPECT_NEAR(static_cast<double>(drift_quadrature(p, -1.0L)), 0.004256003709409, 1e-15);
  EXPECT_NEAR(static_cast<double>(theta_closed_form(p, 0.0L)), 2.016172874045728, 1e-14);
}
