#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "wavedrift/quadrature.hpp"

using namespace wavedrift;

TEST(GaussKronrod, ExactForHighDegreePolynomials) {
  // K15 integrates degree 22 exactly, G7 degree 13.
  auto p13 = [](double x) { return std::pow(x, 13) + 3 * std::pow(x, 12); };
  const auto r = gauss_kronrod15(p13, -1.0, 2.0);
  const double exact = (std::pow(2, 14) - 1) / 14 + 3 * (std::pow(2, 13) + 1) / 13;
  EXPECT_NEAR(r.kronrod, exact, 1e-12 * exact);
  EXPECT_NEAR(r.gauss, exact, 1e-12 * exact);

  auto p22 = [](double x) { return std::pow(x, 22); };
  EXPECT_NEAR(gauss_kronrod15(p22, 0.0, 1.0).kronrod, 1.0 / 23, 1e-15);
  EXPECT_GT(std::abs(gauss_kronrod15(p22, 0.0, 1.0).gauss - 1.0 / 23), 1e-8);
}

TEST(IntegrateAdaptive, SmoothIntegrands) {
  auto f = [](double x) { return std::exp(-x * x); };
  const auto r = integrate_adaptive(f, -3.0, 3.0, 1e-14);
  EXPECT_NEAR(r.value, std::sqrt(M_PI) * std::erf(3.0), 1e-14);
  EXPECT_GE(r.intervals, 1u);
}

TEST(IntegrateAdaptive, PeakedPeriodicIntegrand) {
  // 1 / (1 - r cos s) on [0, pi] equals pi / sqrt(1 - r^2). The denominator is
  // written as (1 - r) + 2 r sin^2(s/2) so the peak is evaluated exactly.
  for (const double rr : {0.5, 0.9, 0.99, 0.999999}) {
    auto f = [rr](double s) {
      const double h = std::sin(s / 2);
      return 1.0 / ((1.0 - rr) + 2 * rr * h * h);
    };
    const auto q = integrate_adaptive(f, 0.0, M_PI, 1e-13);
    const double exact = M_PI / std::sqrt((1 - rr) * (1 + rr));
    EXPECT_NEAR(q.value, exact, 1e-12 * exact) << "r = " << rr;
  }
}

TEST(IntegrateAdaptive, AbsoluteToleranceForZeroIntegral) {
  auto f = [](double x) { return std::sin(x); };
  const auto q = integrate_adaptive(f, -2.0, 2.0, 1e-12, 1e-14);
  EXPECT_NEAR(q.value, 0.0, 1e-14);
}

TEST(IntegrateAdaptive, ReportsNonConvergence) {
  auto f = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3141)); };
  try {
    integrate_adaptive(f, 0.0, 1.0, 1e-15, 0.0, 20);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::QuadratureNonConvergence);
  }
}

TEST(IntegrateAdaptiveProperty, MatchesPeriodicTrapezoidOracle) {
  gen::Source src(31);
  for (int i = 0; i < 100; ++i) {
    const double w = src.uniform(0.5, 10);
    const double b = w * src.uniform(0.0, 0.98);
    auto f = [w, b](double s) { return 1.0 / (w - b * std::cos(s)); };
    const double quad = 2 * integrate_adaptive(f, 0.0, M_PI, 1e-13).value;
    const double trap = oracle::theta_trapezoid(w, b);
    EXPECT_NEAR(quad, trap, 1e-12 * trap) << "omega=" << w << " b=" << b;
  }
}
