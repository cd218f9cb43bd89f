#include <cmath>
#include <utility>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "wavedrift/roots.hpp"

using namespace wavedrift;

TEST(BisectNewton, FindsSquareRootOfTwo) {
  auto fdf = [](double x) { return std::pair{x * x - 2, 2 * x}; };
  const auto r = bisect_newton(fdf, 0.0, 2.0);
  EXPECT_NEAR(r.root, std::sqrt(2.0), 1e-14);
  EXPECT_LT(r.iterations, 15);
}

TEST(BisectNewton, AcceptsReversedBracketAndEndpointRoots) {
  auto fdf = [](double x) { return std::pair{x - 1, 1.0}; };
  EXPECT_DOUBLE_EQ(bisect_newton(fdf, 3.0, -1.0).root, 1.0);
  EXPECT_DOUBLE_EQ(bisect_newton(fdf, 1.0, 4.0).root, 1.0);
}

TEST(BisectNewton, FallsBackToBisectionWhenNewtonLeavesBracket) {
  // atan has Newton iterates that overshoot far outside small brackets.
  auto fdf = [](double x) { return std::pair{std::atan(x - 0.3), 1 / (1 + (x - 0.3) * (x - 0.3))}; };
  EXPECT_NEAR(bisect_newton(fdf, -20.0, 30.0).root, 0.3, 1e-13);
}

TEST(BisectNewton, ZeroDerivativeIsHandled) {
  auto fdf = [](double x) { return std::pair{x * x * x, 0.0}; };
  EXPECT_NEAR(bisect_newton(fdf, -1.0, 2.0).root, 0.0, 1e-13);
}

TEST(BisectNewton, RejectsUnbracketedInterval) {
  auto fdf = [](double x) { return std::pair{x * x + 1, 2 * x}; };
  try {
    bisect_newton(fdf, -1.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(BisectNewton, ReportsIterationCap) {
  auto fdf = [](double x) { return std::pair{x - 0.123456789, 0.0}; };
  try {
    bisect_newton(fdf, 0.0, 1.0, 1e-14, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConvergenceFailure);
  }
}

TEST(ExpandBracket, DoublesUntilSignChange) {
  auto f = [](double x) { return x - 37.0; };
  const auto [lo, hi] = expand_bracket(f, -1.0, 1.0);
  EXPECT_LT(f(lo) * f(hi), 0.0);
  EXPECT_DOUBLE_EQ(hi, 64.0);
  EXPECT_DOUBLE_EQ(expand_upper(f, 0.0, 1.0), 64.0);
}

TEST(ExpandBracket, GivesUpWithoutSignChange) {
  auto f = [](double) { return 1.0; };
  EXPECT_THROW(expand_bracket(f, -1.0, 1.0, 10), Error);
  EXPECT_THROW(expand_upper(f, 0.0, 1.0, 10), Error);
}

TEST(BisectNewtonProperty, CubicRootsToRelativeTolerance) {
  gen::Source src(21);
  for (int i = 0; i < 300; ++i) {
    const double root = src.uniform(-100, 100);
    const double s = src.log_uniform(0.01, 100);
    auto fdf = [&](double x) {
      const double d = x - root;
      return std::pair{s * (d * d * d + d), s * (3 * d * d + 1)};
    };
    const double lo = root - src.uniform(0.1, 50), hi = root + src.uniform(0.1, 50);
    EXPECT_NEAR(bisect_newton(fdf, lo, hi).root, root, 2e-14 * (1 + std::abs(root)));
  }
}
