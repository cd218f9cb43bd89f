#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "wavedrift/phase_portrait.hpp"

using namespace wavedrift;

namespace {

const WaveParamsd R = make_params(0.1, 1.0, 9.81);
const oracle::Params O(0.1, 1.0, 9.81);

double residual(const WaveParamsd& p, const PhasePoint<double>& pt, double alpha) {
  return std::abs(hamiltonian(p, pt) - alpha) / (1 + std::abs(alpha));
}

}  // namespace

TEST(Hamiltonian, Values) {
  EXPECT_NEAR(hamiltonian(R, PhasePoint<double>(0, 0)), R.kM(), 1e-16);
  EXPECT_NEAR(hamiltonian(R, PhasePoint<double>(M_PI, 0)), -R.kM(), 1e-16);
  EXPECT_NEAR(hamiltonian(R, PhasePoint<double>(M_PI / 2, -1)), R.omega(), 1e-15);
}

TEST(CriticalPoint, LocationAndLevel) {
  const auto cp = critical_point(R);
  EXPECT_EQ(cp.point.x(), 0.0);
  EXPECT_NEAR(cp.point.y(), 2.302585092994046, 1e-15);
  EXPECT_NEAR(cp.alpha_star, -4.0798162874386768, 1e-14);
  EXPECT_NEAR(hamiltonian(R, cp.point), cp.alpha_star, 1e-14);
  EXPECT_LT(grad_hamiltonian(R, cp.point).norm(), 1e-15);
}

TEST(CriticalPoint, HessianIsSaddle) {
  const Vector2<double> ev = hessian_at_critical(R);
  EXPECT_NEAR(ev(0), -R.omega(), 1e-10);
  EXPECT_NEAR(ev(1), R.omega(), 1e-10);
  EXPECT_NEAR(ev(1), 3.1320919526731650, 1e-10);
  const Matrix2<double> h = hessian(R, critical_point(R).point);
  EXPECT_LT(h.determinant(), 0.0);
}

TEST(ClassifyLevel, ThreeClasses) {
  const double a = R.alpha_star();
  EXPECT_EQ(classify_level(R, a - 1e-3), LevelClass::SubCritical);
  EXPECT_EQ(classify_level(R, a), LevelClass::Critical);
  EXPECT_EQ(classify_level(R, a + 1e-13), LevelClass::Critical);
  EXPECT_EQ(classify_level(R, a + 1e-3), LevelClass::SuperCritical);
  EXPECT_STREQ(to_string(LevelClass::SuperCritical), "SuperCritical");
}

TEST(SolveYPi, MatchesHighPrecisionRoots) {
  for (const double alpha : {0.0, R.alpha_star(), -R.kM(), -10.0, 25.0, -300.0}) {
    EXPECT_NEAR(solve_Y_pi(R, alpha), static_cast<double>(oracle::y_pi(O, alpha)),
                1e-13 * (1 + std::abs(alpha)))
        << "alpha = " << alpha;
  }
  EXPECT_NEAR(solve_Y_pi(R, 0.0), -0.0912765271608623, 1e-14);
  EXPECT_NEAR(solve_Y_pi(R, R.alpha_star()), 1.024120550232972, 1e-13);
  EXPECT_NEAR(solve_Y_pi(R, -R.kM()), 0.0, 1e-15);
  EXPECT_NEAR(solve_Y_pi(R, -10.0), 2.246908913571377, 1e-13);
}

TEST(SolveBranchPoints, MatchesHighPrecisionRoots) {
  const auto b = solve_branch_points(R, 0.0);
  EXPECT_NEAR(b.y_pi, -0.0912765271608623, 1e-14);
  EXPECT_NEAR(b.y1, 0.111832559158963, 1e-13);
  EXPECT_NEAR(b.y2, 3.577152063957297, 1e-13);
  EXPECT_NEAR(b.gap, b.y1 - b.y_pi, 1e-15);
  for (const double d : {1e-9, 1.0, 10.0, 50.0}) {
    const double alpha = R.alpha_star() + d;
    const auto bp = solve_branch_points(R, alpha);
    // Root error is the residual round-off divided by |d/dY (omega Y - kM e^Y)|,
    // which vanishes at Y*.
    auto bound = [&](double y) {
      const double e = R.kM() * std::exp(y);
      return 1e-13 + 4e-16 * (std::abs(alpha) + R.omega() * std::abs(y) + e) /
                         std::abs(R.omega() - e);
    };
    EXPECT_NEAR(bp.y1, static_cast<double>(oracle::y_one(O, alpha)), bound(bp.y1)) << "d = " << d;
    EXPECT_NEAR(bp.y2, static_cast<double>(oracle::y_two(O, alpha)), bound(bp.y2)) << "d = " << d;
  }
}

TEST(SolveBranchPoints, FrozenGapValues) {
  const double a = R.alpha_star();
  EXPECT_NEAR(solve_branch_points(R, a + 1.0).gap, 0.613521768191625, 1e-12);
  EXPECT_NEAR(solve_branch_points(R, a + 10.0).gap, 0.0302195967446211, 1e-12);
  const double g100 = solve_branch_points(R, a + 100.0).gap;
  EXPECT_NEAR(g100, 1.0017972549016e-14, 1e-3 * 1.0017972549016e-14);
  EXPECT_LT(g100, 1e-2);
}

TEST(SolveBranchPoints, RejectsNonSuperCriticalLevels) {
  for (const double alpha : {R.alpha_star(), R.alpha_star() - 1}) {
    try {
      solve_branch_points(R, alpha);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NotSuperCritical);
    }
  }
}

TEST(FAlpha, DomainViolationsNameTheSide) {
  // Below Y_pi the level needs cos X < -1; between Y_1 and Y_2 it needs cos X > 1.
  const double alpha = 0.0;
  const auto b = solve_branch_points(R, alpha);
  EXPECT_EQ(domain_violation(R, alpha, b.y_pi - 0.5), DomainSide::BelowMinusOne);
  EXPECT_EQ(domain_violation(R, alpha, (b.y1 + b.y2) / 2), DomainSide::AboveOne);
  EXPECT_FALSE(domain_violation(R, alpha, (b.y_pi + b.y1) / 2).has_value());
  try {
    f_alpha(R, alpha, (b.y1 + b.y2) / 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfDomain);
    EXPECT_NE(std::string(e.what()).find("g > 1"), std::string::npos);
  }
  try {
    f_alpha(R, alpha, b.y_pi - 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("g < -1"), std::string::npos);
  }
  EXPECT_NEAR(f_alpha(R, alpha, b.y_pi), M_PI, 1e-6);
}

TEST(SampleLevelCurve, SuperCriticalHasTwoBranches) {
  const auto c = sample_level_curve(R, 0.0, 100, default_y_max(R));
  EXPECT_EQ(c.level_class, LevelClass::SuperCritical);
  ASSERT_TRUE(c.has_upper_branch());
  EXPECT_EQ(c.lower_branch.size(), 100u);
  EXPECT_EQ(c.upper_branch.size(), 100u);
  EXPECT_EQ(c.lower_branch.front().x(), M_PI);
  EXPECT_EQ(c.lower_branch.back().x(), 0.0);
  EXPECT_EQ(c.upper_branch.front().x(), 0.0);
  EXPECT_DOUBLE_EQ(c.upper_branch.back().y(), default_y_max(R));
  for (const auto& pt : c.lower_branch) EXPECT_LE(residual(R, pt, 0.0), 1e-10);
  for (const auto& pt : c.upper_branch) {
    EXPECT_LE(residual(R, pt, 0.0), 1e-10);
    EXPECT_LT(pt.x(), M_PI / 2);
  }
}

TEST(SampleLevelCurve, SubCriticalMinimumInsideFirstQuadrant) {
  const auto c = sample_level_curve(R, R.alpha_star() - 1, 400, default_y_max(R));
  EXPECT_FALSE(c.has_upper_branch());
  const auto it = std::min_element(c.lower_branch.begin(), c.lower_branch.end(),
                                   [](const auto& a, const auto& b) { return a.x() < b.x(); });
  EXPECT_GT(it->x(), 0.0);
  EXPECT_LT(it->x(), M_PI / 2);
}

TEST(SampleLevelCurve, CriticalCurvePassesThroughSaddle) {
  const auto c = sample_level_curve(R, R.alpha_star(), 2001, 2 * R.y_star());
  double nearest = 1e9;
  for (const auto& pt : c.lower_branch) {
    nearest = std::min(nearest, (pt - critical_point(R).point).norm());
    EXPECT_LE(residual(R, pt, R.alpha_star()), 1e-10);
  }
  EXPECT_LT(nearest, 1e-3);
}

TEST(SampleLevelCurve, ArgumentErrors) {
  EXPECT_THROW(sample_level_curve(R, 0.0, 1, 5.0), Error);
  try {
    sample_level_curve(R, 0.0, 10, 3.0);  // below Y_2(0)
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(Portrait, OrderAndErrors) {
  const std::vector<double> alphas = {0.0, R.alpha_star() - 2, -R.kM()};
  const auto curves = portrait(R, alphas, 50, default_y_max(R));
  ASSERT_EQ(curves.size(), 3u);
  for (std::size_t i = 0; i < alphas.size(); ++i) EXPECT_EQ(curves[i].alpha, alphas[i]);
  EXPECT_NEAR(curves[2].lower_branch.front().y(), 0.0, 1e-15);

  try {
    portrait(R, std::vector<double>{}, 50, 5.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyInput);
  }
  try {
    portrait(R, std::vector<double>{0.0, 1.0}, 50, 3.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("alpha[0]"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("alpha[1]"), std::string::npos);
  }
}

TEST(Portrait, ParallelMatchesSequential) {
  const std::vector<double> alphas = {-8, -6, -4.5, -4, -3, -1, 0, 2};
  const auto a = portrait(R, alphas, 300, default_y_max(R), true);
  const auto b = portrait(R, alphas, 300, default_y_max(R), false);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    EXPECT_EQ(a[i].lower_branch, b[i].lower_branch);
    EXPECT_EQ(a[i].upper_branch, b[i].upper_branch);
  }
}

TEST(PortraitProperty, HamiltonianSymmetries) {
  gen::Source src(41);
  for (int i = 0; i < 300; ++i) {
    const WaveParamsd p = src.params();
    const PhasePoint<double> z(src.uniform(-M_PI, M_PI), src.uniform(-5, p.y_star() + 1));
    const double h = hamiltonian(p, z);
    EXPECT_NEAR(hamiltonian(p, PhasePoint<double>(-z.x(), z.y())), h, 1e-13 * (1 + std::abs(h)));
    EXPECT_NEAR(hamiltonian(p, PhasePoint<double>(z.x() + 2 * M_PI, z.y())), h,
                1e-13 * (1 + std::abs(h)));
  }
}

TEST(PortraitProperty, GradientMatchesFiniteDifferences) {
  gen::Source src(42);
  for (int i = 0; i < 100; ++i) {
    const WaveParamsd p = src.params();
    const PhasePoint<double> z(src.uniform(-M_PI, M_PI), src.uniform(-5, p.y_star() + 1));
    const Vector2<double> g = grad_hamiltonian(p, z);
    const double dx = oracle::central_difference(
        [&](double x) { return hamiltonian(p, PhasePoint<double>(x, z.y())); }, z.x());
    const double dy = oracle::central_difference(
        [&](double y) { return hamiltonian(p, PhasePoint<double>(z.x(), y)); }, z.y());
    EXPECT_LE((Vector2<double>(dx, dy) - g).norm(), 1e-6 * g.norm()) << "at " << z.transpose();
  }
}

TEST(PortraitProperty, RootStructureOnAlphaGrid) {
  gen::Source src(43);
  for (int trial = 0; trial < 10; ++trial) {
    const WaveParamsd p = trial == 0 ? R : src.params();
    const double a = p.alpha_star();
    std::vector<double> grid;
    for (int i = 0; i < 50; ++i) grid.push_back(a - 10 + 20.0 * i / 49);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      EXPECT_LT(solve_Y_pi(p, grid[i]), solve_Y_pi(p, grid[i - 1]));
    }
    std::optional<BranchPoints<double>> prev;
    for (const double alpha : grid) {
      if (classify_level(p, alpha) != LevelClass::SuperCritical) continue;
      const auto b = solve_branch_points(p, alpha);
      EXPECT_LT(b.y1, p.y_star());
      EXPECT_GT(b.y2, p.y_star());
      EXPECT_LT(b.y_pi, b.y1);
      if (prev) {
        EXPECT_LT(b.y1, prev->y1);
        EXPECT_GT(b.y2, prev->y2);
        EXPECT_LT(b.gap, prev->gap);
      }
      prev = b;
    }
  }
}

TEST(PortraitProperty, SampledPointsSatisfyLevelAndMonotoneBranches) {
  gen::Source src(44);
  for (int trial = 0; trial < 40; ++trial) {
    const WaveParamsd p = src.params();
    // Branch heights relative to Y* depend only on (alpha - alpha*) / omega.
    const double alpha = p.alpha_star() + p.omega() * src.uniform(-2, 2);
    const auto c = sample_level_curve(p, alpha, 120, p.y_star() + 4);
    for (const auto* branch : {&c.lower_branch, &c.upper_branch}) {
      for (const auto& pt : *branch) EXPECT_LE(residual(p, pt, alpha), 1e-10);
    }
    if (c.level_class == LevelClass::SuperCritical) {
      for (std::size_t i = 1; i < c.lower_branch.size(); ++i) {
        EXPECT_LT(c.lower_branch[i].x(), c.lower_branch[i - 1].x());
      }
      for (std::size_t i = 1; i < c.upper_branch.size(); ++i) {
        EXPECT_GT(c.upper_branch[i].x(), c.upper_branch[i - 1].x());
      }
    }
  }
}

TEST(PhasePortrait, LongDoubleInstantiation) {
  const auto p = make_params<long double>(0.1L, 1.0L, 9.81L);
  const long double y = solve_Y_pi(p, 0.0L);
  EXPECT_NEAR(static_cast<double>(y), -0.0912765271608623, 1e-14);
  const auto b = solve_branch_points(p, 0.0L);
  EXPECT_NEAR(static_cast<double>(b.y2), 3.577152063957297, 1e-13);
}
