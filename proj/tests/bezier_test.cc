#include "gcs/bezier.h"

#include <cmath>
#include <functional>
#include <random>

#include <gtest/gtest.h>

namespace gcs {
namespace {

using Curve = BezierCurve<double>;

Curve RandomCurve(std::mt19937_64& rng, int dim, int degree) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::MatrixXd p(dim, degree + 1);
  for (int i = 0; i < p.size(); ++i) p.data()[i] = u(rng);
  return Curve(p);
}

double AdaptiveSimpson(const std::function<double(double)>& f, double a,
                       double b, double tol, int depth = 0) {
  const double m = 0.5 * (a + b);
  const double whole = (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
  const double left = (m - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + m)) + f(m));
  const double right = (b - m) / 6.0 * (f(m) + 4.0 * f(0.5 * (m + b)) + f(b));
  if (depth > 30 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return AdaptiveSimpson(f, a, m, tol / 2.0, depth + 1) +
         AdaptiveSimpson(f, m, b, tol / 2.0, depth + 1);
}

TEST(BernsteinTest, EndpointAndPartitionOfUnity) {
  EXPECT_DOUBLE_EQ(Bernstein(0, 3, 0.0), 1.0);
  double sum = 0.0;
  for (int k = 0; k <= 5; ++k) sum += Bernstein(k, 5, 0.37);
  EXPECT_NEAR(sum, 1.0, 1e-15);
}

TEST(BernsteinTest, UnitIntegral) {
  const double integral =
      AdaptiveSimpson([](double s) { return Bernstein(2, 4, s); }, 0.0, 1.0, 1e-14);
  EXPECT_NEAR(integral, 1.0 / 5.0, 1e-12);
}

TEST(BernsteinTest, RejectsBadArguments) {
  EXPECT_THROW(Bernstein(4, 3, 0.5), std::invalid_argument);
  EXPECT_THROW(Bernstein(0, 3, 1.5), std::invalid_argument);
  EXPECT_THROW(Bernstein(0, kMaxBezierDegree + 1, 0.5), std::invalid_argument);
}

TEST(BezierEvaluateTest, HandExamples) {
  Eigen::MatrixXd p(2, 2);
  p << 0, 2, 0, 2;
  EXPECT_TRUE(Evaluate(Curve(p), 0.5).isApprox(Eigen::Vector2d(1, 1)));

  Eigen::MatrixXd q(1, 3);
  q << 0, 1, 0;
  EXPECT_NEAR(Evaluate(Curve(q), 0.5)[0], 0.5, 1e-15);
  EXPECT_THROW(Evaluate(Curve(q), -0.1), std::invalid_argument);
}

TEST(BezierEvaluateTest, EndpointsExact) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Curve c = RandomCurve(rng, 3, 1 + trial % 7);
    EXPECT_EQ(Evaluate(c, 0.0), c.control_point(0));
    EXPECT_EQ(Evaluate(c, 1.0), c.control_point(c.degree()));
  }
}

TEST(BezierEvaluateTest, MatchesDeCasteljau) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Curve c = RandomCurve(rng, 2, trial % 9);
    const double s = unit(rng);
    EXPECT_LE((Evaluate(c, s) - EvaluateDeCasteljau(c, s)).norm(), 1e-12);
  }
}

TEST(BezierDerivativeTest, HandExamples) {
  Eigen::MatrixXd p(2, 2);
  p << 0, 2, 0, 2;
  const Curve d = Derivative(Curve(p));
  EXPECT_EQ(d.degree(), 0);
  EXPECT_TRUE(d.control_point(0).isApprox(Eigen::Vector2d(2, 2)));

  const Curve constant(Eigen::MatrixXd::Constant(2, 4, 1.5));
  EXPECT_TRUE(Derivative(constant).control_points().isZero());
}

TEST(BezierDerivativeTest, MatchesCentralDifference) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> inner(0.01, 0.99);
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const Curve c = RandomCurve(rng, 2, 4);
    const Curve dc = Derivative(c);
    const double s = inner(rng);
    const Eigen::VectorXd fd =
        (Evaluate(c, s + h) - Evaluate(c, s - h)) / (2.0 * h);
    EXPECT_LE((Evaluate(dc, s) - fd).norm(), 1e-6);
  }
}

TEST(BezierDerivativeTest, WeightsMatchRepeatedDifferentiation) {
  std::mt19937_64 rng(5);
  for (int d = 1; d <= 6; ++d) {
    const Curve c = RandomCurve(rng, 2, d);
    for (int l = 0; l <= d; ++l) {
      const Eigen::MatrixXd expected = Derivative(c, l).control_points();
      const Eigen::MatrixXd weighted =
          c.control_points() * DerivativeWeights(d, l).transpose();
      EXPECT_LE((expected - weighted).norm(), 1e-9 * (1.0 + expected.norm()));
    }
  }
}

TEST(BezierElevateTest, HandExampleAndIdentity) {
  Eigen::MatrixXd p(1, 2);
  p << 0, 1;
  const Curve up = ElevateDegree(Curve(p), 2);
  ASSERT_EQ(up.degree(), 2);
  EXPECT_NEAR(up.control_point(0)[0], 0.0, 1e-15);
  EXPECT_NEAR(up.control_point(1)[0], 0.5, 1e-15);
  EXPECT_NEAR(up.control_point(2)[0], 1.0, 1e-15);

  EXPECT_EQ(ElevateDegree(Curve(p), 1).control_points(), p);
  EXPECT_THROW(ElevateDegree(up, 1), std::invalid_argument);
}

TEST(BezierElevateTest, PreservesCurvePointwise) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Curve c = RandomCurve(rng, 3, trial % 5);
    const Curve up = ElevateDegree(c, c.degree() + 1 + trial % 4);
    for (int i = 0; i < 50; ++i) {
      const double s = i / 49.0;
      EXPECT_LE((Evaluate(c, s) - Evaluate(up, s)).norm(), 1e-12);
    }
  }
}

TEST(BezierIntegralBoundTest, ConstantAndSegment) {
  const Curve constant(Eigen::MatrixXd::Constant(2, 3, 2.0));
  auto norm = [](const Eigen::VectorXd& v) { return v.norm(); };
  EXPECT_NEAR(ConvexIntegralBound(constant, norm), std::sqrt(8.0), 1e-15);

  Eigen::MatrixXd p(1, 2);
  p << 0, 1;
  EXPECT_NEAR(ConvexIntegralBound(Curve(p), norm), 0.5, 1e-15);
}

TEST(BezierIntegralBoundTest, BoundsQuadrature) {
  std::mt19937_64 rng(17);
  auto sq = [](const Eigen::VectorXd& v) { return v.squaredNorm(); };
  auto norm = [](const Eigen::VectorXd& v) { return v.norm(); };
  for (int trial = 0; trial < 100; ++trial) {
    const Curve c = RandomCurve(rng, 2, 1 + trial % 6);
    for (int which = 0; which < 2; ++which) {
      auto f = [&](const Eigen::VectorXd& v) { return which ? norm(v) : sq(v); };
      const double integral = AdaptiveSimpson(
          [&](double s) { return f(Evaluate(c, s)); }, 0.0, 1.0, 1e-10);
      EXPECT_GE(ConvexIntegralBound(c, f), integral - 1e-8);
    }
  }
}

TEST(BezierCurveTest, RejectsBadShapes) {
  EXPECT_THROW(Curve(Eigen::MatrixXd(2, 0)), std::invalid_argument);
  EXPECT_THROW(Curve(Eigen::MatrixXd::Zero(1, kMaxBezierDegree + 2)),
               std::invalid_argument);
  EXPECT_THROW(Derivative(Curve(Eigen::MatrixXd::Zero(2, 1))),
               std::invalid_argument);
}

}  // namespace
}  // namespace gcs
