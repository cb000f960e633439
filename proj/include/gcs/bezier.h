#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace gcs {

/// Largest supported curve degree. Binomial coefficients stay exact in double
/// well beyond this.
inline constexpr int kMaxBezierDegree = 30;

/// C(d, k) via the multiplicative recurrence.
template <typename T = double>
T Binomial(int d, int k) {
  if (k < 0 || k > d) return T(0);
  if (k > d - k) k = d - k;
  T result(1);
  for (int i = 1; i <= k; ++i) {
    result = result * T(d - k + i) / T(i);
  }
  return result;
}

/// The k-th Bernstein polynomial of degree d evaluated at s in [0, 1].
template <typename T>
T Bernstein(int k, int d, const T& s) {
  if (d < 0 || d > kMaxBezierDegree) {
    throw std::invalid_argument("Bernstein: degree out of range");
  }
  if (k < 0 || k > d) {
    throw std::invalid_argument("Bernstein: index k out of range");
  }
  if (s < T(0) || s > T(1)) {
    throw std::invalid_argument("Bernstein: s outside [0, 1]");
  }
  using std::pow;
  return Binomial<T>(d, k) * pow(s, k) * pow(T(1) - s, d - k);
}

/// A Bézier curve on the unit domain [0, 1]. Control points are stored as the
/// columns of a dim x (degree + 1) matrix.
template <typename T>
class BezierCurve {
 public:
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

  BezierCurve() = default;

  explicit BezierCurve(Matrix control_points)
      : control_points_(std::move(control_points)) {
    if (control_points_.cols() < 1) {
      throw std::invalid_argument("BezierCurve: needs at least one point");
    }
    if (control_points_.rows() < 1) {
      throw std::invalid_argument("BezierCurve: dimension must be positive");
    }
    if (degree() > kMaxBezierDegree) {
      throw std::invalid_argument("BezierCurve: degree exceeds cap");
    }
  }

  /// Builds a curve from a list of points that must share one dimension.
  static BezierCurve FromPoints(const std::vector<Vector>& points) {
    if (points.empty()) {
      throw std::invalid_argument("BezierCurve: needs at least one point");
    }
    Matrix m(points.front().size(), static_cast<int>(points.size()));
    for (size_t k = 0; k < points.size(); ++k) {
      if (points[k].size() != m.rows()) {
        throw std::invalid_argument("BezierCurve: inconsistent dimensions");
      }
      m.col(static_cast<int>(k)) = points[k];
    }
    return BezierCurve(std::move(m));
  }

  int degree() const { return static_cast<int>(control_points_.cols()) - 1; }
  int dimension() const { return static_cast<int>(control_points_.rows()); }
  const Matrix& control_points() const { return control_points_; }
  Vector control_point(int k) const { return control_points_.col(k); }

 private:
  Matrix control_points_;
};

/// Evaluates the Bernstein sum directly. The endpoints return the first and
/// last control point exactly.
template <typename T>
typename BezierCurve<T>::Vector Evaluate(const BezierCurve<T>& curve,
                                         const T& s) {
  if (s < T(0) || s > T(1)) {
    throw std::invalid_argument("Evaluate: s outside [0, 1]");
  }
  const int d = curve.degree();
  if (s == T(0)) return curve.control_point(0);
  if (s == T(1)) return curve.control_point(d);
  typename BezierCurve<T>::Vector result =
      BezierCurve<T>::Vector::Zero(curve.dimension());
  for (int k = 0; k <= d; ++k) {
    result += Bernstein<T>(k, d, s) * curve.control_points().col(k);
  }
  return result;
}

/// de Casteljau evaluation; numerically independent of Evaluate().
template <typename T>
typename BezierCurve<T>::Vector EvaluateDeCasteljau(const BezierCurve<T>& curve,
                                                    const T& s) {
  if (s < T(0) || s > T(1)) {
    throw std::invalid_argument("EvaluateDeCasteljau: s outside [0, 1]");
  }
  typename BezierCurve<T>::Matrix work = curve.control_points();
  for (int level = curve.degree(); level > 0; --level) {
    for (int k = 0; k < level; ++k) {
      work.col(k) = (T(1) - s) * work.col(k) + s * work.col(k + 1);
    }
  }
  return work.col(0);
}

/// Control points d * (p_{k+1} - p_k) of the derivative curve.
template <typename T>
BezierCurve<T> Derivative(const BezierCurve<T>& curve) {
  const int d = curve.degree();
  if (d < 1) {
    throw std::invalid_argument("Derivative: degree-0 curve");
  }
  const auto& p = curve.control_points();
  typename BezierCurve<T>::Matrix dp(p.rows(), d);
  for (int k = 0; k < d; ++k) {
    dp.col(k) = T(d) * (p.col(k + 1) - p.col(k));
  }
  return BezierCurve<T>(std::move(dp));
}

/// Repeated differentiation; order 0 returns the curve itself.
template <typename T>
BezierCurve<T> Derivative(const BezierCurve<T>& curve, int order) {
  BezierCurve<T> result = curve;
  for (int l = 0; l < order; ++l) result = Derivative(result);
  return result;
}

/// Coefficient matrix mapping the control points of a degree-d curve to the
/// control points of its order-l derivative: row k of the result holds the
/// weights of p_0..p_d in p^{(l)}_k.
inline Eigen::MatrixXd DerivativeWeights(int d, int l) {
  if (l < 0 || l > d) {
    throw std::invalid_argument("DerivativeWeights: order out of range");
  }
  Eigen::MatrixXd weights = Eigen::MatrixXd::Identity(d + 1, d + 1);
  for (int level = 0; level < l; ++level) {
    const int cur = d - level;  // degree before this differentiation
    Eigen::MatrixXd next(cur, d + 1);
    for (int k = 0; k < cur; ++k) {
      next.row(k) = cur * (weights.row(k + 1) - weights.row(k));
    }
    weights = std::move(next);
  }
  return weights;
}

/// Linear map from degree-d control points to degree-d_target control points
/// of the same curve; returned as (d_target + 1) x (d + 1).
inline Eigen::MatrixXd ElevationMatrix(int d, int d_target) {
  if (d_target < d) {
    throw std::invalid_argument("ElevationMatrix: target below degree");
  }
  if (d_target > kMaxBezierDegree) {
    throw std::invalid_argument("ElevationMatrix: degree exceeds cap");
  }
  Eigen::MatrixXd map = Eigen::MatrixXd::Identity(d + 1, d + 1);
  for (int cur = d; cur < d_target; ++cur) {
    Eigen::MatrixXd step = Eigen::MatrixXd::Zero(cur + 2, cur + 1);
    step(0, 0) = 1.0;
    step(cur + 1, cur) = 1.0;
    for (int k = 1; k <= cur; ++k) {
      const double alpha = static_cast<double>(k) / (cur + 1);
      step(k, k - 1) = alpha;
      step(k, k) = 1.0 - alpha;
    }
    map = step * map;
  }
  return map;
}

template <typename T>
BezierCurve<T> ElevateDegree(const BezierCurve<T>& curve, int d_target) {
  if (d_target < curve.degree()) {
    throw std::invalid_argument("ElevateDegree: target below current degree");
  }
  const Eigen::MatrixXd map = ElevationMatrix(curve.degree(), d_target);
  typename BezierCurve<T>::Matrix elevated =
      curve.control_points() * map.transpose().cast<T>();
  return BezierCurve<T>(std::move(elevated));
}

/// Upper bound (1 / (d + 1)) * sum_k f(p_k) on the integral of a convex f
/// along the curve over [0, 1].
template <typename T, typename Function>
T ConvexIntegralBound(const BezierCurve<T>& curve, Function&& f) {
  T sum(0);
  for (int k = 0; k <= curve.degree(); ++k) {
    sum += f(curve.control_point(k));
  }
  return sum / T(curve.degree() + 1);
}

}  // namespace gcs
