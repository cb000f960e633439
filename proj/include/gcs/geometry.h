#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gcs/conic.h"
#include "json.hpp"

namespace gcs {

/// Absolute slack used by membership tests.
inline constexpr double kMembershipTol = 1e-7;

/// A bounded convex set given as an H-polytope, an axis-aligned box, or a
/// single point. Immutable after construction.
class ConvexSet {
 public:
  enum class Kind { kHPolytope, kBox, kPoint };

  /// {x : A x <= b}. Throws if the set is empty or unbounded; the bounding box
  /// comes from 2n support LPs.
  static ConvexSet HPolytope(Eigen::MatrixXd A, Eigen::VectorXd b);
  static ConvexSet Box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static ConvexSet Point(Eigen::VectorXd x);

  Kind kind() const { return kind_; }
  int dimension() const { return static_cast<int>(lower_.size()); }

  /// Canonical H-form {x : A() x <= b()}.
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }

  /// Bounding box; equals the set itself for boxes and points.
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }

  /// The point of a singleton set.
  std::optional<Eigen::VectorXd> point() const;

  bool Contains(const Eigen::VectorXd& x, double tol = kMembershipTol) const;

 private:
  ConvexSet() = default;

  Kind kind_ = Kind::kBox;
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

/// Whether the two closed sets share a point; touching counts. Throws
/// SolverError when the backend cannot decide.
bool Intersects(const ConvexSet& a, const ConvexSet& b);

/// The block A x - b phi <= 0 of the perspective cone of a set. Bounding-box
/// rows are included so that phi = 0 forces x = 0.
struct HomogenizedBlock {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

HomogenizedBlock ScaleSet(const ConvexSet& set);

/// Adds the rows of ScaleSet(set) to prog for the expressions x and phi.
void AddScaledMembership(ConicProgram* prog, const ConvexSet& set,
                         const std::vector<AffineExpr>& x, const AffineExpr& phi);

nlohmann::json ToJson(const ConvexSet& set);

/// Dense matrices serialize as arrays of rows. `cols` is used when the array
/// is empty.
nlohmann::json MatrixToJson(const Eigen::MatrixXd& m);
Eigen::MatrixXd MatrixFromJson(const nlohmann::json& j, int cols = 0);
nlohmann::json VectorToJson(const Eigen::VectorXd& v);
Eigen::VectorXd VectorFromJson(const nlohmann::json& j);
ConvexSet ConvexSetFromJson(const nlohmann::json& j);

}  // namespace gcs
