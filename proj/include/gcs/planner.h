#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gcs/bezier.h"
#include "gcs/gcs_core.h"
#include "gcs/geometry.h"
#include "gcs/preprocess.h"
#include "gcs/rounding.h"
#include "json.hpp"

namespace gcs {

/// Objective weights, smoothness, bounds and boundary conditions of a
/// planning query. The trajectory is q(t) = r(h^{-1}(t)) where r and h are
/// piecewise Bezier curves of a path parameter s.
struct PlanningSpec {
  /// Weights of duration, length and energy.
  double a = 0.0;
  double b = 1.0;
  double c = 0.0;
  /// Continuity order of the trajectory.
  int eta = 0;
  /// Degree of r; `time_degree` (0 = same) is the degree of h. Both are
  /// raised to the larger one before transcription.
  int degree = 1;
  int time_degree = 0;
  /// Velocity set; absent means unconstrained velocity.
  std::optional<ConvexSet> velocity_set;
  double t_min = 1e-3;
  double t_max = 1e3;
  Eigen::VectorXd q0;
  Eigen::VectorXd qT;
  /// Boundary velocities; absent means free.
  std::optional<Eigen::VectorXd> qdot0;
  std::optional<Eigen::VectorXd> qdotT;
  /// Orders l >= 2 whose derivative q^(l) vanishes at both ends.
  std::vector<int> zero_derivative_orders;
  double hdot_min = 1e-6;
  /// Weight and top order of the derivative-magnitude regularizer.
  double eps = 0.0;
  int reg_order = 2;

  /// Common degree of r and h.
  int transcription_degree() const { return std::max(degree, time_degree); }
  int dimension() const { return static_cast<int>(q0.size()); }
  /// Throws std::invalid_argument on inconsistent settings.
  void Validate() const;
};

struct PlanningProblem {
  std::vector<ConvexSet> regions;
  PlanningSpec spec;
  /// Region pairs allowed to connect. When absent every intersecting pair is
  /// connected; mazes need it because cells on both sides of a wall touch.
  std::optional<std::vector<std::pair<int, int>>> adjacency;

  void Validate() const;
};

/// Index bookkeeping for x_i = (r_0 .. r_d, h_0 .. h_d).
struct ControlPointLayout {
  int n = 0;
  int d = 0;

  int size() const { return (d + 1) * (n + 1); }
  int r(int k, int j) const { return k * n + j; }
  int h(int k) const { return (d + 1) * n + k; }
};

/// Graph vertices 0..R-1 are the regions, R is the source and R+1 the
/// target.
GcsProblem BuildGraph(const PlanningProblem& problem);

/// The set X_i of control points for one region.
ConvexSet VertexSet(const ConvexSet& region, const PlanningSpec& spec);

enum class EdgeKind { kSource, kInner, kTarget };

/// Boundary or continuity constraints of an edge, over v = (x_tail, x_head)
/// with the source and target contributing no columns.
EdgeConstraint TranscribeEdgeConstraint(EdgeKind kind, const PlanningSpec& spec);

/// Length of an edge, charged to the tail region's curves.
EdgeLength TranscribeEdgeLength(EdgeKind kind, const PlanningSpec& spec);

/// The regularizer alone, over a single region's control points; zero when
/// eps is 0.
EdgeLength RegularizerLength(const PlanningSpec& spec);

struct TrajectorySegment {
  int region = -1;
  BezierCurve<double> r;
  BezierCurve<double> h;
};

/// Piecewise trajectory with segment k on s in [k, k+1].
class Trajectory {
 public:
  /// Throws std::invalid_argument if the segments do not chain in time or
  /// some h is not strictly increasing.
  explicit Trajectory(std::vector<TrajectorySegment> segments);

  const std::vector<TrajectorySegment>& segments() const { return segments_; }
  int num_segments() const { return static_cast<int>(segments_.size()); }
  int dimension() const { return segments_.front().r.dimension(); }
  double start_time() const;
  double end_time() const;
  double duration() const { return end_time() - start_time(); }

  /// Path parameter s in [0, S] with h(s) = t, found by bisection to 1e-10.
  double PathParameter(double t) const;
  Eigen::VectorXd Position(double t) const;
  /// q' = r'(s) / h'(s).
  Eigen::VectorXd Velocity(double t) const;

  /// r and h evaluated at a path parameter.
  Eigen::VectorXd ShapeAt(double s) const;
  double TimeAt(double s) const;

 private:
  std::vector<TrajectorySegment> segments_;
};

/// Trajectory from solved vertex values along a graph path.
Trajectory Reconstruct(const PlanningProblem& problem, const std::vector<int>& path,
                       const std::vector<Eigen::VectorXd>& values);

/// Human-readable violations of the trajectory requirements: containment,
/// continuity, time scaling, velocity, boundary conditions and duration.
/// Empty when all hold.
std::vector<std::string> CheckTrajectory(const PlanningProblem& problem,
                                         const Trajectory& trajectory,
                                         double tol = 1e-6);

enum class PlanStatus {
  kSuccess,
  kGraphDisconnected,
  kRelaxationInfeasible,
  kRoundingInfeasible,
  kSolverFailure,
};

const char* ToString(PlanStatus status);

struct PlanOptions {
  bool preprocess = true;
  bool two_cycle = true;
  RoundingConfig rounding;
  SolverOptions solver;
};

struct PhaseTimings {
  double graph = 0.0;
  double preprocess = 0.0;
  double relaxation = 0.0;
  double rounding = 0.0;
  double reconstruction = 0.0;

  double total() const { return graph + preprocess + relaxation + rounding + reconstruction; }
};

struct PlanResult {
  PlanStatus status = PlanStatus::kSolverFailure;
  std::string diagnostics;
  /// Graph after preprocessing; rounded paths index its vertices.
  GcsProblem graph;
  PreprocessReport preprocess;
  FlowSolution flows;
  RoundingReport rounding;
  std::optional<Trajectory> trajectory;
  /// Sum of edge lengths along the rounded path at the solved values.
  double path_length_sum = 0.0;
  PhaseTimings timings;

  bool ok() const { return status == PlanStatus::kSuccess; }
  const std::vector<int>& path() const { return rounding.paths.at(rounding.best).vertices; }
};

/// Preprocessing, relaxation and rounding on an explicit graph; everything
/// but the trajectory is filled in.
PlanResult SolveGraph(const GcsProblem& graph, const PlanOptions& options = {});

PlanResult Plan(const PlanningProblem& problem, const PlanOptions& options = {});

nlohmann::json ToJson(const PlanningSpec& spec);
PlanningSpec PlanningSpecFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const PlanningProblem& problem);
PlanningProblem PlanningProblemFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const Trajectory& trajectory);
Trajectory TrajectoryFromJson(const nlohmann::json& j);

}  // namespace gcs
