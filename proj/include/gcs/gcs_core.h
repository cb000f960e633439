#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gcs/conic.h"
#include "gcs/geometry.h"
#include "json.hpp"

namespace gcs {

/// Affine map v -> M v + c over the edge-local vector v = (x_tail, x_head).
struct AffineBlock {
  Eigen::MatrixXd M;
  Eigen::VectorXd c;
};

/// ||M v + c||^2 / (a'v + a0).
struct QuadOverLinTerm {
  AffineBlock numerator;
  Eigen::VectorXd a;
  double a0 = 0.0;
};

/// Convex nonnegative edge length built from a fixed set of tags so that its
/// perspective stays conic.
class EdgeLength {
 public:
  enum class Kind { kZero, kAffine, kL2Sum, kQuadOverLinSum, kWeightedSum };

  EdgeLength() = default;

  static EdgeLength Zero() { return EdgeLength(); }
  /// coeffs' v + constant.
  static EdgeLength Affine(Eigen::VectorXd coeffs, double constant);
  /// sum_k ||M_k v + c_k||.
  static EdgeLength L2Sum(std::vector<AffineBlock> terms);
  static EdgeLength QuadOverLinSum(std::vector<QuadOverLinTerm> terms);
  static EdgeLength WeightedSum(std::vector<std::pair<double, EdgeLength>> terms);

  Kind kind() const { return kind_; }
  const Eigen::VectorXd& affine_coeffs() const { return affine_coeffs_; }
  double affine_constant() const { return affine_constant_; }
  const std::vector<AffineBlock>& l2_terms() const { return l2_terms_; }
  const std::vector<QuadOverLinTerm>& quad_terms() const { return quad_terms_; }
  const std::vector<std::pair<double, EdgeLength>>& children() const {
    return children_;
  }

  /// Direct evaluation at a local vector; +inf where a quad-over-lin
  /// denominator is not positive and its numerator is nonzero.
  double Evaluate(const Eigen::VectorXd& v) const;

  /// Throws unless every block has `local_dim` columns.
  void CheckDimension(int local_dim) const;

 private:
  Kind kind_ = Kind::kZero;
  Eigen::VectorXd affine_coeffs_;
  double affine_constant_ = 0.0;
  std::vector<AffineBlock> l2_terms_;
  std::vector<QuadOverLinTerm> quad_terms_;
  std::vector<std::pair<double, EdgeLength>> children_;
};

/// Linear constraints E v = f and G v <= h over v = (x_tail, x_head).
struct EdgeConstraint {
  Eigen::MatrixXd E;
  Eigen::VectorXd f;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;

  int num_equalities() const { return static_cast<int>(E.rows()); }
  int num_inequalities() const { return static_cast<int>(G.rows()); }
  /// Appends rows; each block must have the same column count.
  void AddEquality(const Eigen::MatrixXd& e, const Eigen::VectorXd& rhs);
  void AddInequality(const Eigen::MatrixXd& g, const Eigen::VectorXd& rhs);
};

struct Vertex {
  std::string name;
  /// Absent for vertices carrying no variables.
  std::optional<ConvexSet> set;
  int dimension() const { return set ? set->dimension() : 0; }
};

struct Edge {
  int tail = -1;
  int head = -1;
  EdgeLength length;
  EdgeConstraint constraint;
};

/// Directed graph with a convex set per vertex, and a length and constraint
/// per edge. Vertices and edges are addressed by insertion index.
class GcsProblem {
 public:
  int AddVertex(std::string name, std::optional<ConvexSet> set);
  /// Rejects self-loops and parallel edges.
  int AddEdge(int tail, int head, EdgeLength length = EdgeLength::Zero(),
              EdgeConstraint constraint = {});
  void SetSource(int v);
  void SetTarget(int v);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const Vertex& vertex(int v) const { return vertices_.at(v); }
  const Edge& edge(int e) const { return edges_.at(e); }
  int source() const { return source_; }
  int target() const { return target_; }
  const std::vector<int>& outgoing(int v) const { return out_.at(v); }
  const std::vector<int>& incoming(int v) const { return in_.at(v); }
  /// Edge index for (tail, head) or -1.
  int FindEdge(int tail, int head) const;

  /// Throws std::invalid_argument unless source/target are set and valid.
  void Validate() const;

  /// Copy keeping only the edges with keep[e]; vertex indices are unchanged.
  /// `kept_index` receives the old index of every kept edge.
  GcsProblem FilterEdges(const std::vector<bool>& keep,
                         std::vector<int>* kept_index = nullptr) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  int source_ = -1;
  int target_ = -1;
};

/// Variable indices of one edge in the relaxation program.
struct EdgeVariables {
  int phi = -1;
  /// First index of the lifted tail (y) and head (z) blocks.
  int y = -1;
  int z = -1;
};

struct Relaxation {
  ConicProgram program;
  std::vector<EdgeVariables> edges;
};

/// Flow relaxation with perspective lifts; C_relax is a lower bound on the
/// shortest-path cost.
Relaxation BuildRelaxation(const GcsProblem& problem);

struct FlowSolution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  std::string diagnostics;
  double cost = 0.0;
  Eigen::VectorXd phi;
  std::vector<Eigen::VectorXd> y;
  std::vector<Eigen::VectorXd> z;
  /// Flow-weighted vertex values, defined where the vertex flow exceeds 1e-6.
  std::vector<std::optional<Eigen::VectorXd>> vertex_values;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

inline constexpr double kFlowSupportTol = 1e-6;

FlowSolution SolveRelaxation(const GcsProblem& problem,
                             const Relaxation& relaxation,
                             const SolverOptions& options = {});

struct PathEvaluation {
  SolveStatus status = SolveStatus::kNumericalFailure;
  double cost = 0.0;
  /// Value of every path vertex, in path order.
  std::vector<Eigen::VectorXd> values;
  std::string diagnostics;

  bool feasible() const { return status == SolveStatus::kOptimal; }
};

/// Throws std::invalid_argument unless path is a simple source-target walk
/// along existing edges.
void CheckPath(const GcsProblem& problem, const std::vector<int>& path);

/// Optimal cost of the convex program with the path fixed.
PathEvaluation EvaluatePath(const GcsProblem& problem, const std::vector<int>& path,
                            const SolverOptions& options = {});

/// Sum of the edge lengths along a path evaluated directly at the given
/// vertex values.
double SumEdgeLengths(const GcsProblem& problem, const std::vector<int>& path,
                      const std::vector<Eigen::VectorXd>& values);

/// All simple source-target paths; throws std::length_error when there are
/// more than path_limit.
std::vector<std::vector<int>> EnumeratePaths(const GcsProblem& problem,
                                             long path_limit);

struct BruteForceResult {
  double cost = 0.0;
  std::vector<int> path;
  long paths_evaluated = 0;
};

/// Exact optimum by enumeration. Throws std::length_error above path_limit and
/// std::runtime_error when no path is feasible.
BruteForceResult BruteForceOptimum(const GcsProblem& problem, long path_limit,
                                   int threads = 0);

nlohmann::json ToJson(const EdgeLength& length);
EdgeLength EdgeLengthFromJson(const nlohmann::json& j);
nlohmann::json ToJson(const GcsProblem& problem);
GcsProblem GcsProblemFromJson(const nlohmann::json& j);

}  // namespace gcs
