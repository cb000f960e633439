#pragma once

#include <string>
#include <vector>

#include "gcs/gcs_core.h"
#include "json.hpp"

namespace gcs {

struct TwoCycleReport {
  int pairs = 0;
  int flow_constraints = 0;
  int lifted_blocks = 0;
};

/// For every reciprocal pair e = (i, j), f = (j, i) adds
///   phi_e + phi_f <= phi_i,  phi_e + phi_f <= phi_j
/// and their lifted counterparts
///   (sum_in(i) z - y_e - z_f,  phi_i - phi_e - phi_f) in cone(X_i)
///   (sum_in(j) z - z_e - y_f,  phi_j - phi_e - phi_f) in cone(X_j),
/// where phi_v is the flow entering v.
TwoCycleReport AddTwoCycleConstraints(const GcsProblem& problem,
                                      Relaxation* relaxation);

enum class EdgeTestResult {
  /// Vertex-disjoint routes sigma -> u and v -> tau were found directly.
  kDisjointPaths,
  kMultiflowFeasible,
  kMultiflowInfeasible,
  /// u is unreachable from sigma or tau from v.
  kUnreachable,
  /// The LP could not be solved; the edge is kept.
  kSolverFailure,
};

const char* ToString(EdgeTestResult result);

struct RemovedEdge {
  std::string tail;
  std::string head;
  EdgeTestResult reason;
};

struct PreprocessReport {
  std::vector<RemovedEdge> removed;
  /// Outcome of the last test of every input edge, by input edge index.
  std::vector<EdgeTestResult> edge_results;
  int passes = 0;
  int lps_solved = 0;
  TwoCycleReport two_cycle;
};

/// Largest lambda <= 1 such that lambda units can be routed sigma -> u and
/// v -> tau with combined vertex throughput at most 1, ignoring e and its
/// reverse. The edge can lie on a simple path only if lambda is 1.
struct MultiflowResult {
  SolveStatus status = SolveStatus::kNumericalFailure;
  double lambda = 0.0;
};

MultiflowResult SolveEdgeMultiflow(const GcsProblem& problem, int edge);

/// Removes edges that no simple source-target path can use, repeating until
/// nothing changes. `report` may be null.
GcsProblem EdgeRedundancyFilter(const GcsProblem& problem,
                                PreprocessReport* report = nullptr,
                                int threads = 0);

nlohmann::json ToJson(const PreprocessReport& report);

}  // namespace gcs
