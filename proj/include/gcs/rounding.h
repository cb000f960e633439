#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "gcs/gcs_core.h"
#include "gcs/random.h"
#include "json.hpp"

namespace gcs {

struct RoundingConfig {
  /// Stop after this many distinct paths.
  int max_paths = 10;
  /// Stop after this many sampling trials.
  int max_trials = 100;
  std::uint64_t seed = 0;
  /// Edges with no more flow than this are ignored while sampling.
  double flow_floor = 1e-6;
  /// Stop once a path cost is within this relative gap of C_relax.
  double early_stop_tol = 1e-6;
  int threads = 0;
};

/// Random depth-first walk from the source choosing among unvisited
/// out-edges with probability proportional to their flow and backtracking at
/// dead ends. Returns the vertex sequence, or nothing when the flow support
/// holds no source-target path.
std::optional<std::vector<int>> SamplePath(const GcsProblem& problem,
                                           const Eigen::VectorXd& phi,
                                           PortableRng& rng,
                                           double flow_floor = 1e-6);

/// Deterministic walk that always takes the largest-flow edge. Only here to
/// show how it can miss paths the randomized walk finds.
std::optional<std::vector<int>> GreedyPath(const GcsProblem& problem,
                                           const Eigen::VectorXd& phi,
                                           double flow_floor = 1e-6);

struct RoundedPath {
  std::vector<int> vertices;
  /// +inf when the fixed-path program is infeasible.
  double cost = std::numeric_limits<double>::infinity();
  /// Trial (0-based) that first produced the path.
  int trial = 0;
};

struct RoundingReport {
  std::uint64_t seed = 0;
  double relaxation_cost = 0.0;
  /// C_round; +inf when no sampled path is feasible.
  double best_cost = std::numeric_limits<double>::infinity();
  /// Index into `paths` of the best path, or -1.
  int best = -1;
  /// (C_round - C_relax) / C_relax; +inf when undefined.
  double relaxation_gap = std::numeric_limits<double>::infinity();
  int trials = 0;
  bool early_stop = false;
  /// Distinct paths in order of discovery.
  std::vector<RoundedPath> paths;
  /// Vertex values along the best path.
  std::vector<Eigen::VectorXd> best_values;

  bool found() const { return best >= 0; }
};

double RelaxationGap(double relaxation_cost, double rounded_cost);

/// Samples up to max_paths distinct paths in at most max_trials trials,
/// evaluates them and keeps the cheapest.
RoundingReport Round(const GcsProblem& problem, const FlowSolution& flows,
                     const RoundingConfig& config = {},
                     const SolverOptions& options = {});

nlohmann::json ToJson(const RoundingReport& report);

}  // namespace gcs
