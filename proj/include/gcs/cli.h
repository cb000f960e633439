#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gcs/environments.h"
#include "gcs/planner.h"
#include "json.hpp"

namespace gcs {

/// One planner run as reported by the command-line tools.
struct RunRecord {
  /// Instance descriptor, e.g. "maze:15x15:removed=10:seed=3".
  std::string instance;
  std::uint64_t seed = 0;
  bool preprocess = true;
  bool two_cycle = true;
  int rounding_paths = 0;
  int rounding_trials = 0;
  PlanStatus status = PlanStatus::kSolverFailure;
  std::string diagnostics;
  PhaseTimings timings;
  int vertices = 0;
  int edges = 0;
  int edges_removed = 0;
  int paths_sampled = 0;
  /// NaN when the phase did not produce a value.
  double c_relax = 0.0;
  double c_round = 0.0;
  double delta_relax = 0.0;
  /// Filled in by oracle runs.
  std::optional<double> c_opt;
  std::optional<double> delta_opt;
  std::optional<long> oracle_paths;
  /// Findings of the trajectory checks; zero for graph-only instances.
  int trajectory_issues = 0;
};

RunRecord MakeRunRecord(std::string instance, std::uint64_t seed, const PlanOptions& options,
                        const PlanResult& result);

/// (C_round - C_opt) / C_opt with the same conventions as the relaxation gap.
double OptimalityGap(double optimal_cost, double rounded_cost);

/// Timings are left out when `timings` is false so that the output only
/// depends on the inputs.
nlohmann::json ToJson(const RunRecord& record, bool timings = true);

struct Histogram {
  /// bins + 1 increasing edges; the last bin also counts values above the top
  /// edge.
  std::vector<double> edges;
  std::vector<int> counts;
};

/// Fixed bins on a log scale: [0, 1e-8), [1e-8, 1e-7), ..., [1e-1, inf).
Histogram GapHistogram(const std::vector<double>& values);

struct Distribution {
  int count = 0;
  double mean = 0.0;
  double median = 0.0;
  double p90 = 0.0;
  double max = 0.0;
  Histogram histogram;
};

/// Nearest-rank percentiles; all zero for an empty sample.
Distribution Summarize(std::vector<double> values);

struct BenchSummary {
  int instances = 0;
  int successes = 0;
  int failures = 0;
  /// Number of instances with delta_relax <= 1e-4, i.e. an essentially
  /// integral relaxation.
  int tight = 0;
  Distribution delta_relax;
  std::optional<Distribution> delta_opt;
  Distribution total_seconds;
};

BenchSummary Summarize(const std::vector<RunRecord>& records);
nlohmann::json ToJson(const Distribution& distribution);
nlohmann::json ToJson(const BenchSummary& summary, bool timings = true);

/// Vertices of a bounded 2D convex set in counterclockwise order.
std::vector<Eigen::Vector2d> Polygon2d(const ConvexSet& set);

struct SvgOptions {
  double pixels_per_unit = 80.0;
  int samples_per_segment = 100;
  bool shade_obstacles = true;
};

/// SVG 1.1 picture of a 2D problem: the complement of the regions shaded as
/// obstacle, one rect or polygon per region, and optionally the trajectory as
/// a polyline with its control points. Throws std::invalid_argument for other
/// dimensions.
std::string RenderSvg(const PlanningProblem& problem, const Trajectory* trajectory,
                      const SvgOptions& options = {});

/// "length", "time" (velocity box [-1, 1]^n), "smooth" (the regularized
/// version of "time") or "quadrotor" (3D only). Throws std::invalid_argument
/// for other names.
PlanningSpec ObjectiveSpec(const std::string& objective, int dimension);

/// Instance family and its size parameters; unused fields are ignored.
struct GeneratorSpec {
  /// "maze", "building", "random", "fixture2d" or "two-route".
  std::string name = "maze";
  int width = 8;
  int height = 8;
  int removed = 0;
  RandomGcsOptions random;
  /// Objective of the planning families; empty picks "length".
  std::string objective;
};

struct BenchInstance {
  std::string descriptor;
  std::uint64_t seed = 0;
  /// Absent for "random", which has no trajectory.
  std::optional<PlanningProblem> problem;
  GcsProblem graph;
};

BenchInstance Generate(const GeneratorSpec& spec, std::uint64_t seed);

struct RunSettings {
  PlanOptions options;
  /// Run the enumeration oracle with this path limit.
  std::optional<long> oracle_limit;
};

struct InstanceRun {
  RunRecord record;
  PlanResult result;
  /// CheckTrajectory findings on the trajectory after a JSON round trip.
  std::vector<std::string> trajectory_issues;
};

/// Plans one instance, checks the trajectory and runs the oracle if asked.
/// Rounding is seeded with the instance seed. Errors end up in the record.
InstanceRun RunInstance(const BenchInstance& instance, const RunSettings& settings);

/// Runs the command-line tool with the given arguments (argv[0] included)
/// and returns the exit code: 0 success, 2 infeasible, 1 error.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gcs
