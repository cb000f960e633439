#include "gcs/rounding.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "gcs/parallel.h"

namespace gcs {
namespace {

// Depth-first walk over the flow support; `choose` picks one of the
// candidate out-edges. A vertex that ran out of options stays marked, so each
// vertex is expanded at most once.
template <typename Choose>
std::optional<std::vector<int>> WalkSupport(const GcsProblem& problem,
                                            const Eigen::VectorXd& phi,
                                            double flow_floor, Choose choose) {
  if (phi.size() != problem.num_edges()) {
    throw std::invalid_argument("SamplePath: flow vector size mismatch");
  }
  std::vector<bool> visited(problem.num_vertices(), false);
  std::vector<int> path{problem.source()};
  visited[problem.source()] = true;
  std::vector<int> candidates;
  while (!path.empty()) {
    const int u = path.back();
    if (u == problem.target()) return path;
    candidates.clear();
    for (int e : problem.outgoing(u)) {
      if (phi[e] > flow_floor && !visited[problem.edge(e).head]) {
        candidates.push_back(e);
      }
    }
    if (candidates.empty()) {
      path.pop_back();
      continue;
    }
    const int next = problem.edge(choose(candidates)).head;
    visited[next] = true;
    path.push_back(next);
  }
  return std::nullopt;
}

bool ReachesRelaxation(double cost, double relaxation_cost, double tol) {
  return cost - relaxation_cost <= tol * (1.0 + std::abs(relaxation_cost));
}

}  // namespace

std::optional<std::vector<int>> SamplePath(const GcsProblem& problem,
                                           const Eigen::VectorXd& phi,
                                           PortableRng& rng, double flow_floor) {
  return WalkSupport(problem, phi, flow_floor, [&](const std::vector<int>& edges) {
    double total = 0.0;
    for (int e : edges) total += phi[e];
    double draw = rng.Uniform() * total;
    for (int e : edges) {
      draw -= phi[e];
      if (draw < 0.0) return e;
    }
    return edges.back();
  });
}

std::optional<std::vector<int>> GreedyPath(const GcsProblem& problem,
                                           const Eigen::VectorXd& phi,
                                           double flow_floor) {
  return WalkSupport(problem, phi, flow_floor, [&](const std::vector<int>& edges) {
    int best = edges.front();
    for (int e : edges) {
      if (phi[e] > phi[best]) best = e;
    }
    return best;
  });
}

double RelaxationGap(double relaxation_cost, double rounded_cost) {
  if (!std::isfinite(rounded_cost)) return std::numeric_limits<double>::infinity();
  if (relaxation_cost <= 0.0) {
    return rounded_cost <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return (rounded_cost - relaxation_cost) / relaxation_cost;
}

RoundingReport Round(const GcsProblem& problem, const FlowSolution& flows,
                     const RoundingConfig& config, const SolverOptions& options) {
  if (!flows.optimal()) {
    throw std::invalid_argument("Round: relaxation was not solved to optimality");
  }
  if (config.max_paths < 1 || config.max_trials < 1) {
    throw std::invalid_argument("Round: path and trial limits must be positive");
  }
  RoundingReport report;
  report.seed = config.seed;
  report.relaxation_cost = flows.cost;

  PortableRng rng(config.seed);
  std::set<std::vector<int>> seen;
  const int threads = config.threads > 0 ? config.threads : DefaultThreadCount();
  // Sampling is sequential; each batch of new paths is then evaluated in
  // parallel and merged in trial order, so the outcome is independent of the
  // thread count.
  int trial = 0;
  bool support_empty = false;
  while (!report.early_stop && trial < config.max_trials &&
         static_cast<int>(report.paths.size()) < config.max_paths && !support_empty) {
    std::vector<RoundedPath> batch;
    while (static_cast<int>(batch.size()) < threads && trial < config.max_trials &&
           static_cast<int>(report.paths.size() + batch.size()) < config.max_paths) {
      const auto path = SamplePath(problem, flows.phi, rng, config.flow_floor);
      ++trial;
      if (!path) {
        support_empty = true;
        break;
      }
      if (seen.insert(*path).second) batch.push_back({*path, 0.0, trial - 1});
    }
    std::vector<PathEvaluation> evals(batch.size());
    ParallelFor(
        static_cast<int>(batch.size()),
        [&](int k) { evals[k] = EvaluatePath(problem, batch[k].vertices, options); },
        threads);

    for (size_t k = 0; k < batch.size(); ++k) {
      RoundedPath& p = batch[k];
      p.cost = evals[k].feasible() ? evals[k].cost
                                   : std::numeric_limits<double>::infinity();
      report.paths.push_back(p);
      report.trials = p.trial + 1;
      if (p.cost < report.best_cost) {
        report.best_cost = p.cost;
        report.best = static_cast<int>(report.paths.size()) - 1;
        report.best_values = evals[k].values;
      }
      if (ReachesRelaxation(p.cost, flows.cost, config.early_stop_tol)) {
        report.early_stop = true;
        break;
      }
    }
    if (!report.early_stop) report.trials = trial;
  }
  report.relaxation_gap = RelaxationGap(report.relaxation_cost, report.best_cost);
  return report;
}

nlohmann::json ToJson(const RoundingReport& report) {
  auto number = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : "-inf";
  };
  nlohmann::json paths = nlohmann::json::array();
  for (const RoundedPath& p : report.paths) {
    paths.push_back({{"vertices", p.vertices}, {"cost", number(p.cost)}, {"trial", p.trial}});
  }
  return {
      {"seed", report.seed},
      {"relaxation_cost", number(report.relaxation_cost)},
      {"rounded_cost", number(report.best_cost)},
      {"relaxation_gap", number(report.relaxation_gap)},
      {"best_path", report.best},
      {"trials", report.trials},
      {"early_stop", report.early_stop},
      {"paths", paths},
  };
}

}  // namespace gcs
