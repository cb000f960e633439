#include "gcs/preprocess.h"

#include <deque>
#include <map>
#include <stdexcept>

#include "gcs/parallel.h"

namespace gcs {
namespace {

constexpr double kLambdaTol = 1e-6;

// Flow and lifted value of a vertex as expressions in the relaxation. The
// source has no incoming edges, so its outgoing flow stands in.
struct VertexFlow {
  AffineExpr phi;
  std::vector<AffineExpr> x;
};

VertexFlow VertexFlowOf(const GcsProblem& problem, const Relaxation& relaxation,
                        int v) {
  const int n = problem.vertex(v).dimension();
  VertexFlow flow{AffineExpr(), std::vector<AffineExpr>(n)};
  const bool use_outgoing = problem.incoming(v).empty();
  const auto& edges = use_outgoing ? problem.outgoing(v) : problem.incoming(v);
  for (int e : edges) {
    const EdgeVariables& vars = relaxation.edges[e];
    flow.phi += AffineExpr::Var(vars.phi);
    const int first = use_outgoing ? vars.y : vars.z;
    for (int k = 0; k < n; ++k) flow.x[k] += AffineExpr::Var(first + k);
  }
  return flow;
}

std::vector<AffineExpr> Block(int first, int n) {
  std::vector<AffineExpr> out;
  for (int k = 0; k < n; ++k) out.push_back(AffineExpr::Var(first + k));
  return out;
}

// Shortest route from `from` to `to` that avoids `blocked` vertices and the
// edges with skip[e]. Returns the visited vertices or an empty vector.
std::vector<int> FindRoute(const GcsProblem& problem, int from, int to,
                           const std::vector<bool>& blocked,
                           const std::vector<bool>& skip) {
  if (blocked[from] || blocked[to]) return {};
  std::vector<int> parent(problem.num_vertices(), -2);
  std::deque<int> queue{from};
  parent[from] = -1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    if (v == to) break;
    for (int e : problem.outgoing(v)) {
      if (skip[e]) continue;
      const int w = problem.edge(e).head;
      if (blocked[w] || parent[w] != -2) continue;
      parent[w] = v;
      queue.push_back(w);
    }
  }
  if (parent[to] == -2) return {};
  std::vector<int> route;
  for (int v = to; v != -1; v = parent[v]) route.push_back(v);
  return route;
}

std::vector<bool> Reachable(const GcsProblem& problem, int start, bool forward) {
  std::vector<bool> seen(problem.num_vertices(), false);
  std::vector<int> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int e : forward ? problem.outgoing(v) : problem.incoming(v)) {
      const int w = forward ? problem.edge(e).head : problem.edge(e).tail;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

bool DisjointRoutesExist(const GcsProblem& problem, int edge) {
  const Edge& ed = problem.edge(edge);
  const int u = ed.tail;
  const int v = ed.head;
  std::vector<bool> skip(problem.num_edges(), false);
  skip[edge] = true;
  const int reverse = problem.FindEdge(v, u);
  if (reverse >= 0) skip[reverse] = true;

  const std::vector<bool> none(problem.num_vertices(), false);
  // Try both orders: route one leg by BFS, then the other around it.
  for (int order = 0; order < 2; ++order) {
    const bool head_first = order == 1;
    const std::vector<int> first =
        head_first ? FindRoute(problem, v, problem.target(), none, skip)
                   : FindRoute(problem, problem.source(), u, none, skip);
    if (first.empty()) return false;
    std::vector<bool> blocked = none;
    for (int w : first) blocked[w] = true;
    const std::vector<int> second =
        head_first ? FindRoute(problem, problem.source(), u, blocked, skip)
                   : FindRoute(problem, v, problem.target(), blocked, skip);
    if (!second.empty()) return true;
  }
  return false;
}

EdgeTestResult TestEdge(const GcsProblem& problem, int edge,
                        const std::vector<bool>& from_source,
                        const std::vector<bool>& to_target, bool* solved_lp) {
  *solved_lp = false;
  const Edge& ed = problem.edge(edge);
  if (!from_source[ed.tail] || !to_target[ed.head]) {
    return EdgeTestResult::kUnreachable;
  }
  if (DisjointRoutesExist(problem, edge)) return EdgeTestResult::kDisjointPaths;
  *solved_lp = true;
  const MultiflowResult r = SolveEdgeMultiflow(problem, edge);
  if (r.status == SolveStatus::kInfeasible) {
    return EdgeTestResult::kMultiflowInfeasible;
  }
  if (r.status != SolveStatus::kOptimal) return EdgeTestResult::kSolverFailure;
  return r.lambda < 1.0 - kLambdaTol ? EdgeTestResult::kMultiflowInfeasible
                                     : EdgeTestResult::kMultiflowFeasible;
}

bool Removes(EdgeTestResult r) {
  return r == EdgeTestResult::kUnreachable ||
         r == EdgeTestResult::kMultiflowInfeasible;
}

}  // namespace

TwoCycleReport AddTwoCycleConstraints(const GcsProblem& problem,
                                      Relaxation* relaxation) {
  if (static_cast<int>(relaxation->edges.size()) != problem.num_edges()) {
    throw std::invalid_argument("AddTwoCycleConstraints: relaxation mismatch");
  }
  TwoCycleReport report;
  ConicProgram& prog = relaxation->program;
  // Each vertex flow gets its own variables so that the constraints below
  // stay short; inlining the sums makes the KKT factor fill in badly around
  // high-degree vertices.
  std::map<int, VertexFlow> flows;
  auto flow_of = [&](int v) -> const VertexFlow& {
    auto it = flows.find(v);
    if (it != flows.end()) return it->second;
    const VertexFlow sum = VertexFlowOf(problem, *relaxation, v);
    const int n = static_cast<int>(sum.x.size());
    const int first = prog.NewVariables(n + 1);
    VertexFlow named{AffineExpr::Var(first), Block(first + 1, n)};
    prog.AddEquality(named.phi - sum.phi);
    for (int k = 0; k < n; ++k) prog.AddEquality(named.x[k] - sum.x[k]);
    return flows.emplace(v, std::move(named)).first->second;
  };
  for (int e = 0; e < problem.num_edges(); ++e) {
    const int i = problem.edge(e).tail;
    const int j = problem.edge(e).head;
    if (i > j) continue;
    const int f = problem.FindEdge(j, i);
    if (f < 0) continue;
    ++report.pairs;
    const EdgeVariables& ve = relaxation->edges[e];
    const EdgeVariables& vf = relaxation->edges[f];
    const AffineExpr pair_flow = AffineExpr::Var(ve.phi) + AffineExpr::Var(vf.phi);

    // At i the pair contributes y_e (leaving) and z_f (arriving); at j the
    // roles swap to z_e and y_f.
    const struct {
      int v;
      int leaving;
      int arriving;
    } ends[] = {{i, ve.y, vf.z}, {j, vf.y, ve.z}};
    for (const auto& end : ends) {
      const VertexFlow& flow = flow_of(end.v);
      prog.AddInequality(pair_flow - flow.phi);
      ++report.flow_constraints;
      const Vertex& vertex = problem.vertex(end.v);
      if (!vertex.set) continue;
      const int n = vertex.dimension();
      std::vector<AffineExpr> x = flow.x;
      const std::vector<AffineExpr> leaving = Block(end.leaving, n);
      const std::vector<AffineExpr> arriving = Block(end.arriving, n);
      for (int k = 0; k < n; ++k) x[k] = x[k] - leaving[k] - arriving[k];
      AddScaledMembership(&prog, *vertex.set, x, flow.phi - pair_flow);
      ++report.lifted_blocks;
    }
  }
  return report;
}

const char* ToString(EdgeTestResult result) {
  switch (result) {
    case EdgeTestResult::kDisjointPaths:
      return "disjoint_paths";
    case EdgeTestResult::kMultiflowFeasible:
      return "multiflow_feasible";
    case EdgeTestResult::kMultiflowInfeasible:
      return "multiflow_infeasible";
    case EdgeTestResult::kUnreachable:
      return "unreachable";
    case EdgeTestResult::kSolverFailure:
      return "solver_failure";
  }
  return "unknown";
}

MultiflowResult SolveEdgeMultiflow(const GcsProblem& problem, int edge) {
  problem.Validate();
  const int nv = problem.num_vertices();
  const int u = problem.edge(edge).tail;
  const int v = problem.edge(edge).head;
  const int reverse = problem.FindEdge(v, u);

  // Nodes: 2w is w_in, 2w + 1 is w_out. Arcs: the internal arc of every
  // vertex followed by one arc per usable graph edge.
  std::vector<std::pair<int, int>> arcs;
  for (int w = 0; w < nv; ++w) arcs.emplace_back(2 * w, 2 * w + 1);
  for (int e = 0; e < problem.num_edges(); ++e) {
    if (e == edge || e == reverse) continue;
    arcs.emplace_back(2 * problem.edge(e).tail + 1, 2 * problem.edge(e).head);
  }
  const int na = static_cast<int>(arcs.size());

  ConicProgram prog;
  const int lambda = prog.NewVariable();
  const int flow[2] = {prog.NewVariables(na), prog.NewVariables(na)};
  const int sources[2] = {2 * problem.source(), 2 * v};
  const int sinks[2] = {2 * u + 1, 2 * problem.target() + 1};

  for (int k = 0; k < 2; ++k) {
    std::vector<AffineExpr> balance(2 * nv);
    for (int a = 0; a < na; ++a) {
      prog.AddInequality(-AffineExpr::Var(flow[k] + a));
      balance[arcs[a].first] += AffineExpr::Var(flow[k] + a);
      balance[arcs[a].second] -= AffineExpr::Var(flow[k] + a);
    }
    balance[sources[k]] -= AffineExpr::Var(lambda);
    balance[sinks[k]] += AffineExpr::Var(lambda);
    for (auto& row : balance) {
      if (!row.terms.empty()) prog.AddEquality(std::move(row));
    }
  }
  for (int w = 0; w < nv; ++w) {
    prog.AddInequality(AffineExpr::Var(flow[0] + w) + AffineExpr::Var(flow[1] + w) -
                       AffineExpr(1.0));
  }
  prog.AddInequality(AffineExpr::Var(lambda) - AffineExpr(1.0));
  prog.AddInequality(-AffineExpr::Var(lambda));
  prog.AddCost(-AffineExpr::Var(lambda));

  const SolveResult r = Solve(prog);
  MultiflowResult out;
  out.status = r.status;
  if (r.optimal()) out.lambda = r.primal[lambda];
  return out;
}

GcsProblem EdgeRedundancyFilter(const GcsProblem& problem, PreprocessReport* report,
                                int threads) {
  problem.Validate();
  PreprocessReport local;
  local.edge_results.assign(problem.num_edges(), EdgeTestResult::kDisjointPaths);
  // Original index of every edge of `current`.
  std::vector<int> origin(problem.num_edges());
  for (int e = 0; e < problem.num_edges(); ++e) origin[e] = e;
  GcsProblem current = problem;

  // Removing an edge can strand others, so repeat until a pass removes nothing.
  while (true) {
    ++local.passes;
    const std::vector<bool> from_source = Reachable(current, current.source(), true);
    const std::vector<bool> to_target = Reachable(current, current.target(), false);
    std::vector<EdgeTestResult> results(current.num_edges());
    std::vector<char> solved(current.num_edges(), 0);
    ParallelFor(
        current.num_edges(),
        [&](int e) {
          bool lp = false;
          results[e] = TestEdge(current, e, from_source, to_target, &lp);
          solved[e] = lp;
        },
        threads);

    std::vector<bool> keep(current.num_edges(), true);
    bool changed = false;
    for (int e = 0; e < current.num_edges(); ++e) {
      local.edge_results[origin[e]] = results[e];
      local.lps_solved += solved[e];
      if (Removes(results[e])) {
        keep[e] = false;
        changed = true;
        const Edge& ed = current.edge(e);
        local.removed.push_back({current.vertex(ed.tail).name,
                                 current.vertex(ed.head).name, results[e]});
      }
    }
    if (!changed) break;
    std::vector<int> kept;
    current = current.FilterEdges(keep, &kept);
    for (int& k : kept) k = origin[k];
    origin = std::move(kept);
  }
  if (report) {
    local.two_cycle = report->two_cycle;
    *report = std::move(local);
  }
  return current;
}

nlohmann::json ToJson(const PreprocessReport& report) {
  nlohmann::json removed = nlohmann::json::array();
  for (const RemovedEdge& r : report.removed) {
    removed.push_back({{"tail", r.tail}, {"head", r.head}, {"reason", ToString(r.reason)}});
  }
  nlohmann::json results = nlohmann::json::array();
  for (EdgeTestResult r : report.edge_results) results.push_back(ToString(r));
  return {
      {"removed_edges", removed},
      {"edge_results", results},
      {"passes", report.passes},
      {"lps_solved", report.lps_solved},
      {"two_cycle",
       {{"pairs", report.two_cycle.pairs},
        {"flow_constraints", report.two_cycle.flow_constraints},
        {"lifted_blocks", report.two_cycle.lifted_blocks}}},
  };
}

}  // namespace gcs
