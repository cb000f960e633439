#include "gcs/gcs_core.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "gcs/parallel.h"

namespace gcs {

EdgeLength EdgeLength::Affine(Eigen::VectorXd coeffs, double constant) {
  EdgeLength l;
  l.kind_ = Kind::kAffine;
  l.affine_coeffs_ = std::move(coeffs);
  l.affine_constant_ = constant;
  return l;
}

EdgeLength EdgeLength::L2Sum(std::vector<AffineBlock> terms) {
  for (const auto& t : terms) {
    if (t.M.rows() != t.c.size()) {
      throw std::invalid_argument("EdgeLength: l2 block rows differ from offset");
    }
  }
  EdgeLength l;
  l.kind_ = Kind::kL2Sum;
  l.l2_terms_ = std::move(terms);
  return l;
}

EdgeLength EdgeLength::QuadOverLinSum(std::vector<QuadOverLinTerm> terms) {
  for (const auto& t : terms) {
    if (t.numerator.M.rows() != t.numerator.c.size()) {
      throw std::invalid_argument("EdgeLength: numerator rows differ from offset");
    }
    if (t.a.size() != t.numerator.M.cols()) {
      throw std::invalid_argument("EdgeLength: denominator size mismatch");
    }
  }
  EdgeLength l;
  l.kind_ = Kind::kQuadOverLinSum;
  l.quad_terms_ = std::move(terms);
  return l;
}

EdgeLength EdgeLength::WeightedSum(std::vector<std::pair<double, EdgeLength>> terms) {
  for (const auto& [w, child] : terms) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("EdgeLength: weights must be finite and >= 0");
    }
  }
  EdgeLength l;
  l.kind_ = Kind::kWeightedSum;
  l.children_ = std::move(terms);
  return l;
}

double EdgeLength::Evaluate(const Eigen::VectorXd& v) const {
  switch (kind_) {
    case Kind::kZero:
      return 0.0;
    case Kind::kAffine:
      return affine_coeffs_.dot(v) + affine_constant_;
    case Kind::kL2Sum: {
      double sum = 0.0;
      for (const auto& t : l2_terms_) sum += (t.M * v + t.c).norm();
      return sum;
    }
    case Kind::kQuadOverLinSum: {
      double sum = 0.0;
      for (const auto& t : quad_terms_) {
        const double num = (t.numerator.M * v + t.numerator.c).squaredNorm();
        const double den = t.a.dot(v) + t.a0;
        if (den > 0.0) {
          sum += num / den;
        } else if (num > 0.0) {
          return std::numeric_limits<double>::infinity();
        }
      }
      return sum;
    }
    case Kind::kWeightedSum: {
      double sum = 0.0;
      for (const auto& [w, child] : children_) {
        if (w != 0.0) sum += w * child.Evaluate(v);
      }
      return sum;
    }
  }
  return 0.0;
}

void EdgeLength::CheckDimension(int local_dim) const {
  auto fail = [] {
    throw std::invalid_argument("EdgeLength: block width differs from edge variables");
  };
  switch (kind_) {
    case Kind::kZero:
      return;
    case Kind::kAffine:
      if (affine_coeffs_.size() != local_dim) fail();
      return;
    case Kind::kL2Sum:
      for (const auto& t : l2_terms_) {
        if (t.M.cols() != local_dim) fail();
      }
      return;
    case Kind::kQuadOverLinSum:
      for (const auto& t : quad_terms_) {
        if (t.numerator.M.cols() != local_dim) fail();
      }
      return;
    case Kind::kWeightedSum:
      for (const auto& [w, child] : children_) child.CheckDimension(local_dim);
      return;
  }
}

namespace {

void AppendRows(Eigen::MatrixXd* M, Eigen::VectorXd* v, const Eigen::MatrixXd& rows,
                const Eigen::VectorXd& rhs) {
  if (rows.rows() != rhs.size()) {
    throw std::invalid_argument("EdgeConstraint: row count differs from rhs");
  }
  if (M->rows() == 0) {
    *M = rows;
    *v = rhs;
    return;
  }
  if (M->cols() != rows.cols()) {
    throw std::invalid_argument("EdgeConstraint: column count mismatch");
  }
  Eigen::MatrixXd stacked(M->rows() + rows.rows(), M->cols());
  stacked << *M, rows;
  Eigen::VectorXd rhs_stacked(v->size() + rhs.size());
  rhs_stacked << *v, rhs;
  *M = std::move(stacked);
  *v = std::move(rhs_stacked);
}

}  // namespace

void EdgeConstraint::AddEquality(const Eigen::MatrixXd& e, const Eigen::VectorXd& rhs) {
  AppendRows(&E, &f, e, rhs);
}

void EdgeConstraint::AddInequality(const Eigen::MatrixXd& g, const Eigen::VectorXd& rhs) {
  AppendRows(&G, &h, g, rhs);
}

int GcsProblem::AddVertex(std::string name, std::optional<ConvexSet> set) {
  for (const auto& v : vertices_) {
    if (v.name == name) throw std::invalid_argument("duplicate vertex name: " + name);
  }
  vertices_.push_back({std::move(name), std::move(set)});
  out_.emplace_back();
  in_.emplace_back();
  return num_vertices() - 1;
}

int GcsProblem::AddEdge(int tail, int head, EdgeLength length,
                        EdgeConstraint constraint) {
  if (tail < 0 || tail >= num_vertices() || head < 0 || head >= num_vertices()) {
    throw std::out_of_range("AddEdge: unknown vertex");
  }
  if (tail == head) throw std::invalid_argument("AddEdge: self-loop");
  if (FindEdge(tail, head) >= 0) throw std::invalid_argument("AddEdge: parallel edge");
  const int local = vertex(tail).dimension() + vertex(head).dimension();
  length.CheckDimension(local);
  if ((constraint.num_equalities() > 0 && constraint.E.cols() != local) ||
      (constraint.num_inequalities() > 0 && constraint.G.cols() != local)) {
    throw std::invalid_argument("AddEdge: constraint width differs from edge variables");
  }
  edges_.push_back({tail, head, std::move(length), std::move(constraint)});
  const int e = num_edges() - 1;
  out_[tail].push_back(e);
  in_[head].push_back(e);
  return e;
}

void GcsProblem::SetSource(int v) {
  if (v < 0 || v >= num_vertices()) throw std::out_of_range("SetSource");
  source_ = v;
}

void GcsProblem::SetTarget(int v) {
  if (v < 0 || v >= num_vertices()) throw std::out_of_range("SetTarget");
  target_ = v;
}

int GcsProblem::FindEdge(int tail, int head) const {
  for (int e : out_.at(tail)) {
    if (edges_[e].head == head) return e;
  }
  return -1;
}

void GcsProblem::Validate() const {
  if (source_ < 0 || target_ < 0) {
    throw std::invalid_argument("GcsProblem: source and target must be set");
  }
  if (source_ == target_) throw std::invalid_argument("GcsProblem: source equals target");
  if (!in_[source_].empty()) {
    throw std::invalid_argument("GcsProblem: source has incoming edges");
  }
  if (!out_[target_].empty()) {
    throw std::invalid_argument("GcsProblem: target has outgoing edges");
  }
}

GcsProblem GcsProblem::FilterEdges(const std::vector<bool>& keep,
                                   std::vector<int>* kept_index) const {
  if (static_cast<int>(keep.size()) != num_edges()) {
    throw std::invalid_argument("FilterEdges: mask size mismatch");
  }
  GcsProblem out;
  out.vertices_ = vertices_;
  out.out_.resize(vertices_.size());
  out.in_.resize(vertices_.size());
  out.source_ = source_;
  out.target_ = target_;
  if (kept_index) kept_index->clear();
  for (int e = 0; e < num_edges(); ++e) {
    if (!keep[e]) continue;
    out.edges_.push_back(edges_[e]);
    const int ne = out.num_edges() - 1;
    out.out_[edges_[e].tail].push_back(ne);
    out.in_[edges_[e].head].push_back(ne);
    if (kept_index) kept_index->push_back(e);
  }
  return out;
}

namespace {

// Adds weight * perspective(length)(w, phi) to prog and returns the objective
// contribution. With phi = 1 this is the length itself.
AffineExpr AddLengthCost(ConicProgram* prog, const EdgeLength& length,
                         const std::vector<AffineExpr>& w, const AffineExpr& phi,
                         double weight) {
  AffineExpr cost;
  auto apply = [&](const Eigen::MatrixXd& M, const Eigen::VectorXd& c) {
    std::vector<AffineExpr> u(M.rows());
    for (int r = 0; r < M.rows(); ++r) {
      u[r] = c[r] * phi;
      for (int j = 0; j < M.cols(); ++j) {
        if (M(r, j) != 0.0) u[r] += M(r, j) * w[j];
      }
    }
    return u;
  };
  switch (length.kind()) {
    case EdgeLength::Kind::kZero:
      break;
    case EdgeLength::Kind::kAffine: {
      AffineExpr e = length.affine_constant() * phi;
      for (int j = 0; j < length.affine_coeffs().size(); ++j) {
        if (length.affine_coeffs()[j] != 0.0) e += length.affine_coeffs()[j] * w[j];
      }
      cost += weight * e;
      break;
    }
    case EdgeLength::Kind::kL2Sum:
      for (const auto& t : length.l2_terms()) {
        const int s = AddEpigraphL2(prog, apply(t.M, t.c));
        cost += AffineExpr::Var(s, weight);
      }
      break;
    case EdgeLength::Kind::kQuadOverLinSum:
      for (const auto& t : length.quad_terms()) {
        AffineExpr den = t.a0 * phi;
        for (int j = 0; j < t.a.size(); ++j) {
          if (t.a[j] != 0.0) den += t.a[j] * w[j];
        }
        const int s = AddQuadOverLin(prog, apply(t.numerator.M, t.numerator.c), den);
        cost += AffineExpr::Var(s, weight);
      }
      break;
    case EdgeLength::Kind::kWeightedSum:
      for (const auto& [cw, child] : length.children()) {
        if (cw == 0.0) continue;
        cost += AddLengthCost(prog, child, w, phi, weight * cw);
      }
      break;
  }
  return cost;
}

void AddEdgeConstraint(ConicProgram* prog, const EdgeConstraint& c,
                       const std::vector<AffineExpr>& w, const AffineExpr& phi) {
  for (int r = 0; r < c.num_equalities(); ++r) {
    AffineExpr row = -c.f[r] * phi;
    for (int j = 0; j < c.E.cols(); ++j) {
      if (c.E(r, j) != 0.0) row += c.E(r, j) * w[j];
    }
    prog->AddEquality(std::move(row));
  }
  for (int r = 0; r < c.num_inequalities(); ++r) {
    AffineExpr row = -c.h[r] * phi;
    for (int j = 0; j < c.G.cols(); ++j) {
      if (c.G(r, j) != 0.0) row += c.G(r, j) * w[j];
    }
    prog->AddInequality(std::move(row));
  }
}

std::vector<AffineExpr> Vars(int first, int count) {
  std::vector<AffineExpr> v;
  v.reserve(count);
  for (int i = 0; i < count; ++i) v.push_back(AffineExpr::Var(first + i));
  return v;
}

}  // namespace

Relaxation BuildRelaxation(const GcsProblem& problem) {
  problem.Validate();
  Relaxation relax;
  ConicProgram& prog = relax.program;
  relax.edges.resize(problem.num_edges());
  AffineExpr total;
  for (int e = 0; e < problem.num_edges(); ++e) {
    const Edge& edge = problem.edge(e);
    const Vertex& u = problem.vertex(edge.tail);
    const Vertex& v = problem.vertex(edge.head);
    EdgeVariables& ev = relax.edges[e];
    ev.phi = prog.NewVariable();
    ev.y = prog.NewVariables(u.dimension());
    ev.z = prog.NewVariables(v.dimension());
    const AffineExpr phi = AffineExpr::Var(ev.phi);
    prog.AddInequality(-phi);
    prog.AddInequality(phi - AffineExpr(1.0));
    const std::vector<AffineExpr> y = Vars(ev.y, u.dimension());
    const std::vector<AffineExpr> z = Vars(ev.z, v.dimension());
    if (u.set) AddScaledMembership(&prog, *u.set, y, phi);
    if (v.set) AddScaledMembership(&prog, *v.set, z, phi);
    std::vector<AffineExpr> w = y;
    w.insert(w.end(), z.begin(), z.end());
    AddEdgeConstraint(&prog, edge.constraint, w, phi);
    total += AddLengthCost(&prog, edge.length, w, phi, 1.0);
  }

  for (int v = 0; v < problem.num_vertices(); ++v) {
    AffineExpr in_flow, out_flow;
    for (int e : problem.incoming(v)) in_flow += AffineExpr::Var(relax.edges[e].phi);
    for (int e : problem.outgoing(v)) out_flow += AffineExpr::Var(relax.edges[e].phi);
    if (v == problem.source()) {
      prog.AddEquality(out_flow - AffineExpr(1.0));
      continue;
    }
    if (v == problem.target()) {
      prog.AddEquality(in_flow - AffineExpr(1.0));
      continue;
    }
    if (problem.incoming(v).empty() && problem.outgoing(v).empty()) continue;
    prog.AddEquality(in_flow - out_flow);
    prog.AddInequality(in_flow - AffineExpr(1.0));
    const int n = problem.vertex(v).dimension();
    for (int j = 0; j < n; ++j) {
      AffineExpr balance;
      for (int e : problem.incoming(v)) balance += AffineExpr::Var(relax.edges[e].z + j);
      for (int e : problem.outgoing(v)) balance -= AffineExpr::Var(relax.edges[e].y + j);
      prog.AddEquality(std::move(balance));
    }
  }
  prog.AddCost(total);
  return relax;
}

FlowSolution SolveRelaxation(const GcsProblem& problem, const Relaxation& relaxation,
                             const SolverOptions& options) {
  FlowSolution sol;
  SolverOptions opts = options;
  // The central path splits flow evenly across tied routes; a simplex vertex
  // would pick one arbitrarily.
  if (opts.lp_method == LpMethod::kAuto) opts.lp_method = LpMethod::kInteriorPoint;
  const SolveResult r = Solve(relaxation.program, opts);
  sol.status = r.status;
  sol.diagnostics = r.diagnostics;
  if (!r.optimal()) return sol;
  sol.cost = r.objective;
  const int m = problem.num_edges();
  sol.phi.resize(m);
  sol.y.resize(m);
  sol.z.resize(m);
  for (int e = 0; e < m; ++e) {
    const EdgeVariables& ev = relaxation.edges[e];
    const Edge& edge = problem.edge(e);
    sol.phi[e] = r.primal[ev.phi];
    sol.y[e] = r.primal.segment(ev.y, problem.vertex(edge.tail).dimension());
    sol.z[e] = r.primal.segment(ev.z, problem.vertex(edge.head).dimension());
  }
  sol.vertex_values.resize(problem.num_vertices());
  for (int v = 0; v < problem.num_vertices(); ++v) {
    const int n = problem.vertex(v).dimension();
    const bool use_out = problem.incoming(v).empty();
    const auto& edges = use_out ? problem.outgoing(v) : problem.incoming(v);
    double flow = 0.0;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
    for (int e : edges) {
      flow += sol.phi[e];
      sum += use_out ? sol.y[e] : sol.z[e];
    }
    if (flow > kFlowSupportTol) sol.vertex_values[v] = sum / flow;
  }
  return sol;
}

void CheckPath(const GcsProblem& problem, const std::vector<int>& path) {
  if (path.size() < 2 || path.front() != problem.source() ||
      path.back() != problem.target()) {
    throw std::invalid_argument("path must run from source to target");
  }
  std::vector<bool> seen(problem.num_vertices(), false);
  for (size_t i = 0; i < path.size(); ++i) {
    const int v = path[i];
    if (v < 0 || v >= problem.num_vertices()) {
      throw std::invalid_argument("path references an unknown vertex");
    }
    if (seen[v]) throw std::invalid_argument("path repeats a vertex");
    seen[v] = true;
    if (i > 0 && problem.FindEdge(path[i - 1], v) < 0) {
      throw std::invalid_argument("path uses a missing edge");
    }
  }
}

PathEvaluation EvaluatePath(const GcsProblem& problem, const std::vector<int>& path,
                            const SolverOptions& options) {
  CheckPath(problem, path);
  ConicProgram prog;
  std::vector<int> first(path.size());
  for (size_t i = 0; i < path.size(); ++i) {
    const Vertex& v = problem.vertex(path[i]);
    first[i] = prog.NewVariables(v.dimension());
    if (v.set) {
      AddScaledMembership(&prog, *v.set, Vars(first[i], v.dimension()), AffineExpr(1.0));
    }
  }
  AffineExpr total;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const Edge& edge = problem.edge(problem.FindEdge(path[i], path[i + 1]));
    std::vector<AffineExpr> w = Vars(first[i], problem.vertex(path[i]).dimension());
    const std::vector<AffineExpr> z =
        Vars(first[i + 1], problem.vertex(path[i + 1]).dimension());
    w.insert(w.end(), z.begin(), z.end());
    AddEdgeConstraint(&prog, edge.constraint, w, AffineExpr(1.0));
    total += AddLengthCost(&prog, edge.length, w, AffineExpr(1.0), 1.0);
  }
  prog.AddCost(total);
  const SolveResult r = Solve(prog, options);
  PathEvaluation out;
  out.status = r.status;
  out.diagnostics = r.diagnostics;
  if (!r.optimal()) return out;
  out.cost = r.objective;
  for (size_t i = 0; i < path.size(); ++i) {
    out.values.push_back(
        r.primal.segment(first[i], problem.vertex(path[i]).dimension()));
  }
  return out;
}

double SumEdgeLengths(const GcsProblem& problem, const std::vector<int>& path,
                      const std::vector<Eigen::VectorXd>& values) {
  CheckPath(problem, path);
  if (values.size() != path.size()) {
    throw std::invalid_argument("SumEdgeLengths: one value per path vertex required");
  }
  double total = 0.0;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    Eigen::VectorXd v(values[i].size() + values[i + 1].size());
    v << values[i], values[i + 1];
    total += problem.edge(problem.FindEdge(path[i], path[i + 1])).length.Evaluate(v);
  }
  return total;
}

std::vector<std::vector<int>> EnumeratePaths(const GcsProblem& problem,
                                             long path_limit) {
  problem.Validate();
  // Vertices that can still reach the target.
  std::vector<bool> useful(problem.num_vertices(), false);
  std::vector<int> stack{problem.target()};
  useful[problem.target()] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int e : problem.incoming(v)) {
      const int u = problem.edge(e).tail;
      if (!useful[u]) {
        useful[u] = true;
        stack.push_back(u);
      }
    }
  }

  std::vector<std::vector<int>> paths;
  std::vector<int> path{problem.source()};
  std::vector<bool> on_path(problem.num_vertices(), false);
  on_path[problem.source()] = true;
  // Explicit DFS over (vertex, next outgoing slot).
  std::vector<size_t> slot{0};
  while (!path.empty()) {
    const int v = path.back();
    if (v == problem.target()) {
      paths.push_back(path);
      if (static_cast<long>(paths.size()) > path_limit) {
        throw std::length_error("EnumeratePaths: more simple paths than the limit");
      }
      on_path[v] = false;
      path.pop_back();
      slot.pop_back();
      continue;
    }
    const auto& out = problem.outgoing(v);
    bool advanced = false;
    while (slot.back() < out.size()) {
      const int w = problem.edge(out[slot.back()++]).head;
      if (!on_path[w] && useful[w]) {
        path.push_back(w);
        slot.push_back(0);
        on_path[w] = true;
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      on_path[v] = false;
      path.pop_back();
      slot.pop_back();
    }
  }
  return paths;
}

BruteForceResult BruteForceOptimum(const GcsProblem& problem, long path_limit,
                                   int threads) {
  const auto paths = EnumeratePaths(problem, path_limit);
  std::vector<PathEvaluation> evals(paths.size());
  ParallelFor(
      static_cast<int>(paths.size()),
      [&](int i) { evals[i] = EvaluatePath(problem, paths[i]); }, threads);
  BruteForceResult best;
  best.cost = std::numeric_limits<double>::infinity();
  best.paths_evaluated = static_cast<long>(paths.size());
  for (size_t i = 0; i < paths.size(); ++i) {
    if (evals[i].status == SolveStatus::kNumericalFailure) {
      throw SolverError("BruteForceOptimum: path evaluation failed: " +
                        evals[i].diagnostics);
    }
    if (evals[i].feasible() && evals[i].cost < best.cost) {
      best.cost = evals[i].cost;
      best.path = paths[i];
    }
  }
  if (best.path.empty()) {
    throw std::runtime_error("BruteForceOptimum: no feasible path");
  }
  return best;
}

nlohmann::json ToJson(const EdgeLength& length) {
  using Kind = EdgeLength::Kind;
  nlohmann::json j;
  auto block = [](const AffineBlock& b) {
    return nlohmann::json{{"M", MatrixToJson(b.M)}, {"c", VectorToJson(b.c)}};
  };
  switch (length.kind()) {
    case Kind::kZero:
      j["type"] = "zero";
      break;
    case Kind::kAffine:
      j["type"] = "affine";
      j["coeffs"] = VectorToJson(length.affine_coeffs());
      j["constant"] = length.affine_constant();
      break;
    case Kind::kL2Sum:
      j["type"] = "l2_sum";
      j["terms"] = nlohmann::json::array();
      for (const auto& t : length.l2_terms()) j["terms"].push_back(block(t));
      break;
    case Kind::kQuadOverLinSum:
      j["type"] = "quad_over_lin_sum";
      j["terms"] = nlohmann::json::array();
      for (const auto& t : length.quad_terms()) {
        nlohmann::json term = block(t.numerator);
        term["a"] = VectorToJson(t.a);
        term["a0"] = t.a0;
        j["terms"].push_back(term);
      }
      break;
    case Kind::kWeightedSum:
      j["type"] = "weighted_sum";
      j["terms"] = nlohmann::json::array();
      for (const auto& [w, child] : length.children()) {
        j["terms"].push_back({{"weight", w}, {"length", ToJson(child)}});
      }
      break;
  }
  return j;
}

EdgeLength EdgeLengthFromJson(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  auto block = [](const nlohmann::json& t) {
    AffineBlock b;
    b.c = VectorFromJson(t.at("c"));
    b.M = MatrixFromJson(t.at("M"));
    return b;
  };
  if (type == "zero") return EdgeLength::Zero();
  if (type == "affine") {
    return EdgeLength::Affine(VectorFromJson(j.at("coeffs")),
                              j.at("constant").get<double>());
  }
  if (type == "l2_sum") {
    std::vector<AffineBlock> terms;
    for (const auto& t : j.at("terms")) terms.push_back(block(t));
    return EdgeLength::L2Sum(std::move(terms));
  }
  if (type == "quad_over_lin_sum") {
    std::vector<QuadOverLinTerm> terms;
    for (const auto& t : j.at("terms")) {
      terms.push_back({block(t), VectorFromJson(t.at("a")), t.at("a0").get<double>()});
    }
    return EdgeLength::QuadOverLinSum(std::move(terms));
  }
  if (type == "weighted_sum") {
    std::vector<std::pair<double, EdgeLength>> terms;
    for (const auto& t : j.at("terms")) {
      terms.emplace_back(t.at("weight").get<double>(), EdgeLengthFromJson(t.at("length")));
    }
    return EdgeLength::WeightedSum(std::move(terms));
  }
  throw std::invalid_argument("unsupported edge length type: " + type);
}

nlohmann::json ToJson(const GcsProblem& problem) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (int v = 0; v < problem.num_vertices(); ++v) {
    const Vertex& vx = problem.vertex(v);
    j["vertices"].push_back(
        {{"name", vx.name}, {"set", vx.set ? ToJson(*vx.set) : nlohmann::json()}});
  }
  j["edges"] = nlohmann::json::array();
  for (int e = 0; e < problem.num_edges(); ++e) {
    const Edge& edge = problem.edge(e);
    j["edges"].push_back({{"tail", problem.vertex(edge.tail).name},
                          {"head", problem.vertex(edge.head).name},
                          {"length", ToJson(edge.length)},
                          {"constraint",
                           {{"E", MatrixToJson(edge.constraint.E)},
                            {"f", VectorToJson(edge.constraint.f)},
                            {"G", MatrixToJson(edge.constraint.G)},
                            {"h", VectorToJson(edge.constraint.h)}}}});
  }
  j["source"] = problem.source() >= 0 ? problem.vertex(problem.source()).name : "";
  j["target"] = problem.target() >= 0 ? problem.vertex(problem.target()).name : "";
  return j;
}

GcsProblem GcsProblemFromJson(const nlohmann::json& j) {
  GcsProblem problem;
  std::unordered_map<std::string, int> index;
  for (const auto& v : j.at("vertices")) {
    std::optional<ConvexSet> set;
    if (v.contains("set") && !v.at("set").is_null()) set = ConvexSetFromJson(v.at("set"));
    const std::string name = v.at("name").get<std::string>();
    index[name] = problem.AddVertex(name, std::move(set));
  }
  auto lookup = [&](const nlohmann::json& name) {
    const auto it = index.find(name.get<std::string>());
    if (it == index.end()) throw std::invalid_argument("unknown vertex name");
    return it->second;
  };
  for (const auto& e : j.at("edges")) {
    const int tail = lookup(e.at("tail"));
    const int head = lookup(e.at("head"));
    const int local = problem.vertex(tail).dimension() + problem.vertex(head).dimension();
    EdgeConstraint c;
    if (e.contains("constraint")) {
      const auto& cj = e.at("constraint");
      c.E = MatrixFromJson(cj.at("E"), local);
      c.f = VectorFromJson(cj.at("f"));
      c.G = MatrixFromJson(cj.at("G"), local);
      c.h = VectorFromJson(cj.at("h"));
    }
    EdgeLength length = e.contains("length") ? EdgeLengthFromJson(e.at("length"))
                                             : EdgeLength::Zero();
    problem.AddEdge(tail, head, std::move(length), std::move(c));
  }
  problem.SetSource(lookup(j.at("source")));
  problem.SetTarget(lookup(j.at("target")));
  problem.Validate();
  return problem;
}

}  // namespace gcs
