#include "gcs/planner.h"

#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gcs/parallel.h"

namespace gcs {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Accumulates rows of a linear system over a fixed number of columns.
class RowBuilder {
 public:
  explicit RowBuilder(int cols) : cols_(cols) {}

  Eigen::RowVectorXd& NewRow(double rhs) {
    rows_.push_back(Eigen::RowVectorXd::Zero(cols_));
    rhs_.push_back(rhs);
    return rows_.back();
  }
  Eigen::MatrixXd Matrix() const {
    Eigen::MatrixXd m(static_cast<int>(rows_.size()), cols_);
    for (size_t i = 0; i < rows_.size(); ++i) m.row(static_cast<int>(i)) = rows_[i];
    return m;
  }
  Eigen::VectorXd Rhs() const {
    return Eigen::Map<const Eigen::VectorXd>(rhs_.data(), static_cast<int>(rhs_.size()));
  }
  bool empty() const { return rows_.empty(); }

 private:
  int cols_;
  std::vector<Eigen::RowVectorXd> rows_;
  std::vector<double> rhs_;
};

ControlPointLayout LayoutOf(const PlanningSpec& spec) {
  return {spec.dimension(), spec.transcription_degree()};
}

// Adds `scale` times the k-th control point of the l-th derivative of
// coordinate j of r (j >= 0) or of h (j < 0) to `row`, for the block that
// starts at column `offset`.
void AddDerivativePoint(const ControlPointLayout& x, const Eigen::MatrixXd& weights,
                        int k, int j, int offset, double scale, Eigen::RowVectorXd& row) {
  for (int m = 0; m <= x.d; ++m) {
    const double w = weights(k, m);
    if (w == 0.0) continue;
    row[offset + (j >= 0 ? x.r(m, j) : x.h(m))] += scale * w;
  }
}

// r^(l)_k - h^(l)_k qdot = 0 for every coordinate.
void AddScaledDerivativeMatch(const ControlPointLayout& x, int l, int k,
                              const Eigen::VectorXd& qdot, RowBuilder& eq) {
  const Eigen::MatrixXd w = DerivativeWeights(x.d, l);
  for (int j = 0; j < x.n; ++j) {
    Eigen::RowVectorXd& row = eq.NewRow(0.0);
    AddDerivativePoint(x, w, k, j, 0, 1.0, row);
    AddDerivativePoint(x, w, k, -1, 0, -qdot[j], row);
  }
}

std::string VectorText(const Eigen::VectorXd& v) {
  std::ostringstream out;
  out << "(";
  for (int i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << ")";
  return out.str();
}

bool Near(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

bool Near(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol) {
  for (int i = 0; i < a.size(); ++i) {
    if (!Near(a[i], b[i], tol)) return false;
  }
  return true;
}

}  // namespace

void PlanningSpec::Validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("PlanningSpec: " + what);
  };
  for (double w : {a, b, c, eps}) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail("weights must be finite and nonnegative");
  }
  const int d = transcription_degree();
  if (degree < 1 || time_degree < 0) fail("degrees must be positive");
  if (eta < 0) fail("continuity order must be nonnegative");
  if (d < eta + 1) fail("degree must be at least eta + 1");
  if (d > kMaxBezierDegree) fail("degree exceeds the supported maximum");
  if (!(t_min > 0.0) || !(t_max >= t_min) || !std::isfinite(t_max)) {
    fail("need 0 < Tmin <= Tmax < inf");
  }
  const int n = dimension();
  if (n < 1 || qT.size() != n) fail("q0 and qT must share a positive dimension");
  if (!q0.allFinite() || !qT.allFinite()) fail("boundary states must be finite");
  if (qdot0 && qdot0->size() != n) fail("qdot0 has the wrong dimension");
  if (qdotT && qdotT->size() != n) fail("qdotT has the wrong dimension");
  if (velocity_set && velocity_set->dimension() != n) {
    fail("velocity set has the wrong dimension");
  }
  if (!(hdot_min > 0.0)) fail("hdot_min must be positive");
  for (int l : zero_derivative_orders) {
    if (l < 2 || l > d) fail("zero-derivative orders must lie in [2, degree]");
    if (!qdot0 || !qdotT) fail("zero-derivative orders need fixed boundary velocities");
  }
  if (eps > 0.0 && (reg_order < 2 || reg_order > d)) {
    fail("regularizer order must lie in [2, degree]");
  }
}

void PlanningProblem::Validate() const {
  spec.Validate();
  if (regions.empty()) throw std::invalid_argument("PlanningProblem: no regions");
  for (const ConvexSet& r : regions) {
    if (r.dimension() != spec.dimension()) {
      throw std::invalid_argument("PlanningProblem: region dimension mismatch");
    }
  }
  if (adjacency) {
    for (auto [i, j] : *adjacency) {
      const int count = static_cast<int>(regions.size());
      if (i < 0 || j < 0 || i >= count || j >= count || i == j) {
        throw std::invalid_argument("PlanningProblem: bad adjacency pair");
      }
    }
  }
}

ConvexSet VertexSet(const ConvexSet& region, const PlanningSpec& spec) {
  const ControlPointLayout x = LayoutOf(spec);
  RowBuilder rows(x.size());
  const Eigen::MatrixXd& qa = region.A();
  const Eigen::VectorXd& qb = region.b();
  for (int k = 0; k <= x.d; ++k) {
    for (int i = 0; i < qa.rows(); ++i) {
      Eigen::RowVectorXd& row = rows.NewRow(qb[i]);
      for (int j = 0; j < x.n; ++j) row[x.r(k, j)] = qa(i, j);
    }
  }
  for (int k = 0; k < x.d; ++k) {
    // hdot_k = d (h_{k+1} - h_k) >= hdot_min.
    Eigen::RowVectorXd& row = rows.NewRow(-spec.hdot_min);
    row[x.h(k + 1)] = -x.d;
    row[x.h(k)] = x.d;
  }
  if (spec.velocity_set) {
    const Eigen::MatrixXd& da = spec.velocity_set->A();
    const Eigen::VectorXd& db = spec.velocity_set->b();
    for (int k = 0; k < x.d; ++k) {
      for (int i = 0; i < da.rows(); ++i) {
        // A_D rdot_k <= hdot_k b_D; the common factor d is dropped.
        Eigen::RowVectorXd& row = rows.NewRow(0.0);
        for (int j = 0; j < x.n; ++j) {
          row[x.r(k + 1, j)] += da(i, j);
          row[x.r(k, j)] -= da(i, j);
        }
        row[x.h(k + 1)] -= db[i];
        row[x.h(k)] += db[i];
      }
    }
  }
  rows.NewRow(0.0)[x.h(0)] = -1.0;
  rows.NewRow(spec.t_max)[x.h(x.d)] = 1.0;
  return ConvexSet::HPolytope(rows.Matrix(), rows.Rhs());
}

EdgeConstraint TranscribeEdgeConstraint(EdgeKind kind, const PlanningSpec& spec) {
  const ControlPointLayout x = LayoutOf(spec);
  const int n = x.n;
  const int d = x.d;
  EdgeConstraint out;
  switch (kind) {
    case EdgeKind::kSource: {
      RowBuilder eq(x.size());
      for (int j = 0; j < n; ++j) eq.NewRow(spec.q0[j])[x.r(0, j)] = 1.0;
      if (spec.qdot0) AddScaledDerivativeMatch(x, 1, 0, *spec.qdot0, eq);
      eq.NewRow(0.0)[x.h(0)] = 1.0;
      for (int l : spec.zero_derivative_orders) {
        AddScaledDerivativeMatch(x, l, 0, *spec.qdot0, eq);
      }
      out.AddEquality(eq.Matrix(), eq.Rhs());
      break;
    }
    case EdgeKind::kTarget: {
      RowBuilder eq(x.size());
      for (int j = 0; j < n; ++j) eq.NewRow(spec.qT[j])[x.r(d, j)] = 1.0;
      if (spec.qdotT) AddScaledDerivativeMatch(x, 1, d - 1, *spec.qdotT, eq);
      for (int l : spec.zero_derivative_orders) {
        AddScaledDerivativeMatch(x, l, d - l, *spec.qdotT, eq);
      }
      out.AddEquality(eq.Matrix(), eq.Rhs());
      RowBuilder in(x.size());
      in.NewRow(-spec.t_min)[x.h(d)] = -1.0;
      in.NewRow(spec.t_max)[x.h(d)] = 1.0;
      out.AddInequality(in.Matrix(), in.Rhs());
      break;
    }
    case EdgeKind::kInner: {
      RowBuilder eq(2 * x.size());
      for (int l = 0; l <= spec.eta; ++l) {
        const Eigen::MatrixXd w = DerivativeWeights(d, l);
        for (int j = -1; j < n; ++j) {
          Eigen::RowVectorXd& row = eq.NewRow(0.0);
          AddDerivativePoint(x, w, d - l, j, 0, 1.0, row);
          AddDerivativePoint(x, w, 0, j, x.size(), -1.0, row);
        }
      }
      out.AddEquality(eq.Matrix(), eq.Rhs());
      break;
    }
  }
  return out;
}

namespace {

EdgeLength RegularizerOver(const ControlPointLayout& x, int cols, const PlanningSpec& spec) {
  std::vector<QuadOverLinTerm> terms;
  for (int l = 2; l <= spec.reg_order; ++l) {
    const Eigen::MatrixXd w = DerivativeWeights(x.d, l);
    const double scale = std::sqrt(1.0 / (x.d - l + 1));
    for (int k = 0; k <= x.d - l; ++k) {
      QuadOverLinTerm term;
      term.numerator.M = Eigen::MatrixXd::Zero(x.n + 1, cols);
      term.numerator.c = Eigen::VectorXd::Zero(x.n + 1);
      for (int j = -1; j < x.n; ++j) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(cols);
        AddDerivativePoint(x, w, k, j, 0, scale, row);
        term.numerator.M.row(j < 0 ? x.n : j) = row;
      }
      term.a = Eigen::VectorXd::Zero(cols);
      term.a0 = 1.0;
      terms.push_back(std::move(term));
    }
  }
  return EdgeLength::QuadOverLinSum(std::move(terms));
}

}  // namespace

EdgeLength RegularizerLength(const PlanningSpec& spec) {
  if (spec.eps == 0.0) return EdgeLength::Zero();
  const ControlPointLayout x = LayoutOf(spec);
  return EdgeLength::WeightedSum({{spec.eps, RegularizerOver(x, x.size(), spec)}});
}

EdgeLength TranscribeEdgeLength(EdgeKind kind, const PlanningSpec& spec) {
  if (kind == EdgeKind::kSource) return EdgeLength::Zero();
  const ControlPointLayout x = LayoutOf(spec);
  const int cols = kind == EdgeKind::kInner ? 2 * x.size() : x.size();
  std::vector<std::pair<double, EdgeLength>> parts;

  if (spec.a > 0.0) {
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(cols);
    coeffs[x.h(x.d)] = 1.0;
    coeffs[x.h(0)] = -1.0;
    parts.emplace_back(spec.a, EdgeLength::Affine(coeffs, 0.0));
  }
  std::vector<AffineBlock> steps;
  for (int k = 0; k < x.d; ++k) {
    AffineBlock step{Eigen::MatrixXd::Zero(x.n, cols), Eigen::VectorXd::Zero(x.n)};
    for (int j = 0; j < x.n; ++j) {
      step.M(j, x.r(k + 1, j)) = 1.0;
      step.M(j, x.r(k, j)) = -1.0;
    }
    steps.push_back(std::move(step));
  }
  if (spec.b > 0.0) parts.emplace_back(spec.b, EdgeLength::L2Sum(steps));
  if (spec.c > 0.0) {
    std::vector<QuadOverLinTerm> energy;
    for (int k = 0; k < x.d; ++k) {
      QuadOverLinTerm term;
      term.numerator = steps[k];
      term.a = Eigen::VectorXd::Zero(cols);
      term.a[x.h(k + 1)] = 1.0;
      term.a[x.h(k)] = -1.0;
      energy.push_back(std::move(term));
    }
    parts.emplace_back(spec.c, EdgeLength::QuadOverLinSum(std::move(energy)));
  }
  if (spec.eps > 0.0) parts.emplace_back(spec.eps, RegularizerOver(x, cols, spec));
  if (parts.empty()) return EdgeLength::Zero();
  return EdgeLength::WeightedSum(std::move(parts));
}

GcsProblem BuildGraph(const PlanningProblem& problem) {
  problem.Validate();
  const PlanningSpec& spec = problem.spec;
  const int count = static_cast<int>(problem.regions.size());

  std::vector<std::optional<ConvexSet>> sets(count);
  ParallelFor(count, [&](int i) { sets[i] = VertexSet(problem.regions[i], spec); });

  GcsProblem graph;
  for (int i = 0; i < count; ++i) graph.AddVertex(std::to_string(i), std::move(sets[i]));
  const int source = graph.AddVertex("source", std::nullopt);
  const int target = graph.AddVertex("target", std::nullopt);
  graph.SetSource(source);
  graph.SetTarget(target);

  const EdgeConstraint inner_constraint = TranscribeEdgeConstraint(EdgeKind::kInner, spec);
  const EdgeLength inner_length = TranscribeEdgeLength(EdgeKind::kInner, spec);
  std::set<std::pair<int, int>> pairs;
  if (problem.adjacency) {
    for (auto [i, j] : *problem.adjacency) pairs.insert({std::min(i, j), std::max(i, j)});
  } else {
    for (int i = 0; i < count; ++i) {
      for (int j = i + 1; j < count; ++j) {
        if (Intersects(problem.regions[i], problem.regions[j])) pairs.insert({i, j});
      }
    }
  }
  for (auto [i, j] : pairs) {
    graph.AddEdge(i, j, inner_length, inner_constraint);
    graph.AddEdge(j, i, inner_length, inner_constraint);
  }

  const EdgeConstraint source_constraint = TranscribeEdgeConstraint(EdgeKind::kSource, spec);
  const EdgeConstraint target_constraint = TranscribeEdgeConstraint(EdgeKind::kTarget, spec);
  const EdgeLength target_length = TranscribeEdgeLength(EdgeKind::kTarget, spec);
  for (int i = 0; i < count; ++i) {
    if (problem.regions[i].Contains(spec.q0)) {
      graph.AddEdge(source, i, EdgeLength::Zero(), source_constraint);
    }
  }
  for (int i = 0; i < count; ++i) {
    if (problem.regions[i].Contains(spec.qT)) {
      graph.AddEdge(i, target, target_length, target_constraint);
    }
  }
  return graph;
}

Trajectory::Trajectory(std::vector<TrajectorySegment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw std::invalid_argument("Trajectory: no segments");
  for (const TrajectorySegment& seg : segments_) {
    if (seg.h.dimension() != 1 || seg.r.dimension() != segments_[0].r.dimension() ||
        seg.r.degree() < 1 || seg.h.degree() < 1) {
      throw std::invalid_argument("Trajectory: malformed segment");
    }
    const auto hdot = Derivative(seg.h).control_points();
    if ((hdot.array() <= 0.0).any()) {
      throw std::invalid_argument("Trajectory: time scaling is not increasing");
    }
  }
}

double Trajectory::start_time() const { return segments_.front().h.control_points()(0, 0); }

double Trajectory::end_time() const {
  const auto& h = segments_.back().h.control_points();
  return h(0, h.cols() - 1);
}

double Trajectory::PathParameter(double t) const {
  int seg = 0;
  while (seg + 1 < num_segments() &&
         t > segments_[seg].h.control_points()(0, segments_[seg].h.degree())) {
    ++seg;
  }
  const BezierCurve<double>& h = segments_[seg].h;
  double lo = 0.0, hi = 1.0;
  if (t <= Evaluate(h, 0.0)[0]) return seg;
  if (t >= Evaluate(h, 1.0)[0]) return seg + 1.0;
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    const double value = Evaluate(h, mid)[0];
    if (std::abs(value - t) <= 1e-10 * (1.0 + std::abs(t))) return seg + mid;
    (value < t ? lo : hi) = mid;
  }
  return seg + 0.5 * (lo + hi);
}

namespace {

// Segment index and local parameter for a global path parameter.
std::pair<int, double> Locate(double s, int count) {
  const int seg = std::clamp(static_cast<int>(std::floor(s)), 0, count - 1);
  return {seg, std::clamp(s - seg, 0.0, 1.0)};
}

}  // namespace

Eigen::VectorXd Trajectory::ShapeAt(double s) const {
  const auto [seg, u] = Locate(s, num_segments());
  return Evaluate(segments_[seg].r, u);
}

double Trajectory::TimeAt(double s) const {
  const auto [seg, u] = Locate(s, num_segments());
  return Evaluate(segments_[seg].h, u)[0];
}

Eigen::VectorXd Trajectory::Position(double t) const { return ShapeAt(PathParameter(t)); }

Eigen::VectorXd Trajectory::Velocity(double t) const {
  const double s = PathParameter(t);
  auto [seg, u] = Locate(s, num_segments());
  // At a junction the parameter lands on the end of the earlier segment.
  if (u == 1.0 && seg + 1 < num_segments() && s >= seg + 1.0) {
    ++seg;
    u = 0.0;
  }
  const Eigen::VectorXd rdot = Evaluate(Derivative(segments_[seg].r), u);
  const double hdot = Evaluate(Derivative(segments_[seg].h), u)[0];
  return rdot / hdot;
}

Trajectory Reconstruct(const PlanningProblem& problem, const std::vector<int>& path,
                       const std::vector<Eigen::VectorXd>& values) {
  if (path.size() != values.size() || path.size() < 3) {
    throw std::invalid_argument("Reconstruct: need a source-region-target path with values");
  }
  const ControlPointLayout x = LayoutOf(problem.spec);
  const int count = static_cast<int>(problem.regions.size());
  std::vector<TrajectorySegment> segments;
  for (size_t k = 1; k + 1 < path.size(); ++k) {
    if (path[k] < 0 || path[k] >= count) {
      throw std::invalid_argument("Reconstruct: interior vertex is not a region");
    }
    const Eigen::VectorXd& v = values[k];
    if (v.size() != x.size()) throw std::invalid_argument("Reconstruct: value size mismatch");
    Eigen::MatrixXd r(x.n, x.d + 1);
    Eigen::MatrixXd h(1, x.d + 1);
    for (int i = 0; i <= x.d; ++i) {
      r.col(i) = v.segment(x.r(i, 0), x.n);
      h(0, i) = v[x.h(i)];
    }
    segments.push_back({path[k], BezierCurve<double>(r), BezierCurve<double>(h)});
  }
  return Trajectory(std::move(segments));
}

std::vector<std::string> CheckTrajectory(const PlanningProblem& problem,
                                         const Trajectory& trajectory, double tol) {
  const PlanningSpec& spec = problem.spec;
  const int d = spec.transcription_degree();
  std::vector<std::string> issues;
  auto report = [&](int seg, const std::string& what) {
    issues.push_back("segment " + std::to_string(seg) + ": " + what);
  };
  const auto& segs = trajectory.segments();
  for (int s = 0; s < trajectory.num_segments(); ++s) {
    const TrajectorySegment& seg = segs[s];
    if (seg.region < 0 || seg.region >= static_cast<int>(problem.regions.size())) {
      report(s, "unknown region");
      continue;
    }
    if (seg.r.degree() != d || seg.h.degree() != d ||
        seg.r.dimension() != spec.dimension()) {
      report(s, "wrong degree or dimension");
      continue;
    }
    const ConvexSet& region = problem.regions[seg.region];
    for (int k = 0; k <= d; ++k) {
      if (!region.Contains(seg.r.control_point(k))) {
        report(s, "control point " + std::to_string(k) + " " +
                      VectorText(seg.r.control_point(k)) + " outside region " +
                      std::to_string(seg.region));
      }
    }
    const auto rdot = Derivative(seg.r);
    const auto hdot = Derivative(seg.h);
    for (int k = 0; k < d; ++k) {
      const double hk = hdot.control_points()(0, k);
      if (hk < spec.hdot_min - 1e-9) report(s, "hdot control point below hdot_min");
      if (spec.velocity_set) {
        const Eigen::VectorXd slack = spec.velocity_set->A() * rdot.control_point(k) -
                                      hk * spec.velocity_set->b();
        if (slack.maxCoeff() > tol * (1.0 + std::abs(hk))) {
          report(s, "velocity control point outside the scaled velocity set");
        }
      }
    }
    if (s + 1 < trajectory.num_segments()) {
      const TrajectorySegment& next = segs[s + 1];
      if (next.r.degree() != d || next.h.degree() != d) continue;
      for (int l = 0; l <= spec.eta; ++l) {
        const auto r0 = Derivative(seg.r, l);
        const auto r1 = Derivative(next.r, l);
        const auto h0 = Derivative(seg.h, l);
        const auto h1 = Derivative(next.h, l);
        if (!Near(r0.control_point(d - l), r1.control_point(0), tol) ||
            !Near(h0.control_point(d - l)[0], h1.control_point(0)[0], tol)) {
          report(s, "discontinuous derivative of order " + std::to_string(l));
        }
      }
    }
  }

  const TrajectorySegment& first = segs.front();
  const TrajectorySegment& last = segs.back();
  if (first.r.degree() == d && last.r.degree() == d) {
    if (!Near(first.r.control_point(0), spec.q0, tol)) issues.push_back("r(0) != q0");
    if (!Near(last.r.control_point(d), spec.qT, tol)) issues.push_back("r(S) != qT");
    if (std::abs(trajectory.start_time()) > tol) issues.push_back("h(0) != 0");
    const double T = trajectory.end_time();
    if (T < spec.t_min - tol || T > spec.t_max + tol) {
      issues.push_back("duration outside [Tmin, Tmax]");
    }
    auto check_end = [&](const TrajectorySegment& seg, bool start,
                         const Eigen::VectorXd& qdot, int l) {
      const auto r = Derivative(seg.r, l);
      const auto h = Derivative(seg.h, l);
      const int k = start ? 0 : d - l;
      if (!Near(r.control_point(k), h.control_point(k)[0] * qdot, tol)) {
        issues.push_back(std::string(start ? "initial" : "final") +
                         " derivative of order " + std::to_string(l) + " violated");
      }
    };
    if (spec.qdot0) check_end(first, true, *spec.qdot0, 1);
    if (spec.qdotT) check_end(last, false, *spec.qdotT, 1);
    for (int l : spec.zero_derivative_orders) {
      check_end(first, true, *spec.qdot0, l);
      check_end(last, false, *spec.qdotT, l);
    }
  }
  return issues;
}

const char* ToString(PlanStatus status) {
  switch (status) {
    case PlanStatus::kSuccess:
      return "success";
    case PlanStatus::kGraphDisconnected:
      return "graph disconnected";
    case PlanStatus::kRelaxationInfeasible:
      return "relaxation infeasible";
    case PlanStatus::kRoundingInfeasible:
      return "all rounded paths infeasible";
    case PlanStatus::kSolverFailure:
      return "solver failure";
  }
  return "unknown";
}

PlanResult SolveGraph(const GcsProblem& input, const PlanOptions& options) {
  PlanResult result;
  result.graph = input;
  const GcsProblem& graph = result.graph;
  {
    std::vector<bool> seen(graph.num_vertices(), false);
    std::vector<int> stack{graph.source()};
    seen[graph.source()] = true;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int e : graph.outgoing(v)) {
        const int w = graph.edge(e).head;
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    if (!seen[graph.target()]) {
      result.status = PlanStatus::kGraphDisconnected;
      result.diagnostics = "graph disconnected: the target is unreachable from the source";
      return result;
    }
  }

  auto start = Clock::now();
  if (options.preprocess) {
    result.graph = EdgeRedundancyFilter(input, &result.preprocess, options.rounding.threads);
    result.timings.preprocess = SecondsSince(start);
  }

  start = Clock::now();
  Relaxation relaxation = BuildRelaxation(graph);
  if (options.two_cycle) {
    result.preprocess.two_cycle = AddTwoCycleConstraints(graph, &relaxation);
  }
  result.flows = SolveRelaxation(graph, relaxation, options.solver);
  result.timings.relaxation = SecondsSince(start);
  if (result.flows.status == SolveStatus::kInfeasible) {
    result.status = PlanStatus::kRelaxationInfeasible;
    result.diagnostics = "relaxation infeasible: no safe route satisfies the constraints";
    return result;
  }
  if (!result.flows.optimal()) {
    result.status = PlanStatus::kSolverFailure;
    result.diagnostics = "relaxation solve failed: " + result.flows.diagnostics;
    return result;
  }

  start = Clock::now();
  result.rounding = Round(graph, result.flows, options.rounding, options.solver);
  result.timings.rounding = SecondsSince(start);
  if (!result.rounding.found()) {
    result.status = PlanStatus::kRoundingInfeasible;
    result.diagnostics = "all rounded paths infeasible";
    return result;
  }
  result.path_length_sum = SumEdgeLengths(graph, result.path(), result.rounding.best_values);
  result.status = PlanStatus::kSuccess;
  return result;
}

PlanResult Plan(const PlanningProblem& problem, const PlanOptions& options) {
  auto start = Clock::now();
  const GcsProblem graph = BuildGraph(problem);
  const double graph_time = SecondsSince(start);

  auto disconnected = [&](const std::string& why) {
    PlanResult result;
    result.graph = graph;
    result.timings.graph = graph_time;
    result.status = PlanStatus::kGraphDisconnected;
    result.diagnostics = "graph disconnected: " + why;
    return result;
  };
  if (graph.outgoing(graph.source()).empty()) return disconnected("q0 lies in no region");
  if (graph.incoming(graph.target()).empty()) return disconnected("qT lies in no region");

  PlanResult result = SolveGraph(graph, options);
  result.timings.graph = graph_time;
  if (result.status == PlanStatus::kGraphDisconnected) {
    result.diagnostics = "graph disconnected: no chain of regions links q0 to qT";
  }
  if (!result.ok()) return result;

  start = Clock::now();
  result.trajectory = Reconstruct(problem, result.path(), result.rounding.best_values);
  result.timings.reconstruction = SecondsSince(start);
  return result;
}

nlohmann::json ToJson(const PlanningSpec& spec) {
  auto velocity = [](const std::optional<Eigen::VectorXd>& v) -> nlohmann::json {
    if (!v) return "free";
    return VectorToJson(*v);
  };
  nlohmann::json j = {
      {"a", spec.a},
      {"b", spec.b},
      {"c", spec.c},
      {"eta", spec.eta},
      {"degree", spec.degree},
      {"time_degree", spec.time_degree},
      {"D", spec.velocity_set ? ToJson(*spec.velocity_set) : nlohmann::json(nullptr)},
      {"Tmin", spec.t_min},
      {"Tmax", spec.t_max},
      {"q0", VectorToJson(spec.q0)},
      {"qT", VectorToJson(spec.qT)},
      {"qdot0", velocity(spec.qdot0)},
      {"qdotT", velocity(spec.qdotT)},
      {"zero_derivatives", spec.zero_derivative_orders},
      {"hdot_min", spec.hdot_min},
      {"eps", spec.eps},
      {"reg_order", spec.reg_order},
  };
  return j;
}

PlanningSpec PlanningSpecFromJson(const nlohmann::json& j) {
  PlanningSpec spec;
  spec.a = j.value("a", spec.a);
  spec.b = j.value("b", spec.b);
  spec.c = j.value("c", spec.c);
  spec.eta = j.value("eta", spec.eta);
  spec.degree = j.value("degree", spec.degree);
  spec.time_degree = j.value("time_degree", spec.time_degree);
  if (j.contains("D") && !j.at("D").is_null()) spec.velocity_set = ConvexSetFromJson(j.at("D"));
  spec.t_min = j.value("Tmin", spec.t_min);
  spec.t_max = j.value("Tmax", spec.t_max);
  spec.q0 = VectorFromJson(j.at("q0"));
  spec.qT = VectorFromJson(j.at("qT"));
  auto velocity = [&](const char* key) -> std::optional<Eigen::VectorXd> {
    if (!j.contains(key)) return std::nullopt;
    const nlohmann::json& v = j.at(key);
    if (v.is_string()) {
      if (v.get<std::string>() != "free") {
        throw std::invalid_argument(std::string(key) + " must be an array or \"free\"");
      }
      return std::nullopt;
    }
    return VectorFromJson(v);
  };
  spec.qdot0 = velocity("qdot0");
  spec.qdotT = velocity("qdotT");
  if (j.contains("zero_derivatives")) {
    spec.zero_derivative_orders = j.at("zero_derivatives").get<std::vector<int>>();
  }
  spec.hdot_min = j.value("hdot_min", spec.hdot_min);
  spec.eps = j.value("eps", spec.eps);
  spec.reg_order = j.value("reg_order", spec.reg_order);
  return spec;
}

nlohmann::json ToJson(const PlanningProblem& problem) {
  nlohmann::json regions = nlohmann::json::array();
  for (const ConvexSet& r : problem.regions) regions.push_back(ToJson(r));
  nlohmann::json j = {{"regions", regions}, {"spec", ToJson(problem.spec)}};
  if (problem.adjacency) {
    nlohmann::json pairs = nlohmann::json::array();
    for (auto [a, b] : *problem.adjacency) pairs.push_back({a, b});
    j["adjacency"] = pairs;
  }
  return j;
}

PlanningProblem PlanningProblemFromJson(const nlohmann::json& j) {
  PlanningProblem problem;
  for (const auto& r : j.at("regions")) problem.regions.push_back(ConvexSetFromJson(r));
  problem.spec = PlanningSpecFromJson(j.at("spec"));
  if (j.contains("adjacency")) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : j.at("adjacency")) {
      pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    }
    problem.adjacency = std::move(pairs);
  }
  problem.Validate();
  return problem;
}

nlohmann::json ToJson(const Trajectory& trajectory) {
  nlohmann::json segments = nlohmann::json::array();
  for (const TrajectorySegment& seg : trajectory.segments()) {
    nlohmann::json points = nlohmann::json::array();
    for (int k = 0; k <= seg.r.degree(); ++k) points.push_back(VectorToJson(seg.r.control_point(k)));
    segments.push_back({{"region", seg.region},
                        {"r", points},
                        {"h", VectorToJson(seg.h.control_points().row(0).transpose())}});
  }
  return {{"segments", segments},
          {"start_time", trajectory.start_time()},
          {"duration", trajectory.duration()}};
}

Trajectory TrajectoryFromJson(const nlohmann::json& j) {
  std::vector<TrajectorySegment> segments;
  for (const auto& s : j.at("segments")) {
    const Eigen::MatrixXd points = MatrixFromJson(s.at("r"));
    const Eigen::VectorXd h = VectorFromJson(s.at("h"));
    segments.push_back({s.at("region").get<int>(), BezierCurve<double>(points.transpose()),
                        BezierCurve<double>(Eigen::MatrixXd(h.transpose()))});
  }
  return Trajectory(std::move(segments));
}

}  // namespace gcs
