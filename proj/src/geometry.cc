#include "gcs/geometry.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gcs {
namespace {

void CheckFinite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string("ConvexSet: non-finite ") + what);
  }
}

Eigen::MatrixXd BoxRows(int n) {
  Eigen::MatrixXd A(2 * n, n);
  A << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
  return A;
}

}  // namespace

ConvexSet ConvexSet::HPolytope(Eigen::MatrixXd A, Eigen::VectorXd b) {
  const int n = static_cast<int>(A.cols());
  if (n < 1 || A.rows() < 1) {
    throw std::invalid_argument("ConvexSet: polytope needs rows and columns");
  }
  if (A.rows() != b.size()) {
    throw std::invalid_argument("ConvexSet: A and b row counts differ");
  }
  CheckFinite(A, "A");
  CheckFinite(b, "b");

  ConvexSet set;
  set.kind_ = Kind::kHPolytope;
  set.lower_.resize(n);
  set.upper_.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int sign : {1, -1}) {
      ConicProgram prog;
      const int x = prog.NewVariables(n);
      for (int r = 0; r < A.rows(); ++r) {
        AffineExpr row(-b[r]);
        for (int j = 0; j < n; ++j) {
          if (A(r, j) != 0.0) row += AffineExpr::Var(x + j, A(r, j));
        }
        prog.AddInequality(row);
      }
      prog.AddCost(AffineExpr::Var(x + i, sign));
      const SolveResult r = Solve(prog);
      if (r.status == SolveStatus::kInfeasible) {
        throw std::invalid_argument("ConvexSet: polytope is empty");
      }
      if (r.status == SolveStatus::kUnbounded) {
        throw std::invalid_argument("ConvexSet: polytope is unbounded");
      }
      if (!r.optimal()) {
        throw SolverError("ConvexSet: support LP failed: " + r.diagnostics);
      }
      if (sign > 0) {
        set.lower_[i] = r.objective;
      } else {
        set.upper_[i] = -r.objective;
      }
    }
  }
  set.A_ = std::move(A);
  set.b_ = std::move(b);
  return set;
}

ConvexSet ConvexSet::Box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() < 1 || lo.size() != hi.size()) {
    throw std::invalid_argument("ConvexSet: box bounds must share a positive size");
  }
  CheckFinite(lo, "lower bound");
  CheckFinite(hi, "upper bound");
  if ((lo.array() > hi.array()).any()) {
    throw std::invalid_argument("ConvexSet: box lower bound exceeds upper");
  }
  ConvexSet set;
  set.kind_ = Kind::kBox;
  set.A_ = BoxRows(static_cast<int>(lo.size()));
  set.b_.resize(2 * lo.size());
  set.b_ << hi, -lo;
  set.lower_ = std::move(lo);
  set.upper_ = std::move(hi);
  return set;
}

ConvexSet ConvexSet::Point(Eigen::VectorXd x) {
  if (x.size() < 1) throw std::invalid_argument("ConvexSet: empty point");
  ConvexSet set = Box(x, x);
  set.kind_ = Kind::kPoint;
  return set;
}

std::optional<Eigen::VectorXd> ConvexSet::point() const {
  if (kind_ != Kind::kPoint) return std::nullopt;
  return lower_;
}

bool ConvexSet::Contains(const Eigen::VectorXd& x, double tol) const {
  if (x.size() != dimension()) {
    throw std::invalid_argument("Contains: dimension mismatch");
  }
  return ((A_ * x - b_).array() <= tol).all();
}

bool Intersects(const ConvexSet& a, const ConvexSet& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("Intersects: dimension mismatch");
  }
  const double gap_tol = 1e-9;
  if ((a.lower().array() > b.upper().array() + gap_tol).any() ||
      (b.lower().array() > a.upper().array() + gap_tol).any()) {
    return false;
  }
  if (a.kind() != ConvexSet::Kind::kHPolytope &&
      b.kind() != ConvexSet::Kind::kHPolytope) {
    return true;  // Overlapping boxes.
  }
  const int n = a.dimension();
  ConicProgram prog;
  const int x = prog.NewVariables(n);
  std::vector<AffineExpr> xs;
  for (int j = 0; j < n; ++j) xs.push_back(AffineExpr::Var(x + j));
  AddScaledMembership(&prog, a, xs, AffineExpr(1.0));
  AddScaledMembership(&prog, b, xs, AffineExpr(1.0));
  SolverOptions options;
  options.lp_method = LpMethod::kSimplex;
  const SolveResult r = Solve(prog, options);
  if (r.optimal()) return true;
  if (r.status == SolveStatus::kInfeasible) return false;
  throw SolverError("Intersects: " + r.diagnostics);
}

HomogenizedBlock ScaleSet(const ConvexSet& set) {
  if (!set.lower().allFinite() || !set.upper().allFinite()) {
    throw std::invalid_argument("ScaleSet: set has no finite bounding box");
  }
  if (set.kind() != ConvexSet::Kind::kHPolytope) {
    return {set.A(), set.b()};
  }
  const int n = set.dimension();
  const int m = static_cast<int>(set.A().rows());
  HomogenizedBlock block;
  block.A.resize(m + 2 * n, n);
  block.A << set.A(), BoxRows(n);
  block.b.resize(m + 2 * n);
  block.b << set.b(), set.upper(), -set.lower();
  return block;
}

void AddScaledMembership(ConicProgram* prog, const ConvexSet& set,
                         const std::vector<AffineExpr>& x, const AffineExpr& phi) {
  if (static_cast<int>(x.size()) != set.dimension()) {
    throw std::invalid_argument("AddScaledMembership: dimension mismatch");
  }
  const HomogenizedBlock block = ScaleSet(set);
  for (int r = 0; r < block.A.rows(); ++r) {
    AffineExpr row = -block.b[r] * phi;
    for (int j = 0; j < block.A.cols(); ++j) {
      if (block.A(r, j) != 0.0) row += block.A(r, j) * x[j];
    }
    prog->AddInequality(std::move(row));
  }
}

Eigen::VectorXd VectorFromJson(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<int>(values.size()));
}

nlohmann::json VectorToJson(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

nlohmann::json MatrixToJson(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) rows.push_back(VectorToJson(m.row(r).transpose()));
  return rows;
}

Eigen::MatrixXd MatrixFromJson(const nlohmann::json& j, int cols) {
  if (!j.is_array()) throw std::invalid_argument("matrix must be an array of rows");
  if (!j.empty()) cols = static_cast<int>(j[0].size());
  Eigen::MatrixXd m(static_cast<int>(j.size()), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    const Eigen::VectorXd row = VectorFromJson(j[r]);
    if (row.size() != cols) throw std::invalid_argument("ragged matrix rows");
    m.row(static_cast<int>(r)) = row.transpose();
  }
  return m;
}

nlohmann::json ToJson(const ConvexSet& set) {
  nlohmann::json j;
  switch (set.kind()) {
    case ConvexSet::Kind::kHPolytope: {
      j["type"] = "hpolytope";
      j["A"] = MatrixToJson(set.A());
      j["b"] = VectorToJson(set.b());
      break;
    }
    case ConvexSet::Kind::kBox:
      j["type"] = "box";
      j["lo"] = VectorToJson(set.lower());
      j["hi"] = VectorToJson(set.upper());
      break;
    case ConvexSet::Kind::kPoint:
      j["type"] = "point";
      j["x"] = VectorToJson(set.lower());
      break;
  }
  return j;
}

ConvexSet ConvexSetFromJson(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "box") {
    return ConvexSet::Box(VectorFromJson(j.at("lo")), VectorFromJson(j.at("hi")));
  }
  if (type == "point") return ConvexSet::Point(VectorFromJson(j.at("x")));
  if (type == "hpolytope") {
    return ConvexSet::HPolytope(MatrixFromJson(j.at("A")),
                                VectorFromJson(j.at("b")));
  }
  throw std::invalid_argument("unknown set type: " + type);
}

}  // namespace gcs
