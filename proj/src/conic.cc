#include "gcs/conic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "conic_internal.h"

namespace gcs {

double AffineExpr::Evaluate(const Eigen::VectorXd& x) const {
  double value = constant;
  for (const auto& [index, coeff] : terms) value += coeff * x[index];
  return value;
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& other) {
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  constant += other.constant;
  return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& other) {
  for (const auto& [index, coeff] : other.terms) terms.emplace_back(index, -coeff);
  constant -= other.constant;
  return *this;
}

AffineExpr& AffineExpr::operator*=(double scale) {
  for (auto& term : terms) term.second *= scale;
  constant *= scale;
  return *this;
}

AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
AffineExpr operator-(AffineExpr a) { return a *= -1.0; }
AffineExpr operator*(double scale, AffineExpr a) { return a *= scale; }
AffineExpr operator*(AffineExpr a, double scale) { return a *= scale; }

int ConicProgram::NewVariables(int count) {
  if (count < 0) throw std::invalid_argument("NewVariables: negative count");
  const int first = num_variables_;
  num_variables_ += count;
  return first;
}

void ConicProgram::CheckExpr(const AffineExpr& expr) const {
  for (const auto& [index, coeff] : expr.terms) {
    if (index < 0 || index >= num_variables_) {
      throw std::out_of_range("ConicProgram: variable index out of range");
    }
    if (!std::isfinite(coeff)) {
      throw std::invalid_argument("ConicProgram: non-finite coefficient");
    }
  }
  if (!std::isfinite(expr.constant)) {
    throw std::invalid_argument("ConicProgram: non-finite constant");
  }
}

void ConicProgram::AddEquality(AffineExpr expr) {
  CheckExpr(expr);
  equalities_.push_back(std::move(expr));
}

void ConicProgram::AddInequality(AffineExpr expr) {
  CheckExpr(expr);
  inequalities_.push_back(std::move(expr));
}

void ConicProgram::AddSecondOrderCone(std::vector<AffineExpr> u, AffineExpr t) {
  for (const auto& e : u) CheckExpr(e);
  CheckExpr(t);
  socs_.push_back({std::move(u), std::move(t)});
}

void ConicProgram::AddRotatedCone(std::vector<AffineExpr> u, AffineExpr v,
                                  AffineExpr w) {
  for (const auto& e : u) CheckExpr(e);
  CheckExpr(v);
  CheckExpr(w);
  rotated_.push_back({std::move(u), std::move(v), std::move(w)});
}

void ConicProgram::AddCost(const AffineExpr& expr) {
  CheckExpr(expr);
  objective_ += expr;
}

double ConicProgram::MaxViolation(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  for (const auto& e : equalities_) worst = std::max(worst, std::abs(e.Evaluate(x)));
  for (const auto& e : inequalities_) worst = std::max(worst, e.Evaluate(x));
  for (const auto& cone : socs_) {
    double sq = 0.0;
    for (const auto& e : cone.u) sq += std::pow(e.Evaluate(x), 2);
    worst = std::max(worst, std::sqrt(sq) - cone.t.Evaluate(x));
  }
  for (const auto& cone : rotated_) {
    const double v = cone.v.Evaluate(x);
    const double w = cone.w.Evaluate(x);
    double sq = 0.0;
    for (const auto& e : cone.u) sq += std::pow(e.Evaluate(x), 2);
    // Compare in the lowered (Lorentz) form so the violation has units of u.
    const double lhs = std::sqrt(2.0 * sq + (v - w) * (v - w));
    worst = std::max({worst, lhs - (v + w), -v, -w});
  }
  return worst;
}

namespace {

std::string FormatExpr(const AffineExpr& expr) {
  std::map<int, double> merged;
  for (const auto& [index, coeff] : expr.terms) merged[index] += coeff;
  std::ostringstream out;
  out.precision(17);
  bool first = true;
  for (const auto& [index, coeff] : merged) {
    if (coeff == 0.0) continue;
    if (!first) out << " ";
    out << coeff << "*x" << index;
    first = false;
  }
  if (!first) out << " ";
  out << "+ " << expr.constant;
  return out.str();
}

}  // namespace

std::string ConicProgram::ToCanonicalText() const {
  std::ostringstream out;
  out << "variables " << num_variables_ << "\n";
  out << "minimize " << FormatExpr(objective_) << "\n";
  for (const auto& e : equalities_) out << "eq " << FormatExpr(e) << " == 0\n";
  for (const auto& e : inequalities_) out << "ineq " << FormatExpr(e) << " <= 0\n";
  for (const auto& cone : socs_) {
    out << "soc t=" << FormatExpr(cone.t) << "\n";
    for (const auto& e : cone.u) out << "  u " << FormatExpr(e) << "\n";
  }
  for (const auto& cone : rotated_) {
    out << "rsoc v=" << FormatExpr(cone.v) << " w=" << FormatExpr(cone.w) << "\n";
    for (const auto& e : cone.u) out << "  u " << FormatExpr(e) << "\n";
  }
  return out.str();
}

ConicProgram LowerRotatedCones(const ConicProgram& prog) {
  ConicProgram lowered;
  lowered.NewVariables(prog.num_variables());
  for (const auto& e : prog.equalities()) lowered.AddEquality(e);
  for (const auto& e : prog.inequalities()) lowered.AddInequality(e);
  for (const auto& cone : prog.second_order_cones()) {
    lowered.AddSecondOrderCone(cone.u, cone.t);
  }
  for (const auto& cone : prog.rotated_cones()) {
    std::vector<AffineExpr> u;
    u.reserve(cone.u.size() + 1);
    for (const auto& e : cone.u) u.push_back(std::sqrt(2.0) * e);
    u.push_back(cone.v - cone.w);
    lowered.AddSecondOrderCone(std::move(u), cone.v + cone.w);
  }
  lowered.AddCost(prog.objective());
  return lowered;
}

int AddEpigraphL2(ConicProgram* prog, const std::vector<AffineExpr>& u) {
  const int t = prog->NewVariable();
  prog->AddSecondOrderCone(u, AffineExpr::Var(t));
  return t;
}

int AddQuadOverLin(ConicProgram* prog, const std::vector<AffineExpr>& u,
                   const AffineExpr& w) {
  const int t = prog->NewVariable();
  prog->AddRotatedCone(u, AffineExpr::Var(t, 0.5), w);
  return t;
}

const char* ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

namespace internal {

StandardForm ToStandardForm(const ConicProgram& input) {
  const ConicProgram prog =
      input.rotated_cones().empty() ? input : LowerRotatedCones(input);
  StandardForm sf;
  sf.n = prog.num_variables();

  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> a_trip;
  const int p = static_cast<int>(prog.equalities().size());
  sf.b.resize(p);
  for (int r = 0; r < p; ++r) {
    const auto& e = prog.equalities()[r];
    for (const auto& [index, coeff] : e.terms) a_trip.emplace_back(r, index, coeff);
    sf.b[r] = -e.constant;
  }
  sf.A.resize(p, sf.n);
  sf.A.setFromTriplets(a_trip.begin(), a_trip.end());

  int m = static_cast<int>(prog.inequalities().size());
  for (const auto& cone : prog.second_order_cones()) {
    m += static_cast<int>(cone.u.size()) + 1;
  }
  std::vector<Triplet> g_trip;
  sf.h.resize(m);
  int row = 0;
  for (const auto& e : prog.inequalities()) {
    for (const auto& [index, coeff] : e.terms) g_trip.emplace_back(row, index, coeff);
    sf.h[row++] = -e.constant;
  }
  sf.num_orthant = row;
  // s = h - G x holds (t, u) for each cone.
  auto add_cone_row = [&](const AffineExpr& e) {
    for (const auto& [index, coeff] : e.terms) g_trip.emplace_back(row, index, -coeff);
    sf.h[row++] = e.constant;
  };
  for (const auto& cone : prog.second_order_cones()) {
    add_cone_row(cone.t);
    for (const auto& e : cone.u) add_cone_row(e);
    sf.soc_dims.push_back(static_cast<int>(cone.u.size()) + 1);
  }
  sf.G.resize(m, sf.n);
  sf.G.setFromTriplets(g_trip.begin(), g_trip.end());

  sf.c = Eigen::VectorXd::Zero(sf.n);
  for (const auto& [index, coeff] : prog.objective().terms) sf.c[index] += coeff;
  sf.c0 = prog.objective().constant;
  return sf;
}

}  // namespace internal

SolveResult Solve(const ConicProgram& prog, const SolverOptions& options) {
  const internal::StandardForm sf = internal::ToStandardForm(prog);
  const bool linear = sf.soc_dims.empty();
  const long size =
      static_cast<long>(sf.A.rows() + sf.G.rows()) * std::max(sf.n, 1);
  bool use_simplex = false;
  switch (options.lp_method) {
    case LpMethod::kAuto:
      use_simplex = linear && size <= options.simplex_size_limit;
      break;
    case LpMethod::kSimplex:
      use_simplex = linear;
      break;
    case LpMethod::kInteriorPoint:
      use_simplex = false;
      break;
  }
  SolveResult result = use_simplex ? internal::SolveSimplex(sf, options)
                                   : internal::SolveInteriorPoint(sf, options);
  if (result.optimal()) {
    result.objective = sf.c.dot(result.primal) + sf.c0;
  } else {
    result.primal.resize(0);
  }
  return result;
}

}  // namespace gcs
