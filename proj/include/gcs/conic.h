#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace gcs {

/// Scalar affine expression sum_i coeff_i * x[var_i] + constant over the
/// variables of a ConicProgram.
struct AffineExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  AffineExpr() = default;
  explicit AffineExpr(double c) : constant(c) {}

  static AffineExpr Var(int index, double coeff = 1.0) {
    AffineExpr e;
    e.terms.emplace_back(index, coeff);
    return e;
  }

  /// Value at the point x.
  double Evaluate(const Eigen::VectorXd& x) const;

  AffineExpr& operator+=(const AffineExpr& other);
  AffineExpr& operator-=(const AffineExpr& other);
  AffineExpr& operator*=(double scale);
};

AffineExpr operator+(AffineExpr a, const AffineExpr& b);
AffineExpr operator-(AffineExpr a, const AffineExpr& b);
AffineExpr operator-(AffineExpr a);
AffineExpr operator*(double scale, AffineExpr a);
AffineExpr operator*(AffineExpr a, double scale);

/// ||u||_2 <= t.
struct SecondOrderCone {
  std::vector<AffineExpr> u;
  AffineExpr t;
};

/// ||u||_2^2 <= 2 * v * w with v, w >= 0.
struct RotatedCone {
  std::vector<AffineExpr> u;
  AffineExpr v;
  AffineExpr w;
};

/// A linear objective over linear equalities, linear inequalities, and
/// (rotated) second-order cones. Built by a single owner; solving only reads.
class ConicProgram {
 public:
  /// Appends `count` unconstrained variables and returns the first index.
  int NewVariables(int count);
  int NewVariable() { return NewVariables(1); }
  int num_variables() const { return num_variables_; }

  /// expr == 0.
  void AddEquality(AffineExpr expr);
  /// expr <= 0.
  void AddInequality(AffineExpr expr);
  void AddSecondOrderCone(std::vector<AffineExpr> u, AffineExpr t);
  void AddRotatedCone(std::vector<AffineExpr> u, AffineExpr v, AffineExpr w);
  /// Adds expr to the objective (minimized).
  void AddCost(const AffineExpr& expr);

  const std::vector<AffineExpr>& equalities() const { return equalities_; }
  const std::vector<AffineExpr>& inequalities() const { return inequalities_; }
  const std::vector<SecondOrderCone>& second_order_cones() const {
    return socs_;
  }
  const std::vector<RotatedCone>& rotated_cones() const { return rotated_; }
  const AffineExpr& objective() const { return objective_; }

  /// True when the program has no cone blocks.
  bool IsLinear() const { return socs_.empty() && rotated_.empty(); }

  /// Largest violation of any constraint at x (0 when feasible).
  double MaxViolation(const Eigen::VectorXd& x) const;

  /// Plain-text canonical dump, stable across runs, for diffing.
  std::string ToCanonicalText() const;

 private:
  void CheckExpr(const AffineExpr& expr) const;

  int num_variables_ = 0;
  std::vector<AffineExpr> equalities_;
  std::vector<AffineExpr> inequalities_;
  std::vector<SecondOrderCone> socs_;
  std::vector<RotatedCone> rotated_;
  AffineExpr objective_;
};

/// Rewrites every rotated cone as an ordinary second-order cone
/// ||(sqrt(2) u, v - w)|| <= v + w.
ConicProgram LowerRotatedCones(const ConicProgram& prog);

/// Adds t with ||u||_2 <= t and returns the index of t.
int AddEpigraphL2(ConicProgram* prog, const std::vector<AffineExpr>& u);

/// Adds t with ||u||_2^2 <= t * w (a rotated cone with v = t / 2) and returns
/// the index of t. Minimizing t yields ||u||^2 / w for w > 0.
int AddQuadOverLin(ConicProgram* prog, const std::vector<AffineExpr>& u,
                   const AffineExpr& w);

enum class SolveStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

const char* ToString(SolveStatus status);

enum class LpMethod {
  /// Dense simplex for small linear programs, interior point otherwise.
  kAuto,
  kSimplex,
  kInteriorPoint,
};

struct SolverOptions {
  double feasibility_tol = 1e-8;
  double relative_gap_tol = 1e-8;
  double absolute_gap_tol = 1e-8;
  int max_iterations = 150;
  LpMethod lp_method = LpMethod::kAuto;
  /// Linear programs with rows * columns above this go to the interior point
  /// method under kAuto.
  long simplex_size_limit = 40000;
  bool verbose = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kNumericalFailure;
  /// Present (non-empty) iff status == kOptimal.
  Eigen::VectorXd primal;
  double objective = 0.0;
  int iterations = 0;
  std::string diagnostics;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

SolveResult Solve(const ConicProgram& prog, const SolverOptions& options = {});

/// Raised where a caller needs a definite answer and the backend could not
/// produce one.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gcs
