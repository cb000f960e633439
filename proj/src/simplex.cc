// Dense two-phase tableau simplex for small linear programs.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "conic_internal.h"

namespace gcs::internal {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-10;
// Switch from Dantzig pricing to Bland's rule after this many pivots without
// objective progress.
constexpr int kStallLimit = 30;

enum class PhaseStatus { kOptimal, kUnbounded, kIterationLimit };

class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), t_(Eigen::MatrixXd::Zero(rows + 1, cols + 1)),
        basis_(rows, -1) {}

  double& at(int r, int c) { return t_(r, c); }
  double& rhs(int r) { return t_(r, cols_); }
  double& cost(int c) { return t_(rows_, c); }
  double objective_rhs() const { return t_(rows_, cols_); }
  std::vector<int>& basis() { return basis_; }

  void Pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double factor = t_(i, c);
      if (factor != 0.0) t_.row(i) -= factor * t_.row(r);
    }
    basis_[r] = c;
  }

  /// Minimizes the cost row over columns [0, allowed_cols).
  PhaseStatus Run(int allowed_cols, int max_pivots) {
    bool bland = false;
    int stall = 0;
    double last = objective_rhs();
    for (int it = 0; it < max_pivots; ++it) {
      int enter = -1;
      double best = -kCostTol;
      for (int c = 0; c < allowed_cols; ++c) {
        const double d = t_(rows_, c);
        if (bland) {
          if (d < -kCostTol) {
            enter = c;
            break;
          }
        } else if (d < best) {
          best = d;
          enter = c;
        }
      }
      if (enter < 0) return PhaseStatus::kOptimal;

      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows_; ++r) {
        const double a = t_(r, enter);
        if (a <= kPivotTol) continue;
        const double q = std::max(t_(r, cols_), 0.0) / a;
        if (q < ratio - 1e-12 ||
            (q <= ratio + 1e-12 && leave >= 0 && basis_[r] < basis_[leave])) {
          ratio = q;
          leave = r;
        }
      }
      if (leave < 0) return PhaseStatus::kUnbounded;
      Pivot(leave, enter);

      const double now = objective_rhs();
      if (std::abs(now - last) <= 1e-12 * (1.0 + std::abs(last))) {
        if (++stall > kStallLimit) bland = true;
      } else {
        stall = 0;
      }
      last = now;
    }
    return PhaseStatus::kIterationLimit;
  }

 private:
  int rows_;
  int cols_;
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace

SolveResult SolveSimplex(const StandardForm& problem,
                         const SolverOptions& options) {
  if (!problem.soc_dims.empty()) {
    throw std::invalid_argument("SolveSimplex: program has cone constraints");
  }
  SolveResult result;
  const int n = problem.n;
  const int p = static_cast<int>(problem.A.rows());
  const int m = static_cast<int>(problem.G.rows());
  const int rows = p + m;

  Eigen::MatrixXd dense(rows, n);
  Eigen::VectorXd rhs(rows);
  if (p > 0) dense.topRows(p) = Eigen::MatrixXd(problem.A);
  if (m > 0) dense.bottomRows(m) = Eigen::MatrixXd(problem.G);
  rhs << problem.b, problem.h;
  // Row scaling keeps the pivot tolerances meaningful.
  for (int r = 0; r < rows; ++r) {
    const double scale = std::max(dense.row(r).cwiseAbs().maxCoeff(), 0.0);
    if (scale > 0.0) {
      dense.row(r) /= scale;
      rhs[r] /= scale;
    }
  }

  // Columns: x+ (n), x- (n), slacks (m), artificials.
  std::vector<int> artificial_row;
  std::vector<bool> negate(rows, false);
  for (int r = 0; r < rows; ++r) {
    if (rhs[r] < 0.0) negate[r] = true;
    if (r < p || negate[r]) artificial_row.push_back(r);
  }
  const int num_art = static_cast<int>(artificial_row.size());
  const int struct_cols = 2 * n + m;
  const int cols = struct_cols + num_art;
  Tableau tab(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const double sign = negate[r] ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      tab.at(r, j) = sign * dense(r, j);
      tab.at(r, n + j) = -sign * dense(r, j);
    }
    if (r >= p) tab.at(r, 2 * n + (r - p)) = sign;
    tab.rhs(r) = sign * rhs[r];
  }
  for (int k = 0; k < num_art; ++k) {
    const int r = artificial_row[k];
    tab.at(r, struct_cols + k) = 1.0;
    tab.basis()[r] = struct_cols + k;
  }
  for (int r = p; r < rows; ++r) {
    if (tab.basis()[r] < 0) tab.basis()[r] = 2 * n + (r - p);
  }

  const int max_pivots = 50 * (rows + cols) + 1000;
  const double scale_b = 1.0 + rhs.lpNorm<Eigen::Infinity>();
  if (num_art > 0) {
    for (int k = 0; k < num_art; ++k) tab.cost(struct_cols + k) = 1.0;
    for (int k = 0; k < num_art; ++k) {
      const int r = artificial_row[k];
      for (int c = 0; c <= cols; ++c) tab.at(rows, c) -= tab.at(r, c);
    }
    const PhaseStatus status = tab.Run(cols, max_pivots);
    if (status == PhaseStatus::kIterationLimit) {
      result.diagnostics = "simplex: phase 1 iteration limit";
      return result;
    }
    const double infeasibility = -tab.objective_rhs();
    if (infeasibility > options.feasibility_tol * scale_b) {
      result.status = SolveStatus::kInfeasible;
      result.diagnostics =
          "simplex: phase 1 residual " + std::to_string(infeasibility);
      return result;
    }
    for (int r = 0; r < rows; ++r) {
      if (tab.basis()[r] < struct_cols) continue;
      for (int c = 0; c < struct_cols; ++c) {
        if (std::abs(tab.at(r, c)) > kPivotTol) {
          tab.Pivot(r, c);
          break;
        }
      }
    }
  }

  for (int c = 0; c <= cols; ++c) tab.cost(c) = 0.0;
  for (int j = 0; j < n; ++j) {
    tab.cost(j) = problem.c[j];
    tab.cost(n + j) = -problem.c[j];
  }
  for (int r = 0; r < rows; ++r) {
    const int bc = tab.basis()[r];
    const double cb = tab.cost(bc);
    if (cb != 0.0) {
      for (int c = 0; c <= cols; ++c) tab.at(rows, c) -= cb * tab.at(r, c);
    }
  }
  const PhaseStatus status = tab.Run(struct_cols, max_pivots);
  if (status == PhaseStatus::kIterationLimit) {
    result.diagnostics = "simplex: phase 2 iteration limit";
    return result;
  }
  if (status == PhaseStatus::kUnbounded) {
    result.status = SolveStatus::kUnbounded;
    result.diagnostics = "simplex: unbounded ray";
    return result;
  }

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < rows; ++r) {
    const int bc = tab.basis()[r];
    const double value = std::max(tab.rhs(r), 0.0);
    if (bc < n) {
      x[bc] += value;
    } else if (bc < 2 * n) {
      x[bc - n] -= value;
    }
  }
  result.status = SolveStatus::kOptimal;
  result.primal = std::move(x);
  return result;
}

}  // namespace gcs::internal
