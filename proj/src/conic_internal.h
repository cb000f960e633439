#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "gcs/conic.h"

namespace gcs::internal {

/// min c'x + c0  s.t.  A x = b,  G x + s = h,  s in R+^l x Q^{q_1} x ...
struct StandardForm {
  int n = 0;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  Eigen::SparseMatrix<double> G;
  Eigen::VectorXd h;
  Eigen::VectorXd c;
  double c0 = 0.0;
  int num_orthant = 0;
  std::vector<int> soc_dims;
};

/// Assembles the standard form, lowering rotated cones on the way.
StandardForm ToStandardForm(const ConicProgram& prog);

SolveResult SolveInteriorPoint(const StandardForm& problem,
                               const SolverOptions& options);

/// Requires problem.soc_dims to be empty.
SolveResult SolveSimplex(const StandardForm& problem,
                         const SolverOptions& options);

}  // namespace gcs::internal
