// Primal-dual interior point method on the homogeneous self-dual embedding
// with Nesterov-Todd scaling and Mehrotra predictor-corrector steps.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <Eigen/SparseCholesky>

#include "conic_internal.h"

namespace gcs::internal {
namespace {

using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

constexpr double kStaticReg = 1e-8;
// Regularization levels tried in turn when a factorization hits a zero pivot;
// iterative refinement against the exact system absorbs the perturbation.
constexpr double kRegLevels[] = {kStaticReg, 1e-6, 1e-4};
constexpr double kStepFraction = 0.99;
constexpr int kRefineSteps = 12;
// Relative KKT residual above which the factor is rebuilt with more
// regularization.
constexpr double kSolveAccuracy = 1e-8;
constexpr int kEquilibrationPasses = 12;

// Loosened tolerances accepted when progress stalls.
constexpr double kReducedFeasTol = 1e-6;
constexpr double kReducedGapTol = 1e-6;

struct Cones {
  int num_orthant = 0;
  std::vector<int> dims;
  std::vector<int> starts;
  int size = 0;

  Cones(int l, const std::vector<int>& q) : num_orthant(l), dims(q) {
    size = l;
    for (int d : q) {
      starts.push_back(size);
      size += d;
    }
  }
  int degree() const { return num_orthant + static_cast<int>(dims.size()); }
};

double SocResidual(const VectorXd& v, int start, int dim) {
  const double head = v[start];
  const double tail = v.segment(start + 1, dim - 1).norm();
  return (head - tail) * (head + tail);
}

VectorXd Identity(const Cones& k) {
  VectorXd e = VectorXd::Zero(k.size);
  e.head(k.num_orthant).setOnes();
  for (int start : k.starts) e[start] = 1.0;
  return e;
}

// Jordan product u o v.
VectorXd Product(const Cones& k, const VectorXd& u, const VectorXd& v) {
  VectorXd w(k.size);
  w.head(k.num_orthant) = u.head(k.num_orthant).cwiseProduct(v.head(k.num_orthant));
  for (size_t i = 0; i < k.dims.size(); ++i) {
    const int s = k.starts[i];
    const int d = k.dims[i];
    w[s] = u.segment(s, d).dot(v.segment(s, d));
    w.segment(s + 1, d - 1) =
        u[s] * v.segment(s + 1, d - 1) + v[s] * u.segment(s + 1, d - 1);
  }
  return w;
}

// Solves u o x = w for x.
VectorXd Divide(const Cones& k, const VectorXd& u, const VectorXd& w) {
  VectorXd x(k.size);
  x.head(k.num_orthant) = w.head(k.num_orthant).cwiseQuotient(u.head(k.num_orthant));
  for (size_t i = 0; i < k.dims.size(); ++i) {
    const int s = k.starts[i];
    const int d = k.dims[i];
    const double u0 = u[s];
    const double w0 = w[s];
    const auto u1 = u.segment(s + 1, d - 1);
    const auto w1 = w.segment(s + 1, d - 1);
    const double rho = u0 * u0 - u1.squaredNorm();
    const double nu = u1.dot(w1);
    x[s] = (u0 * w0 - nu) / rho;
    x.segment(s + 1, d - 1) = (nu / u0 - w0) / rho * u1 + w1 / u0;
  }
  return x;
}

// Largest alpha in [0, cap] with v + alpha * dv in the cone.
double MaxStep(const Cones& k, const VectorXd& v, const VectorXd& dv, double cap) {
  double alpha = cap;
  for (int i = 0; i < k.num_orthant; ++i) {
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  for (size_t i = 0; i < k.dims.size(); ++i) {
    const int s = k.starts[i];
    const int d = k.dims[i];
    const double x0 = v[s];
    const double d0 = dv[s];
    const auto x1 = v.segment(s + 1, d - 1);
    const auto d1 = dv.segment(s + 1, d - 1);
    // f(a) = (x0 + a d0)^2 - ||x1 + a d1||^2 = c + b a + qa a^2, f(0) > 0.
    const double c = SocResidual(v, s, d);
    const double b = 2.0 * (x0 * d0 - x1.dot(d1));
    const double qa = d0 * d0 - d1.squaredNorm();
    double root = std::numeric_limits<double>::infinity();
    if (std::abs(qa) < 1e-300) {
      if (b < 0.0) root = -c / b;
    } else {
      const double disc = b * b - 4.0 * qa * c;
      if (qa < 0.0) {
        // One positive root.
        const double sq = std::sqrt(std::max(disc, 0.0));
        root = (b >= 0.0) ? (-b - sq) / (2.0 * qa) : 2.0 * c / (-b + sq);
      } else if (disc >= 0.0 && b < 0.0) {
        const double sq = std::sqrt(disc);
        root = 2.0 * c / (-b + sq);
      }
    }
    // If the head leaves first the cone is also left; root already covers it
    // unless the direction points into the negative branch.
    if (d0 < 0.0 && std::isinf(root)) root = -x0 / d0;
    alpha = std::min(alpha, std::max(root, 0.0));
  }
  return alpha;
}

// Moves v into the interior of the cone.
VectorXd BringToCone(const Cones& k, VectorXd v) {
  double alpha = -1.0;
  for (int i = 0; i < k.num_orthant; ++i) alpha = std::max(alpha, -v[i]);
  for (size_t i = 0; i < k.dims.size(); ++i) {
    const int s = k.starts[i];
    const int d = k.dims[i];
    alpha = std::max(alpha, v.segment(s + 1, d - 1).norm() - v[s]);
  }
  if (alpha >= 0.0) v += (1.0 + alpha) * Identity(k);
  return v;
}

class Scaling {
 public:
  explicit Scaling(const Cones& k) : k_(k) {
    lp_w_ = VectorXd::Ones(k.num_orthant);
    soc_.resize(k.dims.size());
    for (size_t i = 0; i < k.dims.size(); ++i) {
      soc_[i].eta = 1.0;
      soc_[i].a = 1.0;
      soc_[i].q = VectorXd::Zero(k.dims[i] - 1);
    }
  }

  bool Update(const VectorXd& s, const VectorXd& z) {
    for (int i = 0; i < k_.num_orthant; ++i) {
      if (!(s[i] > 0.0) || !(z[i] > 0.0)) return false;
      lp_w_[i] = std::sqrt(s[i] / z[i]);
    }
    for (size_t i = 0; i < k_.dims.size(); ++i) {
      const int st = k_.starts[i];
      const int d = k_.dims[i];
      const double sres = SocResidual(s, st, d);
      const double zres = SocResidual(z, st, d);
      if (!(sres > 0.0) || !(zres > 0.0) || s[st] <= 0.0 || z[st] <= 0.0) {
        return false;
      }
      const double snorm = std::sqrt(sres);
      const double znorm = std::sqrt(zres);
      const VectorXd sbar = s.segment(st, d) / snorm;
      const VectorXd zbar = z.segment(st, d) / znorm;
      const double gamma = std::sqrt((1.0 + sbar.dot(zbar)) / 2.0);
      Soc& c = soc_[i];
      c.eta = std::sqrt(snorm / znorm);
      c.a = (sbar[0] + zbar[0]) / (2.0 * gamma);
      c.q = (sbar.tail(d - 1) - zbar.tail(d - 1)) / (2.0 * gamma);
    }
    return true;
  }

  VectorXd Apply(const VectorXd& v) const {
    VectorXd out(k_.size);
    out.head(k_.num_orthant) = lp_w_.cwiseProduct(v.head(k_.num_orthant));
    for (size_t i = 0; i < k_.dims.size(); ++i) {
      const int st = k_.starts[i];
      const int d = k_.dims[i];
      const Soc& c = soc_[i];
      const double v0 = v[st];
      const auto v1 = v.segment(st + 1, d - 1);
      const double qv = c.q.dot(v1);
      out[st] = c.eta * (c.a * v0 + qv);
      out.segment(st + 1, d - 1) =
          c.eta * (v1 + (v0 + qv / (1.0 + c.a)) * c.q);
    }
    return out;
  }

  VectorXd ApplyInverse(const VectorXd& v) const {
    VectorXd out(k_.size);
    out.head(k_.num_orthant) = v.head(k_.num_orthant).cwiseQuotient(lp_w_);
    for (size_t i = 0; i < k_.dims.size(); ++i) {
      const int st = k_.starts[i];
      const int d = k_.dims[i];
      const Soc& c = soc_[i];
      const double v0 = v[st];
      const auto v1 = v.segment(st + 1, d - 1);
      const double qv = c.q.dot(v1);
      out[st] = (c.a * v0 - qv) / c.eta;
      out.segment(st + 1, d - 1) =
          (v1 + (-v0 + qv / (1.0 + c.a)) * c.q) / c.eta;
    }
    return out;
  }

  double LpSquared(int i) const { return lp_w_[i] * lp_w_[i]; }

  /// Dense W^2 block of cone i.
  Eigen::MatrixXd SocSquared(int i) const {
    const Soc& c = soc_[i];
    const int d = k_.dims[i];
    VectorXd wbar(d);
    wbar[0] = c.a;
    wbar.tail(d - 1) = c.q;
    Eigen::MatrixXd m = 2.0 * wbar * wbar.transpose();
    m(0, 0) -= 1.0;
    for (int j = 1; j < d; ++j) m(j, j) += 1.0;
    return c.eta * c.eta * m;
  }

 private:
  struct Soc {
    double eta;
    double a;
    VectorXd q;
  };
  const Cones& k_;
  VectorXd lp_w_;
  std::vector<Soc> soc_;
};

// The quasidefinite system [dI A' G'; A -dI 0; G 0 -(W^2 + dI)] with the
// scaling block updated in place between factorizations.
class KktSystem {
 public:
  KktSystem(const SpMat& A, const SpMat& G, const Cones& k)
      : A_(A), G_(G), k_(k), n_(static_cast<int>(A.cols())),
        p_(static_cast<int>(A.rows())), m_(static_cast<int>(G.rows())) {
    const int dim = n_ + p_ + m_;
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < n_; ++i) trip.emplace_back(i, i, kStaticReg);
    for (int col = 0; col < A_.outerSize(); ++col) {
      for (SpMat::InnerIterator it(A_, col); it; ++it) {
        trip.emplace_back(n_ + it.row(), col, it.value());
      }
    }
    for (int col = 0; col < G_.outerSize(); ++col) {
      for (SpMat::InnerIterator it(G_, col); it; ++it) {
        trip.emplace_back(n_ + p_ + it.row(), col, it.value());
      }
    }
    for (int i = 0; i < p_; ++i) trip.emplace_back(n_ + i, n_ + i, -kStaticReg);
    const int zoff = n_ + p_;
    for (int i = 0; i < k_.num_orthant; ++i) {
      trip.emplace_back(zoff + i, zoff + i, -1.0);
    }
    for (size_t c = 0; c < k_.dims.size(); ++c) {
      const int st = zoff + k_.starts[c];
      for (int j = 0; j < k_.dims[c]; ++j) {
        for (int i = j; i < k_.dims[c]; ++i) {
          trip.emplace_back(st + i, st + j, -1.0);
        }
      }
    }
    K_.resize(dim, dim);
    K_.setFromTriplets(trip.begin(), trip.end());
    K_.makeCompressed();
    for (int i = 0; i < n_; ++i) x_slots_.push_back(&K_.coeffRef(i, i));
    for (int i = 0; i < p_; ++i) y_slots_.push_back(&K_.coeffRef(n_ + i, n_ + i));
    for (int i = 0; i < k_.num_orthant; ++i) {
      lp_slots_.push_back(&K_.coeffRef(zoff + i, zoff + i));
    }
    soc_slots_.resize(k_.dims.size());
    for (size_t c = 0; c < k_.dims.size(); ++c) {
      const int st = zoff + k_.starts[c];
      for (int j = 0; j < k_.dims[c]; ++j) {
        for (int i = j; i < k_.dims[c]; ++i) {
          soc_slots_[c].push_back(&K_.coeffRef(st + i, st + j));
        }
      }
    }
    ldlt_.analyzePattern(K_);
  }

  bool Factor(const Scaling& w) {
    scaling_ = &w;
    for (level_ = 0; level_ < std::ssize(kRegLevels); ++level_) {
      if (FactorWith(w, kRegLevels[level_])) return true;
    }
    return false;
  }

  bool FactorWith(const Scaling& w, double reg) {
    for (double* v : x_slots_) *v = reg;
    for (double* v : y_slots_) *v = -reg;
    for (int i = 0; i < k_.num_orthant; ++i) {
      *lp_slots_[i] = -(w.LpSquared(i) + reg);
    }
    for (size_t c = 0; c < k_.dims.size(); ++c) {
      const Eigen::MatrixXd block = w.SocSquared(static_cast<int>(c));
      int slot = 0;
      const int d = k_.dims[c];
      for (int j = 0; j < d; ++j) {
        for (int i = j; i < d; ++i) {
          double v = -block(i, j);
          if (i == j) v -= reg;
          *soc_slots_[c][slot++] = v;
        }
      }
    }
    ldlt_.factorize(K_);
    return ldlt_.info() == Eigen::Success;
  }

  /// Solves the unregularized system with iterative refinement. A factor too
  /// inaccurate for refinement to recover is replaced by a more strongly
  /// regularized one.
  VectorXd Solve(const VectorXd& rhs) {
    const double scale = 1.0 + rhs.lpNorm<Eigen::Infinity>();
    for (;;) {
      double residual = 0.0;
      VectorXd sol = Refine(rhs, 1e-13 * scale, &residual);
      if (residual <= kSolveAccuracy * scale) return sol;
      bool refactored = false;
      while (!refactored && level_ + 1 < std::ssize(kRegLevels)) {
        refactored = FactorWith(*scaling_, kRegLevels[++level_]);
      }
      if (!refactored) return sol;
    }
  }

 private:
  // Keeps the best iterate, since refinement with a poor factor can diverge.
  VectorXd Refine(const VectorXd& rhs, double target, double* residual) const {
    VectorXd sol = ldlt_.solve(rhs);
    VectorXd res = rhs - Multiply(sol);
    double norm = res.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < kRefineSteps && norm > target; ++it) {
      const VectorXd next = sol + ldlt_.solve(res);
      const VectorXd next_res = rhs - Multiply(next);
      const double next_norm = next_res.lpNorm<Eigen::Infinity>();
      if (!(next_norm < norm)) break;
      sol = next;
      res = next_res;
      norm = next_norm;
    }
    *residual = std::isfinite(norm) ? norm : std::numeric_limits<double>::infinity();
    return sol;
  }

  VectorXd Multiply(const VectorXd& v) const {
    const auto x = v.head(n_);
    const auto y = v.segment(n_, p_);
    const VectorXd z = v.tail(m_);
    VectorXd out(v.size());
    out.head(n_) = A_.transpose() * y + G_.transpose() * z;
    out.segment(n_, p_) = A_ * x;
    out.tail(m_) = G_ * x - scaling_->Apply(scaling_->Apply(z));
    return out;
  }

  const SpMat& A_;
  const SpMat& G_;
  const Cones& k_;
  int n_, p_, m_;
  SpMat K_;
  std::vector<double*> x_slots_;
  std::vector<double*> y_slots_;
  std::vector<double*> lp_slots_;
  std::vector<std::vector<double*>> soc_slots_;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt_;
  const Scaling* scaling_ = nullptr;
  std::ptrdiff_t level_ = 0;
};

struct Equilibration {
  VectorXd col;    // x = col .* x_scaled
  VectorXd row_a;  // A_scaled = diag(row_a) A diag(col)
  VectorXd row_g;
};

Equilibration Equilibrate(SpMat* A, SpMat* G, const Cones& k) {
  const int n = static_cast<int>(A->cols());
  Equilibration e{VectorXd::Ones(n), VectorXd::Ones(A->rows()),
                  VectorXd::Ones(G->rows())};
  for (int pass = 0; pass < kEquilibrationPasses; ++pass) {
    VectorXd col_max = VectorXd::Zero(n);
    VectorXd a_max = VectorXd::Zero(A->rows());
    VectorXd g_max = VectorXd::Zero(G->rows());
    for (int c = 0; c < n; ++c) {
      for (SpMat::InnerIterator it(*A, c); it; ++it) {
        const double v = std::abs(it.value());
        col_max[c] = std::max(col_max[c], v);
        a_max[it.row()] = std::max(a_max[it.row()], v);
      }
      for (SpMat::InnerIterator it(*G, c); it; ++it) {
        const double v = std::abs(it.value());
        col_max[c] = std::max(col_max[c], v);
        g_max[it.row()] = std::max(g_max[it.row()], v);
      }
    }
    for (size_t i = 0; i < k.dims.size(); ++i) {
      const double block = g_max.segment(k.starts[i], k.dims[i]).maxCoeff();
      g_max.segment(k.starts[i], k.dims[i]).setConstant(block);
    }
    auto inv_sqrt = [](double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 1.0; };
    const VectorXd dc = col_max.unaryExpr(inv_sqrt);
    const VectorXd da = a_max.unaryExpr(inv_sqrt);
    const VectorXd dg = g_max.unaryExpr(inv_sqrt);
    *A = da.asDiagonal() * (*A) * dc.asDiagonal();
    *G = dg.asDiagonal() * (*G) * dc.asDiagonal();
    e.col = e.col.cwiseProduct(dc);
    e.row_a = e.row_a.cwiseProduct(da);
    e.row_g = e.row_g.cwiseProduct(dg);
  }
  return e;
}

}  // namespace

SolveResult SolveInteriorPoint(const StandardForm& problem,
                               const SolverOptions& options) {
  SolveResult result;
  const Cones k(problem.num_orthant, problem.soc_dims);
  const int n = problem.n;
  const int p = static_cast<int>(problem.A.rows());
  const int m = static_cast<int>(problem.G.rows());

  SpMat A = problem.A;
  SpMat G = problem.G;
  A.makeCompressed();
  G.makeCompressed();
  const Equilibration eq = Equilibrate(&A, &G, k);
  const VectorXd c = problem.c.cwiseProduct(eq.col);
  const VectorXd b = problem.b.cwiseProduct(eq.row_a);
  const VectorXd h = problem.h.cwiseProduct(eq.row_g);

  KktSystem kkt(A, G, k);
  Scaling w(k);
  if (!kkt.Factor(w)) {
    result.diagnostics = "interior point: initial factorization failed";
    return result;
  }

  auto split = [&](const VectorXd& v, VectorXd* x, VectorXd* y, VectorXd* z) {
    *x = v.head(n);
    *y = v.segment(n, p);
    *z = v.tail(m);
  };

  VectorXd x, y, z, s;
  {
    VectorXd rhs(n + p + m);
    rhs << VectorXd::Zero(n), b, h;
    VectorXd tmp_y, tmp_z;
    split(kkt.Solve(rhs), &x, &tmp_y, &tmp_z);
    s = BringToCone(k, -tmp_z);
    rhs << -c, VectorXd::Zero(p), VectorXd::Zero(m);
    VectorXd tmp_x;
    split(kkt.Solve(rhs), &tmp_x, &y, &z);
    z = BringToCone(k, z);
  }
  double tau = 1.0;
  double kappa = 1.0;

  const double norm_b = std::max(1.0, b.norm());
  const double norm_h = std::max(1.0, h.norm());
  const double norm_c = std::max(1.0, c.norm());
  const int degree = k.degree();
  const VectorXd e = Identity(k);

  enum class Outcome { kRunning, kOptimal, kInfeasible, kUnbounded, kFailed };
  Outcome outcome = Outcome::kRunning;
  std::string why;

  // Best reduced-accuracy iterate seen, kept in case progress stalls.
  struct Snapshot {
    VectorXd x;
    double tau;
    double score = std::numeric_limits<double>::infinity();
  } best;

  int iter = 0;
  for (;; ++iter) {
    const VectorXd rx = A.transpose() * y + G.transpose() * z + c * tau;
    const VectorXd ry = b * tau - A * x;
    const VectorXd rz = h * tau - G * x - s;
    const double cx = c.dot(x);
    const double by_hz = b.dot(y) + h.dot(z);
    const double rt = -cx - by_hz - kappa;
    const double sz = s.dot(z);
    const double mu = (sz + tau * kappa) / (degree + 1);

    const double pcost = cx / tau;
    const double dcost = -by_hz / tau;
    const double pres = std::max(ry.norm() / norm_b,
                                 rz.norm() / norm_h) / tau;
    const double dres = rx.norm() / norm_c / tau;
    const double gap = sz / (tau * tau);
    double relgap = std::numeric_limits<double>::infinity();
    if (pcost < 0.0) {
      relgap = gap / -pcost;
    } else if (dcost > 0.0) {
      relgap = gap / dcost;
    }
    if (options.verbose) {
      std::fprintf(stderr,
                   "ipm %3d pcost %+.9e dcost %+.9e pres %.2e dres %.2e gap "
                   "%.2e tau %.2e kappa %.2e\n",
                   iter, pcost, dcost, pres, dres, gap, tau, kappa);
    }

    const bool gap_ok =
        gap < options.absolute_gap_tol || relgap < options.relative_gap_tol;
    if (pres < options.feasibility_tol && dres < options.feasibility_tol &&
        gap_ok) {
      outcome = Outcome::kOptimal;
      break;
    }
    {
      const bool reduced = pres < kReducedFeasTol && dres < kReducedFeasTol &&
                           (gap < kReducedGapTol || relgap < kReducedGapTol);
      const double score = std::max({pres, dres, std::min(gap, relgap)});
      if (reduced && score < best.score) {
        best.x = x;
        best.tau = tau;
        best.score = score;
      }
    }
    // Infeasibility certificates (the embedding drives tau -> 0).
    if (by_hz < 0.0) {
      const double certificate =
          (A.transpose() * y + G.transpose() * z).norm() / -by_hz;
      if (certificate < options.feasibility_tol && tau < kappa) {
        outcome = Outcome::kInfeasible;
        why = "primal infeasibility certificate";
        break;
      }
    }
    if (cx < 0.0) {
      const double certificate =
          std::max((A * x).norm(), (G * x + s).norm()) / -cx;
      if (certificate < options.feasibility_tol && tau < kappa) {
        outcome = Outcome::kUnbounded;
        why = "dual infeasibility certificate";
        break;
      }
    }
    if (iter >= options.max_iterations) {
      outcome = Outcome::kFailed;
      why = "iteration limit";
      break;
    }

    if (!w.Update(s, z) || !kkt.Factor(w)) {
      outcome = Outcome::kFailed;
      why = "scaling or factorization breakdown";
      break;
    }
    const VectorXd lambda = w.Apply(z);

    VectorXd x1, y1, z1;
    {
      VectorXd rhs(n + p + m);
      rhs << -c, b, h;
      split(kkt.Solve(rhs), &x1, &y1, &z1);
    }
    const double denom_base = -(c.dot(x1) + b.dot(y1) + h.dot(z1));

    // Solves the Newton system for the given complementarity targets.
    struct Direction {
      VectorXd dx, dy, dz, ds;
      double dtau, dkappa;
    };
    auto direction = [&](double sigma, const VectorXd& ds_target,
                         double dk_target) -> Direction {
      const double f = 1.0 - sigma;
      const VectorXd lam_div = Divide(k, lambda, ds_target);
      VectorXd rhs(n + p + m);
      rhs << -f * rx, f * ry, -w.Apply(lam_div) + f * rz;
      VectorXd x2, y2, z2;
      split(kkt.Solve(rhs), &x2, &y2, &z2);
      Direction d;
      d.dtau = (-f * rt + c.dot(x2) + b.dot(y2) + h.dot(z2) + dk_target / tau) /
               (kappa / tau + denom_base);
      d.dx = x2 + d.dtau * x1;
      d.dy = y2 + d.dtau * y1;
      d.dz = z2 + d.dtau * z1;
      d.ds = w.Apply(lam_div - w.Apply(d.dz));
      d.dkappa = (dk_target - kappa * d.dtau) / tau;
      return d;
    };
    auto step_length = [&](const Direction& d) {
      double alpha = MaxStep(k, s, d.ds, 1.0 / kStepFraction);
      alpha = MaxStep(k, z, d.dz, alpha);
      if (d.dtau < 0.0) alpha = std::min(alpha, -tau / d.dtau);
      if (d.dkappa < 0.0) alpha = std::min(alpha, -kappa / d.dkappa);
      return alpha;
    };

    const VectorXd ds_aff = -Product(k, lambda, lambda);
    const Direction aff = direction(0.0, ds_aff, -kappa * tau);
    const double alpha_aff = std::min(1.0, step_length(aff));
    double sigma = std::pow(1.0 - alpha_aff, 3);
    sigma = std::clamp(sigma, 1e-4, 1.0);

    const VectorXd ds_comb = ds_aff -
                             Product(k, w.ApplyInverse(aff.ds), w.Apply(aff.dz)) +
                             sigma * mu * e;
    const double dk_comb = -kappa * tau - aff.dkappa * aff.dtau + sigma * mu;
    const Direction d = direction(sigma, ds_comb, dk_comb);
    const double alpha = std::min(1.0, kStepFraction * step_length(d));
    if (!(alpha > 1e-12) || !std::isfinite(d.dtau)) {
      outcome = Outcome::kFailed;
      why = "step length collapsed";
      break;
    }
    x += alpha * d.dx;
    y += alpha * d.dy;
    z += alpha * d.dz;
    s += alpha * d.ds;
    tau += alpha * d.dtau;
    kappa += alpha * d.dkappa;
  }

  result.iterations = iter;
  switch (outcome) {
    case Outcome::kOptimal:
      result.status = SolveStatus::kOptimal;
      result.primal = (x / tau).cwiseProduct(eq.col);
      break;
    case Outcome::kInfeasible:
      result.status = SolveStatus::kInfeasible;
      result.diagnostics = "interior point: " + why;
      break;
    case Outcome::kUnbounded:
      result.status = SolveStatus::kUnbounded;
      result.diagnostics = "interior point: " + why;
      break;
    default:
      if (best.x.size() == n && std::isfinite(best.score)) {
        result.status = SolveStatus::kOptimal;
        result.primal = (best.x / best.tau).cwiseProduct(eq.col);
        result.diagnostics = "interior point: reduced accuracy after " + why;
      } else {
        result.diagnostics = "interior point: " + why;
      }
      break;
  }
  return result;
}

}  // namespace gcs::internal
