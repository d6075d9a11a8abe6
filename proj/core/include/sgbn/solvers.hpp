#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgbn/dataset.hpp"

namespace sgbn {

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double final_objective = 0.0;
  double max_constraint_violation = 0.0;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SolveReport report)
      : std::runtime_error(what), report(report) {}
  SolveReport report;
};

// ---------------------------------------------------------------------------
// Weighted L1 least squares:  min_theta ||y - A theta||^2 + sum_k w_k |theta_k|
// Cyclic coordinate descent with soft thresholding; stops when no coordinate
// moves more than `tol` in one sweep.
// ---------------------------------------------------------------------------
struct LassoOptions {
  double tol = 1e-8;
  int max_sweeps = 10000;
  std::vector<double>* sweep_objectives = nullptr;  // optional trace, test hook
};

Vector weighted_lasso(const Matrix& a, const Vector& y, const Vector& w, const Vector& theta0,
                      const LassoOptions& opts = {});

// ---------------------------------------------------------------------------
// Hard-margin SVM dual on a precomputed kernel:
//   max_alpha  sum_i alpha_i - 1/2 sum_ij y_i y_j alpha_i alpha_j K_ij
//   s.t. sum_i alpha_i y_i = 0, alpha_i >= 0.
// Pairwise working-set updates keep the equality constraint; the working set
// is the maximally KKT-violating pair, ties broken by index.
// ---------------------------------------------------------------------------
struct QpDualSolution {
  Vector alpha;
  double bias = 0.0;
  double objective = 0.0;
  bool converged = false;
  int iterations = 0;
  std::string note;  // diagnostic, e.g. single-class degeneracy
};

struct SvmDualOptions {
  double kkt_tol = 1e-5;
  int max_iters = 1000000;
};

QpDualSolution solve_svm_dual(const Matrix& k, const std::vector<int>& y,
                              const SvmDualOptions& opts = {});

// ---------------------------------------------------------------------------
// Dense LP:  min c'x  s.t.  a_r' x >= b_r for every row r,  lower <= x <= upper.
// Lower bounds must be finite; +inf upper bounds are allowed. Two-phase
// simplex with Bland's rule. Problem sizes in this library are tiny, so a
// dense tableau is adequate.
// ---------------------------------------------------------------------------
struct LinearProgram {
  Vector c;
  Matrix a;      // one row per inequality a_r' x >= b_r (may have 0 rows)
  Vector b;
  Vector lower;
  Vector upper;  // entries may be +infinity
};

struct LpSolution {
  Vector x;
  double objective = 0.0;
};

LpSolution solve_lp(const LinearProgram& lp);

// ---------------------------------------------------------------------------
// Penalized minimizer for smooth objectives under smooth constraints
// g_i(x) <= 0 and h_j(x) = 0. Constraints enter a quadratic penalty whose
// weight grows geometrically across outer rounds; each round is solved by
// gradient descent with Barzilai-Borwein step seeding and Armijo
// backtracking. Returns the best feasible iterate not worse than the start.
// ---------------------------------------------------------------------------

// Evaluates the function at x; when grad is non-null it must be filled.
using DifferentiableFn = std::function<double(const Vector& x, Vector* grad)>;

struct PenalizedProblem {
  DifferentiableFn objective;
  std::vector<DifferentiableFn> inequalities;  // g(x) <= 0
  std::vector<DifferentiableFn> equalities;    // h(x) == 0
};

struct PenalizedOptions {
  double penalty_init = 10.0;
  double penalty_growth = 10.0;
  int penalty_rounds = 6;
  int inner_iters = 400;
  double grad_tol = 1e-9;
  double feasibility_tol = 1e-6;
};

struct PenalizedResult {
  Vector x;
  SolveReport report;
};

PenalizedResult minimize_penalized(const PenalizedProblem& problem, const Vector& x0,
                                   const PenalizedOptions& opts = {});

}  // namespace sgbn
