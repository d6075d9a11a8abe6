#pragma once

#include "sgbn/ordering.hpp"

namespace sgbn {

// Configuration of the single-class structure learner. The acyclicity weight
// runs through `lambda_dag_schedule` inside every outer iteration, warm
// starting each solve from the previous one. When `scale_schedule_to_bound`
// is set, the whole schedule is rescaled once so its last value exceeds
// lambda_dag_bound(), which guarantees a DAG solution.
struct OrConfig {
  double lambda1 = 0.0;  // absolute sparsity weight; <= 0 means 0.1 * n

  std::vector<double> lambda_dag_schedule = {1.0, 10.0, 100.0, 1000.0};
  bool scale_schedule_to_bound = true;
  double delta = 1.0;
  int max_outer_iters = 50;
  double tol = 1e-6;  // relative objective change across outer iterations

  double resolved_lambda1(Eigen::Index n) const { return lambda1 > 0.0 ? lambda1 : 0.1 * static_cast<double>(n); }
  void validate() const;
};

// L1-penalized least squares of every column on all the others plus bias,
// with no acyclicity constraint. The result may be cyclic; it seeds fit().
SgbnParams init_theta(const Dataset& x, double lambda1);

struct OrFitResult {
  SgbnParams theta;
  OrderingCertificate cert;
  SolveReport report;
  std::vector<double> objective_trace;  // penalized objective after each outer iteration
  std::vector<double> schedule_used;
};

// Alternates (i) per-column weighted lasso with weights lambda1 +
// lambda_dag * upsilon and (ii) the ordering LP, until the thresholded
// structure is acyclic and the objective settles. Throws SolverError when the
// schedule is exhausted without reaching a DAG.
OrFitResult fit_or_sgbn(const Dataset& x, const OrConfig& config);

}  // namespace sgbn
