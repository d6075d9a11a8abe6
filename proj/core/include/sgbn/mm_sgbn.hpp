#pragma once

#include "sgbn/classifiers.hpp"

namespace sgbn {

struct MmConfig {
  double lambda = -1.0;       // slack weight; <= 0 means 1/n (slack term as an average)
  double t1 = 0.0, t2 = 0.0;  // fitting-error budgets
  int k_edges = -1;           // components optimized; < 0 means all existing edges
  int max_outer_iters = 20;
  double delta = 1.0;
  double tol = 1e-4;  // relative change of lambda*sum(xi) - r
};

struct MarginState {
  double r = 0.0;
  Vector xi;
};

// Signed log-likelihood difference of one sample under the two class models.
double margin_term(const Vector& x, const SgbnParams& theta1, const SgbnParams& theta2,
                   const NoiseModel& sigma);

// With the models fixed, the slack/margin subproblem is a linear program:
//   min lambda*sum(xi) - r   s.t.  y_i * (L1_i - L2_i) >= r - xi_i, xi >= 0, r >= 0.
// Always feasible (r = 0, xi = 0). Solved to its exact optimum.
MarginState init_margin(const ClassPairModel& pair, const Dataset& labeled, double lambda);

struct MmResult {
  ClassPairModel model;
  MarginState margin;
  SolveReport report;
  std::vector<double> objective_trace;
  EdgeSelection selection;
};

// Maximizes the soft margin of the likelihood-ratio classifier over the
// selected parameter components, alternating the joint (theta, r, xi) descent
// with the ordering refresh. Budgets stay hard; slacks are re-solved in
// closed form after every step, so the margin constraints hold exactly.
MmResult mm_learn(const Dataset& x1, const Dataset& x2, const ClassPairModel& init,
                  const MmConfig& cfg);

}  // namespace sgbn
