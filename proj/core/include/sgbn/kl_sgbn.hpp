#pragma once

#include "sgbn/classifiers.hpp"

namespace sgbn {

struct KlConfig {
  SvmConfig svm{1.0};
  double t1 = 0.0, t2 = 0.0;  // fitting-error budgets; must cover the init models
  int k_edges = 0;            // number of gradient components optimized
  int max_outer_iters = 20;
  double delta = 1.0;
  double tol = 1e-4;  // relative change of the radius-margin value
};

struct JEvaluation {
  double j = 0.0;      // j0 * scatter trace
  double j0 = 0.0;     // dual optimum (half squared inverse margin)
  double trace = 0.0;  // total scatter of the plain gradient features
  QpDualSolution dual;
};

// One round of Fisher vectors, augmented kernel, scatter trace and the SVM
// dual at a fixed model pair. Labels come from which dataset a row belongs to.
JEvaluation evaluate_j(const ClassPairModel& pair, const Dataset& x1, const Dataset& x2,
                       const KlConfig& cfg);

struct KlResult {
  ClassPairModel model;
  SolveReport report;
  std::vector<double> j_trace;
  EdgeSelection selection;
};

// Alternates the SVM dual with a descent step on the radius-margin value over
// the selected parameter components, keeping both fitting errors within their
// budgets and both graphs certified acyclic. Components outside the selection
// are returned bit-identical to the initial models.
KlResult kl_learn(const Dataset& x1, const Dataset& x2, const ClassPairModel& init,
                  const KlConfig& cfg);

}  // namespace sgbn
