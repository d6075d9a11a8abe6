#pragma once

#include <optional>

#include "sgbn/fisher.hpp"
#include "sgbn/ordering.hpp"
#include "sgbn/solvers.hpp"

namespace sgbn {

// One model per class plus the fitting-error budgets recorded at training.
// The certificates witness that both structures are acyclic; every fit and
// discriminative-learning path emits them alongside the parameters.
struct ClassPairModel {
  SgbnParams theta1, theta2;
  NoiseModel sigma1, sigma2;
  OrderingCertificate cert1, cert2;
  double prior1 = 0.5, prior2 = 0.5;
  double t1 = 0.0, t2 = 0.0;

  int m() const { return theta1.m; }
  std::uint64_t pair_id() const { return class_pair_id_of(theta1, theta2, sigma1, sigma2); }
  void validate() const;
};

// Higher posterior wins; exact ties go to class 1 so accuracy tables replay.
int sgbn_predict(const Vector& x, const ClassPairModel& model);

struct SvmModel {
  Vector alpha;                       // one multiplier per retained vector
  std::vector<int> y_pm1;             // +/-1 labels of retained vectors
  std::vector<FisherVector> support;  // retained training vectors (alpha > 0)
  double bias = 0.0;
  SvmConfig cfg;
  std::vector<int> selected;  // flat component subset; empty = full vector
  std::uint64_t class_pair_id = 0;
};

// Trains the squared-slack SVM on (optionally component-selected) gradient
// features. Both classes must be present.
SvmModel svm_train(const std::vector<FisherVector>& vectors, const std::vector<int>& labels,
                   const SvmConfig& cfg, const std::vector<int>* selected_components = nullptr);

// Decision over the retained dual; test vectors get a zero augmentation block
// (the slack coordinates exist only for training samples).
int svm_predict(const Vector& x, const SvmModel& svm, const ClassPairModel& pair);

double svm_decision_value(const Vector& x, const SvmModel& svm, const ClassPairModel& pair);

}  // namespace sgbn
