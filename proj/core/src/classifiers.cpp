#include "sgbn/classifiers.hpp"

#include <cmath>

namespace sgbn {

void ClassPairModel::validate() const {
  theta1.validate();
  theta2.validate();
  sigma1.validate();
  sigma2.validate();
  if (theta1.m != theta2.m) throw std::invalid_argument("class models disagree on m");
  if (prior1 < 0.0 || prior2 < 0.0 || std::abs(prior1 + prior2 - 1.0) > 1e-12)
    throw std::invalid_argument("priors must be nonnegative and sum to 1");
}

int sgbn_predict(const Vector& x, const ClassPairModel& model) {
  const double s1 = std::log(model.prior1) + log_likelihood(x, model.theta1, model.sigma1);
  const double s2 = std::log(model.prior2) + log_likelihood(x, model.theta2, model.sigma2);
  return s1 >= s2 ? 1 : 2;
}

namespace {

double selected_dot(const FisherVector& a, const FisherVector& b, const std::vector<int>& selected) {
  if (selected.empty()) return a.blocks.dot(b.blocks);
  double acc = 0.0;
  for (int idx : selected) acc += a.blocks(idx) * b.blocks(idx);
  return acc;
}

}  // namespace

SvmModel svm_train(const std::vector<FisherVector>& vectors, const std::vector<int>& labels,
                   const SvmConfig& cfg, const std::vector<int>* selected_components) {
  cfg.validate();
  if (vectors.empty() || vectors.size() != labels.size())
    throw std::invalid_argument("svm_train: vector/label mismatch");
  bool saw1 = false, saw2 = false;
  for (int y : labels) {
    if (y == 1) saw1 = true;
    else if (y == 2) saw2 = true;
    else throw std::invalid_argument("svm_train: labels must be 1 or 2");
  }
  if (!saw1 || !saw2) throw std::invalid_argument("svm_train: needs at least one sample per class");

  const auto n = static_cast<Eigen::Index>(vectors.size());
  std::vector<int> y_pm1(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) y_pm1[i] = labels[i] == 1 ? 1 : -1;

  const std::vector<int> selected =
      selected_components ? *selected_components : std::vector<int>{};

  // Component-selected Gram plus the squared-slack augmentation I/C.
  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      double dot = selected_dot(vectors[static_cast<std::size_t>(i)],
                                vectors[static_cast<std::size_t>(j)], selected);
      if (i == j) dot += 1.0 / cfg.c;
      k(i, j) = k(j, i) = dot;
    }

  const QpDualSolution dual = solve_svm_dual(k, y_pm1);

  SvmModel model;
  model.bias = dual.bias;
  model.cfg = cfg;
  model.selected = selected;
  model.class_pair_id = vectors.front().class_pair_id;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (dual.alpha(i) > 0.0) {
      model.support.push_back(vectors[static_cast<std::size_t>(i)]);
      model.y_pm1.push_back(y_pm1[static_cast<std::size_t>(i)]);
    }
  }
  model.alpha.resize(static_cast<Eigen::Index>(model.support.size()));
  Eigen::Index out = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (dual.alpha(i) > 0.0) model.alpha(out++) = dual.alpha(i);
  return model;
}

double svm_decision_value(const Vector& x, const SvmModel& svm, const ClassPairModel& pair) {
  if (svm.class_pair_id != pair.pair_id())
    throw std::invalid_argument("svm_predict: model pair does not match the trained SVM");
  const FisherVector phi = fisher_vector(x, pair.theta1, pair.sigma1, pair.theta2, pair.sigma2);
  double acc = svm.bias;
  for (std::size_t i = 0; i < svm.support.size(); ++i) {
    // test-time augmentation block is zero, so only gradient components meet
    acc += svm.alpha(static_cast<Eigen::Index>(i)) * svm.y_pm1[i] *
           selected_dot(svm.support[i], phi, svm.selected);
  }
  return acc;
}

int svm_predict(const Vector& x, const SvmModel& svm, const ClassPairModel& pair) {
  return svm_decision_value(x, svm, pair) >= 0.0 ? 1 : 2;
}

}  // namespace sgbn
