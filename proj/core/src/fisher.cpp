#include "sgbn/fisher.hpp"

#include <algorithm>
#include <cmath>

#include "sgbn/hashing.hpp"

namespace sgbn {

std::uint64_t class_pair_id_of(const SgbnParams& theta1, const SgbnParams& theta2,
                               const NoiseModel& sigma1, const NoiseModel& sigma2) {
  std::uint64_t h = fnv1a64(theta1.theta);
  h = fnv1a64(theta2.theta, h);
  h = fnv1a64(sigma1.sigma, h);
  h = fnv1a64(sigma2.sigma, h);
  return h;
}

namespace {

void fill_block(const Vector& x, const SgbnParams& theta, const NoiseModel& sigma,
                Eigen::Ref<Vector> block) {
  const int m = theta.m;
  Vector pa(m + 1);
  pa.head(m) = x;
  pa(m) = 1.0;
  for (int q = 0; q < m; ++q) {
    const double r = x(q) - pa.dot(theta.theta.col(q));
    const double s2 = sigma.sigma(q) * sigma.sigma(q);
    block.segment(q * (m + 1), m + 1) = (r / s2) * pa;
  }
}

}  // namespace

FisherVector fisher_vector(const Vector& x, const SgbnParams& theta1, const NoiseModel& sigma1,
                           const SgbnParams& theta2, const NoiseModel& sigma2) {
  const int m = theta1.m;
  if (theta2.m != m) throw std::invalid_argument("fisher_vector: class models disagree on m");
  if (x.size() != m) throw std::invalid_argument("fisher_vector: sample dimension mismatch");
  if (sigma1.sigma.size() != m || sigma2.sigma.size() != m)
    throw std::invalid_argument("fisher_vector: noise dimension mismatch");

  FisherVector v;
  const int block = m * (m + 1);
  v.blocks.resize(2 * block);
  fill_block(x, theta1, sigma1, v.blocks.head(block));
  fill_block(x, theta2, sigma2, v.blocks.tail(block));
  v.class_pair_id = class_pair_id_of(theta1, theta2, sigma1, sigma2);
  return v;
}

FisherVector fisher_vector(const Vector& x, const SgbnParams& theta1, const SgbnParams& theta2,
                           const NoiseModel& sigma) {
  return fisher_vector(x, theta1, sigma, theta2, sigma);
}

void attach_augmentation(FisherVector& v, int position, int label_pm1, const SvmConfig& cfg) {
  cfg.validate();
  if (position < 0) throw std::invalid_argument("augmentation position must be nonnegative");
  if (label_pm1 != 1 && label_pm1 != -1) throw std::invalid_argument("label must be +/-1");
  v.aug_index = position;
  v.aug_value = static_cast<double>(label_pm1) / std::sqrt(cfg.c);
}

Matrix kernel_matrix(const std::vector<FisherVector>& vectors, const SvmConfig& cfg, bool augment) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(vectors.size());
  if (n == 0) throw std::invalid_argument("kernel_matrix: no vectors");
  for (const auto& v : vectors)
    if (v.class_pair_id != vectors.front().class_pair_id)
      throw std::invalid_argument("kernel_matrix: vectors from different model pairs");

  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      double dot = vectors[static_cast<std::size_t>(i)].blocks.dot(
          vectors[static_cast<std::size_t>(j)].blocks);
      if (augment)
        dot += vectors[static_cast<std::size_t>(i)].aug_dot(vectors[static_cast<std::size_t>(j)]);
      k(i, j) = dot;
      k(j, i) = dot;
    }
  }
  return k;
}

double scatter_trace(const Matrix& k) {
  if (k.rows() != k.cols()) throw std::invalid_argument("scatter_trace: kernel must be square");
  const auto n = static_cast<double>(k.rows());
  return k.trace() - k.sum() / n;
}

EdgeSelection select_edges(const std::vector<FisherVector>& train_vectors,
                           const std::vector<int>& labels, int k, const SgbnParams& theta1,
                           const SgbnParams& theta2) {
  if (k < 0) throw std::invalid_argument("select_edges: k must be nonnegative");
  if (train_vectors.size() != labels.size())
    throw std::invalid_argument("select_edges: label count mismatch");
  const auto n = static_cast<Eigen::Index>(train_vectors.size());
  if (n < 2) throw std::invalid_argument("select_edges: needs at least two samples");
  for (int y : labels)
    if (y != 1 && y != 2) throw std::invalid_argument("select_edges: labels must be 1 or 2");

  const int m = theta1.m;
  const auto theta_at = [&](int cls, int a, int q) {
    return cls == 1 ? theta1.theta(a, q) : theta2.theta(a, q);
  };

  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
  const double y_mean = y.mean();
  const double y_ss = (y.array() - y_mean).square().sum();

  struct Ranked {
    double score;
    EdgeComponent comp;
  };
  std::vector<Ranked> ranked;

  Vector column(n);
  for (int cls = 1; cls <= 2; ++cls) {
    for (int q = 0; q < m; ++q) {
      for (int a = 0; a <= m; ++a) {
        if (theta_at(cls, a, q) == 0.0) continue;  // restrict to edges present in the graph
        const int flat = fisher_component_index(m, cls, a, q);
        for (Eigen::Index i = 0; i < n; ++i)
          column(i) = train_vectors[static_cast<std::size_t>(i)].blocks(flat);
        const double c_mean = column.mean();
        const double c_ss = (column.array() - c_mean).square().sum();
        double corr = 0.0;  // zero-variance components rank last
        if (c_ss > 0.0 && y_ss > 0.0)
          corr = std::abs(((column.array() - c_mean) * (y.array() - y_mean)).sum() /
                          std::sqrt(c_ss * y_ss));
        ranked.push_back({corr, EdgeComponent{cls, a, q, flat}});
      }
    }
  }

  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& lhs, const Ranked& rhs) {
    if (lhs.score != rhs.score) return lhs.score > rhs.score;
    return lhs.comp.flat < rhs.comp.flat;
  });

  EdgeSelection sel;
  sel.exhausted = static_cast<int>(ranked.size()) < k;
  const int take = std::min<int>(k, static_cast<int>(ranked.size()));
  for (int t = 0; t < take; ++t) sel.components.push_back(ranked[static_cast<std::size_t>(t)].comp);
  return sel;
}

}  // namespace sgbn
