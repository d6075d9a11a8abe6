#pragma once

// Shared internals of the two discriminative learners: stacked two-class
// views, selected-component packing, and the exact budget repair.

#include <vector>

#include "sgbn/classifiers.hpp"

namespace sgbn::detail {

struct Stacked {
  Matrix x;                   // all samples, class 1 rows first
  Matrix u;                   // [x, 1]
  std::vector<int> labels;    // 1/2 per row
  std::vector<int> y_pm1;     // +1 for class 1, -1 for class 2
  Eigen::Index n1 = 0, n2 = 0;

  Eigen::Index n() const { return n1 + n2; }
};

inline Stacked stack(const Dataset& x1, const Dataset& x2) {
  if (x1.cols() != x2.cols()) throw std::invalid_argument("class datasets disagree on m");
  Stacked s;
  s.n1 = x1.rows();
  s.n2 = x2.rows();
  s.x.resize(s.n(), x1.cols());
  s.x.topRows(s.n1) = x1.values;
  s.x.bottomRows(s.n2) = x2.values;
  s.u.resize(s.n(), x1.cols() + 1);
  s.u.leftCols(x1.cols()) = s.x;
  s.u.col(x1.cols()).setOnes();
  s.labels.assign(static_cast<std::size_t>(s.n()), 1);
  s.y_pm1.assign(static_cast<std::size_t>(s.n()), 1);
  for (Eigen::Index i = s.n1; i < s.n(); ++i) {
    s.labels[static_cast<std::size_t>(i)] = 2;
    s.y_pm1[static_cast<std::size_t>(i)] = -1;
  }
  return s;
}

// Training Fisher vectors for the stacked rows, augmented at their own index.
inline std::vector<FisherVector> training_vectors(const Stacked& s, const ClassPairModel& pair,
                                                  const SvmConfig& cfg) {
  std::vector<FisherVector> vs;
  vs.reserve(static_cast<std::size_t>(s.n()));
  for (Eigen::Index i = 0; i < s.n(); ++i) {
    FisherVector v =
        fisher_vector(s.x.row(i).transpose(), pair.theta1, pair.sigma1, pair.theta2, pair.sigma2);
    attach_augmentation(v, static_cast<int>(i), s.y_pm1[static_cast<std::size_t>(i)], cfg);
    vs.push_back(std::move(v));
  }
  return vs;
}

inline Vector gather_components(const ClassPairModel& pair, const std::vector<EdgeComponent>& comps) {
  Vector z(static_cast<Eigen::Index>(comps.size()));
  for (std::size_t t = 0; t < comps.size(); ++t) {
    const auto& c = comps[t];
    z(static_cast<Eigen::Index>(t)) =
        c.cls == 1 ? pair.theta1.theta(c.a, c.q) : pair.theta2.theta(c.a, c.q);
  }
  return z;
}

inline void scatter_components(ClassPairModel& pair, const std::vector<EdgeComponent>& comps,
                               const Vector& z) {
  for (std::size_t t = 0; t < comps.size(); ++t) {
    const auto& c = comps[t];
    (c.cls == 1 ? pair.theta1 : pair.theta2).theta(c.a, c.q) = z(static_cast<Eigen::Index>(t));
  }
}

// Largest s in [0, 1] with h(from + s*(to - from)) <= budget, assuming the
// start is within budget. h is quadratic along the segment, so the crossing
// solves exactly; a relative backoff absorbs roundoff.
inline double budget_segment_step(const Dataset& x, const SgbnParams& from, const SgbnParams& to,
                                  double budget) {
  SgbnParams probe = to;
  const double h_to = fitting_error(x, probe);
  if (h_to <= budget) return 1.0;
  const Matrix r0 = residuals(x, from);
  Matrix delta_pred = x.values * (to.theta.topRows(to.m) - from.theta.topRows(from.m));
  delta_pred.rowwise() += (to.theta.row(to.m) - from.theta.row(from.m));
  // h(s) = ||r0 - s * delta_pred||^2
  const double a = delta_pred.squaredNorm();
  const double b = -2.0 * (r0.array() * delta_pred.array()).sum();
  const double c = r0.squaredNorm() - budget;
  if (a <= 0.0) return 0.0;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return 0.0;
  double s = (-b + std::sqrt(disc)) / (2.0 * a);
  s = std::min(std::max(s, 0.0), 1.0);
  return s * (1.0 - 1e-12);
}

// Pulls the pair back inside both budgets along the segments from a feasible
// reference, then refreshes the ordering certificates.
inline void repair_and_certify(ClassPairModel& pair, const ClassPairModel& feasible_ref,
                               const Dataset& x1, const Dataset& x2, double delta) {
  const double s1 = budget_segment_step(x1, feasible_ref.theta1, pair.theta1, pair.t1);
  if (s1 < 1.0) {
    pair.theta1.theta =
        feasible_ref.theta1.theta + s1 * (pair.theta1.theta - feasible_ref.theta1.theta);
  }
  const double s2 = budget_segment_step(x2, feasible_ref.theta2, pair.theta2, pair.t2);
  if (s2 < 1.0) {
    pair.theta2.theta =
        feasible_ref.theta2.theta + s2 * (pair.theta2.theta - feasible_ref.theta2.theta);
  }
  pair.cert1 = solve_ordering(pair.theta1, delta).cert;
  pair.cert2 = solve_ordering(pair.theta2, delta).cert;
}

// All nonzero parameter positions (off-diagonal plus bias row), both classes:
// the default optimization set when no correlation ranking is requested.
inline std::vector<EdgeComponent> all_existing_components(const SgbnParams& theta1,
                                                          const SgbnParams& theta2) {
  std::vector<EdgeComponent> comps;
  const int m = theta1.m;
  for (int cls = 1; cls <= 2; ++cls) {
    const SgbnParams& th = cls == 1 ? theta1 : theta2;
    for (int q = 0; q < m; ++q)
      for (int a = 0; a <= m; ++a)
        if (th.theta(a, q) != 0.0)
          comps.push_back({cls, a, q, fisher_component_index(m, cls, a, q)});
  }
  return comps;
}

}  // namespace sgbn::detail
