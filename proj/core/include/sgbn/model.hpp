#pragma once

#include "sgbn/dataset.hpp"
#include "sgbn/graph.hpp"

namespace sgbn {

// Weighted adjacency of a Gaussian Bayesian network over m nodes, plus a bias
// row. theta(i, j) with i < m is the coefficient of parent i in the linear
// regression of node j; theta(m, j) is node j's bias coefficient. The bias is
// a virtual node: always a potential parent, never part of the structure, so
// it cannot take part in a cycle. The diagonal is identically zero.
struct SgbnParams {
  Matrix theta;  // (m+1) x m
  int m = 0;

  static SgbnParams zeros(int m) {
    SgbnParams p;
    p.m = m;
    p.theta = Matrix::Zero(m + 1, m);
    return p;
  }

  void validate() const;
};

// Per-node conditional standard deviations. The learners treat sigma as
// predefined, not estimated; the library default is 1 for every node.
struct NoiseModel {
  Vector sigma;

  static NoiseModel unit(int m) { return NoiseModel{Vector::Ones(m)}; }
  void validate() const;
};

// Log density of one sample under the network: each node contributes a
// Gaussian term -(x_i - pa_i' theta_i)^2 / (2 sigma_i^2) - log(sqrt(2 pi) sigma_i),
// where pa_i is the full sample vector plus the fixed bias input 1.
double log_likelihood(const Vector& x, const SgbnParams& params, const NoiseModel& noise);

// Sum over nodes of squared regression residuals on a standardized dataset.
double fitting_error(const Dataset& x, const SgbnParams& params);

// Residual matrix x - [X 1] * theta, one column per node. Shared by the
// likelihood, the fitting error and the gradient features.
Matrix residuals(const Dataset& x, const SgbnParams& params);

// Thresholds |theta| > tau into a directed structure; the bias row is ignored.
AdjacencyStructure structure_of(const SgbnParams& params, double tau);

constexpr double kDefaultEdgeThreshold = 0.01;

}  // namespace sgbn
