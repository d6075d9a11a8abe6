#include "sgbn/model.hpp"

#include <cmath>

namespace sgbn {

namespace {
constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;  // log(sqrt(2*pi))
}

void SgbnParams::validate() const {
  if (m < 1) throw std::invalid_argument("model needs at least one node");
  if (theta.rows() != m + 1 || theta.cols() != m)
    throw std::invalid_argument("theta must be (m+1) x m");
  if (!theta.allFinite()) throw std::invalid_argument("theta contains non-finite entries");
  for (int j = 0; j < m; ++j)
    if (theta(j, j) != 0.0) throw std::invalid_argument("theta diagonal must be zero (no self loop)");
}

void NoiseModel::validate() const {
  if (sigma.size() < 1) throw std::invalid_argument("noise model is empty");
  if (!(sigma.array() > 0.0).all()) throw std::invalid_argument("all sigma must be positive");
}

double log_likelihood(const Vector& x, const SgbnParams& params, const NoiseModel& noise) {
  const int m = params.m;
  if (x.size() != m) throw std::invalid_argument("sample dimension does not match model");
  if (noise.sigma.size() != m) throw std::invalid_argument("noise dimension does not match model");

  double ll = 0.0;
  for (int j = 0; j < m; ++j) {
    const double pred = x.dot(params.theta.col(j).head(m)) + params.theta(m, j);
    const double r = x(j) - pred;
    const double s = noise.sigma(j);
    ll += -r * r / (2.0 * s * s) - (kLogSqrt2Pi + std::log(s));
  }
  if (!std::isfinite(ll)) throw std::invalid_argument("non-finite log likelihood");
  return ll;
}

Matrix residuals(const Dataset& x, const SgbnParams& params) {
  if (x.cols() != params.m) throw std::invalid_argument("dataset dimension does not match model");
  // r(:, j) = x(:, j) - X theta_head(:, j) - bias_j
  Matrix r = x.values - x.values * params.theta.topRows(params.m);
  r.rowwise() -= params.theta.row(params.m);
  return r;
}

double fitting_error(const Dataset& x, const SgbnParams& params) {
  return residuals(x, params).squaredNorm();
}

AdjacencyStructure structure_of(const SgbnParams& params, double tau) {
  if (tau < 0.0) throw std::invalid_argument("tau must be nonnegative");
  AdjacencyStructure s = AdjacencyStructure::empty(params.m);
  for (int i = 0; i < params.m; ++i)
    for (int j = 0; j < params.m; ++j)
      if (i != j && std::abs(params.theta(i, j)) > tau) s.g(i, j) = 1;
  return s;
}

}  // namespace sgbn
