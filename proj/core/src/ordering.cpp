#include "sgbn/ordering.hpp"

#include <cmath>
#include <limits>

namespace sgbn {

bool verify_certificate(const SgbnParams& theta, const OrderingCertificate& cert, double tol) {
  const int m = theta.m;
  if (cert.o.size() != m || cert.upsilon.rows() != m || cert.upsilon.cols() != m) return false;
  if (!(cert.delta > 0.0)) return false;

  const double step = cert.delta / m;
  for (int i = 0; i < m; ++i) {
    if (cert.o(i) < -tol || cert.o(i) > cert.delta + tol) return false;  // (d)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const double u = cert.upsilon(i, j);
      if (u < -tol) return false;                                          // (b)
      if (cert.o(j) - cert.o(i) < step - u - tol) return false;            // (a)
      if (std::abs(u * theta.theta(i, j)) > tol) return false;             // (c)
    }
  }
  return true;
}

std::vector<std::pair<int, int>> active_constraints(const SgbnParams& theta) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < theta.m; ++i)
    for (int j = 0; j < theta.m; ++j)
      if (i != j && theta.theta(i, j) != 0.0) pairs.emplace_back(i, j);
  return pairs;
}

OrderingSolution solve_ordering(const SgbnParams& theta, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("solve_ordering: delta must be positive");
  theta.validate();
  const int m = theta.m;
  const auto active = active_constraints(theta);
  const auto n_active = static_cast<Eigen::Index>(active.size());
  const double inactive_value = (1.0 / m + 1.0) * delta;

  OrderingSolution out;
  out.cert.delta = delta;
  out.cert.o = Vector::Zero(m);
  out.cert.upsilon = Matrix::Constant(m, m, inactive_value);
  out.cert.upsilon.diagonal().setZero();

  if (n_active > 0) {
    // variables: o_1..o_m, then one upsilon per active pair
    LinearProgram lp;
    const Eigen::Index p = m + n_active;
    lp.c = Vector::Zero(p);
    lp.lower = Vector::Zero(p);
    lp.upper = Vector::Constant(p, std::numeric_limits<double>::infinity());
    lp.upper.head(m).setConstant(delta);
    lp.a = Matrix::Zero(n_active, p);
    lp.b = Vector::Constant(n_active, delta / m);
    for (Eigen::Index k = 0; k < n_active; ++k) {
      const auto [i, j] = active[static_cast<std::size_t>(k)];
      lp.c(m + k) = std::abs(theta.theta(i, j));
      lp.a(k, j) = 1.0;   // o_j - o_i + upsilon_ij >= delta/m
      lp.a(k, i) = -1.0;
      lp.a(k, m + k) = 1.0;
    }

    const LpSolution sol = solve_lp(lp);
    out.cert.o = sol.x.head(m);
    for (Eigen::Index k = 0; k < n_active; ++k) {
      const auto [i, j] = active[static_cast<std::size_t>(k)];
      double u = sol.x(m + k);
      if (u < 1e-11) u = 0.0;  // snap simplex residue; (a) still holds within tolerance
      out.cert.upsilon(i, j) = u;
    }
  }

  double obj = 0.0;
  for (const auto& [i, j] : active) obj += out.cert.upsilon(i, j) * std::abs(theta.theta(i, j));
  out.objective = obj;
  return out;
}

double lambda_dag_bound(int m, int n, double lambda1, double delta) {
  if (m < 1) throw std::invalid_argument("lambda_dag_bound: m must be >= 1");
  if (n < 2) throw std::invalid_argument("lambda_dag_bound: n must be >= 2");
  if (!(lambda1 > 0.0)) throw std::invalid_argument("lambda_dag_bound: lambda1 must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("lambda_dag_bound: delta must be positive");
  const double md = m, nd = n;
  const double numerator =
      2.0 * md * (md - 2.0) * (nd - 1.0) * (nd - 1.0) + md * lambda1 * (2.0 * nd - 2.0 - lambda1);
  return numerator / (lambda1 * (1.0 + md) * delta);
}

}  // namespace sgbn
