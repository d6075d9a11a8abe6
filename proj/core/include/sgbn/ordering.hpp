#pragma once

#include <utility>
#include <vector>

#include "sgbn/model.hpp"
#include "sgbn/solvers.hpp"

namespace sgbn {

// Witness that a weighted structure is acyclic, by way of a real-valued
// topological ordering. The constraint families are
//   (a)  o_j - o_i >= delta/m - upsilon(i, j)     for all i != j
//   (b)  upsilon(i, j) >= 0
//   (c)  upsilon(i, j) * theta(i, j) = 0
//   (d)  0 <= o_i <= delta
// Wherever theta has an edge, (c) forces upsilon to vanish and (a) then pins
// the edge forward in the ordering. The diagonal of upsilon is unused.
struct OrderingCertificate {
  Vector o;
  Matrix upsilon;
  double delta = 1.0;
};

bool verify_certificate(const SgbnParams& theta, const OrderingCertificate& cert,
                        double tol = 1e-8);

struct OrderingSolution {
  OrderingCertificate cert;
  double objective = 0.0;  // sum over entries of upsilon(i,j) * |theta(i,j)|
};

// Minimizes sum_ij upsilon_ij |theta_ij| over certificates satisfying (a),
// (b), (d). Zero objective iff the nonzero pattern of theta is a DAG. Only
// the ordered pairs with theta != 0 enter the LP; every other off-diagonal
// entry is set to (1/m + 1) * delta, which satisfies (a) for any o.
OrderingSolution solve_ordering(const SgbnParams& theta, double delta);

// Ordered pairs (i, j), i != j, with theta(i, j) != 0: the only pairs whose
// ordering constraints can bind.
std::vector<std::pair<int, int>> active_constraints(const SgbnParams& theta);

// Threshold above which the acyclicity penalty weight provably forces the
// single-class fit to emit a DAG:
//   [2m(m-2)(n-1)^2 + m*lambda1*(2n-2-lambda1)] / [lambda1*(1+m)*delta]
double lambda_dag_bound(int m, int n, double lambda1, double delta);

}  // namespace sgbn
