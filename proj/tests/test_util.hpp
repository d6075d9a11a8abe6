#pragma once

// Shared helpers for the test suites. Oracles that double-check library
// results live in the individual test files, not here.

#include <doctest.h>

#include "sgbn/model.hpp"
#include "sgbn/rng.hpp"

namespace sgbn_test {

using sgbn::AdjacencyStructure;
using sgbn::Dataset;
using sgbn::Matrix;
using sgbn::Rng;
using sgbn::SgbnParams;
using sgbn::Vector;

// Random DAG over m nodes: random ordering, forward edges kept with prob p.
inline AdjacencyStructure random_dag(int m, double p, Rng& rng) {
  AdjacencyStructure g = AdjacencyStructure::empty(m);
  const auto order = rng.permutation(m);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (rng.uniform() < p)
        g.add_edge(order[static_cast<std::size_t>(a)], order[static_cast<std::size_t>(b)]);
  return g;
}

// Random directed graph (cycles allowed).
inline AdjacencyStructure random_digraph(int m, double p, Rng& rng) {
  AdjacencyStructure g = AdjacencyStructure::empty(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && rng.uniform() < p) g.add_edge(i, j);
  return g;
}

// Weights on a given structure, optional bias row.
inline SgbnParams theta_for(const AdjacencyStructure& g, Rng& rng, bool with_bias = false) {
  SgbnParams theta = SgbnParams::zeros(g.m());
  for (int i = 0; i < g.m(); ++i)
    for (int j = 0; j < g.m(); ++j)
      if (g.has_edge(i, j)) {
        const double mag = rng.uniform(0.4, 1.2);
        theta.theta(i, j) = rng.coin() ? mag : -mag;
      }
  if (with_bias)
    for (int j = 0; j < g.m(); ++j) theta.theta(g.m(), j) = rng.uniform(-0.3, 0.3);
  return theta;
}

inline Dataset random_raw_dataset(int n, int m, Rng& rng) {
  Dataset d;
  d.values.resize(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) d.values(i, j) = rng.normal() + 0.3 * rng.uniform();
  return d;
}

inline Dataset random_standardized(int n, int m, Rng& rng) {
  return sgbn::standardize(random_raw_dataset(n, m, rng));
}

}  // namespace sgbn_test
