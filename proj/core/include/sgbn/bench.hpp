#pragma once

#include <string>

#include "sgbn/or_sgbn.hpp"
#include "sgbn/rng.hpp"

namespace sgbn {

struct BenchmarkNetwork {
  std::string name;
  int m = 0;
  std::vector<std::pair<int, int>> arcs;  // 0-based directed edges, must form a DAG

  AdjacencyStructure structure() const;
  void validate() const;
};

// Path 1 -> 2 -> ... -> m.
BenchmarkNetwork builtin_chain(int m);

// JSON file {"name": str, "m": int, "arcs": [[i, j], ...]} with 1-based nodes.
BenchmarkNetwork load_structure(const std::string& path);

// Linear-Gaussian simulation: every arc coefficient is drawn uniformly from
// [0.5, 1] with a random sign, nodes are generated in topological order with
// standard normal noise, and the columns are standardized.
SgbnParams sample_model(const BenchmarkNetwork& net, Rng& rng);
Dataset sample_data(const BenchmarkNetwork& net, int n, std::uint64_t seed);

struct RecoveryMetrics {
  int false_edges = 0;
  int missing_edges = 0;
  int total_errors = 0;  // false + missing
  int pdag_errors = 0;
};

RecoveryMetrics recovery_metrics(const AdjacencyStructure& estimated, const BenchmarkNetwork& truth);

// Disagreement between class representatives: one unit per skeleton edge
// present in exactly one of the two CPDAGs, plus one unit per shared skeleton
// edge whose compelled/undirected status or direction differs.
int pdag_errors(const AdjacencyStructure& estimated, const BenchmarkNetwork& truth);
int cpdag_mismatch(const Cpdag& a, const Cpdag& b);

struct PermutationInvarianceResult {
  double mean_distance = 0.0;
  double mean_correlation = 0.0;
};

// Fits once, then for each trial permutes the columns, refits, maps the
// parameters back, and compares against the base fit (Euclidean distance and
// Pearson correlation over the flattened parameter grid, bias row included).
PermutationInvarianceResult permutation_invariance_test(const Dataset& x, const OrConfig& fit_config,
                                                        int trials, std::uint64_t seed);

// Applies `perm` (new column j holds old column perm[j]) to data columns.
Dataset permute_columns(const Dataset& x, const std::vector<int>& perm);
// Maps parameters fitted on permuted data back to the original variable order.
SgbnParams unpermute_theta(const SgbnParams& theta, const std::vector<int>& perm);

struct TwoClassData {
  Dataset class1, class2;      // raw (unstandardized) samples, labels set
  SgbnParams truth1, truth2;   // generating models, for oracle checks
  BenchmarkNetwork structure;  // shared support of both classes
};

// Synthetic two-class generator: one random DAG with sampled coefficients for
// class 1; class 2 copies it and shifts a fraction of the arc coefficients by
// +/- perturb_scale. The class difference lives entirely in edge weights.
TwoClassData make_two_class(int m, int n_per_class, double perturb_fraction, double perturb_scale,
                            std::uint64_t seed);

}  // namespace sgbn
