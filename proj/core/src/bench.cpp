#include "sgbn/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace sgbn {

using nlohmann::json;

AdjacencyStructure BenchmarkNetwork::structure() const {
  AdjacencyStructure s = AdjacencyStructure::empty(m);
  for (const auto& [i, j] : arcs) s.g(i, j) = 1;
  return s;
}

void BenchmarkNetwork::validate() const {
  if (m < 1) throw std::invalid_argument("network needs at least one node");
  for (const auto& [i, j] : arcs) {
    if (i < 0 || i >= m || j < 0 || j >= m)
      throw std::invalid_argument("arc endpoint out of range in network '" + name + "'");
    if (i == j) throw std::invalid_argument("self loop in network '" + name + "'");
  }
  if (!is_dag(structure()))
    throw std::invalid_argument("network '" + name + "' contains a directed cycle");
}

BenchmarkNetwork builtin_chain(int m) {
  if (m < 1) throw std::invalid_argument("chain needs at least one node");
  BenchmarkNetwork net;
  net.name = "chain";
  net.m = m;
  for (int i = 0; i + 1 < m; ++i) net.arcs.emplace_back(i, i + 1);
  return net;
}

BenchmarkNetwork load_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": parse failure: " + e.what());
  }
  BenchmarkNetwork net;
  try {
    net.name = j.at("name").get<std::string>();
    net.m = j.at("m").get<int>();
    for (const auto& arc : j.at("arcs")) {
      const int from = arc.at(0).get<int>();
      const int to = arc.at(1).get<int>();
      net.arcs.emplace_back(from - 1, to - 1);  // file is 1-based
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(path + ": bad structure file: " + e.what());
  }
  net.validate();
  return net;
}

SgbnParams sample_model(const BenchmarkNetwork& net, Rng& rng) {
  net.validate();
  SgbnParams theta = SgbnParams::zeros(net.m);
  for (const auto& [i, j] : net.arcs) {
    const double magnitude = rng.uniform(0.5, 1.0);
    theta.theta(i, j) = rng.coin() ? magnitude : -magnitude;
  }
  return theta;
}

namespace {

Matrix simulate_rows(const SgbnParams& theta, const std::vector<int>& topo, int n, Rng& rng) {
  const int m = theta.m;
  Matrix x(n, m);
  for (int i = 0; i < n; ++i) {
    for (int v : topo) {
      double value = rng.normal() + theta.theta(m, v);
      for (int p = 0; p < m; ++p)
        if (theta.theta(p, v) != 0.0) value += theta.theta(p, v) * x(i, p);
      x(i, v) = value;
    }
  }
  return x;
}

}  // namespace

Dataset sample_data(const BenchmarkNetwork& net, int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_data needs n >= 2");
  Rng rng(seed);
  const SgbnParams theta = sample_model(net, rng);
  const std::vector<int> topo = topological_order(net.structure());
  Dataset raw;
  raw.values = simulate_rows(theta, topo, n, rng);
  return standardize(raw);
}

RecoveryMetrics recovery_metrics(const AdjacencyStructure& estimated,
                                 const BenchmarkNetwork& truth) {
  if (estimated.m() != truth.m) throw std::invalid_argument("recovery_metrics: node count mismatch");
  const AdjacencyStructure truth_g = truth.structure();
  RecoveryMetrics out;
  for (int i = 0; i < truth.m; ++i)
    for (int j = 0; j < truth.m; ++j) {
      if (estimated.g(i, j) && !truth_g.g(i, j)) ++out.false_edges;
      if (!estimated.g(i, j) && truth_g.g(i, j)) ++out.missing_edges;
    }
  out.total_errors = out.false_edges + out.missing_edges;
  out.pdag_errors = pdag_errors(estimated, truth);
  return out;
}

int cpdag_mismatch(const Cpdag& a, const Cpdag& b) {
  int count = 0;
  auto status = [](const Cpdag& c, int i, int j) {
    // 0 undirected, 1 compelled i->j, 2 compelled j->i
    if (c.compelled.count({i, j})) return 1;
    if (c.compelled.count({j, i})) return 2;
    return 0;
  };
  for (const auto& e : a.skeleton) {
    if (!b.skeleton.count(e)) {
      ++count;
      continue;
    }
    if (status(a, e.first, e.second) != status(b, e.first, e.second)) ++count;
  }
  for (const auto& e : b.skeleton)
    if (!a.skeleton.count(e)) ++count;
  return count;
}

int pdag_errors(const AdjacencyStructure& estimated, const BenchmarkNetwork& truth) {
  return cpdag_mismatch(dag_to_cpdag(estimated), dag_to_cpdag(truth.structure()));
}

Dataset permute_columns(const Dataset& x, const std::vector<int>& perm) {
  if (static_cast<Eigen::Index>(perm.size()) != x.cols())
    throw std::invalid_argument("permutation length mismatch");
  Dataset out = x;
  for (std::size_t j = 0; j < perm.size(); ++j) {
    out.values.col(static_cast<Eigen::Index>(j)) = x.values.col(perm[j]);
    if (!x.names.empty()) out.names[j] = x.names[static_cast<std::size_t>(perm[j])];
  }
  return out;
}

SgbnParams unpermute_theta(const SgbnParams& theta, const std::vector<int>& perm) {
  // theta indexes permuted variables: local k corresponds to original perm[k]
  const int m = theta.m;
  SgbnParams out = SgbnParams::zeros(m);
  for (int a = 0; a < m; ++a)
    for (int q = 0; q < m; ++q) out.theta(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(q)]) = theta.theta(a, q);
  for (int q = 0; q < m; ++q) out.theta(m, perm[static_cast<std::size_t>(q)]) = theta.theta(m, q);
  return out;
}

PermutationInvarianceResult permutation_invariance_test(const Dataset& x,
                                                        const OrConfig& fit_config, int trials,
                                                        std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  const SgbnParams base = fit_or_sgbn(x, fit_config).theta;
  const Vector base_flat = Eigen::Map<const Vector>(base.theta.data(), base.theta.size());
  const double base_mean = base_flat.mean();

  Rng root(seed);
  double dist_acc = 0.0, corr_acc = 0.0;
  const int m = static_cast<int>(x.cols());
  for (int t = 0; t < trials; ++t) {
    Rng trial = root.split(static_cast<std::uint64_t>(t));
    const std::vector<int> perm = trial.permutation(m);
    const SgbnParams fitted = fit_or_sgbn(permute_columns(x, perm), fit_config).theta;
    const SgbnParams restored = unpermute_theta(fitted, perm);

    const Vector flat = Eigen::Map<const Vector>(restored.theta.data(), restored.theta.size());
    dist_acc += (flat - base_flat).norm();
    const double f_mean = flat.mean();
    const double num = ((flat.array() - f_mean) * (base_flat.array() - base_mean)).sum();
    const double den = std::sqrt((flat.array() - f_mean).square().sum() *
                                 (base_flat.array() - base_mean).square().sum());
    corr_acc += den > 0.0 ? num / den : 1.0;
  }
  return {dist_acc / trials, corr_acc / trials};
}

TwoClassData make_two_class(int m, int n_per_class, double perturb_fraction, double perturb_scale,
                            std::uint64_t seed) {
  if (m < 1 || n_per_class < 2) throw std::invalid_argument("make_two_class: bad sizes");
  if (perturb_fraction < 0.0 || perturb_fraction > 1.0)
    throw std::invalid_argument("perturb_fraction must be in [0, 1]");

  Rng rng(seed);

  // random DAG: random ordering, forward edges kept with probability 2/(m-1)
  // (about m expected arcs), then a second pass that guarantees a connected
  // spine so every run carries usable structure
  TwoClassData out;
  out.structure.name = "two-class";
  out.structure.m = m;
  const std::vector<int> order = rng.permutation(m);
  const double p_edge = m > 1 ? std::min(1.0, 2.0 / (m - 1)) : 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (rng.uniform() < p_edge)
        out.structure.arcs.emplace_back(order[static_cast<std::size_t>(a)],
                                        order[static_cast<std::size_t>(b)]);
  for (int a = 0; a + 1 < m; ++a) {
    const int from = order[static_cast<std::size_t>(a)], to = order[static_cast<std::size_t>(a + 1)];
    if (!std::count(out.structure.arcs.begin(), out.structure.arcs.end(),
                    std::make_pair(from, to)))
      out.structure.arcs.emplace_back(from, to);
  }
  out.structure.validate();

  out.truth1 = sample_model(out.structure, rng);
  out.truth2 = out.truth1;
  const auto n_arcs = out.structure.arcs.size();
  if (perturb_scale != 0.0 && perturb_fraction > 0.0 && n_arcs > 0) {
    const auto idx = rng.permutation(static_cast<int>(n_arcs));
    const auto n_perturb = static_cast<std::size_t>(
        std::max(1.0, std::round(perturb_fraction * static_cast<double>(n_arcs))));
    for (std::size_t t = 0; t < n_perturb && t < n_arcs; ++t) {
      const auto& [i, j] = out.structure.arcs[static_cast<std::size_t>(idx[t])];
      out.truth2.theta(i, j) += rng.coin() ? perturb_scale : -perturb_scale;
    }
  }

  const std::vector<int> topo = topological_order(out.structure.structure());
  out.class1.values = simulate_rows(out.truth1, topo, n_per_class, rng);
  out.class1.labels.assign(static_cast<std::size_t>(n_per_class), 1);
  out.class2.values = simulate_rows(out.truth2, topo, n_per_class, rng);
  out.class2.labels.assign(static_cast<std::size_t>(n_per_class), 2);
  return out;
}

}  // namespace sgbn
