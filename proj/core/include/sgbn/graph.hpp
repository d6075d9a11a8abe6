#pragma once

#include <Eigen/Dense>
#include <set>
#include <utility>

namespace sgbn {

// Directed edge structure: g(i, j) = 1 iff edge i -> j.
struct AdjacencyStructure {
  Eigen::MatrixXi g;

  static AdjacencyStructure empty(int m) { return AdjacencyStructure{Eigen::MatrixXi::Zero(m, m)}; }

  int m() const { return static_cast<int>(g.rows()); }
  int edge_count() const { return g.sum(); }
  bool has_edge(int i, int j) const { return g(i, j) != 0; }
  void add_edge(int i, int j) { g(i, j) = 1; }
};

// Directed path structure: p(i, j) = 1 iff a path i -> ... -> j of length >= 1 exists.
struct ReachabilityMatrix {
  Eigen::MatrixXi p;
};

// Completed partially directed graph: the canonical representative of a
// Markov equivalence class. Edges are stored once in the skeleton (i < j);
// compelled holds the directed subset whose orientation every member of the
// class shares.
struct Cpdag {
  int m = 0;
  std::set<std::pair<int, int>> skeleton;   // unordered pairs, first < second
  std::set<std::pair<int, int>> compelled;  // directed pairs (from, to)

  bool operator==(const Cpdag& other) const {
    return m == other.m && skeleton == other.skeleton && compelled == other.compelled;
  }
};

ReachabilityMatrix reachability(const AdjacencyStructure& g);

bool is_dag(const AdjacencyStructure& g);

// Returns any topological order of a DAG (smallest-index-first among ready
// nodes, so the result is deterministic). Throws on cyclic input.
std::vector<int> topological_order(const AdjacencyStructure& g);

// Skeleton + v-structure detection followed by the four Meek orientation
// rules. Requires a DAG.
Cpdag dag_to_cpdag(const AdjacencyStructure& g);

}  // namespace sgbn
