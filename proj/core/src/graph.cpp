#include "sgbn/graph.hpp"

#include <stdexcept>
#include <vector>

namespace sgbn {

ReachabilityMatrix reachability(const AdjacencyStructure& g) {
  const int m = g.m();
  Eigen::MatrixXi p = g.g;
  // boolean Floyd-Warshall closure over paths of length >= 1
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i) {
      if (!p(i, k)) continue;
      for (int j = 0; j < m; ++j)
        if (p(k, j)) p(i, j) = 1;
    }
  return ReachabilityMatrix{std::move(p)};
}

bool is_dag(const AdjacencyStructure& g) {
  const int m = g.m();
  enum : int { kWhite = 0, kGray = 1, kBlack = 2 };
  std::vector<int> color(static_cast<std::size_t>(m), kWhite);
  std::vector<std::pair<int, int>> stack;  // (node, next child index)
  for (int s = 0; s < m; ++s) {
    if (color[static_cast<std::size_t>(s)] != kWhite) continue;
    stack.emplace_back(s, 0);
    color[static_cast<std::size_t>(s)] = kGray;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      bool descended = false;
      for (int v = next; v < m; ++v) {
        if (!g.g(u, v)) continue;
        next = v + 1;
        if (color[static_cast<std::size_t>(v)] == kGray) return false;
        if (color[static_cast<std::size_t>(v)] == kWhite) {
          color[static_cast<std::size_t>(v)] = kGray;
          stack.emplace_back(v, 0);
          descended = true;
          break;
        }
      }
      if (!descended) {
        color[static_cast<std::size_t>(u)] = kBlack;
        stack.pop_back();
      }
    }
  }
  return true;
}

std::vector<int> topological_order(const AdjacencyStructure& g) {
  const int m = g.m();
  std::vector<int> indeg(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (g.g(i, j)) ++indeg[static_cast<std::size_t>(j)];

  std::vector<int> order;
  std::vector<bool> placed(static_cast<std::size_t>(m), false);
  for (int step = 0; step < m; ++step) {
    int pick = -1;
    for (int v = 0; v < m; ++v)
      if (!placed[static_cast<std::size_t>(v)] && indeg[static_cast<std::size_t>(v)] == 0) {
        pick = v;
        break;
      }
    if (pick < 0) throw std::invalid_argument("graph has a directed cycle");
    placed[static_cast<std::size_t>(pick)] = true;
    order.push_back(pick);
    for (int j = 0; j < m; ++j)
      if (g.g(pick, j)) --indeg[static_cast<std::size_t>(j)];
  }
  return order;
}

namespace {

struct Pdag {
  int m;
  Eigen::MatrixXi dir;  // dir(i,j) = 1: edge oriented i -> j
  Eigen::MatrixXi und;  // symmetric: edge present and currently undirected

  bool adjacent(int i, int j) const { return und(i, j) || dir(i, j) || dir(j, i); }

  void orient(int i, int j) {
    und(i, j) = und(j, i) = 0;
    dir(i, j) = 1;
  }
};

bool apply_meek_rules(Pdag& p) {
  const int m = p.m;
  bool changed = false;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (!p.und(a, b)) continue;

      // R1: c -> a, a - b, c and b nonadjacent  =>  a -> b
      bool oriented = false;
      for (int c = 0; c < m && !oriented; ++c)
        if (p.dir(c, a) && !p.adjacent(c, b)) {
          p.orient(a, b);
          oriented = true;
        }

      // R2: a -> c -> b with a - b  =>  a -> b
      for (int c = 0; c < m && !oriented; ++c)
        if (p.dir(a, c) && p.dir(c, b)) {
          p.orient(a, b);
          oriented = true;
        }

      // R3: a - c -> b, a - d -> b, c and d nonadjacent  =>  a -> b
      for (int c = 0; c < m && !oriented; ++c) {
        if (!(p.und(a, c) && p.dir(c, b))) continue;
        for (int d = 0; d < m && !oriented; ++d) {
          if (d == c || !(p.und(a, d) && p.dir(d, b))) continue;
          if (!p.adjacent(c, d)) {
            p.orient(a, b);
            oriented = true;
          }
        }
      }

      // R4: a - c, c -> d -> b, c and b nonadjacent, a and d adjacent  =>  a -> b
      for (int c = 0; c < m && !oriented; ++c) {
        if (!p.und(a, c) || p.adjacent(c, b)) continue;
        for (int d = 0; d < m && !oriented; ++d) {
          if (p.dir(c, d) && p.dir(d, b) && p.adjacent(a, d)) {
            p.orient(a, b);
            oriented = true;
          }
        }
      }

      changed = changed || oriented;
    }
  }
  return changed;
}

}  // namespace

Cpdag dag_to_cpdag(const AdjacencyStructure& g) {
  if (!is_dag(g)) throw std::invalid_argument("dag_to_cpdag requires acyclic input");
  const int m = g.m();

  Pdag p{m, Eigen::MatrixXi::Zero(m, m), Eigen::MatrixXi::Zero(m, m)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (g.g(i, j)) p.und(i, j) = p.und(j, i) = 1;

  // Colliders a -> c <- b with a, b nonadjacent keep their DAG orientation.
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < m; ++a) {
      if (!g.g(a, c)) continue;
      for (int b = a + 1; b < m; ++b) {
        if (!g.g(b, c)) continue;
        if (!g.g(a, b) && !g.g(b, a)) {
          p.orient(a, c);
          p.orient(b, c);
        }
      }
    }

  while (apply_meek_rules(p)) {
  }

  Cpdag out;
  out.m = m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (p.dir(i, j)) {
        out.compelled.emplace(i, j);
        out.skeleton.emplace(std::min(i, j), std::max(i, j));
      }
      if (i < j && p.und(i, j)) out.skeleton.emplace(i, j);
    }
  return out;
}

}  // namespace sgbn
