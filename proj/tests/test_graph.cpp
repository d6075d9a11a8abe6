#include <doctest.h>

#include <queue>
#include <vector>

#include "sgbn/graph.hpp"
#include "test_util.hpp"

using namespace sgbn;

namespace {

// oracle: breadth-first search from every source
Eigen::MatrixXi bfs_closure(const AdjacencyStructure& g) {
  const int m = g.m();
  Eigen::MatrixXi p = Eigen::MatrixXi::Zero(m, m);
  for (int s = 0; s < m; ++s) {
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < m; ++v)
        if (g.has_edge(u, v) && !seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          p(s, v) = 1;
          q.push(v);
        }
    }
  }
  return p;
}

// oracle: repeated zero-in-degree removal
bool kahn_is_dag(const AdjacencyStructure& g) {
  const int m = g.m();
  std::vector<int> indeg(static_cast<std::size_t>(m), 0);
  std::vector<bool> gone(static_cast<std::size_t>(m), false);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (g.has_edge(i, j)) ++indeg[static_cast<std::size_t>(j)];
  for (int step = 0; step < m; ++step) {
    int pick = -1;
    for (int v = 0; v < m; ++v)
      if (!gone[static_cast<std::size_t>(v)] && indeg[static_cast<std::size_t>(v)] == 0) pick = v;
    if (pick < 0) return false;
    gone[static_cast<std::size_t>(pick)] = true;
    for (int j = 0; j < m; ++j)
      if (g.has_edge(pick, j)) --indeg[static_cast<std::size_t>(j)];
  }
  return true;
}

AdjacencyStructure chain_structure(int m) {
  AdjacencyStructure g = AdjacencyStructure::empty(m);
  for (int i = 0; i + 1 < m; ++i) g.add_edge(i, i + 1);
  return g;
}

// all 3^3 = 27 assignments of {none, ->, <-} to the three node pairs,
// filtered to acyclic: the 25 DAGs on 3 labeled nodes
std::vector<AdjacencyStructure> all_three_node_dags() {
  std::vector<AdjacencyStructure> dags;
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int code = 0; code < 27; ++code) {
    AdjacencyStructure g = AdjacencyStructure::empty(3);
    int c = code;
    for (auto& pair : pairs) {
      const int state = c % 3;
      c /= 3;
      if (state == 1) g.add_edge(pair[0], pair[1]);
      if (state == 2) g.add_edge(pair[1], pair[0]);
    }
    if (kahn_is_dag(g)) dags.push_back(g);
  }
  return dags;
}

std::set<std::pair<int, int>> v_structures(const AdjacencyStructure& g) {
  // encoded as collider pairs (a*3+b -> c) flattened; enough to fingerprint
  std::set<std::pair<int, int>> vs;
  for (int c = 0; c < g.m(); ++c)
    for (int a = 0; a < g.m(); ++a)
      for (int b = a + 1; b < g.m(); ++b)
        if (g.has_edge(a, c) && g.has_edge(b, c) && !g.has_edge(a, b) && !g.has_edge(b, a))
          vs.insert({a * g.m() + b, c});
  return vs;
}

std::set<std::pair<int, int>> skeleton_of(const AdjacencyStructure& g) {
  std::set<std::pair<int, int>> sk;
  for (int i = 0; i < g.m(); ++i)
    for (int j = i + 1; j < g.m(); ++j)
      if (g.has_edge(i, j) || g.has_edge(j, i)) sk.insert({i, j});
  return sk;
}

}  // namespace

TEST_CASE("reachability on a chain and on the empty graph") {
  const auto chain = chain_structure(3);
  const auto p = reachability(chain).p;
  CHECK(p(0, 1) == 1);
  CHECK(p(1, 2) == 1);
  CHECK(p(0, 2) == 1);
  CHECK(p.sum() == 3);

  const auto empty = AdjacencyStructure::empty(4);
  CHECK(reachability(empty).p.sum() == 0);
}

TEST_CASE("reachability equals per-source BFS on 30 random graphs") {
  Rng rng(21);
  for (int rep = 0; rep < 30; ++rep) {
    const int m = rng.uniform_int(2, 8);
    const auto g = sgbn_test::random_digraph(m, 0.3, rng);
    CHECK(reachability(g).p == bfs_closure(g));
  }
}

TEST_CASE("closing the closure changes nothing") {
  Rng rng(22);
  for (int rep = 0; rep < 10; ++rep) {
    const auto g = sgbn_test::random_digraph(6, 0.3, rng);
    const auto once = reachability(g).p;
    AdjacencyStructure as_graph{once};
    CHECK(reachability(as_graph).p == once);
  }
}

TEST_CASE("is_dag trivia") {
  AdjacencyStructure two = AdjacencyStructure::empty(2);
  two.add_edge(0, 1);
  two.add_edge(1, 0);
  CHECK_FALSE(is_dag(two));
  CHECK(is_dag(chain_structure(6)));
}

TEST_CASE("is_dag agrees with the Kahn oracle on 200 random graphs") {
  Rng rng(23);
  for (int rep = 0; rep < 200; ++rep) {
    const int m = rng.uniform_int(2, 8);
    const auto g = sgbn_test::random_digraph(m, rng.uniform(0.1, 0.5), rng);
    CHECK(is_dag(g) == kahn_is_dag(g));
  }
}

TEST_CASE("is_dag iff the closure has a zero diagonal") {
  Rng rng(24);
  for (int rep = 0; rep < 50; ++rep) {
    const auto g = sgbn_test::random_digraph(6, 0.25, rng);
    const auto p = reachability(g).p;
    bool zero_diag = true;
    for (int i = 0; i < 6; ++i) zero_diag = zero_diag && p(i, i) == 0;
    CHECK(is_dag(g) == zero_diag);
  }
}

TEST_CASE("collider arrows are compelled") {
  AdjacencyStructure g = AdjacencyStructure::empty(3);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  const Cpdag c = dag_to_cpdag(g);
  CHECK(c.skeleton.size() == 2);
  CHECK(c.compelled.count({0, 2}) == 1);
  CHECK(c.compelled.count({1, 2}) == 1);
}

TEST_CASE("a chain has no compelled edges") {
  const Cpdag c = dag_to_cpdag(chain_structure(3));
  CHECK(c.skeleton == std::set<std::pair<int, int>>{{0, 1}, {1, 2}});
  CHECK(c.compelled.empty());
}

TEST_CASE("dag_to_cpdag rejects cycles") {
  AdjacencyStructure g = AdjacencyStructure::empty(2);
  g.add_edge(0, 1);
  g.add_edge(1, 0);
  CHECK_THROWS_AS(dag_to_cpdag(g), std::invalid_argument);
}

TEST_CASE("equivalence classes of all 25 three-node DAGs map to one representative each") {
  const auto dags = all_three_node_dags();
  REQUIRE(dags.size() == 25);
  // oracle grouping: identical (skeleton, v-structure set) <=> same class
  for (const auto& a : dags) {
    for (const auto& b : dags) {
      const bool same_class = skeleton_of(a) == skeleton_of(b) && v_structures(a) == v_structures(b);
      CHECK((dag_to_cpdag(a) == dag_to_cpdag(b)) == same_class);
    }
  }
}
