#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "treepgd/graph.hpp"
#include "treepgd/rng.hpp"

namespace treepgd {

class Rng;

// Spanning tree of a graph together with the DFS traversal that produced it.
// order is the vertex visit order (preorder); parent[order[0]] = -1.
struct DfsTree {
  std::vector<Edge> edges;
  std::vector<int> order;
  std::vector<int> parent;
};

// Degree-capped rooted tree. The root has degree 1 (degree 0 only when p=1),
// and dfs_order is a valid DFS preorder of this tree from its root.
struct RootedTree {
  int p = 0;
  int root = 0;
  int d_max = 2;
  std::vector<int> parent;  // -1 at root
  std::vector<std::vector<int>> children;
  std::vector<int> dfs_order;
  std::vector<Edge> edges;

  int degree(int v) const {
    return static_cast<int>(children[v].size()) + (parent[v] >= 0 ? 1 : 0);
  }
};

enum class TreeMode { fixed_dfs, random_dfs };

struct TreePolicy {
  TreeMode mode = TreeMode::fixed_dfs;
  int d_max = 2;
  std::uint64_t seed = 0;
};

// DFS spanning tree. With rng == nullptr the traversal is deterministic:
// start at vertex 0, neighbors in ascending index order. With rng, the start
// vertex is uniform and each forward step picks a uniform unvisited neighbor.
DfsTree spanning_tree_dfs(const Graph& g, Rng* rng = nullptr);

// Rewires a spanning tree so every vertex keeps at most its first d_max edges
// in DFS order; each removed edge (v,w) becomes (w',w) with w' the vertex
// immediately preceding w in the DFS vertex order. Roots the result at the
// first degree-1 vertex in DFS order.
RootedTree cap_degree(const DfsTree& tree, int d_max);

// spanning_tree_dfs followed by cap_degree. random_dfs derives the RNG stream
// from (policy.seed, iteration), so the same (seed, iteration) always yields
// the same tree.
RootedTree build_tree(const Graph& g, const TreePolicy& policy, int iteration);

// 64-bit fingerprint of the (sorted) edge set, for traces.
std::uint64_t tree_fingerprint(const RootedTree& tree);

// Edge-list serialization with a header comment recording root and d_max.
void save_tree(const RootedTree& tree, std::ostream& out);
void save_tree_file(const RootedTree& tree, const std::string& path);
RootedTree load_tree(std::istream& in);
RootedTree load_tree_file(const std::string& path);

}  // namespace treepgd
