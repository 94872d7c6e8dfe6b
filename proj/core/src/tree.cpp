#include "treepgd/tree.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "treepgd/errors.hpp"
#include "treepgd/rng.hpp"

namespace treepgd {

namespace {

DfsTree deterministic_dfs(const Graph& g, int start) {
  const int p = g.num_vertices();
  DfsTree t;
  t.parent.assign(p, -1);
  t.order.reserve(p);
  std::vector<char> visited(p, 0);
  std::vector<std::vector<int>> sorted_adj(p);
  for (int v = 0; v < p; ++v) {
    sorted_adj[v] = g.neighbors(v);
    std::sort(sorted_adj[v].begin(), sorted_adj[v].end());
  }
  // (vertex, index of next neighbor to try)
  std::vector<std::pair<int, std::size_t>> stack;
  visited[start] = 1;
  t.order.push_back(start);
  stack.emplace_back(start, 0);
  while (!stack.empty()) {
    auto& [v, idx] = stack.back();
    bool advanced = false;
    while (idx < sorted_adj[v].size()) {
      int w = sorted_adj[v][idx++];
      if (!visited[w]) {
        visited[w] = 1;
        t.parent[w] = v;
        t.order.push_back(w);
        t.edges.push_back({v, w});
        stack.emplace_back(w, 0);
        advanced = true;
        break;
      }
    }
    if (!advanced) stack.pop_back();
  }
  return t;
}

DfsTree random_dfs(const Graph& g, Rng& rng) {
  const int p = g.num_vertices();
  DfsTree t;
  t.parent.assign(p, -1);
  t.order.reserve(p);
  std::vector<char> visited(p, 0);
  const int start = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(p)));
  visited[start] = 1;
  t.order.push_back(start);
  std::vector<int> stack{start};
  std::vector<int> candidates;
  while (!stack.empty()) {
    int v = stack.back();
    candidates.clear();
    for (int w : g.neighbors(v))
      if (!visited[w]) candidates.push_back(w);
    if (candidates.empty()) {
      stack.pop_back();
      continue;
    }
    // Sort so the draw is independent of adjacency-list construction order.
    std::sort(candidates.begin(), candidates.end());
    int w = candidates[rng.uniform_index(candidates.size())];
    visited[w] = 1;
    t.parent[w] = v;
    t.order.push_back(w);
    t.edges.push_back({v, w});
    stack.push_back(w);
  }
  return t;
}

// Roots the tree given by `edges` at `root` by a deterministic DFS
// (ascending neighbor order) and fills in all derived fields.
RootedTree root_tree(int p, const std::vector<Edge>& edges, int root, int d_max) {
  RootedTree out;
  out.p = p;
  out.root = root;
  out.d_max = d_max;
  out.parent.assign(p, -1);
  out.children.assign(p, {});
  out.dfs_order.reserve(p);
  std::vector<std::vector<int>> adj(p);
  for (const Edge& e : edges) {
    adj[e.i].push_back(e.j);
    adj[e.j].push_back(e.i);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  std::vector<char> visited(p, 0);
  std::vector<std::pair<int, std::size_t>> stack;
  visited[root] = 1;
  out.dfs_order.push_back(root);
  stack.emplace_back(root, 0);
  while (!stack.empty()) {
    auto& [v, idx] = stack.back();
    bool advanced = false;
    while (idx < adj[v].size()) {
      int w = adj[v][idx++];
      if (!visited[w]) {
        visited[w] = 1;
        out.parent[w] = v;
        out.children[v].push_back(w);
        out.dfs_order.push_back(w);
        out.edges.push_back({v, w});
        stack.emplace_back(w, 0);
        advanced = true;
        break;
      }
    }
    if (!advanced) stack.pop_back();
  }
  if (static_cast<int>(out.dfs_order.size()) != p)
    throw DataError("tree edges do not span all vertices");
  return out;
}

}  // namespace

DfsTree spanning_tree_dfs(const Graph& g, Rng* rng) {
  g.require_connected();
  DfsTree t = rng ? random_dfs(g, *rng) : deterministic_dfs(g, 0);
  if (static_cast<int>(t.order.size()) != g.num_vertices())
    throw DataError("DFS did not reach all vertices");
  return t;
}

RootedTree cap_degree(const DfsTree& tree, int d_max) {
  if (d_max < 2) throw ParameterError("d_max must be >= 2, got " + std::to_string(d_max));
  const int p = static_cast<int>(tree.order.size());
  std::vector<int> pos(p, -1);
  for (int k = 0; k < p; ++k) pos[tree.order[k]] = k;

  // Children in DFS discovery order; a vertex's edges in DFS edge order are
  // its parent edge (if any) followed by its children in this order.
  std::vector<std::vector<int>> kids(p);
  for (int k = 1; k < p; ++k) {
    int w = tree.order[k];
    kids[tree.parent[w]].push_back(w);
  }

  std::vector<int> new_parent = tree.parent;
  for (int v = 0; v < p; ++v) {
    const int allowed = d_max - (tree.parent[v] >= 0 ? 1 : 0);
    for (std::size_t k = static_cast<std::size_t>(allowed); k < kids[v].size(); ++k) {
      int w = kids[v][k];
      new_parent[w] = tree.order[pos[w] - 1];  // DFS predecessor, a leaf of the raw tree
    }
  }

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(p) - 1);
  std::vector<int> degree(p, 0);
  for (int v = 0; v < p; ++v) {
    if (new_parent[v] < 0) continue;
    edges.push_back({new_parent[v], v});
    ++degree[new_parent[v]];
    ++degree[v];
  }

  int root = tree.order[0];
  for (int v : tree.order) {
    if (degree[v] == 1) {
      root = v;
      break;
    }
  }
  return root_tree(p, edges, root, d_max);
}

RootedTree build_tree(const Graph& g, const TreePolicy& policy, int iteration) {
  if (policy.mode == TreeMode::fixed_dfs) {
    return cap_degree(spanning_tree_dfs(g, nullptr), policy.d_max);
  }
  Rng rng = Rng::stream(policy.seed, {0x74726565ULL, static_cast<std::uint64_t>(iteration)});
  return cap_degree(spanning_tree_dfs(g, &rng), policy.d_max);
}

std::uint64_t tree_fingerprint(const RootedTree& tree) {
  std::vector<std::pair<int, int>> sorted;
  sorted.reserve(tree.edges.size());
  for (const Edge& e : tree.edges) sorted.push_back(std::minmax(e.i, e.j));
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 0x100000001b3ULL;
  };
  mix(static_cast<std::uint64_t>(tree.p));
  for (const auto& [a, b] : sorted) {
    mix(static_cast<std::uint64_t>(a));
    mix(static_cast<std::uint64_t>(b));
  }
  return h;
}

void save_tree(const RootedTree& tree, std::ostream& out) {
  out << "# root=" << tree.root << " d_max=" << tree.d_max << '\n';
  out << tree.p << ' ' << tree.edges.size() << '\n';
  for (const Edge& e : tree.edges) out << e.i << ' ' << e.j << '\n';
}

void save_tree_file(const RootedTree& tree, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  save_tree(tree, out);
}

RootedTree load_tree(std::istream& in) {
  std::string line;
  int root = -1, d_max = -1, p = -1, m = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t r = line.find("root=");
      std::size_t d = line.find("d_max=");
      if (r != std::string::npos) root = std::stoi(line.substr(r + 5));
      if (d != std::string::npos) d_max = std::stoi(line.substr(d + 6));
      continue;
    }
    std::istringstream ls(line);
    if (p < 0) {
      if (!(ls >> p >> m)) throw DataError("bad tree header, expected 'p m'");
    } else {
      Edge e;
      if (!(ls >> e.i >> e.j)) throw DataError("bad tree edge line: '" + line + "'");
      edges.push_back(e);
    }
  }
  if (p < 0) throw DataError("empty tree input");
  if (static_cast<int>(edges.size()) != m || m != p - 1)
    throw DataError("tree must have exactly p-1 edges");
  if (root < 0 || root >= p) throw DataError("tree file missing a valid '# root=' header");
  if (d_max < 2) throw DataError("tree file missing a valid '# d_max=' header");
  return root_tree(p, edges, root, d_max);
}

RootedTree load_tree_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open tree file: " + path);
  return load_tree(in);
}

}  // namespace treepgd
