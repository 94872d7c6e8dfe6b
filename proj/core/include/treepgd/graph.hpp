#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace treepgd {

struct Edge {
  int i = 0;
  int j = 0;
};

inline bool operator==(const Edge& a, const Edge& b) { return a.i == b.i && a.j == b.j; }

// Undirected graph on vertices 0..p-1. Edge order is insertion order and is
// the canonical order for gradient entries. Immutable after construction.
class Graph {
 public:
  Graph(int p, std::vector<Edge> edges);

  int num_vertices() const { return p_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adjacency_[v]; }

  bool is_connected() const;
  // Throws DataError naming an unreachable vertex if not connected.
  void require_connected() const;

  // Edge-list text format: first line "p m", then m lines "i j" (0-based).
  // Lines starting with '#' are skipped.
  static Graph load(std::istream& in);
  static Graph load_file(const std::string& path);
  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;

 private:
  int p_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

// Partition of the vertices into labeled blocks. Labels are 0..block_count-1,
// assigned in order of each block's smallest vertex.
struct Partition {
  std::vector<int> block_id;
  int block_count = 0;
};

// Discrete gradient: entry k = theta[i] - theta[j] for edge k = (i, j).
std::vector<double> gradient(const Graph& g, const std::vector<double>& theta);

// Number of edges with |theta_i - theta_j| > tol.
int gradient_sparsity(const Graph& g, const std::vector<double>& theta, double tol = 0.0);

// Connected components of the subgraph keeping edges with |theta_i - theta_j| <= tol.
Partition induce_partition(const Graph& g, const std::vector<double>& theta, double tol = 0.0);

// Orthogonal projection onto the subspace of vectors constant on each block:
// blockwise means.
std::vector<double> project_onto_partition(const Partition& part, const std::vector<double>& u);

}  // namespace treepgd
