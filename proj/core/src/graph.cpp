#include "treepgd/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "treepgd/errors.hpp"

namespace treepgd {

Graph::Graph(int p, std::vector<Edge> edges) : p_(p), edges_(std::move(edges)) {
  if (p_ < 1) throw DataError("graph must have at least one vertex");
  std::set<std::pair<int, int>> seen;
  adjacency_.assign(p_, {});
  for (const Edge& e : edges_) {
    if (e.i < 0 || e.i >= p_ || e.j < 0 || e.j >= p_)
      throw DataError("edge (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                      ") out of range for p=" + std::to_string(p_));
    if (e.i == e.j) throw DataError("self-loop at vertex " + std::to_string(e.i));
    auto key = std::minmax(e.i, e.j);
    if (!seen.insert(key).second)
      throw DataError("duplicate edge (" + std::to_string(e.i) + "," + std::to_string(e.j) + ")");
    adjacency_[e.i].push_back(e.j);
    adjacency_[e.j].push_back(e.i);
  }
}

namespace {

// Returns -1 if connected, else the smallest unreachable vertex.
int first_unreachable(const Graph& g) {
  const int p = g.num_vertices();
  std::vector<char> seen(p, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  for (int v = 0; v < p; ++v)
    if (!seen[v]) return v;
  return -1;
}

}  // namespace

bool Graph::is_connected() const { return first_unreachable(*this) < 0; }

void Graph::require_connected() const {
  int v = first_unreachable(*this);
  if (v >= 0)
    throw DataError("graph is not connected: vertex " + std::to_string(v) +
                    " is unreachable from vertex 0");
}

Graph Graph::load(std::istream& in) {
  std::string line;
  int p = -1, m = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    if (p < 0) {
      if (!(ls >> p >> m)) throw DataError("bad edge-list header, expected 'p m'");
      edges.reserve(static_cast<std::size_t>(std::max(m, 0)));
    } else {
      Edge e;
      if (!(ls >> e.i >> e.j)) throw DataError("bad edge line: '" + line + "'");
      edges.push_back(e);
    }
  }
  if (p < 0) throw DataError("empty edge-list input");
  if (static_cast<int>(edges.size()) != m)
    throw DataError("edge-list header promised " + std::to_string(m) + " edges, got " +
                    std::to_string(edges.size()));
  return Graph(p, std::move(edges));
}

Graph Graph::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open graph file: " + path);
  return load(in);
}

void Graph::save(std::ostream& out) const {
  out << p_ << ' ' << edges_.size() << '\n';
  for (const Edge& e : edges_) out << e.i << ' ' << e.j << '\n';
}

void Graph::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open output file: " + path);
  save(out);
}

std::vector<double> gradient(const Graph& g, const std::vector<double>& theta) {
  if (static_cast<int>(theta.size()) != g.num_vertices())
    throw DataError("gradient: theta has length " + std::to_string(theta.size()) +
                    ", graph has p=" + std::to_string(g.num_vertices()));
  std::vector<double> out;
  out.reserve(g.edges().size());
  for (const Edge& e : g.edges()) out.push_back(theta[e.i] - theta[e.j]);
  return out;
}

int gradient_sparsity(const Graph& g, const std::vector<double>& theta, double tol) {
  if (tol < 0) throw ParameterError("gradient_sparsity: tol must be nonnegative");
  if (static_cast<int>(theta.size()) != g.num_vertices())
    throw DataError("gradient_sparsity: theta length mismatch");
  int count = 0;
  for (const Edge& e : g.edges())
    if (std::abs(theta[e.i] - theta[e.j]) > tol) ++count;
  return count;
}

Partition induce_partition(const Graph& g, const std::vector<double>& theta, double tol) {
  if (static_cast<int>(theta.size()) != g.num_vertices())
    throw DataError("induce_partition: theta length mismatch");
  g.require_connected();
  const int p = g.num_vertices();
  Partition part;
  part.block_id.assign(p, -1);
  std::vector<int> stack;
  for (int v = 0; v < p; ++v) {
    if (part.block_id[v] >= 0) continue;
    const int label = part.block_count++;
    part.block_id[v] = label;
    stack.push_back(v);
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      for (int b : g.neighbors(a)) {
        if (part.block_id[b] >= 0) continue;
        if (std::abs(theta[a] - theta[b]) <= tol) {
          part.block_id[b] = label;
          stack.push_back(b);
        }
      }
    }
  }
  return part;
}

std::vector<double> project_onto_partition(const Partition& part, const std::vector<double>& u) {
  if (u.size() != part.block_id.size())
    throw DataError("project_onto_partition: vector length mismatch");
  std::vector<double> sum(part.block_count, 0.0);
  std::vector<int> count(part.block_count, 0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    sum[part.block_id[i]] += u[i];
    ++count[part.block_id[i]];
  }
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = sum[part.block_id[i]] / count[part.block_id[i]];
  return out;
}

}  // namespace treepgd
