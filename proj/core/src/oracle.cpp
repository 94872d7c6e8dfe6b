#include "treepgd/oracle.hpp"

#include <algorithm>
#include <limits>

#include "treepgd/errors.hpp"

namespace treepgd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int find_root(std::vector<int>& uf, int x) {
  while (uf[x] != x) {
    uf[x] = uf[uf[x]];
    x = uf[x];
  }
  return x;
}

}  // namespace

OracleResult brute_force_project(const std::vector<double>& u, const RootedTree& tree,
                                 int sparsity, const GridSpec& grid, long long max_subsets) {
  const int p = tree.p;
  if (static_cast<int>(u.size()) != p) throw DataError("brute_force_project: length mismatch");
  if (sparsity < 0) throw ParameterError("sparsity must be >= 0");
  const int m = p - 1;
  if (m > 24 || (1LL << m) > max_subsets)
    throw ParameterError("brute_force_project: instance too large for exhaustive search");
  const int G = grid.size();

  OracleResult best;
  best.objective = kInf;
  std::vector<int> uf(p);
  std::vector<double> theta(p);

  for (long long mask = 0; mask < (1LL << m); ++mask) {
    if (__builtin_popcountll(static_cast<unsigned long long>(mask)) > sparsity) continue;
    for (int v = 0; v < p; ++v) uf[v] = v;
    for (int k = 0; k < m; ++k) {
      if (mask & (1LL << k)) continue;  // cut edge
      int a = find_root(uf, tree.edges[k].i);
      int b = find_root(uf, tree.edges[k].j);
      if (a != b) uf[a] = b;
    }
    // Best grid value per block.
    for (int r = 0; r < p; ++r) {
      if (find_root(uf, r) != r) continue;
      double block_best = kInf;
      double block_value = grid.lo;
      for (int c = 0; c < G; ++c) {
        const double cv = grid.value(c);
        double sse = 0.0;
        for (int v = 0; v < p; ++v) {
          if (find_root(uf, v) != r) continue;
          const double d = cv - u[v];
          sse += d * d;
        }
        if (sse < block_best) {
          block_best = sse;
          block_value = cv;
        }
      }
      for (int v = 0; v < p; ++v)
        if (find_root(uf, v) == r) theta[v] = block_value;
    }
    double obj = 0.0;
    for (int v = 0; v < p; ++v) {
      const double d = theta[v] - u[v];
      obj += d * d;
    }
    if (obj < best.objective) {
      best.objective = obj;
      best.theta = theta;
    }
  }
  return best;
}

LineSegmentation exact_line_projection(const std::vector<double>& u, int sparsity) {
  const int p = static_cast<int>(u.size());
  if (p == 0) throw DataError("exact_line_projection: empty input");
  if (sparsity < 0) throw ParameterError("sparsity must be >= 0");
  const int K = std::min(sparsity, p - 1);

  // Prefix sums for O(1) segment SSE queries.
  std::vector<double> ps(p + 1, 0.0), ps2(p + 1, 0.0);
  for (int i = 0; i < p; ++i) {
    ps[i + 1] = ps[i] + u[i];
    ps2[i + 1] = ps2[i] + u[i] * u[i];
  }
  auto sse = [&](int a, int b) {  // inclusive [a, b]
    const int len = b - a + 1;
    const double s = ps[b + 1] - ps[a];
    return ps2[b + 1] - ps2[a] - s * s / len;
  };

  // cost[k][j]: minimal SSE of u[0..j] with exactly k+1 segments.
  std::vector<std::vector<double>> cost(K + 1, std::vector<double>(p, kInf));
  std::vector<std::vector<int>> arg(K + 1, std::vector<int>(p, -1));
  for (int j = 0; j < p; ++j) cost[0][j] = sse(0, j);
  for (int k = 1; k <= K; ++k) {
    for (int j = k; j < p; ++j) {
      double best = kInf;
      int best_i = -1;
      for (int i = k - 1; i < j; ++i) {
        const double val = cost[k - 1][i] + sse(i + 1, j);
        if (val < best) {
          best = val;
          best_i = i;
        }
      }
      cost[k][j] = best;
      arg[k][j] = best_i;
    }
  }

  LineSegmentation out;
  out.objective = cost[K][p - 1];
  out.best_cost = cost;
  // Backtrack the segment boundaries.
  std::vector<int> starts;
  int j = p - 1;
  for (int k = K; k >= 1; --k) {
    const int i = arg[k][j];
    starts.push_back(i + 1);
    j = i;
  }
  std::sort(starts.begin(), starts.end());
  out.boundaries = starts;
  out.theta.resize(p);
  int seg_start = 0;
  starts.push_back(p);
  for (int b : starts) {
    const double mean = (ps[b] - ps[seg_start]) / (b - seg_start);
    for (int i = seg_start; i < b; ++i) out.theta[i] = mean;
    seg_start = b;
  }
  return out;
}

}  // namespace treepgd
