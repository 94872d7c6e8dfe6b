#pragma once

#include <vector>

#include "treepgd/grid.hpp"
#include "treepgd/tree.hpp"

namespace treepgd {

// Independent correctness oracles for the projection DP. Deliberately share
// no code with the production implementation.

struct OracleResult {
  std::vector<double> theta;
  double objective = 0.0;
};

// Exhaustive search over all edge-cut subsets of size <= sparsity and, for
// each resulting partition, the best grid value per block. Refuses instances
// with more than max_subsets candidate cut sets.
OracleResult brute_force_project(const std::vector<double>& u, const RootedTree& tree,
                                 int sparsity, const GridSpec& grid,
                                 long long max_subsets = 1 << 20);

struct LineSegmentation {
  std::vector<double> theta;      // segment means, expanded per coordinate
  std::vector<int> boundaries;    // indices where a new segment starts (excluding 0)
  double objective = 0.0;
  // best_cost[k][j]: minimal SSE of u[0..j] with exactly k+1 mean-fit segments.
  std::vector<std::vector<double>> best_cost;
};

// Optimal partition of u into at most sparsity+1 contiguous segments,
// each fit by its mean. O(p^2 * sparsity) with prefix sums.
LineSegmentation exact_line_projection(const std::vector<double>& u, int sparsity);

}  // namespace treepgd
