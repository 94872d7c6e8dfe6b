#pragma once

#include <cstdint>
#include <vector>

#include "treepgd/grid.hpp"
#include "treepgd/tree.hpp"

namespace treepgd {

// Forward-pass state of the tree projection, indexed by (grid value, budget).
// f(v, c, s) is the minimal squared error over the subtree below v among
// grid-valued vectors with at most s gradient nonzeros in that subtree and
// value c at v. Budgets above p-1 never help, so tables are allocated up to
// budget_cap = min(S, p-1).
struct DpTable {
  int requested_sparsity = 0;
  int budget_cap = 0;  // tables cover budgets 0..budget_cap
  GridSpec grid;

  // Root table, row-major over (c, s): root_f[c * (budget_cap+1) + s].
  std::vector<double> root_f;

  // Backtracking records, one per child, in the tree's children order.
  struct ChildRec {
    std::vector<std::uint8_t> break_edge;   // (c, s) -> 1 if the edge to this child is cut
    std::vector<std::uint16_t> min_argmin;  // s -> argmin_c f_child(c, s)
    std::vector<std::uint16_t> split;       // (c, s) -> budget given to this child
                                            // (empty for a first/only child: it gets the rest)
  };
  std::vector<std::vector<ChildRec>> records;  // per vertex

  // Full per-vertex f tables, only populated when dp_forward is called with
  // retain_tables = true (test/debug use).
  std::vector<std::vector<double>> f;

  double value_at(int v, int c, int s) const { return f[v][c * (budget_cap + 1) + s]; }
};

struct ProjectionResult {
  std::vector<double> theta;  // every entry is a grid point
  double objective = 0.0;     // recomputed ||theta - u||^2
  int used_sparsity = 0;      // gradient nonzeros of theta over the tree
};

DpTable dp_forward(const std::vector<double>& u, const RootedTree& tree, int sparsity,
                   const GridSpec& grid, bool retain_tables = false);

ProjectionResult dp_backtrack(const DpTable& table, const RootedTree& tree,
                              const std::vector<double>& u);

// Exact minimizer of ||theta - u||^2 over grid-valued theta with at most
// `sparsity` gradient nonzeros on the tree.
ProjectionResult project_tree(const std::vector<double>& u, const RootedTree& tree, int sparsity,
                              const GridSpec& grid);

}  // namespace treepgd
