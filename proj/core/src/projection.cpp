#include "treepgd/projection.hpp"

#include <algorithm>
#include <limits>

#include "treepgd/errors.hpp"

namespace treepgd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

DpTable dp_forward(const std::vector<double>& u, const RootedTree& tree, int sparsity,
                   const GridSpec& grid, bool retain_tables) {
  grid.validate();
  const int p = tree.p;
  if (static_cast<int>(u.size()) != p)
    throw DataError("project_tree: input has length " + std::to_string(u.size()) +
                    ", tree has p=" + std::to_string(p));
  if (sparsity < 0) throw ParameterError("projection sparsity must be >= 0");
  const int G = grid.size();
  if (G > 65535 || p > 65535)
    throw ParameterError("grid or tree too large for projection index type");

  DpTable table;
  table.requested_sparsity = sparsity;
  table.budget_cap = std::min(sparsity, p - 1);  // larger budgets cannot help
  table.grid = grid;
  table.records.assign(p, {});
  if (retain_tables) table.f.assign(p, {});

  const int Sz = table.budget_cap + 1;
  const std::size_t cells = static_cast<std::size_t>(G) * Sz;

  // Per-vertex f tables, freed once folded into the parent.
  std::vector<std::vector<double>> tab(p);

  std::vector<double> sq(G);
  std::vector<double> m(Sz);
  std::vector<double> g(cells);
  std::vector<double> folded(cells);

  // dfs_order is a preorder, so reverse order visits children before parents.
  for (auto it = tree.dfs_order.rbegin(); it != tree.dfs_order.rend(); ++it) {
    const int v = *it;
    for (int c = 0; c < G; ++c) {
      const double d = grid.value(c) - u[v];
      sq[c] = d * d;
    }
    const auto& kids = tree.children[v];
    std::vector<double>& fv = tab[v];
    fv.resize(cells);

    if (kids.empty()) {
      for (int c = 0; c < G; ++c)
        for (int s = 0; s < Sz; ++s) fv[c * Sz + s] = sq[c];
    } else {
      auto& recs = table.records[v];
      recs.resize(kids.size());
      std::vector<double>* acc = nullptr;
      for (std::size_t j = 0; j < kids.size(); ++j) {
        const int w = kids[j];
        const std::vector<double>& fw = tab[w];
        DpTable::ChildRec& rec = recs[j];
        rec.break_edge.assign(cells, 0);
        rec.min_argmin.resize(Sz);

        for (int s = 0; s < Sz; ++s) {
          double best = kInf;
          int arg = 0;
          for (int c = 0; c < G; ++c) {
            const double val = fw[c * Sz + s];
            if (val < best) {
              best = val;
              arg = c;
            }
          }
          m[s] = best;
          rec.min_argmin[s] = static_cast<std::uint16_t>(arg);
        }

        // g(c,s): keep theta_w = c, or cut the edge and pay one budget unit.
        // Ties prefer not cutting.
        for (int c = 0; c < G; ++c) {
          for (int s = 0; s < Sz; ++s) {
            const std::size_t idx = static_cast<std::size_t>(c) * Sz + s;
            double val = fw[idx];
            if (s > 0 && m[s - 1] < val) {
              val = m[s - 1];
              rec.break_edge[idx] = 1;
            }
            g[idx] = val;
          }
        }

        if (j == 0) {
          // The first child receives whatever budget remains; since g is
          // nonincreasing in s this is a fold against the zero table.
          folded = g;
        } else {
          // Min-plus fold of this child's g against the accumulated table.
          // Ties prefer the larger budget for the newly folded child.
          rec.split.resize(cells);
          std::vector<double> next(cells);
          for (int c = 0; c < G; ++c) {
            const double* acc_row = acc->data() + static_cast<std::size_t>(c) * Sz;
            const double* g_row = g.data() + static_cast<std::size_t>(c) * Sz;
            for (int s = 0; s < Sz; ++s) {
              double best = kInf;
              int best_split = 0;
              for (int sw = s; sw >= 0; --sw) {
                const double val = acc_row[s - sw] + g_row[sw];
                if (val < best) {
                  best = val;
                  best_split = sw;
                }
              }
              next[static_cast<std::size_t>(c) * Sz + s] = best;
              rec.split[static_cast<std::size_t>(c) * Sz + s] =
                  static_cast<std::uint16_t>(best_split);
            }
          }
          folded = std::move(next);
        }
        acc = &folded;

        if (retain_tables)
          table.f[w] = fw;
        tab[w].clear();
        tab[w].shrink_to_fit();
      }
      for (int c = 0; c < G; ++c)
        for (int s = 0; s < Sz; ++s) fv[c * Sz + s] = sq[c] + folded[c * Sz + s];
    }
  }

  table.root_f = tab[tree.root];
  if (retain_tables) table.f[tree.root] = tab[tree.root];
  return table;
}

ProjectionResult dp_backtrack(const DpTable& table, const RootedTree& tree,
                              const std::vector<double>& u) {
  const int p = tree.p;
  const int G = table.grid.size();
  const int Sz = table.budget_cap + 1;
  if (table.root_f.size() != static_cast<std::size_t>(G) * Sz)
    throw NumericError("projection table is inconsistent with its grid");

  std::vector<int> cidx(p, -1);
  std::vector<int> budget(p, 0);

  // Root value: argmin at full budget, smallest grid value on ties.
  {
    double best = kInf;
    int arg = 0;
    for (int c = 0; c < G; ++c) {
      const double val = table.root_f[static_cast<std::size_t>(c) * Sz + (Sz - 1)];
      if (val < best) {
        best = val;
        arg = c;
      }
    }
    cidx[tree.root] = arg;
    budget[tree.root] = Sz - 1;
  }

  // dfs_order is a preorder, so parents are resolved before their children.
  for (int v : tree.dfs_order) {
    const auto& kids = tree.children[v];
    if (kids.empty()) continue;
    const auto& recs = table.records[v];
    const int c = cidx[v];
    int remaining = budget[v];
    std::vector<int> child_budget(kids.size(), 0);
    for (std::size_t j = kids.size(); j-- > 1;) {
      const int sj = recs[j].split[static_cast<std::size_t>(c) * Sz + remaining];
      child_budget[j] = sj;
      remaining -= sj;
    }
    child_budget[0] = remaining;
    for (std::size_t j = 0; j < kids.size(); ++j) {
      const int w = kids[j];
      const int b = child_budget[j];
      if (recs[j].break_edge[static_cast<std::size_t>(c) * Sz + b]) {
        cidx[w] = recs[j].min_argmin[b - 1];
        budget[w] = b - 1;
      } else {
        cidx[w] = c;
        budget[w] = b;
      }
    }
  }

  ProjectionResult result;
  result.theta.resize(p);
  for (int v = 0; v < p; ++v) {
    if (cidx[v] < 0) throw NumericError("projection backtracking left a vertex unassigned");
    result.theta[v] = table.grid.value(cidx[v]);
  }
  double obj = 0.0;
  for (int v = 0; v < p; ++v) {
    const double d = result.theta[v] - u[v];
    obj += d * d;
  }
  result.objective = obj;
  int cuts = 0;
  for (const Edge& e : tree.edges)
    if (cidx[e.i] != cidx[e.j]) ++cuts;
  result.used_sparsity = cuts;
  return result;
}

ProjectionResult project_tree(const std::vector<double>& u, const RootedTree& tree, int sparsity,
                              const GridSpec& grid) {
  DpTable table = dp_forward(u, tree, sparsity, grid);
  return dp_backtrack(table, tree, u);
}

}  // namespace treepgd
