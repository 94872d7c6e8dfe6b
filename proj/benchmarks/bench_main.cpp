#include <benchmark/benchmark.h>

#include "treepgd/projection.hpp"
#include "treepgd/rng.hpp"
#include "treepgd/sim.hpp"
#include "treepgd/tree.hpp"

using namespace treepgd;

namespace {

Graph path_graph(int p) {
  std::vector<Edge> edges;
  for (int v = 0; v + 1 < p; ++v) edges.push_back({v, v + 1});
  return Graph(p, std::move(edges));
}

std::vector<double> random_input(int p, double lo, double hi) {
  Rng rng(42);
  std::vector<double> u(p);
  for (double& x : u) x = rng.uniform(lo, hi);
  return u;
}

void BM_project_path(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const int S = static_cast<int>(state.range(1));
  RootedTree tree = build_tree(path_graph(p), {TreeMode::fixed_dfs, 2, 0}, 0);
  GridSpec grid(-0.8, 0.8, 0.05);  // 33 values
  std::vector<double> u = random_input(p, -0.8, 0.8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_tree(u, tree, S, grid));
  }
  state.SetComplexityN(p);
}
BENCHMARK(BM_project_path)
    ->Args({100, 10})
    ->Args({200, 10})
    ->Args({400, 10})
    ->Args({800, 10})
    ->Args({900, 144})
    ->Complexity(benchmark::oN);

void BM_project_lattice_tree(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Graph g = make_lattice({side, side});
  RootedTree tree = build_tree(g, {TreeMode::random_dfs, 2, 7}, 1);
  GridSpec grid(-0.6, 1.0, 0.05);
  std::vector<double> u = random_input(side * side, -0.6, 1.0);
  const int S = 2 * side;
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_tree(u, tree, S, grid));
  }
}
BENCHMARK(BM_project_lattice_tree)->Arg(10)->Arg(20)->Arg(30);

void BM_build_tree_lattice(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Graph g = make_lattice({side, side});
  TreePolicy policy{TreeMode::random_dfs, 2, 3};
  int iter = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_tree(g, policy, ++iter));
  }
  state.SetComplexityN(g.num_edges());
}
BENCHMARK(BM_build_tree_lattice)->Arg(10)->Arg(30)->Arg(100)->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
