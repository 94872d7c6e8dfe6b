#include <cmath>
#include <vector>

#include "doctest.h"
#include "test_helpers.hpp"
#include "treepgd/oracle.hpp"
#include "treepgd/tree.hpp"

using namespace treepgd;
using treepgd::testing::path_graph;
using treepgd::testing::random_vector;

namespace {

RootedTree rooted_path(int p) {
  return build_tree(path_graph(p), {TreeMode::fixed_dfs, 2, 0}, 0);
}

// Mean-fit SSE of u[a..b] (inclusive), computed naively.
double segment_sse(const std::vector<double>& u, int a, int b) {
  double mean = 0;
  for (int i = a; i <= b; ++i) mean += u[i];
  mean /= (b - a + 1);
  double sse = 0;
  for (int i = a; i <= b; ++i) sse += (u[i] - mean) * (u[i] - mean);
  return sse;
}

// Best segmentation into at most k+1 pieces by recursive enumeration of
// boundary positions.
double best_split_cost(const std::vector<double>& u, int start, int cuts_left) {
  const int p = static_cast<int>(u.size());
  double best = segment_sse(u, start, p - 1);
  if (cuts_left == 0) return best;
  for (int b = start + 1; b < p; ++b) {
    const double head = segment_sse(u, start, b - 1);
    if (head >= best) continue;
    best = std::min(best, head + best_split_cost(u, b, cuts_left - 1));
  }
  return best;
}

}  // namespace

TEST_CASE("brute force oracle on tiny instances") {
  RootedTree two = rooted_path(2);
  GridSpec grid01(0.0, 1.0, 1.0);
  OracleResult r = brute_force_project({0.1, 0.9}, two, 1, grid01);
  CHECK(r.theta == std::vector<double>{0.0, 1.0});
  CHECK(r.objective == doctest::Approx(0.02).epsilon(1e-12));

  // One cut suffices for a perfectly piecewise-constant input.
  RootedTree four = rooted_path(4);
  GridSpec grid(0.0, 10.0, 10.0);
  OracleResult step = brute_force_project({0, 0, 10, 10}, four, 1, grid);
  CHECK(step.theta == std::vector<double>{0, 0, 10, 10});
  CHECK(step.objective == 0.0);
  // Without any budget the best constant is the snapped mean side.
  OracleResult flat = brute_force_project({0, 0, 10, 10}, four, 0, grid);
  CHECK(flat.theta[0] == flat.theta[3]);
  CHECK(flat.objective == doctest::Approx(200.0).epsilon(1e-12));

  // Constant input on the grid is recovered exactly for every budget.
  OracleResult cst = brute_force_project({10, 10, 10}, rooted_path(3), 2, grid);
  CHECK(cst.theta == std::vector<double>{10, 10, 10});
  CHECK(cst.objective == 0.0);

  CHECK_THROWS_AS(brute_force_project(std::vector<double>(40, 0.0), rooted_path(40), 20,
                                      grid, /*max_subsets=*/1000),
                  ParameterError);
}

TEST_CASE("line projection matches exhaustive split enumeration") {
  Rng rng(71);
  for (int trial = 0; trial < 8; ++trial) {
    auto u = random_vector(rng, 30);
    for (int S : {0, 1, 2, 3}) {
      LineSegmentation seg = exact_line_projection(u, S);
      CHECK(seg.objective == doctest::Approx(best_split_cost(u, 0, S)).epsilon(1e-10));
      CHECK(static_cast<int>(seg.boundaries.size()) <= S);
    }
  }
}

TEST_CASE("line projection structure") {
  Rng rng(73);
  auto u = random_vector(rng, 25);
  LineSegmentation seg = exact_line_projection(u, 4);

  // theta is piecewise constant exactly at the reported boundaries, and each
  // piece carries its mean.
  int start = 0;
  std::vector<int> bounds = seg.boundaries;
  bounds.push_back(25);
  for (int piece = 0; piece < static_cast<int>(bounds.size()); ++piece) {
    const int end = bounds[piece];
    double mean = 0;
    for (int i = start; i < end; ++i) mean += u[i];
    mean /= (end - start);
    for (int i = start; i < end; ++i) CHECK(seg.theta[i] == doctest::Approx(mean).epsilon(1e-12));
    start = end;
  }

  // Objective is nonincreasing in the budget.
  double prev = 1e300;
  for (int S = 0; S <= 10; ++S) {
    const double obj = exact_line_projection(u, S).objective;
    CHECK(obj <= prev + 1e-12);
    prev = obj;
  }
  // With p-1 cuts the fit is exact.
  CHECK(exact_line_projection(u, 24).objective == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("line DP table satisfies its own recursion") {
  Rng rng(79);
  auto u = random_vector(rng, 18);
  LineSegmentation seg = exact_line_projection(u, 5);
  const auto& cost = seg.best_cost;
  REQUIRE(cost.size() >= 6);
  for (int k = 1; k <= 5; ++k) {
    for (int j = k; j < 18; ++j) {
      // cost[k][j] = min over the last segment start t of
      // cost[k-1][t-1] + sse(u[t..j]).
      double expect = 1e300;
      for (int t = k; t <= j; ++t)
        expect = std::min(expect, cost[k - 1][t - 1] + segment_sse(u, t, j));
      CHECK(cost[k][j] == doctest::Approx(expect).epsilon(1e-10));
    }
  }
}
