#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "test_helpers.hpp"
#include "treepgd/graph.hpp"
#include "treepgd/sim.hpp"

using namespace treepgd;

TEST_CASE("lattice shape and edge order") {
  Graph g = make_lattice({30, 30});
  CHECK(g.num_vertices() == 900);
  CHECK(g.num_edges() == 1740);  // 2 * 30 * 29

  Graph small = make_lattice({2, 3});
  CHECK(small.num_vertices() == 6);
  CHECK(small.num_edges() == 7);
  // Vertex 0: right edge (0,1) before down edge (0,3).
  CHECK(small.edges()[0].i == 0);
  CHECK(small.edges()[0].j == 1);
  CHECK(small.edges()[1].i == 0);
  CHECK(small.edges()[1].j == 3);
}

TEST_CASE("built-in truth image") {
  TruthImage truth = make_truth_image({30, 30});
  REQUIRE(truth.theta.size() == 900);
  // Piecewise constant with exactly three levels.
  std::set<double> levels(truth.theta.begin(), truth.theta.end());
  CHECK(levels == std::set<double>{-0.5, 0.0, 0.9});
  // Reported sparsity equals the measured lattice gradient sparsity.
  Graph g = make_lattice({30, 30});
  CHECK(truth.gradient_sparsity == gradient_sparsity(g, truth.theta));
  CHECK(truth.gradient_sparsity > 0);
  // Scaling the lattice scales the boundary length roughly linearly.
  TruthImage big = make_truth_image({60, 60});
  CHECK(big.gradient_sparsity > 1.5 * truth.gradient_sparsity);
}

TEST_CASE("linear data generator moments") {
  std::vector<double> theta{1.0, -2.0, 0.5};
  Rng rng(301);
  Dataset data = generate_linear_data(theta, 4000, 0.5, rng);
  CHECK(data.n == 4000);
  CHECK(data.p == 3);

  // Design entries are approximately standard normal.
  double mean = 0, var = 0;
  for (double x : data.X) mean += x;
  mean /= data.X.size();
  for (double x : data.X) var += (x - mean) * (x - mean);
  var /= data.X.size();
  CHECK(std::abs(mean) < 0.05);
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));

  // Residuals y - X theta have variance sigma^2.
  double rmean = 0, rvar = 0;
  std::vector<double> res(data.n);
  for (int i = 0; i < data.n; ++i) {
    double fit = 0;
    for (int j = 0; j < 3; ++j) fit += data.x(i, j) * theta[j];
    res[i] = data.y[i] - fit;
    rmean += res[i];
  }
  rmean /= data.n;
  for (double r : res) rvar += (r - rmean) * (r - rmean);
  rvar /= data.n;
  CHECK(std::abs(rmean) < 0.05);
  CHECK(rvar == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("method spec parsing") {
  MethodSpec def = parse_method_spec("tree=random,dmax=2");
  CHECK(def.tree_policy.mode == TreeMode::random_dfs);
  CHECK(def.tree_policy.d_max == 2);
  CHECK(def.sparsity_grid.empty());  // auto sweep
  CHECK(def.eta == 0.2);
  CHECK(def.tau == 80);
  CHECK(def.grid.lo == -0.6);
  CHECK(def.grid.hi == 1.0);
  CHECK(def.grid.step == 0.05);

  MethodSpec full = parse_method_spec("tree=fixed,dmax=3,S=12|24,eta=0.1,tau=5,grid=-1:1:0.5");
  CHECK(full.tree_policy.mode == TreeMode::fixed_dfs);
  CHECK(full.tree_policy.d_max == 3);
  CHECK(full.sparsity_grid == std::vector<int>{12, 24});
  CHECK(full.eta == 0.1);
  CHECK(full.tau == 5);
  CHECK(full.grid.lo == -1.0);
  CHECK(full.grid.step == 0.5);

  CHECK(parse_method_spec("S=auto").sparsity_grid.empty());
  CHECK_THROWS_AS(parse_method_spec("tree=spooky"), ParameterError);
  CHECK_THROWS_AS(parse_method_spec("waffles=2"), ParameterError);
}

TEST_CASE("small experiment end to end") {
  // Nearly noiseless recovery of the built-in image with a generous budget:
  // the MSE must collapse to (at most) the squared grid resolution.
  ExperimentSpec spec;
  spec.lattice = {4, 4};
  spec.truth_path = "";
  spec.n = 60;
  spec.sigma_list = {0.01};
  spec.replicates = 3;
  spec.seed = 5;
  spec.threads = 2;
  const int budget = 2 * make_truth_image(spec.lattice).gradient_sparsity;
  MethodSpec m = parse_method_spec("tree=random,dmax=2,eta=0.2,tau=30,grid=-0.6:1.0:0.05");
  m.sparsity_grid = {budget};
  m.name = "random_d2";
  spec.methods = {m};

  ResultTable table = run_experiment(spec);
  REQUIRE(table.cells.size() == 1);
  const CellResult& cell = table.cells[0];
  CHECK(cell.sparsity == budget);
  CHECK(cell.sigma == 0.01);
  REQUIRE(cell.replicate_mse.size() == 3);
  for (double mse : cell.replicate_mse) CHECK(mse < 0.01);
  CHECK(cell.mean_mse < 0.01);
  CHECK(cell.example_estimate.size() == 16);

  // Replicates and the CSV are reproducible, apart from the timing column.
  ResultTable again = run_experiment(spec);
  CHECK(again.cells[0].replicate_mse == cell.replicate_mse);
  auto strip_runtime = [](const ResultTable& t) {
    std::ostringstream csv;
    write_result_csv(t, csv);
    std::string s = csv.str(), out;
    std::istringstream lines(s);
    for (std::string line; std::getline(lines, line);)
      out += line.substr(0, line.rfind(',')) + '\n';
    return out;
  };
  CHECK(strip_runtime(table) == strip_runtime(again));
  std::ostringstream csv_a;
  write_result_csv(table, csv_a);
  CHECK(csv_a.str().rfind("method,d_max,tree_mode,S,sigma,replicate,mse,runtime_ms", 0) == 0);
  CHECK(table.csv_rows.size() == 3);  // one method, one sigma, one S, 3 replicates
}

TEST_CASE("auto sparsity sweep picks a best budget") {
  ExperimentSpec spec;
  spec.lattice = {4, 4};
  spec.n = 40;
  spec.sigma_list = {0.5};
  spec.replicates = 2;
  spec.seed = 9;
  spec.threads = 1;
  MethodSpec m = parse_method_spec("tree=random,dmax=2,S=auto,eta=0.2,tau=10,grid=-0.6:1.0:0.05");
  m.name = "auto";
  spec.methods = {m};

  ResultTable table = run_experiment(spec);
  REQUIRE(table.cells.size() == 1);
  const int s_star = table.truth.gradient_sparsity;
  const std::vector<int> sweep{2 * s_star, 4 * s_star, 6 * s_star};
  CHECK(std::count(sweep.begin(), sweep.end(), table.cells[0].sparsity) == 1);
  // Every sweep point appears in the per-replicate rows.
  CHECK(table.csv_rows.size() == 3 * 2);
}

TEST_CASE("pgm writing") {
  std::vector<double> img{0.0, 0.5, 1.0, -0.5};
  write_pgm(img, 2, 2, "test_img.pgm");
  std::ifstream in("test_img.pgm");
  REQUIRE(in.good());
  std::string magic;
  in >> magic;
  CHECK(magic == "P2");
  std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(rest.find("value = ") != std::string::npos);
  CHECK(rest.find("255") != std::string::npos);
  std::remove("test_img.pgm");
}
