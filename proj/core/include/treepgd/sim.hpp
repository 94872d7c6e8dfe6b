#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "treepgd/graph.hpp"
#include "treepgd/loss.hpp"
#include "treepgd/pgd.hpp"
#include "treepgd/rng.hpp"

namespace treepgd {

struct LatticeSpec {
  int rows = 1;
  int cols = 1;
};

// 4-neighbor lattice in row-major vertex order; for each vertex, the edge to
// its right neighbor precedes the edge to the neighbor below.
Graph make_lattice(const LatticeSpec& spec);

struct TruthImage {
  std::vector<double> theta;
  int gradient_sparsity = 0;  // exact lattice gradient sparsity
};

// Built-in piecewise-constant test image: two axis-aligned rectangles
// (values 0.9 and -0.5) on a zero background, scaled to the lattice size.
TruthImage make_truth_image(const LatticeSpec& spec);
// Truth loaded from a vector file of length rows*cols.
TruthImage make_truth_image(const LatticeSpec& spec, const std::string& path);

// y = X theta* + e with iid standard normal design and N(0, sigma^2) noise.
Dataset generate_linear_data(const std::vector<double>& theta_star, int n, double sigma, Rng& rng);

struct MethodSpec {
  std::string name;
  TreePolicy tree_policy;
  std::vector<int> sparsity_grid;  // empty: auto sweep {2 s*, 4 s*, 6 s*}
  double eta = 0.2;
  int tau = 80;
  GridSpec grid{-0.6, 1.0, 0.05};
};

// Parses method strings like
//   "tree=random,dmax=2,S=128,eta=0.2,tau=80,grid=-0.6:1.0:0.05"
// Unset keys keep the defaults above; S accepts "auto" or a |-separated list.
MethodSpec parse_method_spec(const std::string& text);

struct ExperimentSpec {
  LatticeSpec lattice{30, 30};
  std::string truth_path;  // empty: built-in image
  int n = 500;
  std::vector<double> sigma_list{1.0, 1.5, 2.0, 2.5, 3.0};
  int replicates = 20;
  std::vector<MethodSpec> methods;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
};

struct CellResult {
  std::string method;
  int d_max = 0;
  TreeMode tree_mode = TreeMode::fixed_dfs;
  int sparsity = 0;  // best S in the sweep
  double sigma = 0.0;
  std::vector<double> replicate_mse;
  std::vector<double> replicate_runtime_ms;
  double mean_mse = 0.0;
  double stderr_mse = 0.0;
  std::vector<double> example_estimate;  // replicate 0 at the best S
};

struct ResultTable {
  TruthImage truth;
  // One row per (method, sigma), at the sweep's best S.
  std::vector<CellResult> cells;
  // One row per (method, sigma, S) including non-best sweep points, in the
  // CSV column order: method,d_max,tree_mode,S,sigma,replicate,mse,runtime_ms.
  std::vector<std::string> csv_rows;
};

ResultTable run_experiment(const ExperimentSpec& spec);

void write_result_csv(const ResultTable& table, std::ostream& out);

// 8-bit PGM (P2) with the affine value mapping recorded in a header comment.
void write_pgm(const std::vector<double>& image, int rows, int cols, const std::string& path);

}  // namespace treepgd
