#pragma once

#include <cstdint>
#include <vector>

#include "treepgd/graph.hpp"
#include "treepgd/grid.hpp"
#include "treepgd/loss.hpp"
#include "treepgd/tree.hpp"

namespace treepgd {

struct PgdConfig {
  int sparsity = 1;      // projection budget S
  double eta = 0.0;      // step size; <= 0 means 1/L with L from the loss
  int tau = 1;           // iteration count
  GridSpec grid;
  TreePolicy tree_policy;
  std::vector<double> theta0;  // empty means all-zero
  bool record_history = true;
  bool stop_on_fixed_point = false;  // stop early when an iterate repeats exactly
};

struct PgdIterationStat {
  int iteration = 0;
  std::uint64_t tree_fingerprint = 0;
  double objective = 0.0;  // loss value at theta_t
  double step_norm = 0.0;  // ||theta_t - theta_{t-1}||_2
  double error_to_truth = 0.0;  // ||theta_t - theta*||_2, NaN when truth unknown
  int used_sparsity = 0;
};

struct PgdResult {
  std::vector<double> theta;
  double eta = 0.0;  // step size actually used
  std::vector<PgdIterationStat> trace;
};

// Tree-projected gradient descent: theta_t = projection of
// theta_{t-1} - eta * grad L(theta_{t-1}) onto grid-valued vectors with at
// most S gradient nonzeros over the iteration's tree.
PgdResult run_tree_pgd(const Graph& g, const LossModel& loss, const Dataset& data,
                       const PgdConfig& cfg, const std::vector<double>* truth = nullptr);

// Parameter recipe from the linear-model corollary of the convergence
// theory, with explicit default constants (the recipe only fixes them up to
// "sufficiently large").
struct Corollary1Constants {
  double c1 = 4.0;  // S = c1 (lambda_1/lambda_p)^2 s*
  double c2 = 3.0;  // grid half-width factor
  double c3 = 4.0;  // tau = c3 log(np / (omega^2 s*))
};

PgdConfig corollary1_config(int s_star, double lambda_1, double lambda_p, double sigma, int n,
                            int p, int d_max, Corollary1Constants constants = {});

// Runtime approximation of the theoretical grid half-width
// ||grad L(theta*)||_inf / L + 3 ||theta*||_2 + 2 Lambda, with theta*
// unobservable: uses the gradient at theta0 and a caller-supplied bound on
// ||theta*||_2, ignoring the Lambda term.
double suggest_grid_halfwidth(const LossModel& loss, const Dataset& data,
                              const std::vector<double>& theta0, double smoothness_L,
                              double norm_theta_bound);

}  // namespace treepgd
