#include "treepgd/pgd.hpp"

#include <cmath>
#include <limits>

#include "treepgd/errors.hpp"
#include "treepgd/projection.hpp"

namespace treepgd {

PgdResult run_tree_pgd(const Graph& g, const LossModel& loss, const Dataset& data,
                       const PgdConfig& cfg, const std::vector<double>* truth) {
  g.require_connected();
  const int p = g.num_vertices();
  if (data.p != p)
    throw DataError("run_tree_pgd: design has p=" + std::to_string(data.p) + ", graph has p=" +
                    std::to_string(p));
  if (cfg.tau < 1) throw ParameterError("tau must be >= 1");
  if (cfg.sparsity < 0) throw ParameterError("sparsity must be >= 0");
  cfg.grid.validate();

  std::vector<double> theta = cfg.theta0;
  if (theta.empty()) theta.assign(p, 0.0);
  if (static_cast<int>(theta.size()) != p) throw DataError("theta0 has wrong length");
  if (truth && static_cast<int>(truth->size()) != p) throw DataError("truth has wrong length");

  PgdResult result;
  result.eta = cfg.eta > 0 ? cfg.eta : 1.0 / loss.smoothness(data);
  if (!(result.eta > 0) || !std::isfinite(result.eta))
    throw NumericError("step size is not a positive finite number");
  if (cfg.record_history) result.trace.reserve(cfg.tau);

  for (int t = 1; t <= cfg.tau; ++t) {
    std::vector<double> grad = loss.gradient(theta, data);
    std::vector<double> u(p);
    for (int v = 0; v < p; ++v) {
      u[v] = theta[v] - result.eta * grad[v];
      if (!std::isfinite(u[v]))
        throw NumericError("non-finite gradient step at iteration " + std::to_string(t));
    }
    RootedTree tree = build_tree(g, cfg.tree_policy, t);
    ProjectionResult proj = project_tree(u, tree, cfg.sparsity, cfg.grid);

    double step_norm = 0.0;
    for (int v = 0; v < p; ++v) {
      const double d = proj.theta[v] - theta[v];
      step_norm += d * d;
    }
    step_norm = std::sqrt(step_norm);
    theta = std::move(proj.theta);

    if (cfg.record_history) {
      PgdIterationStat stat;
      stat.iteration = t;
      stat.tree_fingerprint = tree_fingerprint(tree);
      stat.objective = loss.value(theta, data);
      stat.step_norm = step_norm;
      stat.used_sparsity = proj.used_sparsity;
      if (truth) {
        double err = 0.0;
        for (int v = 0; v < p; ++v) {
          const double d = theta[v] - (*truth)[v];
          err += d * d;
        }
        stat.error_to_truth = std::sqrt(err);
      } else {
        stat.error_to_truth = std::numeric_limits<double>::quiet_NaN();
      }
      result.trace.push_back(stat);
    }
    if (cfg.stop_on_fixed_point && step_norm == 0.0) break;
  }
  result.theta = std::move(theta);
  return result;
}

PgdConfig corollary1_config(int s_star, double lambda_1, double lambda_p, double sigma, int n,
                            int p, int d_max, Corollary1Constants constants) {
  if (s_star < 1 || n < 1 || p < 1) throw ParameterError("s_star, n, p must be positive");
  if (!(lambda_1 > 0) || !(lambda_p > 0) || !(sigma > 0))
    throw ParameterError("lambda_1, lambda_p, sigma must be positive");
  const double ratio = lambda_1 / lambda_p;
  const double omega = sigma * std::pow(lambda_1, 1.5) / (lambda_p * lambda_p);
  const double np = static_cast<double>(n) * p;

  PgdConfig cfg;
  cfg.sparsity = static_cast<int>(std::ceil(constants.c1 * ratio * ratio * s_star));
  cfg.eta = 2.0 / (3.0 * lambda_1);
  const double delta = omega * std::sqrt(s_star / np);
  const double half_width =
      constants.c2 * (std::sqrt(static_cast<double>(p)) +
                      omega * std::sqrt(s_star * std::log(static_cast<double>(p)) / n));
  cfg.grid = make_grid(-half_width, half_width, delta);
  cfg.tau = std::max(
      1, static_cast<int>(std::ceil(constants.c3 * std::log(np / (omega * omega * s_star)))));
  cfg.tree_policy.d_max = d_max;
  return cfg;
}

double suggest_grid_halfwidth(const LossModel& loss, const Dataset& data,
                              const std::vector<double>& theta0, double smoothness_L,
                              double norm_theta_bound) {
  std::vector<double> grad = loss.gradient(theta0, data);
  double inf_norm = 0.0;
  for (double gv : grad) inf_norm = std::max(inf_norm, std::abs(gv));
  return inf_norm / smoothness_L + 3.0 * norm_theta_bound;
}

}  // namespace treepgd
