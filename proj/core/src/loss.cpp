#include "treepgd/loss.hpp"

#include <cmath>
#include <limits>

#include "treepgd/errors.hpp"
#include "treepgd/rng.hpp"

namespace treepgd {

Dataset::Dataset(int n_, int p_, std::vector<double> X_, std::vector<double> y_)
    : n(n_), p(p_), X(std::move(X_)), y(std::move(y_)) {
  if (n < 1 || p < 1) throw DataError("dataset must have n >= 1 and p >= 1");
  if (X.size() != static_cast<std::size_t>(n) * p)
    throw DataError("design matrix has " + std::to_string(X.size()) + " entries, expected n*p=" +
                    std::to_string(static_cast<std::size_t>(n) * p));
  if (y.size() != static_cast<std::size_t>(n))
    throw DataError("response has " + std::to_string(y.size()) + " rows, design has " +
                    std::to_string(n));
}

namespace {

void check_theta(const std::vector<double>& theta, const Dataset& data, const char* who) {
  if (static_cast<int>(theta.size()) != data.p)
    throw DataError(std::string(who) + ": theta has length " + std::to_string(theta.size()) +
                    ", design has p=" + std::to_string(data.p));
}

// X theta, row-major.
std::vector<double> design_times(const Dataset& data, const std::vector<double>& theta) {
  std::vector<double> out(data.n, 0.0);
  for (int i = 0; i < data.n; ++i) {
    const double* row = data.X.data() + static_cast<std::size_t>(i) * data.p;
    double acc = 0.0;
    for (int j = 0; j < data.p; ++j) acc += row[j] * theta[j];
    out[i] = acc;
  }
  return out;
}

// X^T r / n.
std::vector<double> design_transpose_times(const Dataset& data, const std::vector<double>& r) {
  std::vector<double> out(data.p, 0.0);
  for (int i = 0; i < data.n; ++i) {
    const double* row = data.X.data() + static_cast<std::size_t>(i) * data.p;
    const double ri = r[i];
    for (int j = 0; j < data.p; ++j) out[j] += row[j] * ri;
  }
  for (double& v : out) v /= data.n;
  return out;
}

}  // namespace

double SquaredErrorLoss::value(const std::vector<double>& theta, const Dataset& data) const {
  check_theta(theta, data, "squared_error_value");
  std::vector<double> fit = design_times(data, theta);
  double acc = 0.0;
  for (int i = 0; i < data.n; ++i) {
    const double r = data.y[i] - fit[i];
    acc += r * r;
  }
  return acc / (2.0 * data.n);
}

std::vector<double> SquaredErrorLoss::gradient(const std::vector<double>& theta,
                                               const Dataset& data) const {
  check_theta(theta, data, "squared_error_gradient");
  std::vector<double> r = design_times(data, theta);
  for (int i = 0; i < data.n; ++i) r[i] -= data.y[i];
  return design_transpose_times(data, r);  // X^T (X theta - y) / n
}

double SquaredErrorLoss::smoothness(const Dataset& data) const {
  if (smoothness_override_ > 0) return smoothness_override_;
  return estimate_design_smoothness(data);
}

Cumulant logistic_cumulant() {
  Cumulant c;
  c.b = [](double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); };
  c.b_prime = [](double x) {
    return x > 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  };
  c.curvature_bound = 0.25;
  c.name = "logistic";
  return c;
}

double GlmLoss::value(const std::vector<double>& theta, const Dataset& data) const {
  check_theta(theta, data, "glm_value");
  std::vector<double> lin = design_times(data, theta);
  double acc = 0.0;
  for (int i = 0; i < data.n; ++i) {
    const double bi = cumulant_.b(lin[i]);
    if (!std::isfinite(bi))
      throw NumericError("glm_value: cumulant is not finite at sample " + std::to_string(i));
    acc += bi - data.y[i] * lin[i];
  }
  return acc / data.n;
}

std::vector<double> GlmLoss::gradient(const std::vector<double>& theta,
                                      const Dataset& data) const {
  check_theta(theta, data, "glm_gradient");
  std::vector<double> lin = design_times(data, theta);
  for (int i = 0; i < data.n; ++i) {
    const double mu = cumulant_.b_prime(lin[i]);
    if (!std::isfinite(mu))
      throw NumericError("glm_gradient: cumulant derivative is not finite at sample " +
                         std::to_string(i));
    lin[i] = mu - data.y[i];
  }
  return design_transpose_times(data, lin);  // (1/n) sum (b'(x_i'theta) - y_i) x_i
}

double GlmLoss::smoothness(const Dataset& data) const {
  if (smoothness_override_ > 0) return smoothness_override_;
  return cumulant_.curvature_bound * estimate_design_smoothness(data);
}

std::unique_ptr<LossModel> make_loss(const std::string& name, double smoothness_override) {
  if (name == "linear") return std::make_unique<SquaredErrorLoss>(smoothness_override);
  if (name == "logistic") return std::make_unique<GlmLoss>(logistic_cumulant(), smoothness_override);
  throw ParameterError("unknown loss '" + name + "' (expected linear or logistic)");
}

double estimate_design_smoothness(const Dataset& data, int iterations) {
  Rng rng(0x736d6f6f7468ULL);
  std::vector<double> v(data.p);
  for (double& x : v) x = rng.normal();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> xv = design_times(data, v);
    std::vector<double> w = design_transpose_times(data, xv);
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 1.0;  // X^T X v vanished; any positive L works
    double dot = 0.0;
    for (int j = 0; j < data.p; ++j) dot += v[j] * w[j];
    lambda = dot;
    for (int j = 0; j < data.p; ++j) v[j] = w[j] / norm;
  }
  return lambda;
}

TheoryDiagnostics diagnostics(int d_max, int s_star, int sparsity, double alpha, double L,
                              double phi, double delta, int p) {
  TheoryDiagnostics d;
  d.alpha = alpha;
  d.smoothness_L = L;
  const double S = sparsity;
  const double ss = s_star;
  d.effective_sparsity = S + 2.0 * ss + std::max(std::sqrt(S), static_cast<double>(d_max));
  const double denom = S - 2.0 * ss - std::sqrt(S);
  if (denom <= 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    d.gamma = d.contraction = d.error_floor = nan;
    d.contractive = false;
    return d;
  }
  d.gamma = std::sqrt(((d_max - 1) * (2.0 * ss + std::sqrt(S) + 1.0) + 1.0) / denom);
  d.contraction = (1.0 + d.gamma) * std::sqrt(1.0 - alpha / L);
  d.contractive = d.contraction < 1.0;
  if (d.contractive) {
    d.error_floor =
        (4.0 * (1.0 + d.gamma) / alpha * phi + delta * std::sqrt(static_cast<double>(p))) /
        (1.0 - d.contraction);
  } else {
    d.error_floor = std::numeric_limits<double>::quiet_NaN();
  }
  return d;
}

ConvexityConstants design_convexity_constants(double lambda_1, double lambda_p) {
  if (!(lambda_1 > 0) || !(lambda_p > 0) || lambda_p > lambda_1)
    throw ParameterError("need 0 < lambda_p <= lambda_1");
  return {lambda_p / 2.0, 3.0 * lambda_1 / 2.0};
}

}  // namespace treepgd
