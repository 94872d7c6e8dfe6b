#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace treepgd {

// Regression data: row-major n x p design matrix and length-n response.
struct Dataset {
  int n = 0;
  int p = 0;
  std::vector<double> X;  // row-major, size n*p
  std::vector<double> y;

  Dataset() = default;
  Dataset(int n_, int p_, std::vector<double> X_, std::vector<double> y_);

  double x(int i, int j) const { return X[static_cast<std::size_t>(i) * p + j]; }
};

// Smooth convex loss with value and gradient. smoothness() supplies the L
// used for the default step size eta = 1/L.
class LossModel {
 public:
  virtual ~LossModel() = default;
  virtual double value(const std::vector<double>& theta, const Dataset& data) const = 0;
  virtual std::vector<double> gradient(const std::vector<double>& theta,
                                       const Dataset& data) const = 0;
  virtual double smoothness(const Dataset& data) const = 0;
  virtual std::string name() const = 0;
};

// ||y - X theta||^2 / (2n). smoothness defaults to a power-iteration estimate
// of lambda_max(X^T X / n); pass smoothness_override > 0 to skip it.
class SquaredErrorLoss : public LossModel {
 public:
  explicit SquaredErrorLoss(double smoothness_override = 0.0)
      : smoothness_override_(smoothness_override) {}
  double value(const std::vector<double>& theta, const Dataset& data) const override;
  std::vector<double> gradient(const std::vector<double>& theta,
                               const Dataset& data) const override;
  double smoothness(const Dataset& data) const override;
  std::string name() const override { return "linear"; }

 private:
  double smoothness_override_;
};

// Exponential-family cumulant: b and its derivative b'.
struct Cumulant {
  std::function<double(double)> b;
  std::function<double(double)> b_prime;
  double curvature_bound = 1.0;  // sup of b'', used for the smoothness estimate
  std::string name;
};

// Numerically stable logistic cumulant b(x) = log(1 + e^x).
Cumulant logistic_cumulant();

// (1/n) sum_i [ b(x_i' theta) - y_i x_i' theta ].
class GlmLoss : public LossModel {
 public:
  explicit GlmLoss(Cumulant cumulant, double smoothness_override = 0.0)
      : cumulant_(std::move(cumulant)), smoothness_override_(smoothness_override) {}
  double value(const std::vector<double>& theta, const Dataset& data) const override;
  std::vector<double> gradient(const std::vector<double>& theta,
                               const Dataset& data) const override;
  double smoothness(const Dataset& data) const override;
  std::string name() const override { return cumulant_.name; }

 private:
  Cumulant cumulant_;
  double smoothness_override_;
};

std::unique_ptr<LossModel> make_loss(const std::string& name, double smoothness_override = 0.0);

// Power-iteration estimate of lambda_max(X^T X / n), 20 iterations.
double estimate_design_smoothness(const Dataset& data, int iterations = 20);

// Contraction and error-floor quantities of the convergence theory. Pure
// report; never gates the algorithm.
struct TheoryDiagnostics {
  double alpha = 0.0;
  double smoothness_L = 0.0;
  double gamma = 0.0;
  double contraction = 0.0;   // (1 + gamma) * sqrt(1 - alpha/L)
  double error_floor = 0.0;   // (4(1+gamma)/alpha * Phi + delta*sqrt(p)) / (1 - contraction)
  double effective_sparsity = 0.0;  // S + 2 s* + max(sqrt(S), d_max)
  bool contractive = false;
};

TheoryDiagnostics diagnostics(int d_max, int s_star, int sparsity, double alpha, double L,
                              double phi, double delta, int p);

// Strong-convexity and smoothness constants implied by a covariance spectrum
// with extreme eigenvalues lambda_1 >= lambda_p: alpha = lambda_p/2,
// L = 3*lambda_1/2.
struct ConvexityConstants {
  double alpha;
  double L;
};
ConvexityConstants design_convexity_constants(double lambda_1, double lambda_p);

}  // namespace treepgd
