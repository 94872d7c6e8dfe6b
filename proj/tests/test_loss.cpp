#include <cmath>
#include <vector>

#include "doctest.h"
#include "test_helpers.hpp"
#include "treepgd/errors.hpp"
#include "treepgd/loss.hpp"
#include "treepgd/pgd.hpp"
#include "treepgd/rng.hpp"

using namespace treepgd;
using treepgd::testing::random_vector;

namespace {

Dataset random_dataset(Rng& rng, int n, int p) {
  std::vector<double> X(static_cast<std::size_t>(n) * p);
  for (double& x : X) x = rng.normal();
  std::vector<double> y(n);
  for (double& v : y) v = rng.normal();
  return Dataset(n, p, std::move(X), std::move(y));
}

}  // namespace

TEST_CASE("dataset validation") {
  CHECK_THROWS_AS(Dataset(2, 2, {1, 2, 3}, {1, 2}), DataError);
  CHECK_THROWS_AS(Dataset(2, 2, {1, 2, 3, 4}, {1}), DataError);
  CHECK_THROWS_AS(Dataset(0, 2, {}, {}), DataError);
}

TEST_CASE("squared error loss on hand examples") {
  // X = I_2, y = (1, 3), theta = (0, 1): residual (1, 2), value 5/4.
  Dataset data(2, 2, {1, 0, 0, 1}, {1, 3});
  SquaredErrorLoss loss;
  CHECK(loss.value({0, 1}, data) == doctest::Approx(1.25).epsilon(1e-12));
  // Gradient X^T(X theta - y)/n = ((0-1)/2, (1-3)/2).
  auto g = loss.gradient({0, 1}, data);
  CHECK(g[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(g[1] == doctest::Approx(-1.0).epsilon(1e-12));
  // lambda_max(X^T X / n) = 1/2 for the identity design.
  CHECK(loss.smoothness(data) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(SquaredErrorLoss(7.0).smoothness(data) == 7.0);
}

TEST_CASE("squared error gradient is affine in theta") {
  Rng rng(101);
  Dataset data = random_dataset(rng, 12, 6);
  SquaredErrorLoss loss;
  auto t1 = random_vector(rng, 6);
  auto t2 = random_vector(rng, 6);
  auto g1 = loss.gradient(t1, data);
  auto g2 = loss.gradient(t2, data);
  // g1 - g2 must equal (X^T X / n)(t1 - t2).
  for (int j = 0; j < 6; ++j) {
    double expect = 0.0;
    for (int i = 0; i < 12; ++i) {
      double row_dot = 0.0;
      for (int k = 0; k < 6; ++k) row_dot += data.x(i, k) * (t1[k] - t2[k]);
      expect += data.x(i, j) * row_dot;
    }
    expect /= 12;
    CHECK(g1[j] - g2[j] == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("logistic loss at zero and stability") {
  Rng rng(103);
  const int n = 10, p = 4;
  std::vector<double> X(n * p);
  for (double& x : X) x = rng.normal();
  std::vector<double> y(n);
  for (double& v : y) v = rng.uniform() < 0.5 ? 0.0 : 1.0;
  Dataset data(n, p, X, y);
  GlmLoss loss(logistic_cumulant());

  CHECK(loss.value(std::vector<double>(p, 0.0), data) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  auto g = loss.gradient(std::vector<double>(p, 0.0), data);
  for (int j = 0; j < p; ++j) {
    double expect = 0.0;
    for (int i = 0; i < n; ++i) expect += (0.5 - y[i]) * data.x(i, j);
    CHECK(g[j] == doctest::Approx(expect / n).epsilon(1e-12));
  }

  // Extreme linear predictors stay finite.
  std::vector<double> big(p, 500.0);
  CHECK(std::isfinite(loss.value(big, data)));
  for (double gv : loss.gradient(big, data)) CHECK(std::isfinite(gv));

  // A cumulant that overflows is reported as a numeric failure.
  Cumulant expo{[](double x) { return std::exp(x); }, [](double x) { return std::exp(x); }, 1.0,
                "exp"};
  GlmLoss fragile(std::move(expo));
  Dataset one(1, 1, {1.0}, {0.0});
  CHECK_THROWS_AS(fragile.value({1000.0}, one), NumericError);
  CHECK_THROWS_AS(fragile.gradient({1000.0}, one), NumericError);
}

TEST_CASE("gradients agree with central finite differences") {
  Rng rng(107);
  Dataset lin_data = random_dataset(rng, 15, 5);
  std::vector<double> y01(15);
  for (double& v : y01) v = rng.uniform() < 0.5 ? 0.0 : 1.0;
  Dataset glm_data(15, 5, lin_data.X, y01);

  SquaredErrorLoss lin;
  GlmLoss logit(logistic_cumulant());
  const double h = 1e-5;
  for (int point = 0; point < 20; ++point) {
    auto theta = random_vector(rng, 5);
    auto check_model = [&](const LossModel& model, const Dataset& data) {
      auto g = model.gradient(theta, data);
      for (int j = 0; j < 5; ++j) {
        auto up = theta, dn = theta;
        up[j] += h;
        dn[j] -= h;
        const double fd = (model.value(up, data) - model.value(dn, data)) / (2 * h);
        CHECK(g[j] == doctest::Approx(fd).epsilon(1e-5));
      }
    };
    check_model(lin, lin_data);
    check_model(logit, glm_data);
  }
}

TEST_CASE("losses are convex along midpoints") {
  Rng rng(109);
  Dataset data = random_dataset(rng, 20, 6);
  for (const auto& name : {std::string("linear"), std::string("logistic")}) {
    auto loss = make_loss(name);
    for (int trial = 0; trial < 10; ++trial) {
      auto a = random_vector(rng, 6);
      auto b = random_vector(rng, 6);
      std::vector<double> mid(6);
      for (int j = 0; j < 6; ++j) mid[j] = 0.5 * (a[j] + b[j]);
      CHECK(loss->value(mid, data) <=
            0.5 * (loss->value(a, data) + loss->value(b, data)) + 1e-12);
    }
  }
  CHECK_THROWS_AS(make_loss("huber"), ParameterError);
}

TEST_CASE("theory diagnostics") {
  // Formula identity on a feasible instance.
  const int d_max = 2, s_star = 2, S = 36, p = 100;
  const double alpha = 0.5, L = 1.5, phi = 0.1, delta = 0.01;
  TheoryDiagnostics d = diagnostics(d_max, s_star, S, alpha, L, phi, delta, p);
  const double denom = S - 2.0 * s_star - std::sqrt(static_cast<double>(S));
  const double gamma =
      std::sqrt(((d_max - 1) * (2.0 * s_star + std::sqrt(static_cast<double>(S)) + 1.0) + 1.0) /
                denom);
  CHECK(d.gamma == doctest::Approx(gamma).epsilon(1e-12));
  CHECK(d.contraction == doctest::Approx((1 + gamma) * std::sqrt(1 - alpha / L)).epsilon(1e-12));
  CHECK(d.effective_sparsity == doctest::Approx(S + 2 * s_star + std::sqrt(36.0)).epsilon(1e-12));
  if (d.contractive) {
    CHECK(d.error_floor ==
          doctest::Approx((4 * (1 + gamma) / alpha * phi + delta * 10.0) / (1 - d.contraction))
              .epsilon(1e-12));
  }

  // alpha = L collapses the contraction factor to zero.
  TheoryDiagnostics eq = diagnostics(d_max, s_star, 400, 1.0, 1.0, phi, delta, p);
  CHECK(eq.contraction == 0.0);
  CHECK(eq.contractive);

  // Too small a budget leaves the bound undefined.
  TheoryDiagnostics bad = diagnostics(d_max, s_star, 4, alpha, L, phi, delta, p);
  CHECK(std::isnan(bad.gamma));
  CHECK_FALSE(bad.contractive);

  ConvexityConstants cc = design_convexity_constants(2.0, 0.5);
  CHECK(cc.alpha == 0.25);
  CHECK(cc.L == 3.0);
  CHECK_THROWS_AS(design_convexity_constants(1.0, 2.0), ParameterError);
}

TEST_CASE("linear-model parameter recipe") {
  const int s_star = 1, n = 500, p = 900, d_max = 2;
  const double lambda_1 = 1.0, lambda_p = 0.5, sigma = 1.0;
  PgdConfig cfg = corollary1_config(s_star, lambda_1, lambda_p, sigma, n, p, d_max);

  CHECK(cfg.sparsity == 16);  // c1 (lambda_1/lambda_p)^2 s* = 4*4*1
  CHECK(cfg.eta == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  const double omega = sigma * std::pow(lambda_1, 1.5) / (lambda_p * lambda_p);  // 4
  const double delta = omega * std::sqrt(static_cast<double>(s_star) / (n * p));
  CHECK(cfg.grid.step == doctest::Approx(delta).epsilon(1e-12));
  const double half_width = 3.0 * (std::sqrt(static_cast<double>(p)) +
                                   omega * std::sqrt(s_star * std::log(static_cast<double>(p)) / n));
  CHECK(cfg.grid.lo == doctest::Approx(-half_width).epsilon(1e-12));
  CHECK(cfg.grid.hi >= half_width - 1e-12);
  CHECK(cfg.grid.hi < half_width + delta);
  const int tau = static_cast<int>(std::ceil(4.0 * std::log(n * static_cast<double>(p) /
                                                            (omega * omega * s_star))));
  CHECK(cfg.tau == tau);
  CHECK(cfg.tree_policy.d_max == d_max);

  // Doubling the noise doubles the grid resolution but not the budget or step.
  PgdConfig noisy = corollary1_config(s_star, lambda_1, lambda_p, 2 * sigma, n, p, d_max);
  CHECK(noisy.grid.step == doctest::Approx(2 * delta).epsilon(1e-12));
  CHECK(noisy.sparsity == cfg.sparsity);
  CHECK(noisy.eta == cfg.eta);

  CHECK_THROWS_AS(corollary1_config(0, 1, 1, 1, 10, 10, 2), ParameterError);
}
