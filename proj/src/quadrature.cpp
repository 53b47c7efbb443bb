#include "ascs/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "ascs/error.hpp"

namespace ascs {

namespace {

struct LegendreRule {
  std::vector<double> x, w;
};

// Gauss–Legendre on [-1, 1] by Newton iteration on P_n.
LegendreRule gauss_legendre(int n) {
  LegendreRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

QuadratureRule graded_gaussian_rule(const GradedRuleSpec& spec) {
  if (spec.points_per_panel < 1 || !(spec.z_min > 0.0) || !(spec.ratio > 1.0) ||
      !(spec.z_max > spec.z_min))
    throw ParameterError("graded_gaussian_rule: invalid spec");

  std::vector<double> edges{0.0};
  for (double z = spec.z_min; z < spec.z_max; z *= spec.ratio) edges.push_back(z);
  edges.push_back(spec.z_max);

  const auto gl = gauss_legendre(spec.points_per_panel);
  std::vector<double> half_x, half_w;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double lo = edges[e], hi = edges[e + 1];
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int k = 0; k < spec.points_per_panel; ++k) {
      const double z = mid + half * gl.x[k];
      half_x.push_back(z);
      half_w.push_back(half * gl.w[k] * std::exp(-0.5 * z * z) * inv_sqrt_2pi);
    }
  }

  QuadratureRule rule;
  const std::size_t h = half_x.size();
  rule.nodes.resize(2 * h);
  rule.weights.resize(2 * h);
  for (std::size_t k = 0; k < h; ++k) {
    rule.nodes[h - 1 - k] = -half_x[k];
    rule.weights[h - 1 - k] = half_w[k];
    rule.nodes[h + k] = half_x[k];
    rule.weights[h + k] = half_w[k];
  }
  // Renormalize away the truncated tail mass (~1e-33).
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

QuadratureRule gauss_hermite_rule(int K) {
  if (K < 1) throw ParameterError("gauss_hermite_rule: K must be >= 1");
  // Jacobi matrix of the probabilists' Hermite polynomials.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(K, K);
  for (int i = 1; i < K; ++i) {
    jacobi(i, i - 1) = std::sqrt(static_cast<double>(i));
    jacobi(i - 1, i) = jacobi(i, i - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(K);
  rule.weights.resize(K);
  for (int i = 0; i < K; ++i) {
    rule.nodes[i] = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;
  }
  // Symmetrize: the eigen solver returns nodes accurate to rounding only.
  for (int i = 0; i < K / 2; ++i) {
    const double z = 0.5 * (rule.nodes[K - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[K - 1 - i] + rule.weights[i]);
    rule.nodes[i] = -z;
    rule.nodes[K - 1 - i] = z;
    rule.weights[i] = rule.weights[K - 1 - i] = w;
  }
  if (K % 2 == 1) rule.nodes[K / 2] = 0.0;
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = graded_gaussian_rule();
  return rule;
}

}  // namespace ascs
