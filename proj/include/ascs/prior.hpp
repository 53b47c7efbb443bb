#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace ascs {

/// Two-Gaussian model of an approximately sparse signal component:
/// with probability rho a "large" N(0, sigma2) value, otherwise a "small" N(0, eps) one.
struct SignalModel {
  double rho = 0.2;
  double eps = 1e-6;
  double sigma2 = 1.0;

  /// Throws ParameterError unless 0 < rho <= 1, 0 < eps < sigma2.
  void validate() const;

  /// Mixture weights {rho, 1-rho}; index 0 is the large component.
  std::array<double, 2> weights() const { return {rho, 1.0 - rho}; }
  /// Component variances {sigma2, eps}.
  std::array<double, 2> variances() const { return {sigma2, eps}; }
};

/// Scalar channel R = x + N(0, Sigma2).
struct DenoiserInput {
  double Sigma2;
  double R;
};

/// Posterior moments of x given R under the two-Gaussian prior.
struct PosteriorMoments {
  double mean;
  double second_moment;
  double variance;
};

/// Draws n iid components from the model. Deterministic in seed.
std::vector<double> sample_signal(const SignalModel& model, std::size_t n, std::uint64_t seed);

/// (1-rho)*eps + rho*sigma2
double prior_variance(const SignalModel& model);

/// All three posterior moments in one pass. variance is computed by the law of
/// total variance so it is nonnegative by construction.
PosteriorMoments posterior_moments(const SignalModel& model, DenoiserInput in);

/// Posterior mean E[x | R].
double f_a(const SignalModel& model, DenoiserInput in);
/// Posterior second moment E[x^2 | R].
double f_b(const SignalModel& model, DenoiserInput in);
/// Posterior variance f_b - f_a^2.
double f_c(const SignalModel& model, DenoiserInput in);

}  // namespace ascs
