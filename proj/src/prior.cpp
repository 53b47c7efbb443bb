#include "ascs/prior.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ascs/error.hpp"

namespace ascs {

void SignalModel::validate() const {
  // rho == 1 is the degenerate single-Gaussian prior; allowed for moments.
  if (!(rho > 0.0 && rho <= 1.0))
    throw ParameterError("rho must lie in (0, 1], got " + std::to_string(rho));
  if (!(eps > 0.0))
    throw ParameterError("eps must be positive, got " + std::to_string(eps));
  if (!(sigma2 > 0.0))
    throw ParameterError("sigma2 must be positive, got " + std::to_string(sigma2));
  if (!(eps < sigma2))
    throw ParameterError("eps must be smaller than sigma2");
}

std::vector<double> sample_signal(const SignalModel& model, std::size_t n, std::uint64_t seed) {
  model.validate();
  if (n == 0) throw ParameterError("sample_signal: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution large(model.rho);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sd_large = std::sqrt(model.sigma2);
  const double sd_small = std::sqrt(model.eps);
  std::vector<double> x(n);
  for (auto& xi : x) {
    const bool is_large = large(rng);
    xi = gauss(rng) * (is_large ? sd_large : sd_small);
  }
  return x;
}

double prior_variance(const SignalModel& model) {
  return (1.0 - model.rho) * model.eps + model.rho * model.sigma2;
}

PosteriorMoments posterior_moments(const SignalModel& model, DenoiserInput in) {
  if (!(in.Sigma2 > 0.0))
    throw DomainError("denoiser: Sigma2 must be positive, got " + std::to_string(in.Sigma2));

  const auto w = model.weights();
  const auto s = model.variances();
  const double r2 = in.R * in.R;

  // Responsibilities from log evidences with the max exponent removed.
  std::array<double, 2> logp{};
  std::array<double, 2> mean{};
  std::array<double, 2> var{};
  for (int a = 0; a < 2; ++a) {
    const double total = in.Sigma2 + s[a];
    logp[a] = w[a] > 0.0 ? std::log(w[a]) - 0.5 * std::log(total) - r2 / (2.0 * total)
                         : -INFINITY;
    mean[a] = in.R * (s[a] / total);
    var[a] = s[a] * (in.Sigma2 / total);
  }
  const double top = std::max(logp[0], logp[1]);
  double p0 = std::exp(logp[0] - top);
  double p1 = std::exp(logp[1] - top);
  const double norm = p0 + p1;
  p0 /= norm;
  p1 /= norm;

  const double m = p0 * mean[0] + p1 * mean[1];
  const double d0 = mean[0] - m;
  const double d1 = mean[1] - m;
  const double v = p0 * (var[0] + d0 * d0) + p1 * (var[1] + d1 * d1);
  const double b = p0 * (var[0] + mean[0] * mean[0]) + p1 * (var[1] + mean[1] * mean[1]);
  return {m, b, v};
}

double f_a(const SignalModel& model, DenoiserInput in) { return posterior_moments(model, in).mean; }

double f_b(const SignalModel& model, DenoiserInput in) {
  return posterior_moments(model, in).second_moment;
}

double f_c(const SignalModel& model, DenoiserInput in) {
  return posterior_moments(model, in).variance;
}

}  // namespace ascs
