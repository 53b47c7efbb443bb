#include "ascs/state_evolution.hpp"

#include <algorithm>
#include <cmath>

#include "ascs/error.hpp"

namespace ascs {

double SeTrace::final_max() const {
  const auto& last = energies.back();
  return *std::max_element(last.begin(), last.end());
}

double channel_mmse(double mhat, const SignalModel& model, const QuadratureRule& quad) {
  if (!(mhat >= 0.0)) throw DomainError("channel_mmse: mhat must be >= 0");
  if (mhat == 0.0) return prior_variance(model);
  const double Sigma2 = 1.0 / std::min(mhat, kMhatCap);
  const auto w = model.weights();
  const auto s = model.variances();
  double total = 0.0;
  for (int a = 0; a < 2; ++a) {
    if (w[a] == 0.0) continue;
    const double scale = std::sqrt(s[a] + Sigma2);
    total += w[a] * quad.integrate([&](double z) { return posterior_moments(model, {Sigma2, z * scale}).variance; });
  }
  return total;
}

double se_step(double E, const SignalModel& model, double alpha, const QuadratureRule& quad) {
  if (!(E > 0.0)) throw DomainError("se_step: E must be positive");
  if (!(alpha >= 0.0)) throw DomainError("se_step: alpha must be >= 0");
  return channel_mmse(std::min(alpha / E, kMhatCap), model, quad);
}

SeTrace se_run(const SignalModel& model, double alpha, double E0, double tol, std::size_t max_iter,
               const QuadratureRule& quad) {
  model.validate();
  if (!(E0 > 0.0)) throw DomainError("se_run: E0 must be positive");
  SeTrace trace;
  double E = E0;
  trace.energies.push_back({E});
  for (std::size_t t = 0; t < max_iter; ++t) {
    const double mhat = std::min(alpha / E, kMhatCap);
    const double next = channel_mmse(mhat, model, quad);
    if (std::abs(next - E) < tol * E) {
      trace.converged_at = t;
      break;
    }
    trace.mhat.push_back({mhat});
    trace.energies.push_back({next});
    E = next;
  }
  return trace;
}

BlockDesign BlockDesign::from_profile(const SeedingProfile& profile) {
  return {coupling_matrix(profile), profile.alpha_seed, profile.alpha_bulk};
}

std::vector<double> block_mhat(std::span<const double> E, const BlockDesign& design) {
  const auto& J = design.J;
  if (static_cast<int>(E.size()) != J.cols()) throw DimensionError("block_mhat: E has wrong length");
  std::vector<double> mhat(E.size(), 0.0);
  for (int r = 0; r < J.rows(); ++r) {
    double denom = 0.0;
    for (int q = 0; q < J.cols(); ++q) denom += J(r, q) * E[q];
    const bool row_empty = J.nonzero_span(r).first == J.nonzero_span(r).second;
    if (row_empty) continue;
    if (!(denom > 0.0)) throw DomainError("block_mhat: zero denominator in measurement block " + std::to_string(r));
    const double rate = r == 0 ? design.alpha_seed : design.alpha_bulk;
    for (int p = 0; p < J.cols(); ++p) mhat[p] += rate * J(r, p) / denom;
  }
  for (double& m : mhat) m = std::min(m, kMhatCap);
  return mhat;
}

std::vector<double> se_block_step(std::span<const double> E, const BlockDesign& design,
                                  const SignalModel& model, const QuadratureRule& quad) {
  for (double e : E)
    if (!(e > 0.0)) throw DomainError("se_block_step: all E_q must be positive");
  const auto mhat = block_mhat(E, design);
  std::vector<double> next(E.size());
  for (std::size_t p = 0; p < E.size(); ++p) next[p] = channel_mmse(mhat[p], model, quad);
  return next;
}

std::vector<double> se_block_step(std::span<const double> E, const SeedingProfile& profile,
                                  const SignalModel& model, const QuadratureRule& quad) {
  return se_block_step(E, BlockDesign::from_profile(profile), model, quad);
}

SeTrace se_block_run(const BlockDesign& design, const SignalModel& model, const BlockRunOptions& opts,
                     const QuadratureRule& quad) {
  model.validate();
  const double threshold = opts.stop_factor * model.eps;
  SeTrace trace;
  std::vector<double> E(static_cast<std::size_t>(design.J.cols()), prior_variance(model));
  trace.energies.push_back(E);
  auto reconstructed = [&](const std::vector<double>& e) {
    return *std::max_element(e.begin(), e.end()) <= threshold;
  };
  if (reconstructed(E)) {
    trace.converged_at = 0;
    return trace;
  }
  for (std::size_t t = 0; t < opts.max_iter; ++t) {
    auto mhat = block_mhat(E, design);
    std::vector<double> next(E.size());
    bool stationary = true;
    for (std::size_t p = 0; p < E.size(); ++p) {
      next[p] = channel_mmse(mhat[p], model, quad);
      if (std::abs(next[p] - E[p]) >= opts.tol * E[p]) stationary = false;
    }
    if (stationary) break;  // as in se_run, the repeated iterate is not recorded
    trace.mhat.push_back(std::move(mhat));
    trace.energies.push_back(next);
    E = std::move(next);
    if (reconstructed(E)) {
      trace.converged_at = t + 1;
      break;
    }
  }
  return trace;
}

SeTrace se_block_run(const SeedingProfile& profile, const SignalModel& model, const BlockRunOptions& opts,
                     const QuadratureRule& quad) {
  return se_block_run(BlockDesign::from_profile(profile), model, opts, quad);
}

std::optional<std::size_t> convergence_time(double alpha, const SignalModel& model, const BlockRunOptions& opts,
                                            const QuadratureRule& quad) {
  model.validate();
  const double threshold = opts.stop_factor * model.eps;
  double E = prior_variance(model);
  for (std::size_t t = 0; t <= opts.max_iter; ++t) {
    if (E <= threshold) return t;
    if (t == opts.max_iter) break;
    const double next = se_step(E, model, alpha, quad);
    if (std::abs(next - E) < opts.tol * E) return std::nullopt;
    E = next;
  }
  return std::nullopt;
}

std::optional<std::size_t> convergence_time(const SeedingProfile& profile, const SignalModel& model,
                                            const BlockRunOptions& opts, const QuadratureRule& quad) {
  return se_block_run(profile, model, opts, quad).converged_at;
}

}  // namespace ascs
