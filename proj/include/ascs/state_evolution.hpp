#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ascs/measure.hpp"
#include "ascs/prior.hpp"
#include "ascs/quadrature.hpp"

namespace ascs {

/// Upper clamp on mhat; the noiseless recursion drives E towards machine zero.
inline constexpr double kMhatCap = 1e30;

/// Energies E^t (one entry per block; a single entry for the scalar recursion)
/// and the matching mhat^t that produced E^{t+1}.
struct SeTrace {
  std::vector<std::vector<double>> energies;
  std::vector<std::vector<double>> mhat;
  std::optional<std::size_t> converged_at;

  std::size_t steps() const { return energies.empty() ? 0 : energies.size() - 1; }
  const std::vector<double>& final_energies() const { return energies.back(); }
  double final_max() const;
};

/// MMSE of the scalar channel at precision mhat, averaged over the prior:
/// sum_a w_a int Dz f_c(1/mhat, z sqrt(sigma_a^2 + 1/mhat)). Returns the prior
/// variance for mhat = 0.
double channel_mmse(double mhat, const SignalModel& model, const QuadratureRule& quad = default_rule());

/// E^{t+1} from E^t with mhat = alpha/E.
double se_step(double E, const SignalModel& model, double alpha, const QuadratureRule& quad = default_rule());

/// Iterates se_step until |E^{t+1} - E^t| < tol E^t (the converged iterate is not
/// appended) or max_iter steps.
SeTrace se_run(const SignalModel& model, double alpha, double E0, double tol = 1e-12,
               std::size_t max_iter = 10000, const QuadratureRule& quad = default_rule());

/// Coupling plus block rates; row 0 of J is the seed block.
struct BlockDesign {
  CouplingMatrix J;
  double alpha_seed = 0.0;
  double alpha_bulk = 0.0;

  static BlockDesign from_profile(const SeedingProfile& profile);
};

/// Per-block mhat_p for the current energies.
std::vector<double> block_mhat(std::span<const double> E, const BlockDesign& design);

std::vector<double> se_block_step(std::span<const double> E, const BlockDesign& design,
                                  const SignalModel& model, const QuadratureRule& quad = default_rule());
std::vector<double> se_block_step(std::span<const double> E, const SeedingProfile& profile,
                                  const SignalModel& model, const QuadratureRule& quad = default_rule());

struct BlockRunOptions {
  double tol = 1e-12;          ///< stop when every block changes by less than tol relative
  std::size_t max_iter = 10000;
  double stop_factor = 2.0;    ///< reconstruction when max_p E_p <= stop_factor * eps
};

/// Block recursion from E_p^0 = prior variance; converged_at is the first t at
/// which all blocks are reconstructed.
SeTrace se_block_run(const BlockDesign& design, const SignalModel& model, const BlockRunOptions& opts = {},
                     const QuadratureRule& quad = default_rule());
SeTrace se_block_run(const SeedingProfile& profile, const SignalModel& model, const BlockRunOptions& opts = {},
                     const QuadratureRule& quad = default_rule());

/// First t with E^t <= stop_factor * eps starting from the prior variance, or
/// nullopt if the recursion stalls or max_iter is reached.
std::optional<std::size_t> convergence_time(double alpha, const SignalModel& model,
                                            const BlockRunOptions& opts = {},
                                            const QuadratureRule& quad = default_rule());
std::optional<std::size_t> convergence_time(const SeedingProfile& profile, const SignalModel& model,
                                            const BlockRunOptions& opts = {},
                                            const QuadratureRule& quad = default_rule());

}  // namespace ascs
