#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ascs/measure.hpp"
#include "ascs/prior.hpp"

namespace ascs {

/// Working vectors of the solver. V and omega live on measurements, the rest on
/// signal components.
struct GampState {
  std::vector<double> V;       ///< V_mu; empty until the first sweep
  std::vector<double> omega;   ///< omega_mu
  std::vector<double> Sigma2;  ///< Sigma_i^2
  std::vector<double> R;       ///< R_i
  std::vector<double> a;       ///< current estimate (posterior means)
  std::vector<double> v;       ///< posterior variances
  std::size_t t = 0;
};

struct GampOptions {
  std::size_t max_iter = 2000;
  double conv_tol = 1e-13;  ///< stop when mean (a^{t+1}-a^t)^2 < conv_tol
  double v_floor = 1e-12;   ///< lower clamp on V_mu in divisions; Sigma^2 is capped at 1/v_floor
  double damping = 1.0;     ///< weight of the new a, v (1 = no damping)
  double target_mse = 0.0;  ///< with a truth vector: stop once MSE <= target_mse (0 disables)

  void validate() const;
};

struct GampResult {
  std::vector<double> estimate;
  std::vector<double> mse_trace;  ///< E^0 .. E^iterations, empty without truth
  std::vector<double> mean_v;     ///< mean posterior variance per iterate
  std::vector<double> residual;   ///< mean squared update of a; residual[0] = 0
  std::size_t iterations = 0;
  bool converged = false;
  bool reached_target = false;
};

GampState gamp_init(const SignalModel& model, std::span<const double> y, std::size_t n);

/// One synchronous update of every quantity, in the order V, omega, Sigma^2, R, a, v.
/// Throws DivergenceError on a non-finite intermediate.
void gamp_sweep(GampState& state, const MeasurementMatrix& F, std::span<const double> y,
                const SignalModel& model, const GampOptions& opts);

/// Called with the state after initialization and after every sweep.
using GampObserver = std::function<void(const GampState&)>;

GampResult gamp_run(const MeasurementMatrix& F, std::span<const double> y, const SignalModel& model,
                    const GampOptions& opts, std::optional<std::span<const double>> truth = std::nullopt,
                    const GampObserver& observer = {});

/// Mean squared difference.
double mse(std::span<const double> a, std::span<const double> s);

}  // namespace ascs
