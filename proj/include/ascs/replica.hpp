#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ascs/prior.hpp"
#include "ascs/quadrature.hpp"

namespace ascs {

/// Replica potential Phi(E) at measurement rate alpha, with mhat = alpha/E.
///
/// Evaluated in an algebraically equivalent form in which the two O(mhat)
/// contributions (the -alpha*V0/(2E) term and the large-component exponent)
/// cancel analytically, accumulated in long double. Its derivative satisfies
/// dPhi/dE = alpha/(2E^2) (se_step(E) - E), so local maxima are stable fixed
/// points of state evolution.
double potential(double E, const SignalModel& model, double alpha, const QuadratureRule& quad = default_rule());

struct PotentialMaximum {
  double E;
  double phi;
};

struct PotentialLandscape {
  std::vector<double> E;    ///< log-spaced grid
  std::vector<double> phi;  ///< Phi on the grid
  std::vector<PotentialMaximum> maxima;  ///< interior local maxima, refined, sorted by E
};

struct LandscapeOptions {
  std::size_t points = 2000;
  double lower_factor = 1e-3;  ///< grid starts at lower_factor * eps
  double upper_factor = 2.0;   ///< grid ends at upper_factor * prior variance
  double refine_tol = 1e-9;    ///< golden-section tolerance on log E
};

PotentialLandscape landscape(const SignalModel& model, double alpha, const LandscapeOptions& opts = {},
                             const QuadratureRule& quad = default_rule());

/// A fixed point E = se_step(E) at a given alpha.
struct FixedPoint {
  double E;
  double mhat;
  bool stable;
};

/// Sampled fixed-point curve h(mhat) = mhat * G(mhat), where G is the channel
/// MMSE. State evolution at rate alpha has a fixed point at E = alpha/mhat
/// exactly when h(mhat) = alpha; stable fixed points lie on increasing
/// stretches of h. Local extrema of h are the spinodal rates.
class FixedPointCurve {
 public:
  explicit FixedPointCurve(const SignalModel& model, const QuadratureRule& quad = default_rule(),
                           std::size_t points_per_decade = 40);

  double h(double mhat) const;
  const std::vector<double>& log_mhat() const { return log_mhat_; }
  const std::vector<double>& values() const { return h_; }

  struct Extremum {
    double mhat;
    double alpha;
    bool maximum;
  };
  /// Interior extrema with prominence above noise, refined by golden section.
  std::vector<Extremum> extrema() const;

  /// All fixed points at rate alpha, sorted by E ascending.
  std::vector<FixedPoint> fixed_points(double alpha) const;

  const SignalModel& model() const { return model_; }
  const QuadratureRule& quad() const { return *quad_; }

 private:
  SignalModel model_;
  const QuadratureRule* quad_;
  std::vector<double> log_mhat_;
  std::vector<double> h_;
};

std::vector<FixedPoint> se_fixed_points(const SignalModel& model, double alpha,
                                        const QuadratureRule& quad = default_rule());

/// The three critical rates at fixed (rho, eps).
struct PhaseBoundary {
  double alpha_s = 0.0;
  double alpha_opt = 0.0;
  double alpha_bp = 0.0;
  bool exists = false;  ///< whether a first-order (bistable) region exists on (0, 1)
};

PhaseBoundary phase_boundary(const SignalModel& model, const QuadratureRule& quad = default_rule());
PhaseBoundary phase_boundary(const FixedPointCurve& curve);

/// Individual rates; nullopt when there is no bistable region.
std::optional<double> alpha_bp(const SignalModel& model, const QuadratureRule& quad = default_rule());
std::optional<double> alpha_s(const SignalModel& model, const QuadratureRule& quad = default_rule());
std::optional<double> alpha_opt(const SignalModel& model, const QuadratureRule& quad = default_rule());

/// MSE of Bayes-optimal inference: E at the global maximum of Phi.
double optimal_mse(const SignalModel& model, double alpha, const QuadratureRule& quad = default_rule());
double optimal_mse(const FixedPointCurve& curve, double alpha);

/// MSE reached by state evolution from the prior variance (the algorithmic MSE).
double algorithmic_mse(const FixedPointCurve& curve, double alpha);

struct PhaseDiagramRow {
  double rho;
  double eps;
  PhaseBoundary boundary;
};

/// Boundaries for every (rho, eps) pair of the cartesian grid, rho-major.
std::vector<PhaseDiagramRow> phase_diagram(const std::vector<double>& rhos, const std::vector<double>& epss,
                                           double sigma2 = 1.0, const QuadratureRule& quad = default_rule());

}  // namespace ascs
