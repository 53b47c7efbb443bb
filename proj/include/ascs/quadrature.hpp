#pragma once

#include <cstddef>
#include <vector>

namespace ascs {

/// Nodes and weights approximating the standard Gaussian measure
/// Dz = exp(-z^2/2)/sqrt(2 pi) dz. Nodes are symmetric about 0 and the
/// weights sum to one.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  /// Sum_k w_k f(z_k).
  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) acc += weights[k] * f(nodes[k]);
    return acc;
  }
};

/// Parameters of the graded composite rule.
struct GradedRuleSpec {
  int points_per_panel = 16;  ///< Gauss–Legendre order per panel ("K")
  double z_min = 1e-12;       ///< width of the innermost panel
  double ratio = 1.5;         ///< geometric growth of panel widths
  double z_max = 12.0;        ///< truncation of the Gaussian tail
};

/// Composite Gauss–Legendre rule on [-z_max, z_max] with panels graded
/// geometrically towards z = 0.
///
/// The integrands met in state evolution and in the potential switch between
/// posterior components over a z-interval of width ~sqrt(Sigma2 + eps), which
/// can be 1e-6 or smaller; a single Gauss–Hermite rule does not resolve that.
QuadratureRule graded_gaussian_rule(const GradedRuleSpec& spec = {});

/// K-point Gauss–Hermite rule for the standard Gaussian measure (Golub–Welsch).
QuadratureRule gauss_hermite_rule(int K);

/// Process-wide default rule (graded_gaussian_rule with default spec).
const QuadratureRule& default_rule();

}  // namespace ascs
