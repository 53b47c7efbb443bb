#include "ascs/replica.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ascs/error.hpp"
#include "ascs/state_evolution.hpp"

namespace ascs {

double potential(double E, const SignalModel& model, double alpha, const QuadratureRule& quad) {
  if (!(E > 0.0)) throw DomainError("potential: E must be positive");
  if (!(alpha >= 0.0)) throw DomainError("potential: alpha must be >= 0");
  using real = long double;

  const auto w = model.weights();
  const auto s = model.variances();
  const real mh = std::min(static_cast<real>(alpha) / E, static_cast<real>(kMhatCap));
  const real V0 = prior_variance(model);
  const real s_ref = s[0];  // largest variance: the b with the largest exponent

  real phi = -0.5L * alpha * std::log(static_cast<real>(E)) + mh * (1.0L - V0 / s_ref) / (2.0L * (mh + 1.0L / s_ref));

  std::array<real, 2> log_prefactor{};
  for (int b = 0; b < 2; ++b)
    log_prefactor[b] = w[b] > 0.0 ? std::log(static_cast<real>(w[b])) - 0.5L * std::log1p(mh * s[b])
                                  : -std::numeric_limits<real>::infinity();

  for (int a = 0; a < 2; ++a) {
    if (w[a] == 0.0) continue;
    // Exponent coefficients relative to b = 0; both are <= 0.
    std::array<real, 2> coef{};
    for (int b = 0; b < 2; ++b) {
      const real sb = s[b];
      coef[b] = 0.5L * (mh * mh * s[a] + mh) * (1.0L / s_ref - 1.0L / sb) / ((mh + 1.0L / sb) * (mh + 1.0L / s_ref));
    }
    real acc = 0.0L;
    for (std::size_t k = 0; k < quad.size(); ++k) {
      const real z2 = static_cast<real>(quad.nodes[k]) * quad.nodes[k];
      const real e0 = log_prefactor[0] + coef[0] * z2;
      const real e1 = log_prefactor[1] + coef[1] * z2;
      const real top = std::max(e0, e1);
      acc += quad.weights[k] * (top + std::log(std::exp(e0 - top) + std::exp(e1 - top)));
    }
    phi += w[a] * acc;
  }
  return static_cast<double>(phi);
}

namespace {

constexpr double kInvPhi = 0.6180339887498949;

template <class F>
double golden_maximize(F&& f, double lo, double hi, double tol) {
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

PotentialLandscape landscape(const SignalModel& model, double alpha, const LandscapeOptions& opts,
                             const QuadratureRule& quad) {
  model.validate();
  if (opts.points < 3) throw ParameterError("landscape: need at least 3 grid points");
  PotentialLandscape out;
  const double lo = std::log(opts.lower_factor * model.eps);
  const double hi = std::log(opts.upper_factor * prior_variance(model));
  out.E.resize(opts.points);
  out.phi.resize(opts.points);
  for (std::size_t i = 0; i < opts.points; ++i) {
    out.E[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(opts.points - 1));
    out.phi[i] = potential(out.E[i], model, alpha, quad);
  }
  auto phi_log = [&](double logE) { return potential(std::exp(logE), model, alpha, quad); };
  for (std::size_t i = 1; i + 1 < opts.points; ++i) {
    if (out.phi[i] > out.phi[i - 1] && out.phi[i] >= out.phi[i + 1]) {
      const double x = golden_maximize(phi_log, std::log(out.E[i - 1]), std::log(out.E[i + 1]), opts.refine_tol);
      out.maxima.push_back({std::exp(x), phi_log(x)});
    }
  }
  return out;
}

FixedPointCurve::FixedPointCurve(const SignalModel& model, const QuadratureRule& quad, std::size_t points_per_decade)
    : model_(model), quad_(&quad) {
  model.validate();
  if (points_per_decade < 2) throw ParameterError("FixedPointCurve: points_per_decade must be >= 2");
  const double lo = std::log(1e-2 / prior_variance(model));
  const double hi = std::log(1e4 / model.eps);
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / std::log(10.0) * points_per_decade)) + 1;
  log_mhat_.resize(count);
  h_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    log_mhat_[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    h_[i] = h(std::exp(log_mhat_[i]));
  }
}

double FixedPointCurve::h(double mhat) const { return mhat * channel_mmse(mhat, model_, *quad_); }

std::vector<FixedPointCurve::Extremum> FixedPointCurve::extrema() const {
  // Turning points with hysteresis so quadrature-level wiggles are ignored.
  constexpr double kProminence = 1e-9;
  std::vector<std::size_t> turns;
  std::vector<bool> is_max;
  bool rising = true;
  std::size_t extreme = 0;
  for (std::size_t i = 1; i < h_.size(); ++i) {
    if (rising) {
      if (h_[i] > h_[extreme]) extreme = i;
      else if (h_[extreme] - h_[i] > kProminence) {
        turns.push_back(extreme);
        is_max.push_back(true);
        rising = false;
        extreme = i;
      }
    } else {
      if (h_[i] < h_[extreme]) extreme = i;
      else if (h_[i] - h_[extreme] > kProminence) {
        turns.push_back(extreme);
        is_max.push_back(false);
        rising = true;
        extreme = i;
      }
    }
  }

  std::vector<Extremum> out;
  for (std::size_t k = 0; k < turns.size(); ++k) {
    const std::size_t i = turns[k];
    if (i == 0 || i + 1 >= h_.size()) continue;
    const double sign = is_max[k] ? 1.0 : -1.0;
    auto f = [&](double x) { return sign * h(std::exp(x)); };
    const double x = golden_maximize(f, log_mhat_[i - 1], log_mhat_[i + 1], 1e-10);
    out.push_back({std::exp(x), h(std::exp(x)), is_max[k]});
  }
  return out;
}

std::vector<FixedPoint> FixedPointCurve::fixed_points(double alpha) const {
  std::vector<FixedPoint> out;
  for (std::size_t i = 0; i + 1 < h_.size(); ++i) {
    const double d0 = h_[i] - alpha;
    const double d1 = h_[i + 1] - alpha;
    if (d0 == 0.0 || (d0 < 0.0) != (d1 < 0.0)) {
      double lo = log_mhat_[i], hi = log_mhat_[i + 1];
      const bool increasing = d1 > d0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double dm = h(std::exp(mid)) - alpha;
        if ((dm < 0.0) == increasing) lo = mid;
        else hi = mid;
      }
      const double mhat = std::exp(0.5 * (lo + hi));
      out.push_back({alpha / mhat, mhat, increasing});
      if (d1 == 0.0) ++i;
    }
  }
  std::sort(out.begin(), out.end(), [](const FixedPoint& a, const FixedPoint& b) { return a.E < b.E; });
  return out;
}

std::vector<FixedPoint> se_fixed_points(const SignalModel& model, double alpha, const QuadratureRule& quad) {
  return FixedPointCurve(model, quad).fixed_points(alpha);
}

PhaseBoundary phase_boundary(const FixedPointCurve& curve) {
  PhaseBoundary pb;
  const auto ext = curve.extrema();
  // First local maximum followed by a local minimum: the bistable window.
  for (std::size_t k = 0; k + 1 < ext.size(); ++k) {
    if (ext[k].maximum && !ext[k + 1].maximum && ext[k + 1].alpha < ext[k].alpha) {
      pb.alpha_bp = ext[k].alpha;
      pb.alpha_s = ext[k + 1].alpha;
      pb.exists = pb.alpha_s > 0.0 && pb.alpha_bp < 1.0;
      break;
    }
  }
  if (!pb.exists) return pb;

  const auto& model = curve.model();
  const auto& quad = curve.quad();
  // Phi(low-E maximum) - Phi(high-E maximum), increasing in alpha.
  auto gap = [&](double alpha) {
    const auto fps = curve.fixed_points(alpha);
    std::vector<FixedPoint> stable;
    for (const auto& fp : fps)
      if (fp.stable) stable.push_back(fp);
    if (stable.size() < 2) {
      // Near a spinodal one branch has merged away: near alpha_s only the
      // high-E branch is resolved, near alpha_bp only the low-E one.
      return alpha - 0.5 * (pb.alpha_s + pb.alpha_bp);
    }
    return potential(stable.front().E, model, alpha, quad) - potential(stable.back().E, model, alpha, quad);
  };
  double lo = pb.alpha_s, hi = pb.alpha_bp;
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid) > 0.0) hi = mid;
    else lo = mid;
  }
  pb.alpha_opt = 0.5 * (lo + hi);
  return pb;
}

PhaseBoundary phase_boundary(const SignalModel& model, const QuadratureRule& quad) {
  return phase_boundary(FixedPointCurve(model, quad));
}

std::optional<double> alpha_bp(const SignalModel& model, const QuadratureRule& quad) {
  const auto pb = phase_boundary(model, quad);
  return pb.exists ? std::optional(pb.alpha_bp) : std::nullopt;
}

std::optional<double> alpha_s(const SignalModel& model, const QuadratureRule& quad) {
  const auto pb = phase_boundary(model, quad);
  return pb.exists ? std::optional(pb.alpha_s) : std::nullopt;
}

std::optional<double> alpha_opt(const SignalModel& model, const QuadratureRule& quad) {
  const auto pb = phase_boundary(model, quad);
  return pb.exists ? std::optional(pb.alpha_opt) : std::nullopt;
}

double optimal_mse(const FixedPointCurve& curve, double alpha) {
  double best_E = prior_variance(curve.model());
  double best_phi = -std::numeric_limits<double>::infinity();
  for (const auto& fp : curve.fixed_points(alpha)) {
    if (!fp.stable) continue;
    const double phi = potential(fp.E, curve.model(), alpha, curve.quad());
    if (phi > best_phi) {
      best_phi = phi;
      best_E = fp.E;
    }
  }
  return best_E;
}

double optimal_mse(const SignalModel& model, double alpha, const QuadratureRule& quad) {
  return optimal_mse(FixedPointCurve(model, quad), alpha);
}

double algorithmic_mse(const FixedPointCurve& curve, double alpha) {
  const double start = alpha / prior_variance(curve.model());
  double best = prior_variance(curve.model());
  double best_mhat = std::numeric_limits<double>::infinity();
  for (const auto& fp : curve.fixed_points(alpha)) {
    if (fp.stable && fp.mhat >= start * (1.0 - 1e-12) && fp.mhat < best_mhat) {
      best_mhat = fp.mhat;
      best = fp.E;
    }
  }
  return best;
}

std::vector<PhaseDiagramRow> phase_diagram(const std::vector<double>& rhos, const std::vector<double>& epss,
                                           double sigma2, const QuadratureRule& quad) {
  std::vector<PhaseDiagramRow> rows;
  rows.reserve(rhos.size() * epss.size());
  for (double rho : rhos) {
    for (double eps : epss) {
      const SignalModel model{rho, eps, sigma2};
      rows.push_back({rho, eps, phase_boundary(model, quad)});
    }
  }
  return rows;
}

}  // namespace ascs
