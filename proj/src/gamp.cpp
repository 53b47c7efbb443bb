#include "ascs/gamp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ascs/error.hpp"

namespace ascs {

void GampOptions::validate() const {
  if (!(v_floor > 0.0)) throw ParameterError("gamp: v_floor must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw ParameterError("gamp: damping must lie in (0, 1]");
  if (!(conv_tol >= 0.0)) throw ParameterError("gamp: conv_tol must be >= 0");
  if (!(target_mse >= 0.0)) throw ParameterError("gamp: target_mse must be >= 0");
}

GampState gamp_init(const SignalModel& model, std::span<const double> y, std::size_t n) {
  model.validate();
  GampState state;
  state.omega.assign(y.begin(), y.end());
  state.a.assign(n, 0.0);
  state.v.assign(n, prior_variance(model));
  state.Sigma2.assign(n, 0.0);
  state.R.assign(n, 0.0);
  return state;
}

double mse(std::span<const double> a, std::span<const double> s) {
  if (a.size() != s.size()) throw DimensionError("mse: length mismatch");
  if (a.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - s[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

namespace {

void require_finite(double x, const char* what, std::size_t t) {
  if (!std::isfinite(x)) throw DivergenceError(std::string("gamp: non-finite ") + what, t);
}

}  // namespace

void gamp_sweep(GampState& state, const MeasurementMatrix& F, std::span<const double> y,
                const SignalModel& model, const GampOptions& opts) {
  const std::size_t M = F.rows();
  const std::size_t N = F.cols();
  if (y.size() != M || state.omega.size() != M || state.a.size() != N || state.v.size() != N)
    throw DimensionError("gamp_sweep: state does not match matrix dimensions");
  const std::size_t t = state.t;
  const bool have_prev_V = state.V.size() == M;

  // Row mu gives V_mu^{t+1} = sum_i F^2 v_i^t and
  // omega_mu^{t+1} = sum_i F a_i^t - (y_mu - omega_mu^t)/V_mu^t * V_mu^{t+1};
  // its contributions to sum_mu F^2/V and sum_mu F (y - omega)/V are added
  // while the row is still in cache.
  std::vector<double> V_new(M), omega_new(M);
  std::vector<double> precision(N, 0.0), correction(N, 0.0);
  for (const auto& panel : F.panels()) {
    const auto width = static_cast<Eigen::Index>(panel.col_end - panel.col_begin);
    const Eigen::Map<const Eigen::ArrayXd> a(state.a.data() + panel.col_begin, width);
    const Eigen::Map<const Eigen::ArrayXd> v(state.v.data() + panel.col_begin, width);
    Eigen::Map<Eigen::ArrayXd> prec(precision.data() + panel.col_begin, width);
    Eigen::Map<Eigen::ArrayXd> corr(correction.data() + panel.col_begin, width);
    for (Eigen::Index r = 0; r < panel.values.rows(); ++r) {
      const std::size_t mu = panel.row_begin + static_cast<std::size_t>(r);
      const auto row = panel.values.row(r).array().transpose();
      const double Vmu = width > 0 ? (row.square() * v).sum() : 0.0;
      const double Fa = width > 0 ? (row * a).sum() : 0.0;
      double onsager = 0.0;
      if (have_prev_V) onsager = (y[mu] - state.omega[mu]) / std::max(state.V[mu], opts.v_floor) * Vmu;
      V_new[mu] = Vmu;
      omega_new[mu] = Fa - onsager;
      require_finite(omega_new[mu], "omega", t);
      const double inv_V = 1.0 / std::max(Vmu, opts.v_floor);
      const double scaled_residual = (y[mu] - omega_new[mu]) * inv_V;
      if (width > 0) {
        prec += row.square() * inv_V;
        corr += row * scaled_residual;
      }
    }
  }

  const double sigma2_cap = 1.0 / opts.v_floor;
  const double keep = 1.0 - opts.damping;
  for (std::size_t i = 0; i < N; ++i) {
    double S2 = precision[i] > 0.0 ? 1.0 / precision[i] : sigma2_cap;
    S2 = std::min(S2, sigma2_cap);
    const double Ri = precision[i] > 0.0 ? state.a[i] + correction[i] / precision[i] : state.a[i];
    require_finite(Ri, "R", t);
    state.Sigma2[i] = S2;
    state.R[i] = Ri;
    const auto post = posterior_moments(model, {S2, Ri});
    require_finite(post.mean, "a", t);
    require_finite(post.variance, "v", t);
    state.a[i] = opts.damping * post.mean + keep * state.a[i];
    state.v[i] = opts.damping * post.variance + keep * state.v[i];
  }

  state.V = std::move(V_new);
  state.omega = std::move(omega_new);
  state.t = t + 1;
}

GampResult gamp_run(const MeasurementMatrix& F, std::span<const double> y, const SignalModel& model,
                    const GampOptions& opts, std::optional<std::span<const double>> truth,
                    const GampObserver& observer) {
  opts.validate();
  if (y.size() != F.rows()) throw DimensionError("gamp_run: y does not match matrix rows");
  if (truth && truth->size() != F.cols()) throw DimensionError("gamp_run: truth does not match matrix columns");

  GampState state = gamp_init(model, y, F.cols());
  GampResult result;
  auto mean_of = [](const std::vector<double>& x) {
    double acc = 0.0;
    for (double e : x) acc += e;
    return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
  };
  auto record = [&](double residual) {
    if (observer) observer(state);
    result.mean_v.push_back(mean_of(state.v));
    result.residual.push_back(residual);
    if (truth) {
      result.mse_trace.push_back(mse(state.a, *truth));
      if (opts.target_mse > 0.0 && result.mse_trace.back() <= opts.target_mse) result.reached_target = true;
    }
  };
  record(0.0);

  std::vector<double> previous;
  while (state.t < opts.max_iter && !result.reached_target) {
    previous = state.a;
    gamp_sweep(state, F, y, model, opts);
    const double change = mse(state.a, previous);
    record(change);
    if (change < opts.conv_tol) {
      result.converged = true;
      break;
    }
  }
  result.iterations = state.t;
  result.estimate = std::move(state.a);
  return result;
}

}  // namespace ascs
