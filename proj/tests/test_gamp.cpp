#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ascs/error.hpp"
#include "ascs/gamp.hpp"
#include "ascs/state_evolution.hpp"

using namespace ascs;

namespace {

const SignalModel kSparse{0.2, 1e-6, 1.0};

struct Instance {
  std::vector<double> s;
  MeasurementMatrix F;
  std::vector<double> y;
};

Instance homogeneous_instance(const SignalModel& model, double alpha, std::size_t n, std::uint64_t seed) {
  Instance in;
  in.s = sample_signal(model, n, mix_seed(seed, 1));
  in.F = homogeneous_matrix(static_cast<std::size_t>(std::llround(alpha * n)), n, mix_seed(seed, 2));
  in.y = measure(in.F, in.s);
  return in;
}

}  // namespace

TEST_CASE("initialization") {
  const std::vector<double> y{0.5, -1.0, 2.0};
  const auto st = gamp_init(kSparse, y, 4);
  CHECK(st.a == std::vector<double>(4, 0.0));
  for (double v : st.v) CHECK(v == doctest::Approx(0.2000008).epsilon(1e-15));
  CHECK(st.omega == y);
  CHECK(st.V.empty());
  CHECK(st.t == 0);
  const auto st2 = gamp_init(SignalModel{0.1, 0.01, 1.0}, y, 2);
  CHECK(st2.v[0] == doctest::Approx(0.109).epsilon(1e-15));
}

TEST_CASE("mse") {
  const std::vector<double> a{1.0, 0.0}, s{0.0, 1.0};
  CHECK(mse(a, s) == 1.0);
  CHECK(mse(s, s) == 0.0);
  const auto x = sample_signal(kSparse, 1000000, 3);
  const std::vector<double> zero(x.size(), 0.0);
  CHECK(std::abs(mse(zero, x) - 0.2000008) <= 0.002);
  CHECK_THROWS_AS(mse(a, std::vector<double>{1.0}), DimensionError);
}

TEST_CASE("zero matrix carries no information") {
  const auto F = MeasurementMatrix::from_dense(Eigen::MatrixXd::Zero(3, 5));
  const std::vector<double> y(3, 0.0);
  GampOptions opts;
  auto st = gamp_init(kSparse, y, 5);
  for (int k = 0; k < 3; ++k) gamp_sweep(st, F, y, kSparse, opts);
  for (double S2 : st.Sigma2) CHECK(S2 == 1.0 / opts.v_floor);
  for (double a : st.a) CHECK(std::abs(a) < 1e-12);
  for (double v : st.v) CHECK(v == doctest::Approx(prior_variance(kSparse)).epsilon(1e-6));
}

TEST_CASE("determined 4x4 system is solved") {
  // Scaled Hadamard: orthogonal, entries of variance 1/N.
  Eigen::MatrixXd H(4, 4);
  H << 1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1;
  H *= 0.5;
  const auto F = MeasurementMatrix::from_dense(H);
  const SignalModel model{0.5, 1e-4, 1.0};
  const std::vector<double> s{0.8, -0.005, 1.3, 0.012};
  const auto y = measure(F, s);
  GampOptions opts;
  opts.max_iter = 200;
  const auto r = gamp_run(F, y, model, opts, std::span<const double>(s));
  CHECK(r.mse_trace.back() <= 10 * model.eps);
  // compare to the direct solve
  const Eigen::VectorXd direct = H.transpose() * Eigen::Map<const Eigen::VectorXd>(y.data(), 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(r.estimate[i] - direct[i]) <= std::sqrt(10 * model.eps));
}

TEST_CASE("trace bookkeeping") {
  const auto in = homogeneous_instance(kSparse, 0.5, 500, 4);
  GampOptions opts;
  opts.max_iter = 25;
  opts.conv_tol = 0.0;
  std::size_t calls = 0;
  const auto r = gamp_run(in.F, in.y, kSparse, opts, std::span<const double>(in.s),
                          [&](const GampState& st) { CHECK(st.t == calls++); });
  CHECK(r.iterations == 25);
  CHECK(r.mse_trace.size() == r.iterations + 1);
  CHECK(r.mean_v.size() == r.iterations + 1);
  CHECK(calls == r.iterations + 1);
  CHECK(r.mse_trace.front() == doctest::Approx(mse(std::vector<double>(500, 0.0), in.s)));
}

TEST_CASE("first sweep matches state evolution within sampling error") {
  const std::size_t n = 10000;
  const double alpha = 0.4;
  const double E1 = se_step(prior_variance(kSparse), kSparse, alpha);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto in = homogeneous_instance(kSparse, alpha, n, seed);
    auto st = gamp_init(kSparse, in.y, n);
    gamp_sweep(st, in.F, in.y, kSparse, GampOptions{});
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (st.a[i] - in.s[i]) * (st.a[i] - in.s[i]);
    const double mean = std::accumulate(sq.begin(), sq.end(), 0.0) / n;
    double var = 0.0;
    for (double q : sq) var += (q - mean) * (q - mean);
    const double sd = std::sqrt(var / (n - 1) / n);
    CAPTURE(seed);
    CHECK(std::abs(mean - E1) <= 3 * sd);
  }
}

TEST_CASE("above the algorithmic threshold: low error, monotone trace") {
  const auto in = homogeneous_instance(kSparse, 0.6, 10000, 5);
  const auto r = gamp_run(in.F, in.y, kSparse, GampOptions{}, std::span<const double>(in.s));
  CHECK(r.mse_trace.back() <= 1e-5);
  // Strictly non-increasing on the way down; once within 1% of the final
  // value, only finite-N jitter of the empirical MSE is allowed upward.
  const double final_mse = r.mse_trace.back();
  std::size_t t = 4;
  for (; t < r.mse_trace.size() && r.mse_trace[t - 1] > 1.01 * final_mse; ++t) {
    CAPTURE(t);
    CHECK(r.mse_trace[t] <= r.mse_trace[t - 1] + 1e-12);
  }
  CHECK(t > 10);
  for (; t < r.mse_trace.size(); ++t) CHECK(r.mse_trace[t] <= r.mse_trace[t - 1] + 1e-3 * final_mse);
}

TEST_CASE("inside the hard region the algorithm stalls at the high-error fixed point") {
  const double alpha = 0.30;
  const double high = se_run(kSparse, alpha, prior_variance(kSparse)).final_energies()[0];
  REQUIRE(high > 1e-2);
  const auto in = homogeneous_instance(kSparse, alpha, 10000, 6);
  GampOptions opts;
  opts.max_iter = 300;
  const auto r = gamp_run(in.F, in.y, kSparse, opts, std::span<const double>(in.s));
  CHECK(r.mse_trace.back() == doctest::Approx(high).epsilon(0.2));
}

TEST_CASE("permutation equivariance") {
  const std::size_t n = 200;
  const auto in = homogeneous_instance(kSparse, 0.5, n, 7);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::rotate(perm.begin(), perm.begin() + 37, perm.end());

  const Eigen::MatrixXd D = in.F.to_dense();
  Eigen::MatrixXd P(D.rows(), D.cols());
  std::vector<double> sp(n);
  for (std::size_t j = 0; j < n; ++j) {
    P.col(j) = D.col(perm[j]);
    sp[j] = in.s[perm[j]];
  }
  const auto Fp = MeasurementMatrix::from_dense(P);
  GampOptions opts;
  opts.max_iter = 30;
  opts.conv_tol = 0.0;
  const auto a = gamp_run(in.F, in.y, kSparse, opts);
  const auto b = gamp_run(Fp, measure(Fp, sp), kSparse, opts);
  for (std::size_t j = 0; j < n; ++j) CHECK(b.estimate[j] == doctest::Approx(a.estimate[perm[j]]).epsilon(1e-8).scale(1e-6));
}

TEST_CASE("state stays finite over long runs") {
  for (double rho : {0.1, 0.2}) {
    for (double eps : {1e-6, 1e-2}) {
      for (double alpha : {0.25, 0.5, 0.8}) {
        const SignalModel m{rho, eps, 1.0};
        const auto in = homogeneous_instance(m, alpha, 400, 8);
        GampOptions opts;
        opts.max_iter = 1000;
        opts.conv_tol = 0.0;
        GampResult r;
        CAPTURE(rho);
        CAPTURE(eps);
        CAPTURE(alpha);
        REQUIRE_NOTHROW(r = gamp_run(in.F, in.y, m, opts, std::span<const double>(in.s)));
        CHECK(r.iterations == 1000);
        for (double a : r.estimate) CHECK(std::isfinite(a));
      }
    }
  }
}

TEST_CASE("non-finite input raises a divergence error with its iteration") {
  const auto in = homogeneous_instance(kSparse, 0.5, 100, 9);
  auto y = in.y;
  y[3] = std::nan("");
  try {
    gamp_run(in.F, y, kSparse, GampOptions{});
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.iteration() == 0);
  }
}

TEST_CASE("option validation") {
  const auto in = homogeneous_instance(kSparse, 0.5, 100, 10);
  GampOptions bad;
  bad.damping = 0.0;
  CHECK_THROWS_AS(gamp_run(in.F, in.y, kSparse, bad), ParameterError);
  bad = GampOptions{};
  bad.v_floor = 0.0;
  CHECK_THROWS_AS(gamp_run(in.F, in.y, kSparse, bad), ParameterError);
  CHECK_THROWS_AS(gamp_run(in.F, std::vector<double>(3), kSparse, GampOptions{}), DimensionError);
}

TEST_CASE("damping slows but does not change the destination") {
  const auto in = homogeneous_instance(kSparse, 0.6, 2000, 11);
  GampOptions damped;
  damped.damping = 0.7;
  const auto a = gamp_run(in.F, in.y, kSparse, GampOptions{}, std::span<const double>(in.s));
  const auto b = gamp_run(in.F, in.y, kSparse, damped, std::span<const double>(in.s));
  CHECK(b.iterations >= a.iterations);
  CHECK(b.mse_trace.back() <= 1e-5);
}
