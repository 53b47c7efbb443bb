#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "ascs/error.hpp"
#include "ascs/measure.hpp"
#include "ascs/prior.hpp"

using namespace ascs;

TEST_CASE("total rate") {
  const auto blue = seeding_preset(SeedingPreset::blue, 30);
  CHECK(total_rate(blue) == doctest::Approx(0.3033333333333333).epsilon(1e-14));
  CHECK(total_rate(SeedingProfile{300, 301, 0.3, 0.3, 0.0, 0}) == doctest::Approx(0.301).epsilon(1e-14));
  CHECK(total_rate(seeding_preset(SeedingPreset::violet, 100)) == doctest::Approx(0.28882).epsilon(1e-14));
  CHECK(total_rate(SeedingProfile{7, 7, 0.45, 0.45, 0.5, 2}) == doctest::Approx(0.45).epsilon(1e-15));
}

TEST_CASE("preset table") {
  const auto v = seeding_preset(SeedingPreset::violet, 10);
  CHECK(v.Lr == 12);
  CHECK(v.alpha_bulk == 0.282);
  CHECK(v.J == 0.3);
  const auto g = seeding_preset(parse_seeding_preset("green"), 10);
  CHECK(g.Lr == 11);
  CHECK(g.W == 2);
  CHECK(g.J == 0.001);
  CHECK(seeding_preset(parse_seeding_preset("black"), 5).alpha_bulk == 0.31);
  CHECK_THROWS_AS(parse_seeding_preset("red"), ParameterError);
}

TEST_CASE("coupling stencil") {
  SUBCASE("small example") {
    const auto J = coupling_matrix(SeedingProfile{3, 4, 0.4, 0.3, 0.2, 1});
    const double want[4][3] = {{1, 0.2, 0}, {1, 1, 0.2}, {0, 1, 1}, {0, 0, 1}};
    for (int q = 0; q < 4; ++q)
      for (int p = 0; p < 3; ++p) CHECK(J(q, p) == want[q][p]);
  }
  SUBCASE("full width") {
    const auto J = coupling_matrix(SeedingProfile{4, 5, 0.4, 0.3, 1.0, 4});
    for (int q = 0; q < 5; ++q)
      for (int p = 0; p < 4; ++p) CHECK(J(q, p) == (q - p >= -1 ? 1.0 : 0.0));
  }
  SUBCASE("reference design") {
    const auto J = coupling_matrix(seeding_preset(SeedingPreset::blue, 30));
    int ones = 0, weak = 0;
    for (int q = 0; q < 31; ++q)
      for (int p = 0; p < 30; ++p) {
        ones += J(q, p) == 1.0;
        weak += J(q, p) == 0.2;
      }
    CHECK(ones == 30 + 30 + 29 + 28);  // offsets 0..3 below the diagonal
    CHECK(weak == 29);
    // last measurement block sees variable blocks 28..30 (1-based)
    CHECK(J.nonzero_span(30) == std::pair{27, 30});
    CHECK(J(30, 27) == 1.0);
    CHECK(J(30, 26) == 0.0);
  }
  SUBCASE("width must fit") { CHECK_THROWS_AS(coupling_matrix(SeedingProfile{3, 4, 0.4, 0.3, 0.2, 4}), ParameterError); }
}

TEST_CASE("homogeneous matrix statistics") {
  const auto F = homogeneous_matrix(300, 1000, 5);
  const auto D = F.to_dense();
  CHECK(D.array().square().mean() == doctest::Approx(1e-3).epsilon(0.1));
  CHECK(F == homogeneous_matrix(300, 1000, 5));
  CHECK(!(F == homogeneous_matrix(300, 1000, 6)));

  const auto G = homogeneous_matrix(3000, 10000, 8).to_dense();
  const Eigen::VectorXd norms = G.colwise().squaredNorm();
  CHECK(norms.mean() == doctest::Approx(0.3).epsilon(0.05));
  CHECK(norms.minCoeff() > 0.3 * 0.8);
  CHECK(norms.maxCoeff() < 0.3 * 1.2);
}

TEST_CASE("seeded matrix layout and block variances") {
  const auto blue = seeding_preset(SeedingPreset::blue, 30);
  const std::size_t n = 60000;
  const auto layout = seeded_layout(blue, n);
  CHECK(layout.variable_blocks() == 30);
  CHECK(layout.measurement_blocks() == 31);
  CHECK(std::abs(static_cast<double>(layout.rows()) / (0.30333333 * n) - 1.0) <= 1e-3);

  const SeedingProfile small{5, 6, 0.6, 0.4, 0.3, 2};
  const std::size_t ns = 5000;
  const auto S = seeded_matrix(small, ns, 17);
  CHECK(S.rows_seed == 600);
  CHECK(S.rows_bulk == 400);
  CHECK(S.realized_alpha == doctest::Approx(static_cast<double>(600 + 5 * 400) / ns));
  const auto D = S.matrix.to_dense();
  const auto J = coupling_matrix(small);
  for (int q = 0; q < 6; ++q) {
    for (int p = 0; p < 5; ++p) {
      const auto rows = S.layout.row_offsets[q + 1] - S.layout.row_offsets[q];
      const auto cols = S.layout.column_offsets[p + 1] - S.layout.column_offsets[p];
      const auto blk = D.block(S.layout.row_offsets[q], S.layout.column_offsets[p], rows, cols);
      const double var = blk.array().square().mean();
      const double want = J(q, p) / ns;
      if (want == 0.0) {
        CHECK(var == 0.0);
      } else {
        // standard error of a mean of chi-square(1) * want
        const double se = want * std::sqrt(2.0 / static_cast<double>(rows * cols));
        CHECK(std::abs(var - want) <= 5 * se);
      }
    }
  }
  CHECK(S.matrix == seeded_matrix(small, ns, 17).matrix);
  CHECK(S.matrix.stored_entries() < S.layout.rows() * ns);
}

TEST_CASE("zero superdiagonal gives a block-lower-banded matrix") {
  const SeedingProfile p{4, 5, 0.5, 0.4, 0.0, 1};
  const auto S = seeded_matrix(p, 400, 3);
  const auto D = S.matrix.to_dense();
  for (std::size_t mu = 0; mu < S.layout.rows(); ++mu)
    for (std::size_t i = 0; i < S.layout.cols(); ++i) {
      const int q = S.layout.row_block(mu), c = S.layout.column_block(i);
      if (q - c < 0 || q - c > 1) CHECK(D(mu, i) == 0.0);
    }
}

TEST_CASE("layout needs Lc to divide n") {
  CHECK_THROWS_AS(seeded_layout(seeding_preset(SeedingPreset::blue, 30), 1001), LayoutError);
  CHECK_THROWS_AS(seeded_matrix(seeding_preset(SeedingPreset::blue, 7), 100, 1), LayoutError);
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS(SeedingProfile({0, 1, 0.4, 0.3, 0.2, 0}).validate(), ParameterError);
  CHECK_THROWS_AS(SeedingProfile({3, 2, 0.4, 0.3, 0.2, 0}).validate(), ParameterError);
  CHECK_THROWS_AS(SeedingProfile({3, 4, 0.2, 0.3, 0.2, 1}).validate(), ParameterError);
  CHECK_THROWS_AS(SeedingProfile({3, 4, 0.4, 0.3, -0.1, 1}).validate(), ParameterError);
  CHECK_NOTHROW(SeedingProfile({1, 1, 0.3, 0.3, 0.0, 0}).validate());
}

TEST_CASE("coupling matrix does not depend on n or seed") {
  const auto p = seeding_preset(SeedingPreset::black, 6);
  const auto a = seeded_matrix(p, 600, 1);
  const auto b = seeded_matrix(p, 1200, 2);
  CHECK(coupling_matrix(p) == coupling_matrix(p));
  CHECK(a.layout.measurement_blocks() == b.layout.measurement_blocks());
}

TEST_CASE("measurement") {
  const auto one = MeasurementMatrix::from_dense(Eigen::MatrixXd::Constant(1, 1, 1.0));
  const std::vector<double> two{2.0};
  CHECK(measure(one, two) == std::vector<double>{2.0});

  const SignalModel m{0.1, 1e-2, 1.0};
  const auto F = homogeneous_matrix(300, 1000, 21);
  const auto s = sample_signal(m, 1000, 22);
  const auto y = measure(F, s);
  double ss = 0.0;
  for (double v : y) ss += v * v;
  CHECK(ss / y.size() == doctest::Approx(0.109).epsilon(0.15));

  const auto S = seeded_matrix(seeding_preset(SeedingPreset::blue, 4), 400, 9);
  const std::vector<double> zero(400, 0.0);
  for (double v : measure(S.matrix, zero)) CHECK(v == 0.0);

  // panel storage agrees with a dense product
  const auto sd = sample_signal(m, 400, 4);
  const auto ys = measure(S.matrix, sd);
  const Eigen::VectorXd dense = S.matrix.to_dense() * Eigen::Map<const Eigen::VectorXd>(sd.data(), 400);
  for (std::size_t mu = 0; mu < ys.size(); ++mu) CHECK(ys[mu] == doctest::Approx(dense[mu]).epsilon(1e-12));

  CHECK_THROWS_AS(measure(F, two), DimensionError);
}

TEST_CASE("matrix file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "ascs_test_measure";
  std::filesystem::create_directories(dir);
  const auto S = seeded_matrix(seeding_preset(SeedingPreset::violet, 5), 500, 12);
  save_matrix(dir / "seeded.bin", S.matrix);
  const auto back = load_matrix(dir / "seeded.bin");
  CHECK(back == S.matrix);
  CHECK(back.to_dense() == S.matrix.to_dense());

  const auto H = homogeneous_matrix(7, 11, 3);
  save_matrix(dir / "homogeneous.bin", H);
  CHECK(load_matrix(dir / "homogeneous.bin") == H);
  CHECK(std::filesystem::file_size(dir / "homogeneous.bin") == 8 + 3 * 8 + 4 * 8 + 7 * 11 * 8);

  std::ofstream(dir / "garbage.bin") << "not a matrix";
  CHECK_THROWS_AS(load_matrix(dir / "garbage.bin"), DimensionError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("seed mixing separates streams") {
  CHECK(mix_seed(1, 2, 3) == mix_seed(1, 2, 3));
  CHECK(mix_seed(1, 2, 3) != mix_seed(1, 3, 2));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
}
