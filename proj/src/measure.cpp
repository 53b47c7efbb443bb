#include "ascs/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "ascs/error.hpp"

namespace ascs {

void SeedingProfile::validate() const {
  if (Lc < 1) throw ParameterError("profile: Lc must be >= 1");
  if (Lr < Lc) throw ParameterError("profile: Lr must be >= Lc");
  if (!(alpha_bulk > 0.0)) throw ParameterError("profile: alpha_bulk must be positive");
  if (!(alpha_seed >= alpha_bulk))
    throw ParameterError("profile: alpha_seed must be >= alpha_bulk");
  if (!(J >= 0.0)) throw ParameterError("profile: J must be >= 0");
  if (W < 0) throw ParameterError("profile: W must be >= 0");
  if (W >= Lr) throw ParameterError("profile: W must be < Lr");
}

SeedingProfile seeding_preset(SeedingPreset preset, int Lc) {
  switch (preset) {
    case SeedingPreset::violet: return {Lc, Lc + 2, 0.4, 0.282, 0.3, 3};
    case SeedingPreset::blue: return {Lc, Lc + 1, 0.4, 0.290, 0.2, 3};
    case SeedingPreset::green: return {Lc, Lc + 1, 0.4, 0.302, 0.001, 2};
    case SeedingPreset::black: return {Lc, Lc + 1, 0.4, 0.310, 0.4, 3};
  }
  throw ParameterError("unknown seeding preset");
}

SeedingPreset parse_seeding_preset(const std::string& name) {
  if (name == "violet") return SeedingPreset::violet;
  if (name == "blue") return SeedingPreset::blue;
  if (name == "green") return SeedingPreset::green;
  if (name == "black") return SeedingPreset::black;
  throw ParameterError("unknown seeding preset '" + name + "' (violet|blue|green|black)");
}

double total_rate(const SeedingProfile& profile) {
  return (profile.alpha_seed + (profile.Lr - 1) * profile.alpha_bulk) / profile.Lc;
}

std::pair<int, int> CouplingMatrix::nonzero_span(int q) const {
  int lo = cols_, hi = 0;
  for (int p = 0; p < cols_; ++p) {
    if ((*this)(q, p) != 0.0) {
      lo = std::min(lo, p);
      hi = p + 1;
    }
  }
  return lo < hi ? std::pair{lo, hi} : std::pair{0, 0};
}

CouplingMatrix coupling_matrix(const SeedingProfile& profile) {
  profile.validate();
  CouplingMatrix J(profile.Lr, profile.Lc);
  for (int q = 0; q < profile.Lr; ++q) {
    for (int p = 0; p < profile.Lc; ++p) {
      const int d = q - p;
      if (d >= 0 && d <= profile.W)
        J(q, p) = 1.0;
      else if (d == -1)
        J(q, p) = profile.J;
    }
  }
  return J;
}

int BlockLayout::column_block(std::size_t i) const {
  auto it = std::upper_bound(column_offsets.begin(), column_offsets.end(), i);
  return static_cast<int>(it - column_offsets.begin()) - 1;
}

int BlockLayout::row_block(std::size_t mu) const {
  auto it = std::upper_bound(row_offsets.begin(), row_offsets.end(), mu);
  return static_cast<int>(it - row_offsets.begin()) - 1;
}

MeasurementMatrix::MeasurementMatrix(std::size_t rows, std::size_t cols, std::vector<Panel> panels)
    : rows_(rows), cols_(cols), panels_(std::move(panels)) {
  std::size_t next_row = 0;
  for (const auto& panel : panels_) {
    if (panel.row_begin != next_row || panel.row_end < panel.row_begin ||
        panel.col_end > cols_ || panel.col_begin > panel.col_end ||
        static_cast<std::size_t>(panel.values.rows()) != panel.row_end - panel.row_begin ||
        static_cast<std::size_t>(panel.values.cols()) != panel.col_end - panel.col_begin)
      throw DimensionError("MeasurementMatrix: inconsistent panel");
    next_row = panel.row_end;
  }
  if (next_row != rows_) throw DimensionError("MeasurementMatrix: panels must cover all rows");
}

MeasurementMatrix MeasurementMatrix::from_dense(const Eigen::MatrixXd& dense) {
  Panel panel;
  panel.row_end = static_cast<std::size_t>(dense.rows());
  panel.col_end = static_cast<std::size_t>(dense.cols());
  panel.values = dense;
  return MeasurementMatrix(panel.row_end, panel.col_end, {std::move(panel)});
}

double MeasurementMatrix::entry(std::size_t mu, std::size_t i) const {
  for (const auto& panel : panels_) {
    if (mu < panel.row_begin || mu >= panel.row_end) continue;
    if (i < panel.col_begin || i >= panel.col_end) return 0.0;
    return panel.values(mu - panel.row_begin, i - panel.col_begin);
  }
  throw DimensionError("MeasurementMatrix::entry: row out of range");
}

Eigen::MatrixXd MeasurementMatrix::to_dense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(rows_, cols_);
  for (const auto& panel : panels_) {
    dense.block(panel.row_begin, panel.col_begin, panel.values.rows(), panel.values.cols()) =
        panel.values;
  }
  return dense;
}

std::size_t MeasurementMatrix::stored_entries() const {
  std::size_t total = 0;
  for (const auto& panel : panels_) total += static_cast<std::size_t>(panel.values.size());
  return total;
}

bool MeasurementMatrix::operator==(const MeasurementMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_ || panels_.size() != other.panels_.size())
    return false;
  for (std::size_t k = 0; k < panels_.size(); ++k) {
    const auto& a = panels_[k];
    const auto& b = other.panels_[k];
    if (a.row_begin != b.row_begin || a.row_end != b.row_end || a.col_begin != b.col_begin ||
        a.col_end != b.col_end || a.values != b.values)
      return false;
  }
  return true;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return splitmix(splitmix(splitmix(seed) ^ a) ^ b);
}

MeasurementMatrix homogeneous_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m == 0 || n == 0) throw ParameterError("homogeneous_matrix: m and n must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
  MeasurementMatrix::Panel panel;
  panel.row_end = m;
  panel.col_end = n;
  panel.values.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  double* data = panel.values.data();
  for (std::size_t k = 0; k < m * n; ++k) data[k] = gauss(rng);
  return MeasurementMatrix(m, n, {std::move(panel)});
}

BlockLayout seeded_layout(const SeedingProfile& profile, std::size_t n) {
  profile.validate();
  if (n == 0 || n % static_cast<std::size_t>(profile.Lc) != 0)
    throw LayoutError("seeded layout: n=" + std::to_string(n) +
                      " is not divisible by Lc=" + std::to_string(profile.Lc));
  const std::size_t block = n / profile.Lc;
  const double per_block = static_cast<double>(n) / profile.Lc;
  const auto rows_seed = static_cast<std::size_t>(std::llround(profile.alpha_seed * per_block));
  const auto rows_bulk = static_cast<std::size_t>(std::llround(profile.alpha_bulk * per_block));

  BlockLayout layout;
  layout.column_offsets.resize(profile.Lc + 1);
  for (int p = 0; p <= profile.Lc; ++p) layout.column_offsets[p] = p * block;
  layout.row_offsets.resize(profile.Lr + 1);
  layout.row_offsets[0] = 0;
  for (int q = 0; q < profile.Lr; ++q)
    layout.row_offsets[q + 1] = layout.row_offsets[q] + (q == 0 ? rows_seed : rows_bulk);
  return layout;
}

SeededMatrix seeded_matrix(const SeedingProfile& profile, std::size_t n, std::uint64_t seed) {
  const BlockLayout layout = seeded_layout(profile, n);
  const CouplingMatrix J = coupling_matrix(profile);

  std::vector<MeasurementMatrix::Panel> panels;
  panels.reserve(profile.Lr);
  for (int q = 0; q < profile.Lr; ++q) {
    const auto [p_lo, p_hi] = J.nonzero_span(q);
    MeasurementMatrix::Panel panel;
    panel.row_begin = layout.row_offsets[q];
    panel.row_end = layout.row_offsets[q + 1];
    panel.col_begin = layout.column_offsets[p_lo];
    panel.col_end = layout.column_offsets[p_hi];
    panel.values = RowMajorMatrix::Zero(static_cast<Eigen::Index>(panel.row_end - panel.row_begin),
                                        static_cast<Eigen::Index>(panel.col_end - panel.col_begin));
    for (int p = p_lo; p < p_hi; ++p) {
      if (J(q, p) == 0.0) continue;
      std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(p)));
      std::normal_distribution<double> gauss(0.0, std::sqrt(J(q, p) / static_cast<double>(n)));
      const auto c0 = static_cast<Eigen::Index>(layout.column_offsets[p] - panel.col_begin);
      const auto width = static_cast<Eigen::Index>(layout.column_offsets[p + 1] - layout.column_offsets[p]);
      for (Eigen::Index r = 0; r < panel.values.rows(); ++r)
        for (Eigen::Index c = 0; c < width; ++c) panel.values(r, c0 + c) = gauss(rng);
    }
    panels.push_back(std::move(panel));
  }

  SeededMatrix out;
  out.matrix = MeasurementMatrix(layout.rows(), n, std::move(panels));
  out.rows_seed = layout.row_offsets[1];
  out.rows_bulk = profile.Lr > 1 ? layout.row_offsets[2] - layout.row_offsets[1] : 0;
  out.requested_alpha = total_rate(profile);
  out.realized_alpha = static_cast<double>(layout.rows()) / static_cast<double>(n);
  out.layout = layout;
  return out;
}

std::vector<double> measure(const MeasurementMatrix& F, std::span<const double> s) {
  if (s.size() != F.cols())
    throw DimensionError("measure: signal has " + std::to_string(s.size()) + " entries, matrix has " +
                         std::to_string(F.cols()) + " columns");
  std::vector<double> y(F.rows(), 0.0);
  for (const auto& panel : F.panels()) {
    const Eigen::Map<const Eigen::VectorXd> x(s.data() + panel.col_begin,
                                              static_cast<Eigen::Index>(panel.col_end - panel.col_begin));
    Eigen::Map<Eigen::VectorXd> out(y.data() + panel.row_begin,
                                    static_cast<Eigen::Index>(panel.row_end - panel.row_begin));
    if (x.size() > 0) out.noalias() = panel.values * x;
  }
  return y;
}

namespace {

constexpr char kMagic[8] = {'A', 'S', 'C', 'S', 'M', 'A', 'T', '1'};

void write_u64(std::ofstream& out, std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); }

std::uint64_t read_u64(std::ifstream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 8);
  if (!in) throw DimensionError("load_matrix: truncated header");
  return v;
}

}  // namespace

void save_matrix(const std::filesystem::path& path, const MeasurementMatrix& F) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("save_matrix: cannot open " + path.string());
  out.write(kMagic, 8);
  write_u64(out, F.rows());
  write_u64(out, F.cols());
  write_u64(out, F.panels().size());
  for (const auto& panel : F.panels()) {
    write_u64(out, panel.row_begin);
    write_u64(out, panel.row_end);
    write_u64(out, panel.col_begin);
    write_u64(out, panel.col_end);
  }
  std::vector<double> row(F.cols());
  for (const auto& panel : F.panels()) {
    for (Eigen::Index r = 0; r < panel.values.rows(); ++r) {
      std::fill(row.begin(), row.end(), 0.0);
      for (Eigen::Index c = 0; c < panel.values.cols(); ++c) row[panel.col_begin + c] = panel.values(r, c);
      out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * 8));
    }
  }
  if (!out) throw ParameterError("save_matrix: write failed for " + path.string());
}

MeasurementMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("load_matrix: cannot open " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw DimensionError("load_matrix: bad magic");
  const std::uint64_t m = read_u64(in);
  const std::uint64_t n = read_u64(in);
  const std::uint64_t count = read_u64(in);
  if (count > m || (m > 0 && count == 0)) throw DimensionError("load_matrix: bad panel count");
  std::vector<MeasurementMatrix::Panel> panels(count);
  for (auto& panel : panels) {
    panel.row_begin = read_u64(in);
    panel.row_end = read_u64(in);
    panel.col_begin = read_u64(in);
    panel.col_end = read_u64(in);
    if (panel.row_end < panel.row_begin || panel.row_end > m || panel.col_end > n ||
        panel.col_begin > panel.col_end)
      throw DimensionError("load_matrix: bad panel bounds");
    panel.values.resize(static_cast<Eigen::Index>(panel.row_end - panel.row_begin),
                        static_cast<Eigen::Index>(panel.col_end - panel.col_begin));
  }
  std::vector<double> row(n);
  for (auto& panel : panels) {
    for (Eigen::Index r = 0; r < panel.values.rows(); ++r) {
      in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(n * 8));
      if (!in) throw DimensionError("load_matrix: truncated data");
      for (Eigen::Index c = 0; c < panel.values.cols(); ++c) panel.values(r, c) = row[panel.col_begin + c];
    }
  }
  return MeasurementMatrix(m, n, std::move(panels));
}

}  // namespace ascs
