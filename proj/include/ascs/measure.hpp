#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ascs {

using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Block design of a seeding (spatially coupled) measurement matrix.
///
/// The N columns are split into Lc equal variable blocks; the M rows into Lr
/// measurement blocks, the first holding alpha_seed*N/Lc rows and the others
/// alpha_bulk*N/Lc rows each. Block (q, p) has entry variance J_{q,p}/N with
/// unit coupling on the main block diagonal and the W diagonals below it and
/// coupling J on the single block superdiagonal.
struct SeedingProfile {
  int Lc = 30;
  int Lr = 31;
  double alpha_seed = 0.4;
  double alpha_bulk = 0.29;
  double J = 0.2;
  int W = 3;

  /// Throws ParameterError. Accepts alpha_seed >= alpha_bulk and W >= 0 so the
  /// homogeneous limit (Lc = Lr = 1, W = 0, equal rates) is representable.
  void validate() const;
};

/// Rows of the seeding parameter table (color names as in the reference design table).
enum class SeedingPreset { violet, blue, green, black };

SeedingProfile seeding_preset(SeedingPreset preset, int Lc);
SeedingPreset parse_seeding_preset(const std::string& name);

/// (alpha_seed + (Lr-1) alpha_bulk) / Lc
double total_rate(const SeedingProfile& profile);

/// Lr x Lc grid of variance ratios J_{q,p} (0-based indices).
class CouplingMatrix {
 public:
  CouplingMatrix() = default;
  CouplingMatrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double operator()(int q, int p) const { return data_[static_cast<std::size_t>(q) * cols_ + p]; }
  double& operator()(int q, int p) { return data_[static_cast<std::size_t>(q) * cols_ + p]; }

  /// Smallest and one-past-largest p with J_{q,p} != 0 (equal when the row is empty).
  std::pair<int, int> nonzero_span(int q) const;

  bool operator==(const CouplingMatrix&) const = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

CouplingMatrix coupling_matrix(const SeedingProfile& profile);

/// Partition of columns into variable blocks and rows into measurement blocks.
struct BlockLayout {
  std::vector<std::size_t> column_offsets;  ///< Lc+1 boundaries
  std::vector<std::size_t> row_offsets;     ///< Lr+1 boundaries

  int variable_blocks() const { return static_cast<int>(column_offsets.size()) - 1; }
  int measurement_blocks() const { return static_cast<int>(row_offsets.size()) - 1; }
  std::size_t rows() const { return row_offsets.back(); }
  std::size_t cols() const { return column_offsets.back(); }
  int column_block(std::size_t i) const;
  int row_block(std::size_t mu) const;
};

/// Dense M x N matrix stored as row panels, each dense over a contiguous
/// column range and zero outside it. A homogeneous matrix is one panel.
class MeasurementMatrix {
 public:
  struct Panel {
    std::size_t row_begin = 0, row_end = 0;
    std::size_t col_begin = 0, col_end = 0;
    RowMajorMatrix values;  ///< (row_end-row_begin) x (col_end-col_begin)
  };

  MeasurementMatrix() = default;
  MeasurementMatrix(std::size_t rows, std::size_t cols, std::vector<Panel> panels);

  static MeasurementMatrix from_dense(const Eigen::MatrixXd& dense);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<Panel>& panels() const { return panels_; }
  std::vector<Panel>& panels() { return panels_; }

  double entry(std::size_t mu, std::size_t i) const;
  Eigen::MatrixXd to_dense() const;
  /// Number of explicitly stored entries.
  std::size_t stored_entries() const;

  bool operator==(const MeasurementMatrix& other) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Panel> panels_;
};

/// iid N(0, 1/n) entries. Deterministic in seed.
MeasurementMatrix homogeneous_matrix(std::size_t m, std::size_t n, std::uint64_t seed);

struct SeededMatrix {
  MeasurementMatrix matrix;
  BlockLayout layout;
  std::size_t rows_seed = 0;  ///< M_seed
  std::size_t rows_bulk = 0;  ///< M_bulk
  double requested_alpha = 0.0;
  double realized_alpha = 0.0;  ///< M/N after rounding row counts
};

/// Block layout implied by profile at size n (throws LayoutError if Lc does not divide n).
BlockLayout seeded_layout(const SeedingProfile& profile, std::size_t n);

/// Seeded matrix; block (q, p) entries are N(0, J_{q,p}/n). Each block is drawn
/// from its own generator keyed by (seed, q, p), so the result does not depend
/// on generation order.
SeededMatrix seeded_matrix(const SeedingProfile& profile, std::size_t n, std::uint64_t seed);

/// y = F s (noiseless).
std::vector<double> measure(const MeasurementMatrix& F, std::span<const double> s);

/// Binary export: see README ("Matrix file format").
void save_matrix(const std::filesystem::path& path, const MeasurementMatrix& F);
MeasurementMatrix load_matrix(const std::filesystem::path& path);

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace ascs
