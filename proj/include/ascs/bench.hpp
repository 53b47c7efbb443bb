#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ascs/measure.hpp"
#include "ascs/prior.hpp"

namespace ascs::bench {

using nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

enum class ExperimentKind {
  gamp,
  se,
  se_block,
  potential,
  transitions,
  phase_diagram,
  seeded_run,
  success_fraction,
  figure,
};

std::string to_string(ExperimentKind kind);
ExperimentKind parse_kind(const std::string& name);

/// Invalid configuration; field() names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Flat experiment configuration. Every key is documented in the README; keys
/// not listed here are rejected.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::se;
  SignalModel model{};
  double alpha = 0.4;
  std::size_t n = 10000;
  std::uint64_t seed = 1;

  // seeding profile
  std::string profile_preset = "blue";
  SeedingProfile profile = seeding_preset(SeedingPreset::blue, 30);

  // solver / recursion
  std::size_t max_iter = 2000;
  double conv_tol = 1e-13;
  double damping = 1.0;
  double v_floor = 1e-12;
  double se_tol = 1e-12;
  std::optional<double> e0;     ///< initial E for se (default: prior variance)
  double stop_factor = 2.0;     ///< reconstruction threshold stop_factor * eps

  // sweeps
  std::vector<double> rhos{0.1};
  std::vector<double> epss{1e-6};
  std::vector<std::size_t> n_list{2000, 6000};
  std::vector<int> lc_list{5, 10, 20};
  std::size_t attempts = 10;
  std::string figure = "fig2";
  bool paper_scale = false;  ///< use full reported sizes in figure recipes

  std::string out = "out";

  /// Throws ConfigError naming the field.
  void validate() const;
};

json to_json(const ExperimentConfig& config);
/// Strict parse: missing keys keep defaults; unknown keys or wrong types throw ConfigError.
ExperimentConfig config_from_json(const json& j, const ExperimentConfig& base = {});
ExperimentConfig load_config(const std::filesystem::path& path, const ExperimentConfig& base = {});

/// A CSV table held in memory; cells are already formatted.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  bool operator==(const Table&) const = default;
};

std::string format_number(double x);

struct RunRecord {
  json config;                          ///< echo of the parsed configuration
  std::map<std::string, Table> tables;  ///< name -> table (written as <name>.csv)
  json summary;                         ///< scalar results
  double wall_time_s = 0.0;
  std::string version = kVersion;

  bool operator==(const RunRecord&) const = default;
};

json to_json(const RunRecord& record);
RunRecord record_from_json(const json& j);

/// Dispatches to the modules for config.kind.
RunRecord run_experiment(const ExperimentConfig& config);

/// Writes <out>/<table>.csv for every table and <out>/summary.json.
void write_outputs(const RunRecord& record, const std::filesystem::path& out_dir);

struct SuccessRow {
  std::size_t n;
  int Lc;
  std::size_t attempts;
  std::size_t successes;
  std::optional<std::size_t> predicted_iterations;
  double fraction() const { return attempts ? static_cast<double>(successes) / attempts : 0.0; }
};

/// Fraction of seeded G-AMP runs reaching MSE <= stop_factor*eps within twice the
/// block state-evolution convergence time, for every (n, Lc). The profile's Lc is
/// replaced by each Lc (Lr keeps its offset Lr - Lc); n is rounded down to a
/// multiple of Lc. Deterministic in seed.
std::vector<SuccessRow> success_fraction(const SeedingProfile& profile, const SignalModel& model,
                                         const std::vector<std::size_t>& n_list, const std::vector<int>& lc_list,
                                         std::size_t attempts, std::uint64_t seed, double stop_factor = 2.0);

/// Known recipe names.
const std::vector<std::string>& figure_names();

/// CSV behind one of the reference figures at desk scale (full reported sizes with
/// config.paper_scale). Throws ConfigError for unknown names.
RunRecord reproduce_figure(const std::string& name, const ExperimentConfig& config);

}  // namespace ascs::bench
