// Command-line front end: one subcommand per experiment kind.
//
// Settings are layered: built-in defaults, then --config <file.json>, then
// individual flags. Results go to --out as CSV tables plus summary.json.
//
// Exit codes: 0 success, 1 bad configuration, 2 numerical failure, 3 I/O.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "ascs/bench.hpp"
#include "ascs/error.hpp"
#include "ascs/measure.hpp"

namespace {

using ascs::bench::json;

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<double> rho, eps, sigma2, alpha;
  std::optional<std::size_t> max_iter;
  std::optional<double> conv_tol, damping, v_floor, se_tol, e0, stop_factor;
  std::optional<std::string> profile;
  std::optional<std::size_t> profile_lc, profile_lr, profile_w;
  std::optional<double> profile_alpha_seed, profile_alpha_bulk, profile_j;
  std::vector<double> rhos, epss;
  std::vector<std::size_t> n_list;
  std::vector<int> lc_list;
  std::optional<std::size_t> attempts;
  bool paper_scale = false;
  std::string figure;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON configuration file");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--n", f.n, "signal length N");
  app->add_option("--rho", f.rho, "weight of the large component");
  app->add_option("--eps", f.eps, "variance of the small component");
  app->add_option("--sigma2", f.sigma2, "variance of the large component");
  app->add_option("--alpha", f.alpha, "measurement rate M/N");
  app->add_option("--max-iter", f.max_iter, "iteration cap");
  app->add_option("--conv-tol", f.conv_tol, "G-AMP stationarity tolerance");
  app->add_option("--damping", f.damping, "G-AMP damping in (0, 1]");
  app->add_option("--v-floor", f.v_floor, "G-AMP variance floor");
  app->add_option("--se-tol", f.se_tol, "state-evolution stationarity tolerance");
  app->add_option("--e0", f.e0, "initial MSE for state evolution");
  app->add_option("--stop-factor", f.stop_factor, "reconstruction threshold in units of eps");
  app->add_option("--profile", f.profile, "seeding preset: violet, blue, green, black");
  app->add_option("--profile-lc", f.profile_lc, "number of variable blocks");
  app->add_option("--profile-lr", f.profile_lr, "number of measurement blocks");
  app->add_option("--profile-alpha-seed", f.profile_alpha_seed, "rate of the seed block");
  app->add_option("--profile-alpha-bulk", f.profile_alpha_bulk, "rate of the bulk blocks");
  app->add_option("--profile-j", f.profile_j, "coupling strength above the diagonal");
  app->add_option("--profile-w", f.profile_w, "coupling width below the diagonal");
  app->add_option("--rhos", f.rhos, "rho grid (phase-diagram)")->delimiter(',');
  app->add_option("--epss", f.epss, "eps grid (phase-diagram)")->delimiter(',');
  app->add_option("--n-list", f.n_list, "sizes (success-fraction)")->delimiter(',');
  app->add_option("--lc-list", f.lc_list, "block counts (success-fraction)")->delimiter(',');
  app->add_option("--attempts", f.attempts, "instances per point (success-fraction)");
  app->add_flag("--paper-scale", f.paper_scale, "full reported sizes in figure recipes");
}

json overrides(const Flags& f, const std::string& kind) {
  json j{{"kind", kind}};
  auto put = [&](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  put("out", f.out);
  put("seed", f.seed);
  put("n", f.n);
  put("rho", f.rho);
  put("eps", f.eps);
  put("sigma2", f.sigma2);
  put("alpha", f.alpha);
  put("max_iter", f.max_iter);
  put("conv_tol", f.conv_tol);
  put("damping", f.damping);
  put("v_floor", f.v_floor);
  put("se_tol", f.se_tol);
  put("e0", f.e0);
  put("stop_factor", f.stop_factor);
  put("profile_preset", f.profile);
  put("profile_lc", f.profile_lc);
  put("profile_lr", f.profile_lr);
  put("profile_alpha_seed", f.profile_alpha_seed);
  put("profile_alpha_bulk", f.profile_alpha_bulk);
  put("profile_j", f.profile_j);
  put("profile_w", f.profile_w);
  put("attempts", f.attempts);
  if (!f.rhos.empty()) j["rhos"] = f.rhos;
  if (!f.epss.empty()) j["epss"] = f.epss;
  if (!f.n_list.empty()) j["n_list"] = f.n_list;
  if (!f.lc_list.empty()) j["lc_list"] = f.lc_list;
  if (f.paper_scale) j["paper_scale"] = true;
  if (!f.figure.empty()) j["figure"] = f.figure;
  return j;
}

int run(const Flags& f, const std::string& kind) {
  using namespace ascs::bench;
  ExperimentConfig config;
  if (f.config) config = load_config(*f.config);
  config = config_from_json(overrides(f, kind), config);
  const auto record = run_experiment(config);
  write_outputs(record, config.out);
  json shown = record.summary;
  shown["wall_time_s"] = record.wall_time_s;
  std::cout << shown.dump(2) << '\n';
  return 0;
}

int write_matrix(const Flags& f, bool homogeneous, const std::string& path) {
  using namespace ascs::bench;
  ExperimentConfig config;
  if (f.config) config = load_config(*f.config);
  config = config_from_json(overrides(f, "gamp"), config);
  config.validate();
  if (homogeneous) {
    const auto m = static_cast<std::size_t>(std::llround(config.alpha * static_cast<double>(config.n)));
    ascs::save_matrix(path, ascs::homogeneous_matrix(m, config.n, config.seed));
  } else {
    ascs::save_matrix(path, ascs::seeded_matrix(config.profile, config.n, config.seed).matrix);
  }
  std::cout << path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximately sparse compressed sensing: G-AMP, state evolution, replica potential"};
  app.set_version_flag("--version", std::string(ascs::bench::kVersion));
  app.require_subcommand(1);

  Flags flags;
  const std::vector<std::pair<std::string, std::string>> kinds{
      {"gamp", "G-AMP on a homogeneous Gaussian matrix"},
      {"se", "scalar state evolution"},
      {"se-block", "block state evolution for a seeding profile"},
      {"potential", "replica potential Phi(E) and its maxima"},
      {"transitions", "alpha_s, alpha_opt, alpha_BP at (rho, eps)"},
      {"phase-diagram", "transitions over a (rho, eps) grid"},
      {"seeded-run", "G-AMP on a seeded matrix with per-block MSE"},
      {"success-fraction", "fraction of seeded runs that reconstruct"},
      {"figure", "CSV behind a reference figure"},
  };
  std::vector<std::pair<CLI::App*, std::string>> subs;
  for (const auto& [name, help] : kinds) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, flags);
    if (name == "figure")
      sub->add_option("name", flags.figure, "fig1, fig2, fig3, fig4 or fig7")->required();
    subs.emplace_back(sub, name);
  }
  std::string matrix_path;
  bool homogeneous = false;
  auto* matrix = app.add_subcommand("matrix", "write a measurement matrix file");
  add_common(matrix, flags);
  matrix->add_option("path", matrix_path, "output file")->required();
  matrix->add_flag("--homogeneous", homogeneous, "i.i.d. matrix of size round(alpha N) x N instead of seeded");

  CLI11_PARSE(app, argc, argv);

  try {
    if (matrix->parsed()) return write_matrix(flags, homogeneous, matrix_path);
    for (const auto& [sub, name] : subs)
      if (sub->parsed()) return run(flags, name);
  } catch (const ascs::bench::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const ascs::ParameterError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const ascs::LayoutError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const ascs::DivergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const ascs::DomainError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
