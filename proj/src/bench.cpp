#include "ascs/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

#include "ascs/error.hpp"
#include "ascs/gamp.hpp"
#include "ascs/replica.hpp"
#include "ascs/state_evolution.hpp"

namespace ascs::bench {

namespace {

const std::vector<std::pair<ExperimentKind, std::string>>& kind_names() {
  static const std::vector<std::pair<ExperimentKind, std::string>> names{
      {ExperimentKind::gamp, "gamp"},
      {ExperimentKind::se, "se"},
      {ExperimentKind::se_block, "se-block"},
      {ExperimentKind::potential, "potential"},
      {ExperimentKind::transitions, "transitions"},
      {ExperimentKind::phase_diagram, "phase-diagram"},
      {ExperimentKind::seeded_run, "seeded-run"},
      {ExperimentKind::success_fraction, "success-fraction"},
      {ExperimentKind::figure, "figure"},
  };
  return names;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kind_names())
    if (k == kind) return name;
  return "unknown";
}

ExperimentKind parse_kind(const std::string& name) {
  for (const auto& [k, n] : kind_names())
    if (n == name) return k;
  throw ConfigError("kind", "unknown experiment kind '" + name + "'");
}

// ---------------------------------------------------------------------------
// configuration

void ExperimentConfig::validate() const {
  auto check = [](bool ok, const char* field, const std::string& msg) {
    if (!ok) throw ConfigError(field, msg);
  };
  check(model.rho > 0.0 && model.rho <= 1.0, "rho", "must lie in (0, 1]");
  check(model.eps > 0.0, "eps", "must be positive");
  check(model.sigma2 > 0.0, "sigma2", "must be positive");
  check(model.eps < model.sigma2, "eps", "must be smaller than sigma2");
  check(alpha >= 0.0 && std::isfinite(alpha), "alpha", "must be a finite rate >= 0");
  check(n >= 1, "n", "must be >= 1");
  check(max_iter <= 100000000, "max_iter", "unreasonably large");
  check(conv_tol >= 0.0, "conv_tol", "must be >= 0");
  check(damping > 0.0 && damping <= 1.0, "damping", "must lie in (0, 1]");
  check(v_floor > 0.0, "v_floor", "must be positive");
  check(se_tol >= 0.0, "se_tol", "must be >= 0");
  check(!e0 || *e0 > 0.0, "e0", "must be positive");
  check(stop_factor > 0.0, "stop_factor", "must be positive");
  check(attempts >= 1, "attempts", "must be >= 1");
  for (double r : rhos) check(r > 0.0 && r <= 1.0, "rhos", "entries must lie in (0, 1]");
  for (double e : epss) check(e > 0.0 && e < model.sigma2, "epss", "entries must lie in (0, sigma2)");
  for (int lc : lc_list) check(lc >= 1, "lc_list", "entries must be >= 1");
  for (std::size_t nn : n_list) check(nn >= 1, "n_list", "entries must be >= 1");

  try {
    profile.validate();
  } catch (const ParameterError& e) {
    throw ConfigError("profile", e.what());
  }
  if (kind == ExperimentKind::gamp) check(alpha > 0.0, "alpha", "gamp needs alpha > 0");
  if (kind == ExperimentKind::figure) {
    const auto& names = figure_names();
    check(std::find(names.begin(), names.end(), figure) != names.end(), "figure", "unknown figure '" + figure + "'");
  }
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["rho"] = c.model.rho;
  j["eps"] = c.model.eps;
  j["sigma2"] = c.model.sigma2;
  j["alpha"] = c.alpha;
  j["n"] = c.n;
  j["seed"] = c.seed;
  j["profile_preset"] = c.profile_preset;
  j["profile_lc"] = c.profile.Lc;
  j["profile_lr"] = c.profile.Lr;
  j["profile_alpha_seed"] = c.profile.alpha_seed;
  j["profile_alpha_bulk"] = c.profile.alpha_bulk;
  j["profile_j"] = c.profile.J;
  j["profile_w"] = c.profile.W;
  j["max_iter"] = c.max_iter;
  j["conv_tol"] = c.conv_tol;
  j["damping"] = c.damping;
  j["v_floor"] = c.v_floor;
  j["se_tol"] = c.se_tol;
  j["e0"] = c.e0 ? json(*c.e0) : json(nullptr);
  j["stop_factor"] = c.stop_factor;
  j["rhos"] = c.rhos;
  j["epss"] = c.epss;
  j["n_list"] = c.n_list;
  j["lc_list"] = c.lc_list;
  j["attempts"] = c.attempts;
  j["figure"] = c.figure;
  j["paper_scale"] = c.paper_scale;
  j["out"] = c.out;
  return j;
}

namespace {

template <class T>
T get_field(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(key, std::string("wrong type: ") + e.what());
  }
}

double get_number(const json& j, const std::string& key) {
  if (!j.at(key).is_number()) throw ConfigError(key, "expected a number");
  return j.at(key).get<double>();
}

std::size_t get_count(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

}  // namespace

ExperimentConfig config_from_json(const json& j, const ExperimentConfig& base) {
  if (!j.is_object()) throw ConfigError("<root>", "configuration must be a JSON object");
  static const std::set<std::string> known{
      "kind",       "rho",        "eps",         "sigma2",  "alpha",        "n",
      "seed",       "profile_preset", "profile_lc", "profile_lr", "profile_alpha_seed", "profile_alpha_bulk",
      "profile_j",  "profile_w",  "max_iter",    "conv_tol", "damping",     "v_floor",
      "se_tol",     "e0",         "stop_factor", "rhos",    "epss",         "n_list",
      "lc_list",    "attempts",   "figure",      "paper_scale", "out"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError(key, "unknown key");

  ExperimentConfig c = base;
  auto has = [&](const char* key) { return j.contains(key); };
  if (has("kind")) c.kind = parse_kind(get_field<std::string>(j, "kind"));
  if (has("rho")) c.model.rho = get_number(j, "rho");
  if (has("eps")) c.model.eps = get_number(j, "eps");
  if (has("sigma2")) c.model.sigma2 = get_number(j, "sigma2");
  if (has("alpha")) c.alpha = get_number(j, "alpha");
  if (has("n")) c.n = get_count(j, "n");
  if (has("seed")) c.seed = get_count(j, "seed");

  // A preset fixes the whole profile at the requested Lc; explicit keys then override.
  const int lc = has("profile_lc") ? static_cast<int>(get_count(j, "profile_lc")) : c.profile.Lc;
  if (has("profile_preset")) {
    c.profile_preset = get_field<std::string>(j, "profile_preset");
    try {
      c.profile = seeding_preset(parse_seeding_preset(c.profile_preset), lc);
    } catch (const ParameterError& e) {
      throw ConfigError("profile_preset", e.what());
    }
  } else if (has("profile_lc")) {
    const int offset = c.profile.Lr - c.profile.Lc;
    c.profile.Lc = lc;
    c.profile.Lr = lc + offset;
  }
  if (has("profile_lr")) c.profile.Lr = static_cast<int>(get_count(j, "profile_lr"));
  if (has("profile_alpha_seed")) c.profile.alpha_seed = get_number(j, "profile_alpha_seed");
  if (has("profile_alpha_bulk")) c.profile.alpha_bulk = get_number(j, "profile_alpha_bulk");
  if (has("profile_j")) c.profile.J = get_number(j, "profile_j");
  if (has("profile_w")) c.profile.W = static_cast<int>(get_count(j, "profile_w"));

  if (has("max_iter")) c.max_iter = get_count(j, "max_iter");
  if (has("conv_tol")) c.conv_tol = get_number(j, "conv_tol");
  if (has("damping")) c.damping = get_number(j, "damping");
  if (has("v_floor")) c.v_floor = get_number(j, "v_floor");
  if (has("se_tol")) c.se_tol = get_number(j, "se_tol");
  if (has("e0")) c.e0 = j.at("e0").is_null() ? std::nullopt : std::optional(get_number(j, "e0"));
  if (has("stop_factor")) c.stop_factor = get_number(j, "stop_factor");
  if (has("rhos")) c.rhos = get_field<std::vector<double>>(j, "rhos");
  if (has("epss")) c.epss = get_field<std::vector<double>>(j, "epss");
  if (has("n_list")) c.n_list = get_field<std::vector<std::size_t>>(j, "n_list");
  if (has("lc_list")) c.lc_list = get_field<std::vector<int>>(j, "lc_list");
  if (has("attempts")) c.attempts = get_count(j, "attempts");
  if (has("figure")) c.figure = get_field<std::string>(j, "figure");
  if (has("paper_scale")) c.paper_scale = get_field<bool>(j, "paper_scale");
  if (has("out")) c.out = get_field<std::string>(j, "out");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("parse error: ") + e.what());
  }
  return config_from_json(j, base);
}

// ---------------------------------------------------------------------------
// tables and records

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

std::string format_count(std::size_t x) { return std::to_string(x); }

std::string format_optional(const std::optional<std::size_t>& x) { return x ? std::to_string(*x) : "inf"; }

}  // namespace

std::string Table::to_csv() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return out;
}

json to_json(const RunRecord& r) {
  json tables = json::object();
  for (const auto& [name, table] : r.tables) tables[name] = {{"header", table.header}, {"rows", table.rows}};
  return {{"version", r.version}, {"config", r.config}, {"summary", r.summary}, {"wall_time_s", r.wall_time_s},
          {"tables", tables}};
}

RunRecord record_from_json(const json& j) {
  RunRecord r;
  r.version = j.at("version").get<std::string>();
  r.config = j.at("config");
  r.summary = j.at("summary");
  r.wall_time_s = j.at("wall_time_s").get<double>();
  for (const auto& [name, t] : j.at("tables").items()) {
    Table table;
    table.header = t.at("header").get<std::vector<std::string>>();
    table.rows = t.at("rows").get<std::vector<std::vector<std::string>>>();
    r.tables.emplace(name, std::move(table));
  }
  return r;
}

void write_outputs(const RunRecord& record, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  json summary = to_json(record);
  json files = json::array();
  for (const auto& [name, table] : record.tables) {
    const auto path = out_dir / (name + ".csv");
    std::ofstream out(path, std::ios::binary);
    out << table.to_csv();
    if (!out) throw std::runtime_error("cannot write " + path.string());
    files.push_back(name + ".csv");
  }
  summary.erase("tables");
  summary["tables"] = files;
  std::ofstream out(out_dir / "summary.json");
  out << summary.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// experiments

namespace {

GampOptions solver_options(const ExperimentConfig& c) {
  GampOptions o;
  o.max_iter = c.max_iter;
  o.conv_tol = c.conv_tol;
  o.damping = c.damping;
  o.v_floor = c.v_floor;
  return o;
}

// Independent streams for signal and matrix from one user seed.
std::uint64_t signal_seed(std::uint64_t seed) { return mix_seed(seed, 0x5157); }
std::uint64_t matrix_seed(std::uint64_t seed) { return mix_seed(seed, 0x3A7); }

Table gamp_trace_table(const GampResult& r, double realized_alpha) {
  Table t{{"t[iter]", "E_t[mse]", "mean_v[variance]", "conv_residual[mse]", "alpha_realized[M/N]"}, {}};
  for (std::size_t k = 0; k < r.mse_trace.size(); ++k)
    t.rows.push_back({format_count(k), format_number(r.mse_trace[k]), format_number(r.mean_v[k]),
                      format_number(r.residual[k]), format_number(realized_alpha)});
  return t;
}

Table se_trace_table(const SeTrace& trace) {
  Table t{{"t[iter]", "E[mse]"}, {}};
  for (std::size_t k = 0; k < trace.energies.size(); ++k)
    t.rows.push_back({format_count(k), format_number(trace.energies[k][0])});
  return t;
}

Table block_trace_table(const SeTrace& trace) {
  Table t{{"t[iter]"}, {}};
  const std::size_t blocks = trace.energies.front().size();
  for (std::size_t p = 0; p < blocks; ++p) t.header.push_back("E_" + std::to_string(p + 1) + "[mse]");
  for (std::size_t k = 0; k < trace.energies.size(); ++k) {
    std::vector<std::string> row{format_count(k)};
    for (double e : trace.energies[k]) row.push_back(format_number(e));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table boundary_table(const std::vector<PhaseDiagramRow>& rows) {
  Table t{{"rho[fraction]", "eps[variance]", "alpha_s[M/N]", "alpha_opt[M/N]", "alpha_bp[M/N]", "exists[bool]"}, {}};
  for (const auto& r : rows) {
    const auto& b = r.boundary;
    t.rows.push_back({format_number(r.rho), format_number(r.eps), b.exists ? format_number(b.alpha_s) : "nan",
                      b.exists ? format_number(b.alpha_opt) : "nan", b.exists ? format_number(b.alpha_bp) : "nan",
                      b.exists ? "1" : "0"});
  }
  return t;
}

void run_gamp(const ExperimentConfig& c, RunRecord& rec) {
  const auto m = static_cast<std::size_t>(std::llround(c.alpha * static_cast<double>(c.n)));
  if (m == 0) throw ConfigError("alpha", "alpha * n rounds to zero measurements");
  const auto s = sample_signal(c.model, c.n, signal_seed(c.seed));
  const auto F = homogeneous_matrix(m, c.n, matrix_seed(c.seed));
  const auto y = measure(F, s);
  const auto result = gamp_run(F, y, c.model, solver_options(c), std::span<const double>(s));
  const double realized = static_cast<double>(m) / static_cast<double>(c.n);
  rec.tables["gamp_trace"] = gamp_trace_table(result, realized);
  rec.summary = {{"final_mse", result.mse_trace.back()}, {"iterations", result.iterations},
                 {"converged", result.converged},        {"alpha_requested", c.alpha},
                 {"alpha_realized", realized},           {"m", m}};
}

void run_se(const ExperimentConfig& c, RunRecord& rec) {
  const double E0 = c.e0.value_or(prior_variance(c.model));
  const auto trace = se_run(c.model, c.alpha, E0, c.se_tol, c.max_iter);
  rec.tables["se_trace"] = se_trace_table(trace);
  rec.summary = {{"final_E", trace.energies.back()[0]},
                 {"steps", trace.steps()},
                 {"converged", trace.converged_at.has_value()}};
}

BlockRunOptions block_options(const ExperimentConfig& c) {
  return {c.se_tol, c.max_iter, c.stop_factor};
}

void run_se_block(const ExperimentConfig& c, RunRecord& rec) {
  const auto trace = se_block_run(c.profile, c.model, block_options(c));
  rec.tables["se_block_trace"] = block_trace_table(trace);
  rec.summary = {{"alpha", total_rate(c.profile)},
                 {"final_max_E", trace.final_max()},
                 {"steps", trace.steps()},
                 {"reconstructed", trace.converged_at.has_value()},
                 {"convergence_time", trace.converged_at ? json(*trace.converged_at) : json(nullptr)}};
}

void run_potential(const ExperimentConfig& c, RunRecord& rec) {
  const auto land = landscape(c.model, c.alpha);
  Table curve{{"E[mse]", "phi[nats]"}, {}};
  for (std::size_t k = 0; k < land.E.size(); ++k)
    curve.rows.push_back({format_number(land.E[k]), format_number(land.phi[k])});
  Table maxima{{"E[mse]", "phi[nats]"}, {}};
  json list = json::array();
  for (const auto& mx : land.maxima) {
    maxima.rows.push_back({format_number(mx.E), format_number(mx.phi)});
    list.push_back({{"E", mx.E}, {"phi", mx.phi}});
  }
  rec.tables["potential"] = std::move(curve);
  rec.tables["potential_maxima"] = std::move(maxima);
  rec.summary = {{"maxima", list}};
}

json boundary_json(const PhaseBoundary& b) {
  return {{"alpha_s", b.alpha_s}, {"alpha_opt", b.alpha_opt}, {"alpha_bp", b.alpha_bp}, {"exists", b.exists}};
}

void run_transitions(const ExperimentConfig& c, RunRecord& rec) {
  const auto b = phase_boundary(c.model);
  rec.tables["transitions"] = boundary_table({{c.model.rho, c.model.eps, b}});
  rec.summary = boundary_json(b);
}

void run_phase_diagram(const ExperimentConfig& c, RunRecord& rec) {
  const auto rows = phase_diagram(c.rhos, c.epss, c.model.sigma2);
  rec.tables["phase_diagram"] = boundary_table(rows);
  rec.summary = {{"points", rows.size()}};
}

void run_seeded(const ExperimentConfig& c, RunRecord& rec) {
  const std::size_t n = c.n - c.n % static_cast<std::size_t>(c.profile.Lc);
  if (n == 0) throw ConfigError("n", "smaller than profile_lc");
  const auto s = sample_signal(c.model, n, signal_seed(c.seed));
  const auto seeded = seeded_matrix(c.profile, n, matrix_seed(c.seed));
  const auto y = measure(seeded.matrix, s);
  const auto& cols = seeded.layout.column_offsets;

  std::vector<std::vector<double>> block_mse;
  auto observer = [&](const GampState& st) {
    std::vector<double> row(static_cast<std::size_t>(c.profile.Lc));
    for (int p = 0; p < c.profile.Lc; ++p) {
      const std::span<const double> a(st.a.data() + cols[p], cols[p + 1] - cols[p]);
      const std::span<const double> x(s.data() + cols[p], cols[p + 1] - cols[p]);
      row[p] = mse(a, x);
    }
    block_mse.push_back(std::move(row));
  };
  const auto result = gamp_run(seeded.matrix, y, c.model, solver_options(c), std::span<const double>(s), observer);
  const auto se = se_block_run(c.profile, c.model, block_options(c));

  const double threshold = c.stop_factor * c.model.eps;
  std::optional<std::size_t> reached;
  for (std::size_t k = 0; k < result.mse_trace.size(); ++k)
    if (result.mse_trace[k] <= threshold) {
      reached = k;
      break;
    }

  Table t{{"t[iter]", "E[mse]"}, {}};
  for (int p = 0; p < c.profile.Lc; ++p) t.header.push_back("E_" + std::to_string(p + 1) + "[mse]");
  t.header.push_back("alpha_realized[M/N]");
  for (std::size_t k = 0; k < result.mse_trace.size(); ++k) {
    std::vector<std::string> row{format_count(k), format_number(result.mse_trace[k])};
    for (double e : block_mse[k]) row.push_back(format_number(e));
    row.push_back(format_number(seeded.realized_alpha));
    t.rows.push_back(std::move(row));
  }
  rec.tables["seeded_trace"] = std::move(t);
  rec.tables["se_block_trace"] = block_trace_table(se);
  rec.summary = {{"n", n},
                 {"alpha_requested", seeded.requested_alpha},
                 {"alpha_realized", seeded.realized_alpha},
                 {"final_mse", result.mse_trace.back()},
                 {"iterations", result.iterations},
                 {"converged", result.mse_trace.back() <= threshold},
                 {"reached_threshold_at", reached ? json(*reached) : json(nullptr)},
                 {"predicted_iterations", se.converged_at ? json(*se.converged_at) : json(nullptr)}};
}

void run_success(const ExperimentConfig& c, RunRecord& rec) {
  const auto rows = success_fraction(c.profile, c.model, c.n_list, c.lc_list, c.attempts, c.seed, c.stop_factor);
  Table t{{"n[components]", "Lc[blocks]", "attempts[count]", "successes[count]", "fraction[ratio]",
           "predicted_iterations[iter]"},
          {}};
  for (const auto& r : rows)
    t.rows.push_back({format_count(r.n), std::to_string(r.Lc), format_count(r.attempts), format_count(r.successes),
                      format_number(r.fraction()), format_optional(r.predicted_iterations)});
  rec.tables["success_fraction"] = std::move(t);
  rec.summary = {{"points", rows.size()}};
}

}  // namespace

RunRecord run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  switch (config.kind) {
    case ExperimentKind::gamp: run_gamp(config, rec); break;
    case ExperimentKind::se: run_se(config, rec); break;
    case ExperimentKind::se_block: run_se_block(config, rec); break;
    case ExperimentKind::potential: run_potential(config, rec); break;
    case ExperimentKind::transitions: run_transitions(config, rec); break;
    case ExperimentKind::phase_diagram: run_phase_diagram(config, rec); break;
    case ExperimentKind::seeded_run: run_seeded(config, rec); break;
    case ExperimentKind::success_fraction: run_success(config, rec); break;
    case ExperimentKind::figure: rec = reproduce_figure(config.figure, config); break;
  }
  rec.config = to_json(config);
  rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<SuccessRow> success_fraction(const SeedingProfile& profile, const SignalModel& model,
                                         const std::vector<std::size_t>& n_list, const std::vector<int>& lc_list,
                                         std::size_t attempts, std::uint64_t seed, double stop_factor) {
  if (attempts < 1) throw ParameterError("success_fraction: attempts must be >= 1");
  std::vector<SuccessRow> rows;
  const int lr_offset = profile.Lr - profile.Lc;
  const double threshold = stop_factor * model.eps;
  std::uint64_t point = 0;
  for (std::size_t n_req : n_list) {
    for (int lc : lc_list) {
      SeedingProfile p = profile;
      p.Lc = lc;
      p.Lr = lc + lr_offset;
      const std::size_t n = n_req - n_req % static_cast<std::size_t>(lc);
      if (n == 0) throw ParameterError("success_fraction: n smaller than Lc");
      SuccessRow row{n, lc, attempts, 0, std::nullopt};
      row.predicted_iterations = convergence_time(p, model, BlockRunOptions{1e-12, 10000, stop_factor});
      if (row.predicted_iterations) {
        GampOptions opts;
        opts.max_iter = 2 * *row.predicted_iterations;
        opts.target_mse = threshold;
        for (std::size_t k = 0; k < attempts; ++k) {
          const std::uint64_t run_seed = mix_seed(seed, point, k);
          const auto s = sample_signal(model, n, signal_seed(run_seed));
          const auto F = seeded_matrix(p, n, matrix_seed(run_seed));
          const auto y = measure(F.matrix, s);
          try {
            if (gamp_run(F.matrix, y, model, opts, std::span<const double>(s)).reached_target) ++row.successes;
          } catch (const DivergenceError&) {
            // a diverged instance is a failed instance
          }
        }
      }
      rows.push_back(row);
      ++point;
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// figure recipes

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig1", "fig2", "fig3", "fig4", "fig7"};
  return names;
}

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
  return out;
}

// MSE-vs-time of G-AMP next to state evolution (homogeneous matrices).
RunRecord figure_evolution(const ExperimentConfig& c) {
  const SignalModel model{0.2, 1e-6, 1.0};
  const std::size_t n = c.paper_scale ? 30000 : 10000;
  const std::vector<double> alphas{0.36, 0.4, 0.5, 0.6};
  Table t{{"alpha[M/N]", "t[iter]", "E_se[mse]", "E_gamp[mse]"}, {}};
  GampOptions opts;
  opts.max_iter = 100;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    const auto m = static_cast<std::size_t>(std::llround(alphas[k] * static_cast<double>(n)));
    const std::uint64_t seed = mix_seed(c.seed, k);
    const auto s = sample_signal(model, n, signal_seed(seed));
    const auto F = homogeneous_matrix(m, n, matrix_seed(seed));
    const auto y = measure(F, s);
    const auto g = gamp_run(F, y, model, opts, std::span<const double>(s));
    const auto se = se_run(model, static_cast<double>(m) / n, prior_variance(model), 0.0, opts.max_iter);
    for (std::size_t i = 0; i < g.mse_trace.size(); ++i)
      t.rows.push_back({format_number(alphas[k]), format_count(i), format_number(se.energies[i][0]),
                        format_number(g.mse_trace[i])});
  }
  RunRecord rec;
  rec.tables["fig1_evolution"] = std::move(t);
  rec.summary = {{"n", n}, {"rho", model.rho}, {"eps", model.eps}};
  return rec;
}

// Phi(E) at the three critical rates.
RunRecord figure_potential(const ExperimentConfig& c) {
  const SignalModel model{0.2, 1e-6, 1.0};
  const std::vector<double> alphas{0.2305, 0.2817, 0.3559};
  LandscapeOptions lo;
  lo.points = c.paper_scale ? 2000 : 400;
  Table t{{"E[mse]"}, {}};
  std::vector<PotentialLandscape> lands;
  for (double a : alphas) {
    t.header.push_back("phi_alpha_" + format_number(a) + "[nats]");
    lands.push_back(landscape(model, a, lo));
  }
  for (std::size_t i = 0; i < lo.points; ++i) {
    std::vector<std::string> row{format_number(lands[0].E[i])};
    for (const auto& l : lands) row.push_back(format_number(l.phi[i]));
    t.rows.push_back(std::move(row));
  }
  RunRecord rec;
  rec.tables["fig2_potential"] = std::move(t);
  rec.summary = boundary_json(phase_boundary(model));
  return rec;
}

// State-evolution MSE reached from the prior variance vs alpha (rho = 0.1).
RunRecord figure_mse(const ExperimentConfig& c) {
  const std::vector<double> epss{1e-6, 2.5e-3, 1e-2};
  const auto alphas = linspace(0.05, 0.6, c.paper_scale ? 111 : 20);
  Table t{{"alpha[M/N]"}, {}};
  std::vector<FixedPointCurve> curves;
  for (double e : epss) {
    t.header.push_back("E_eps_" + format_number(e) + "[mse]");
    curves.emplace_back(SignalModel{0.1, e, 1.0});
  }
  for (double a : alphas) {
    std::vector<std::string> row{format_number(a)};
    for (const auto& curve : curves) row.push_back(format_number(algorithmic_mse(curve, a)));
    t.rows.push_back(std::move(row));
  }
  RunRecord rec;
  rec.tables["fig3_mse"] = std::move(t);
  return rec;
}

// Algorithmic vs Bayes-optimal MSE (rho = 0.1).
RunRecord figure_optimal(const ExperimentConfig& c) {
  const std::vector<double> epss{1e-6, 1e-4};
  const auto alphas = linspace(0.1, 0.4, c.paper_scale ? 121 : 20);
  Table t{{"eps[variance]", "alpha[M/N]", "E_algorithmic[mse]", "E_optimal[mse]"}, {}};
  json bounds = json::array();
  for (double e : epss) {
    const FixedPointCurve curve(SignalModel{0.1, e, 1.0});
    bounds.push_back(boundary_json(phase_boundary(curve)));
    for (double a : alphas)
      t.rows.push_back({format_number(e), format_number(a), format_number(algorithmic_mse(curve, a)),
                        format_number(optimal_mse(curve, a))});
  }
  RunRecord rec;
  rec.tables["fig4_optimal"] = std::move(t);
  rec.summary = {{"boundaries", bounds}};
  return rec;
}

// Convergence time of state evolution vs alpha: homogeneous and seeded.
RunRecord figure_time(const ExperimentConfig& c) {
  const SignalModel model{0.2, 1e-6, 1.0};
  BlockRunOptions opts{1e-12, 10000, c.stop_factor};
  Table t{{"series", "Lc[blocks]", "alpha[M/N]", "time[iter]"}, {}};
  for (double a : linspace(0.356, 0.45, c.paper_scale ? 48 : 20))
    t.rows.push_back({"homogeneous", "1", format_number(a), format_optional(convergence_time(a, model, opts))});
  const std::vector<int> lcs = c.paper_scale ? std::vector<int>{10, 20, 30, 40, 60, 80, 100}
                                             : std::vector<int>{10, 20, 30};
  for (const char* name : {"violet", "blue", "green", "black"}) {
    for (int lc : lcs) {
      const auto p = seeding_preset(parse_seeding_preset(name), lc);
      t.rows.push_back({name, std::to_string(lc), format_number(total_rate(p)),
                        format_optional(convergence_time(p, model, opts))});
    }
  }
  RunRecord rec;
  rec.tables["fig7_time"] = std::move(t);
  rec.summary = {{"stop_factor", c.stop_factor}};
  return rec;
}

}  // namespace

RunRecord reproduce_figure(const std::string& name, const ExperimentConfig& config) {
  if (name == "fig1") return figure_evolution(config);
  if (name == "fig2") return figure_potential(config);
  if (name == "fig3") return figure_mse(config);
  if (name == "fig4") return figure_optimal(config);
  if (name == "fig7") return figure_time(config);
  throw ConfigError("figure", "unknown figure '" + name + "'");
}

}  // namespace ascs::bench
