// scfrag command line: figure-data reproduction, one-shot analyses, and
// simulation runs over JSON configs.  Exit codes: 0 success, 2 config
// error, 3 domain/numeric error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "scfrag/chain.hpp"
#include "scfrag/mc.hpp"
#include "scfrag/perfect_info.hpp"
#include "scfrag/planner.hpp"
#include "scfrag/version.hpp"

using json = nlohmann::ordered_json;
using namespace scfrag;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Strict key validation: anything not in the allowlist is rejected with
// its path, so typos never silently fall back to defaults.
void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& path) {
  if (!obj.is_object()) {
    throw ConfigError(path + " must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + path + "." + key + "'");
    }
  }
}

double get_number(const json& obj, const std::string& key, const std::string& path,
                  std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) {
      return *fallback;
    }
    throw ConfigError("missing key '" + path + "." + key + "'");
  }
  if (!obj[key].is_number()) {
    throw ConfigError("'" + path + "." + key + "' must be a number");
  }
  return obj[key].get<double>();
}

long get_integer(const json& obj, const std::string& key, const std::string& path,
                 std::optional<long> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) {
      return *fallback;
    }
    throw ConfigError("missing key '" + path + "." + key + "'");
  }
  if (!obj[key].is_number_integer()) {
    throw ConfigError("'" + path + "." + key + "' must be an integer");
  }
  return obj[key].get<long>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& path,
                       std::optional<std::string> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) {
      return *fallback;
    }
    throw ConfigError("missing key '" + path + "." + key + "'");
  }
  if (!obj[key].is_string()) {
    throw ConfigError("'" + path + "." + key + "' must be a string");
  }
  return obj[key].get<std::string>();
}

std::vector<double> get_number_list(const json& obj, const std::string& key,
                                    const std::string& path,
                                    std::vector<double> fallback = {}) {
  if (!obj.contains(key)) {
    return fallback;
  }
  if (!obj[key].is_array()) {
    throw ConfigError("'" + path + "." + key + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number()) {
      throw ConfigError("'" + path + "." + key + "' must be an array of numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<int> get_int_list(const json& obj, const std::string& key,
                              const std::string& path, std::vector<int> fallback = {}) {
  if (!obj.contains(key)) {
    return fallback;
  }
  if (!obj[key].is_array()) {
    throw ConfigError("'" + path + "." + key + "' must be an array of integers");
  }
  std::vector<int> out;
  for (const auto& v : obj[key]) {
    if (!v.is_number_integer()) {
      throw ConfigError("'" + path + "." + key + "' must be an array of integers");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

// Grid spec: {"min": a, "max": b, "count": n} or {"values": [...]}.
std::vector<double> parse_grid(const json& obj, const std::string& path) {
  reject_unknown_keys(obj, {"min", "max", "count", "values"}, path);
  if (obj.contains("values")) {
    return get_number_list(obj, "values", path);
  }
  const double lo = get_number(obj, "min", path);
  const double hi = get_number(obj, "max", path);
  const long n = get_integer(obj, "count", path);
  if (n < 2 || hi <= lo) {
    throw ConfigError("'" + path + "' needs count >= 2 and max > min");
  }
  std::vector<double> out(n);
  for (long i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

struct EconomyConfig {
  int K;
  double pi;
  double c;
  double mu0;
  double rho0;

  EconomyParams params() const {
    return EconomyParams(K, pi, c, BetaParams(mu0, rho0));
  }
};

EconomyConfig parse_economy(const json& cfg) {
  if (!cfg.contains("economy")) {
    throw ConfigError("missing 'economy' section");
  }
  const json& eco = cfg["economy"];
  reject_unknown_keys(eco, {"K", "pi", "c", "mu0", "rho0"}, "economy");
  EconomyConfig out;
  out.K = static_cast<int>(get_integer(eco, "K", "economy", 8));
  out.pi = get_number(eco, "pi", "economy", 1.0);
  out.c = get_number(eco, "c", "economy", 0.04);
  out.mu0 = get_number(eco, "mu0", "economy");
  out.rho0 = get_number(eco, "rho0", "economy");
  return out;
}

BasalMode parse_mode(const std::string& name, const std::string& path) {
  if (name == "common-draw") {
    return BasalMode::CommonDraw;
  }
  if (name == "iid-draw") {
    return BasalMode::IidDraw;
  }
  if (name == "fixed-vector") {
    return BasalMode::FixedVector;
  }
  throw ConfigError("'" + path + "' must be common-draw, iid-draw or fixed-vector");
}

int env_threads() {
  const char* env = std::getenv("SCFRAG_THREADS");
  if (!env) {
    return 1;
  }
  const int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

// Round-trip-safe decimal for JSON payload values we format ourselves and
// 12-significant-digit figures for table output.
std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    throw ConfigError("cannot open output file " + out_path);
  }
  f << text;
}

json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw ConfigError("cannot read config file " + path);
  }
  json cfg;
  try {
    cfg = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return cfg;
}

json result_envelope(const std::string& command, const json& cfg) {
  json doc;
  doc["command"] = command;
  doc["version"] = version_string;
  doc["config"] = cfg;
  return doc;
}

// ---------------------------------------------------------------------------
// figure command

struct Csv {
  std::string text;
  void header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      text += (i ? "," : "") + cols[i];
    }
    text += "\n";
  }
  void row(const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
      text += (i ? "," : "") + fmt12(vals[i]);
    }
    text += "\n";
  }
};

std::string figure_risk_mapping(const EconomyConfig& eco, const json& fig) {
  reject_unknown_keys(fig, {"grid", "s_list", "S"}, "figure");
  const std::vector<double> grid =
      fig.contains("grid") ? parse_grid(fig["grid"], "figure.grid")
                           : parse_grid(json{{"min", 0.01}, {"max", 0.99}, {"count", 50}},
                                        "figure.grid");
  const std::vector<int> s_list = get_int_list(fig, "s_list", "figure", {2, 3, 4});
  const double S = get_number(fig, "S", "figure", 2.0);

  Csv csv;
  std::vector<std::string> cols{"rho0"};
  for (const int s : s_list) {
    cols.push_back("eta_s" + std::to_string(s));
  }
  csv.header(cols);
  for (const double rho0 : grid) {
    std::vector<double> row{rho0};
    for (const int s : s_list) {
      row.push_back(eta(s, S, BetaParams(eco.mu0, rho0)));
    }
    csv.row(row);
  }
  return csv.text;
}

std::string figure_upstream_risk_mapping(const EconomyConfig& eco, const json& fig) {
  reject_unknown_keys(fig, {"grid", "S_list", "s"}, "figure");
  const std::vector<double> grid =
      fig.contains("grid") ? parse_grid(fig["grid"], "figure.grid")
                           : parse_grid(json{{"min", 0.01}, {"max", 0.99}, {"count", 50}},
                                        "figure.grid");
  const std::vector<int> S_list = get_int_list(fig, "S_list", "figure", {1, 2, 4, 8});
  const double s = get_number(fig, "s", "figure", 2.0);

  Csv csv;
  std::vector<std::string> cols{"rho0"};
  for (const int S : S_list) {
    cols.push_back("eta_S" + std::to_string(S));
  }
  csv.header(cols);
  for (const double rho0 : grid) {
    std::vector<double> row{rho0};
    for (const int S : S_list) {
      row.push_back(eta(s, S, BetaParams(eco.mu0, rho0)));
    }
    csv.row(row);
  }
  return csv.text;
}

std::string figure_s_no_corr(const EconomyConfig& eco, const json& fig) {
  reject_unknown_keys(fig, {"grid", "rc_list"}, "figure");
  const std::vector<double> grid =
      fig.contains("grid") ? parse_grid(fig["grid"], "figure.grid")
                           : parse_grid(json{{"min", 0.01}, {"max", 0.99}, {"count", 99}},
                                        "figure.grid");
  const std::vector<double> rc_list =
      get_number_list(fig, "rc_list", "figure", {0.02, 0.08});

  Csv csv;
  std::vector<std::string> cols{"mu"};
  for (const double rc : rc_list) {
    cols.push_back("desired_rc" + fmt_label(rc));
    cols.push_back("optimal_rc" + fmt_label(rc));
  }
  csv.header(cols);
  for (const double mu : grid) {
    std::vector<double> row{mu};
    for (const double rc : rc_list) {
      const SourcingDecision d = optimal_sourcing_uncorrelated(mu, eco.pi, 2 * rc * eco.pi);
      row.push_back(d.desired);
      row.push_back(d.optimal);
    }
    csv.row(row);
  }
  return csv.text;
}

std::string figure_s_corr(const EconomyConfig& eco, const json& fig) {
  reject_unknown_keys(fig, {"grid", "rc_list"}, "figure");
  const std::vector<double> grid =
      fig.contains("grid") ? parse_grid(fig["grid"], "figure.grid")
                           : parse_grid(json{{"min", 0.01}, {"max", 0.99}, {"count", 99}},
                                        "figure.grid");
  const std::vector<double> rc_list =
      get_number_list(fig, "rc_list", "figure", {0.002, 0.005});

  Csv csv;
  std::vector<std::string> cols{"rho"};
  for (const double rc : rc_list) {
    cols.push_back("desired_rc" + fmt_label(rc));
    cols.push_back("optimal_rc" + fmt_label(rc));
  }
  csv.header(cols);
  for (const double rho : grid) {
    std::vector<double> row{rho};
    for (const double rc : rc_list) {
      const SourcingDecision d =
          single_layer_sourcing(BetaParams(eco.mu0, rho), eco.pi, 2 * rc * eco.pi);
      row.push_back(d.desired);
      row.push_back(d.optimal);
    }
    csv.row(row);
  }
  return csv.text;
}

std::string figure_limit(const EconomyConfig& eco, const json& fig) {
  reject_unknown_keys(fig, {"grid", "rho0_list", "max_layers"}, "figure");
  const std::vector<double> grid =
      fig.contains("grid") ? parse_grid(fig["grid"], "figure.grid")
                           : parse_grid(json{{"min", 0.01}, {"max", 0.99}, {"count", 99}},
                                        "figure.grid");
  const std::vector<double> rho0_list =
      get_number_list(fig, "rho0_list", "figure", {0.05, 0.3});
  const int max_layers =
      static_cast<int>(get_integer(fig, "max_layers", "figure", 64));

  Csv csv;
  std::vector<std::string> cols{"mu0"};
  for (const double rho0 : rho0_list) {
    cols.push_back("mu_bar_rho" + fmt_label(rho0));
  }
  csv.header(cols);
  std::vector<std::vector<std::pair<double, double>>> maps;
  for (const double rho0 : rho0_list) {
    maps.push_back(limit_map(grid, rho0, eco.pi, eco.c, max_layers));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> row{grid[i]};
    for (const auto& m : maps) {
      row.push_back(m[i].second);
    }
    csv.row(row);
  }
  return csv.text;
}

std::string figure_crit(const EconomyConfig& eco, const json& fig) {
  reject_unknown_keys(fig, {"grid", "tol"}, "figure");
  const std::vector<double> grid =
      fig.contains("grid") ? parse_grid(fig["grid"], "figure.grid")
                           : parse_grid(json{{"min", 0.01}, {"max", 0.6}, {"count", 25}},
                                        "figure.grid");
  const double tol = get_number(fig, "tol", "figure", 1e-4);

  Csv csv;
  csv.header({"rho0", "mu_c"});
  for (const double rho0 : grid) {
    double mc = std::numeric_limits<double>::quiet_NaN();
    try {
      mc = critical_mu(rho0, eco.pi, eco.c, tol);
    } catch (const ScanError&) {
      // no transition in range: emitted as nan
    }
    csv.row({rho0, mc});
  }
  return csv.text;
}

std::string figure_planner_grids(const EconomyConfig& eco, const json& fig,
                                 bool welfare) {
  reject_unknown_keys(fig, {"mu0_grid", "rho0_grid", "s_max"}, "figure");
  const std::vector<double> mu0s =
      fig.contains("mu0_grid") ? parse_grid(fig["mu0_grid"], "figure.mu0_grid")
                               : parse_grid(json{{"min", 0.05}, {"max", 0.95}, {"count", 10}},
                                            "figure.mu0_grid");
  const std::vector<double> rho0s =
      fig.contains("rho0_grid") ? parse_grid(fig["rho0_grid"], "figure.rho0_grid")
                                : parse_grid(json{{"min", 0.05}, {"max", 0.9}, {"count", 10}},
                                             "figure.rho0_grid");
  const int s_max = static_cast<int>(get_integer(fig, "s_max", "figure", 12));

  const WelfareGrid grid = comparison_grid(mu0s, rho0s, eco.pi, eco.c, eco.K, s_max);
  Csv csv;
  if (welfare) {
    csv.header({"mu0", "rho0", "welfare_firms", "welfare_planner", "loss"});
  } else {
    csv.header({"mu0", "rho0", "mu_bar_firms", "mu_bar_planner", "difference"});
  }
  for (const WelfareCell& cell : grid.cells) {
    if (!cell.ok) {
      throw std::runtime_error("grid cell (" + fmt_label(cell.mu0) + ", " +
                               fmt_label(cell.rho0) + ") failed: " + cell.error);
    }
    if (welfare) {
      csv.row({cell.mu0, cell.rho0, cell.w_dec, cell.w_plan, cell.w_dec - cell.w_plan});
    } else {
      csv.row({cell.mu0, cell.rho0, cell.mu_bar_dec, cell.mu_bar_plan,
               cell.mu_bar_dec - cell.mu_bar_plan});
    }
  }
  return csv.text;
}

int cmd_figure(const std::string& name, const std::string& config_path,
               const std::string& out_path) {
  const json cfg = load_config(config_path);
  reject_unknown_keys(cfg, {"economy", "figure"}, "config");
  const EconomyConfig eco = parse_economy(cfg);
  const json fig = cfg.contains("figure") ? cfg["figure"] : json::object();

  std::string table;
  if (name == "risk-mapping") {
    table = figure_risk_mapping(eco, fig);
  } else if (name == "upstream-risk-mapping") {
    table = figure_upstream_risk_mapping(eco, fig);
  } else if (name == "s-no-corr") {
    table = figure_s_no_corr(eco, fig);
  } else if (name == "s-corr") {
    table = figure_s_corr(eco, fig);
  } else if (name == "limit") {
    table = figure_limit(eco, fig);
  } else if (name == "crit") {
    table = figure_crit(eco, fig);
  } else if (name == "risk-difference") {
    table = figure_planner_grids(eco, fig, false);
  } else if (name == "welfare-loss") {
    table = figure_planner_grids(eco, fig, true);
  } else {
    throw ConfigError("unknown figure '" + name +
                      "' (expected risk-mapping, upstream-risk-mapping, s-no-corr, "
                      "s-corr, limit, crit, risk-difference or welfare-loss)");
  }
  write_output(table, out_path);
  return 0;
}

// ---------------------------------------------------------------------------
// analysis commands

int cmd_propagate(const json& cfg, const std::string& out_path) {
  reject_unknown_keys(cfg, {"economy", "propagate"}, "config");
  const EconomyConfig eco = parse_economy(cfg);
  const json sec = cfg.contains("propagate") ? cfg["propagate"] : json::object();
  reject_unknown_keys(sec, {"max_layers"}, "propagate");
  const int max_layers = static_cast<int>(get_integer(sec, "max_layers", "propagate", 64));

  const ChainTrajectory traj = propagate_chain(eco.params(), max_layers);
  json doc = result_envelope("propagate", cfg);
  json layers = json::array();
  for (const LayerState& L : traj.layers) {
    layers.push_back({{"k", L.k}, {"s", L.s}, {"S", L.S}, {"mu", L.mu}});
  }
  doc["result"] = {{"mu0", traj.mu0},
                   {"layers", layers},
                   {"mu_bar", traj.mu_bar},
                   {"fragile", traj.fragile},
                   {"converged", traj.converged}};
  write_output(doc.dump(2) + "\n", out_path);
  return 0;
}

int cmd_planner(const json& cfg, const std::string& out_path) {
  reject_unknown_keys(cfg, {"economy", "planner"}, "config");
  const EconomyConfig eco = parse_economy(cfg);
  const json sec = cfg.contains("planner") ? cfg["planner"] : json::object();
  reject_unknown_keys(sec, {"s_max", "max_layers"}, "planner");
  const int s_max = static_cast<int>(get_integer(sec, "s_max", "planner", 12));
  const int max_layers = static_cast<int>(get_integer(sec, "max_layers", "planner", 64));

  const EconomyParams econ = eco.params();
  const PlannerSolution sol = planner_solve(econ, s_max);
  const ChainTrajectory traj = propagate_chain(econ, std::max(max_layers, econ.K));
  if (sol.hit_smax) {
    std::cerr << "warning: an argmax reached s_max = " << s_max
              << "; consider raising it\n";
  }

  json doc = result_envelope("planner", cfg);
  doc["result"] = {{"s_seq", sol.s_seq},
                   {"value", sol.value},
                   {"welfare", sol.welfare},
                   {"mu_traj", sol.mu_traj},
                   {"hit_smax", sol.hit_smax},
                   {"decentralized",
                    {{"welfare", decentralized_welfare(traj, econ)},
                     {"mu_bar", traj.mu_bar},
                     {"fragile", traj.fragile}}}};
  write_output(doc.dump(2) + "\n", out_path);
  return 0;
}

int cmd_simulate(const json& cfg, std::optional<long> seed_override,
                 const std::string& out_path) {
  reject_unknown_keys(cfg, {"economy", "simulate"}, "config");
  const EconomyConfig eco = parse_economy(cfg);
  if (!cfg.contains("simulate")) {
    throw ConfigError("missing 'simulate' section");
  }
  const json sec = cfg["simulate"];
  reject_unknown_keys(
      sec, {"network", "K", "s_vec", "m_vec", "top_firms", "basal_mode", "fixed_p",
            "trials", "seed"},
      "simulate");
  const std::string network = get_string(sec, "network", "simulate", "tree");
  const int K = static_cast<int>(get_integer(sec, "K", "simulate"));
  const std::vector<int> s_vec = get_int_list(sec, "s_vec", "simulate");
  if (static_cast<int>(s_vec.size()) != K) {
    throw ConfigError("'simulate.s_vec' must have K entries");
  }
  const BasalMode mode =
      parse_mode(get_string(sec, "basal_mode", "simulate", "common-draw"),
                 "simulate.basal_mode");
  const std::vector<double> fixed_p = get_number_list(sec, "fixed_p", "simulate");
  const long trials = get_integer(sec, "trials", "simulate", 100000);
  const long seed = seed_override.value_or(get_integer(sec, "seed", "simulate", 1));

  Network net;
  if (network == "tree") {
    const int top = static_cast<int>(get_integer(sec, "top_firms", "simulate", 1));
    net = build_tree_network(K, s_vec, top);
  } else if (network == "random") {
    const std::vector<int> m_vec = get_int_list(sec, "m_vec", "simulate");
    if (m_vec.empty()) {
      throw ConfigError("'simulate.m_vec' required for random networks");
    }
    net = build_random_network(m_vec, s_vec, static_cast<std::uint64_t>(seed));
  } else {
    throw ConfigError("'simulate.network' must be tree or random");
  }

  TrialOptions opts;
  opts.threads = env_threads();
  const BetaParams base(eco.mu0, eco.rho0);
  const SimulationReport rep =
      run_trials(net, mode, base, trials, static_cast<std::uint64_t>(seed), fixed_p, opts);

  json doc = result_envelope("simulate", cfg);
  doc["seed"] = seed;
  json layers = json::array();
  double S = 1.0;
  for (std::size_t k = 0; k < rep.layers.size(); ++k) {
    json layer = {{"k", k},
                  {"fraction", rep.layers[k].fraction},
                  {"se", rep.layers[k].se}};
    if (network == "tree" && mode == BasalMode::CommonDraw) {
      if (k > 0) {
        S *= s_vec[k - 1];
      }
      layer["analytic_mu"] = k == 0 ? eco.mu0 : betapower_mean(base, S);
    }
    layers.push_back(layer);
  }
  doc["result"] = {{"trials", rep.trials}, {"layers", layers}};
  write_output(doc.dump(2) + "\n", out_path);
  return 0;
}

int cmd_perfect_info(const json& cfg, std::optional<long> seed_override,
                     const std::string& out_path) {
  reject_unknown_keys(cfg, {"economy", "perfect_info"}, "config");
  const EconomyConfig eco = parse_economy(cfg);
  if (!cfg.contains("perfect_info")) {
    throw ConfigError("missing 'perfect_info' section");
  }
  const json sec = cfg["perfect_info"];
  reject_unknown_keys(sec,
                      {"m", "K", "s1", "basal_mode", "fixed_p", "trials", "seed",
                       "verify_single_sourcing"},
                      "perfect_info");
  const int m = static_cast<int>(get_integer(sec, "m", "perfect_info"));
  const int K = static_cast<int>(get_integer(sec, "K", "perfect_info"));
  const int s1 = static_cast<int>(get_integer(sec, "s1", "perfect_info"));
  const BasalMode mode =
      parse_mode(get_string(sec, "basal_mode", "perfect_info", "iid-draw"),
                 "perfect_info.basal_mode");
  const std::vector<double> fixed_p = get_number_list(sec, "fixed_p", "perfect_info");
  const long trials = get_integer(sec, "trials", "perfect_info", 100000);
  const long seed = seed_override.value_or(get_integer(sec, "seed", "perfect_info", 1));
  const bool verify = sec.contains("verify_single_sourcing") &&
                      sec["verify_single_sourcing"].get<bool>();

  const EconomyParams econ = eco.params();
  const PerfectInfoOutcome out = simulate_perfect_info(
      m, K, s1, mode, econ.base, trials, static_cast<std::uint64_t>(seed), fixed_p,
      verify ? &econ : nullptr);

  json doc = result_envelope("perfect-info", cfg);
  doc["seed"] = seed;
  json result = {{"trials", out.trials},
                 {"all_fail", out.all_fail},
                 {"none_fail", out.none_fail},
                 {"mixed", out.mixed},
                 {"firm_fail_freq", out.firm_fail_freq}};
  if (out.single_sourcing_verified) {
    result["single_sourcing_verified"] = *out.single_sourcing_verified;
  }
  doc["result"] = result;
  write_output(doc.dump(2) + "\n", out_path);
  return 0;
}

int cmd_compare(const json& cfg, std::optional<long> seed_override,
                const std::string& out_path) {
  reject_unknown_keys(cfg, {"economy", "compare"}, "config");
  const EconomyConfig eco = parse_economy(cfg);
  if (!cfg.contains("compare")) {
    throw ConfigError("missing 'compare' section");
  }
  const json sec = cfg["compare"];
  reject_unknown_keys(sec, {"m", "K", "s_vec", "basal_mode", "fixed_p", "trials", "seed"},
                      "compare");
  const int m = static_cast<int>(get_integer(sec, "m", "compare"));
  const int K = static_cast<int>(get_integer(sec, "K", "compare"));
  const std::vector<int> s_vec = get_int_list(sec, "s_vec", "compare");
  if (static_cast<int>(s_vec.size()) != K) {
    throw ConfigError("'compare.s_vec' must have K entries");
  }
  const BasalMode mode = parse_mode(
      get_string(sec, "basal_mode", "compare", "iid-draw"), "compare.basal_mode");
  const std::vector<double> fixed_p = get_number_list(sec, "fixed_p", "compare");
  const long trials = get_integer(sec, "trials", "compare", 100000);
  const long seed = seed_override.value_or(get_integer(sec, "seed", "compare", 1));

  const RegimeComparison cmp =
      compare_with_opaque(m, K, s_vec, mode, BetaParams(eco.mu0, eco.rho0), trials,
                          static_cast<std::uint64_t>(seed), fixed_p);

  json doc = result_envelope("compare", cfg);
  doc["seed"] = seed;
  doc["result"] = {{"trials", cmp.trials},
                   {"perfect_freq", cmp.perfect_freq},
                   {"opaque_freq", cmp.opaque_freq},
                   {"perfect_se", cmp.perfect_se},
                   {"opaque_se", cmp.opaque_se},
                   {"diff", cmp.diff},
                   {"diff_se", cmp.diff_se}};
  write_output(doc.dump(2) + "\n", out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"supply-chain formation and fragility toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string figure_name;
  long seed_flag = -1;
  bool seed_set = false;

  auto add_common = [&](CLI::App* sub, bool with_seed) {
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_path, "output path (default: stdout)");
    if (with_seed) {
      sub->add_option("--seed", seed_flag, "override the config seed")
          ->each([&](const std::string&) { seed_set = true; });
    }
  };

  CLI::App* fig = app.add_subcommand("figure", "emit figure data as CSV");
  fig->add_option("name", figure_name, "figure identifier")->required();
  add_common(fig, false);
  // propagate and planner are deterministic; --seed is accepted for a
  // uniform interface and has no effect there.
  CLI::App* propagate = app.add_subcommand("propagate", "run the layer dynamics");
  add_common(propagate, true);
  CLI::App* planner = app.add_subcommand("planner", "solve the planner benchmark");
  add_common(planner, true);
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo cascade runs");
  add_common(simulate, true);
  CLI::App* pinfo = app.add_subcommand("perfect-info", "perfect-information regime");
  add_common(pinfo, true);
  CLI::App* compare = app.add_subcommand("compare", "perfect-info vs opaque sourcing");
  add_common(compare, true);

  CLI11_PARSE(app, argc, argv);

  std::optional<long> seed_override;
  if (seed_set) {
    seed_override = seed_flag;
  }

  try {
    if (fig->parsed()) {
      return cmd_figure(figure_name, config_path, out_path);
    }
    const json cfg = load_config(config_path);
    if (propagate->parsed()) {
      return cmd_propagate(cfg, out_path);
    }
    if (planner->parsed()) {
      return cmd_planner(cfg, out_path);
    }
    if (simulate->parsed()) {
      return cmd_simulate(cfg, seed_override, out_path);
    }
    if (pinfo->parsed()) {
      return cmd_perfect_info(cfg, seed_override, out_path);
    }
    if (compare->parsed()) {
      return cmd_compare(cfg, seed_override, out_path);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}
