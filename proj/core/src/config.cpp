#include "pivotlab/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace pivotlab {

namespace {

const std::set<std::string> kExperiments{"entropy", "bad-rate", "pin-down", "pivots", "all"};

template <class T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

ChainCheck parse_chain_check(const std::string& name) {
  if (name == "none") return ChainCheck::none;
  if (name == "incremental") return ChainCheck::incremental;
  if (name == "full") return ChainCheck::full;
  throw ConfigError("chain_check must be none, incremental or full (got '" + name + "')");
}

std::string to_string(ChainCheck c) {
  switch (c) {
    case ChainCheck::none: return "none";
    case ChainCheck::incremental: return "incremental";
    case ChainCheck::full: return "full";
  }
  return "none";
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j = {{"experiment", experiment},
                      {"rank", rank},
                      {"power", power},
                      {"block_N", block_N},
                      {"alpha_grid", alpha_grid},
                      {"n_grid", n_grid},
                      {"L_rule", {{"delta", L_delta}, {"samples", L_samples}}},
                      {"L", nullptr},
                      {"trials", trials},
                      {"seed", seed},
                      {"threads", threads},
                      {"horizon_factor", horizon_factor},
                      {"theta", theta},
                      {"bootstrap", bootstrap},
                      {"chain_check", chain_check},
                      {"pin_down", {{"n", pin_down_n}, {"alpha", pin_down_alpha}, {"trials", pin_down_trials}}},
                      {"pivots", {{"blocks", pivot_blocks}, {"trials", pivot_trials}}},
                      {"out_dir", out_dir}};
  if (L) j["L"] = *L;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"experiment", "rank",    "power",       "block_N",   "alpha_grid",
                                           "n_grid",     "L_rule",  "L",           "trials",    "seed",
                                           "threads",    "horizon_factor", "theta", "bootstrap", "chain_check",
                                           "pin_down",   "pivots",  "out_dir"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config field '" + key + "'");
  }
  ExperimentConfig c;
  read(j, "experiment", c.experiment);
  read(j, "rank", c.rank);
  read(j, "power", c.power);
  read(j, "block_N", c.block_N);
  read(j, "alpha_grid", c.alpha_grid);
  read(j, "n_grid", c.n_grid);
  if (j.contains("L_rule")) {
    const auto& r = j.at("L_rule");
    require(r.is_object(), "config field 'L_rule' must be an object");
    for (const auto& [key, value] : r.items()) {
      if (key != "delta" && key != "samples") throw ConfigError("unknown config field 'L_rule." + key + "'");
    }
    read(r, "delta", c.L_delta);
    read(r, "samples", c.L_samples);
  }
  if (j.contains("L") && !j.at("L").is_null()) {
    std::int64_t L = 0;
    read(j, "L", L);
    c.L = L;
  }
  read(j, "trials", c.trials);
  if (j.contains("seed")) {
    require(j.at("seed").is_number_unsigned() || (j.at("seed").is_number_integer() && j.at("seed").get<std::int64_t>() >= 0),
            "config field 'seed' must be a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  read(j, "threads", c.threads);
  read(j, "horizon_factor", c.horizon_factor);
  read(j, "theta", c.theta);
  read(j, "bootstrap", c.bootstrap);
  read(j, "chain_check", c.chain_check);
  if (j.contains("pin_down")) {
    const auto& p = j.at("pin_down");
    require(p.is_object(), "config field 'pin_down' must be an object");
    for (const auto& [key, value] : p.items()) {
      if (key != "n" && key != "alpha" && key != "trials") throw ConfigError("unknown config field 'pin_down." + key + "'");
    }
    read(p, "n", c.pin_down_n);
    read(p, "alpha", c.pin_down_alpha);
    read(p, "trials", c.pin_down_trials);
  }
  if (j.contains("pivots")) {
    const auto& p = j.at("pivots");
    require(p.is_object(), "config field 'pivots' must be an object");
    for (const auto& [key, value] : p.items()) {
      if (key != "blocks" && key != "trials") throw ConfigError("unknown config field 'pivots." + key + "'");
    }
    read(p, "blocks", c.pivot_blocks);
    read(p, "trials", c.pivot_trials);
  }
  read(j, "out_dir", c.out_dir);
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  require(kExperiments.contains(experiment),
          "experiment must be one of entropy, bad-rate, pin-down, pivots, all (got '" + experiment + "')");
  require(rank >= 5, "rank must be >= 5");
  require(power >= 1, "power must be >= 1");
  require(block_N >= 2, "block_N must be >= 2");
  require(!alpha_grid.empty(), "alpha_grid must not be empty");
  for (auto a : alpha_grid) require(a >= 1, "alpha must be >= 1 (got " + std::to_string(a) + ")");
  require(!n_grid.empty(), "n_grid must not be empty");
  for (auto n : n_grid) require(n >= 1, "n must be >= 1 (got " + std::to_string(n) + ")");
  require(L_delta > 0.0 && L_delta <= 1.0, "L_rule.delta must lie in (0, 1]");
  require(L_samples >= 1, "L_rule.samples must be >= 1");
  if (L) require(*L >= 1, "L must be >= 1");
  require(trials >= 100, "trials must be >= 100");
  require(threads >= 1, "threads must be >= 1");
  require(horizon_factor >= 1.0, "horizon_factor must be >= 1");
  require(theta > 0.0 && theta <= 1.0, "theta must lie in (0, 1]");
  require(theta * horizon_factor >= 1.0, "theta * horizon_factor must be >= 1 so stable pivots reach n");
  require(bootstrap >= 0, "bootstrap must be >= 0");
  parse_chain_check(chain_check);
  require(pin_down_n >= 0, "pin_down.n must be >= 0");
  require(pin_down_alpha >= 1, "pin_down.alpha must be >= 1 (got " + std::to_string(pin_down_alpha) + ")");
  require(pin_down_trials >= 1, "pin_down.trials must be >= 1");
  require(pivot_blocks >= 1, "pivots.blocks must be >= 1");
  require(pivot_trials >= 1, "pivots.trials must be >= 1");
  require(!out_dir.empty(), "out_dir must not be empty");
}

AlternatingSpec ExperimentConfig::spec() const { return canonical_alternating_spec(rank, power, block_N); }

LRule ExperimentConfig::L_rule() const {
  LRule r;
  r.delta = L_delta;
  r.samples = L_samples;
  r.fixed = L;
  return r;
}

SimulationConfig ExperimentConfig::simulation() const {
  SimulationConfig s;
  s.trials = trials;
  s.seed = seed;
  s.horizon_factor = horizon_factor;
  s.theta = theta;
  s.threads = threads;
  s.chain_check = parse_chain_check(chain_check);
  return s;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return ExperimentConfig::from_json(j);
}

}  // namespace pivotlab
