#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pivotlab/config.hpp"
#include "pivotlab/experiments.hpp"
#include "pivotlab/measure.hpp"
#include "pivotlab/schottky.hpp"
#include "pivotlab/selfcheck.hpp"
#include "pivotlab/walk.hpp"
#include "runner.hpp"

namespace {

using namespace pivotlab;
using cli::kExitInternal;
using cli::kExitInvariant;
using cli::kExitOk;
using cli::kExitUsage;

/// Flag values that override a loaded config (flag > config > default).
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::optional<std::int64_t> trials;
  std::optional<std::string> config;

  void attach(CLI::App& app, bool with_config = true) {
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", out, "Output directory");
    app.add_option("--trials", trials, "Number of trials");
    if (with_config) app.add_option("--config", config, "JSON config file");
  }

  void apply(ExperimentConfig& c) const {
    if (seed) c.seed = *seed;
    if (threads) c.threads = *threads;
    if (out) c.out_dir = *out;
    if (trials) {
      c.trials = *trials;
      c.pin_down_trials = *trials;
      c.pivot_trials = *trials;
    }
  }
};

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (path) {
    cli::write_file(*path, text);
  } else {
    std::cout << text;
  }
}

ExperimentConfig base_config(const std::optional<std::string>& path) {
  return path ? load_config(*path) : ExperimentConfig{};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pivotlab: random walks on free groups, pivots and pin-down partitions"};
  app.require_subcommand(1);
  int exit_code = kExitOk;

  // walk
  auto* walk = app.add_subcommand("walk", "Sample a walk with mu uniform on {x_i^(+-D)} and print it as CSV");
  int walk_rank = 8;
  std::int64_t walk_power = 102;
  std::int64_t walk_steps = 20;
  std::uint64_t walk_seed = 1;
  std::uint64_t walk_trial = 0;
  std::optional<std::string> walk_out;
  walk->add_option("--rank", walk_rank, "Free group rank")->check(CLI::PositiveNumber);
  walk->add_option("--power", walk_power, "Generator power D")->check(CLI::PositiveNumber);
  walk->add_option("--steps", walk_steps, "Number of steps")->check(CLI::NonNegativeNumber);
  walk->add_option("--seed", walk_seed, "Master seed");
  walk->add_option("--trial", walk_trial, "Trial index under the seed");
  walk->add_option("--out", walk_out, "CSV file (default stdout)");
  walk->callback([&] {
    std::vector<ReducedWord> gens;
    for (int i = 1; i <= walk_rank; ++i) {
      gens.push_back(ReducedWord::power(i, walk_power));
      gens.push_back(ReducedWord::power(i, -walk_power));
    }
    const SamplePath path = sample_path(Measure::uniform(gens), walk_steps, walk_seed, walk_trial);
    std::ostringstream os;
    write_path_csv(os, path);
    emit(walk_out, os.str());
  });

  // pivots run
  auto* pivots = app.add_subcommand("pivots", "Pivotal times of alternating paths");
  pivots->require_subcommand(1);
  auto* pivots_run = pivots->add_subcommand("run", "Pivot growth, fellow-travel and chain checks");
  Overrides pivot_ov;
  pivot_ov.attach(*pivots_run);
  std::optional<std::int64_t> pivot_blocks;
  pivots_run->add_option("--blocks", pivot_blocks, "Blocks per path (N)")->check(CLI::PositiveNumber);
  pivots_run->callback([&] {
    ExperimentConfig c = base_config(pivot_ov.config);
    c.experiment = "pivots";
    pivot_ov.apply(c);
    if (pivot_blocks) c.pivot_blocks = *pivot_blocks;
    exit_code = cli::run_experiment(c, std::cout, std::cerr);
  });

  // schottky build | verify
  auto* schottky = app.add_subcommand("schottky", "Schottky sets");
  schottky->require_subcommand(1);
  auto* sbuild = schottky->add_subcommand("build", "Write canonical_schottky(K, D) as JSON");
  int s_rank = 8;
  std::int64_t s_power = 102;
  std::optional<std::string> s_out;
  sbuild->add_option("--rank", s_rank, "Free group rank K (>= 5)");
  sbuild->add_option("--power", s_power, "Power D");
  sbuild->add_option("--out", s_out, "JSON file (default stdout)");
  sbuild->callback([&] { emit(s_out, canonical_schottky(s_rank, s_power).to_json().dump(2) + "\n"); });

  auto* sverify = schottky->add_subcommand("verify", "Certify a Schottky set exhaustively over short test words");
  std::string v_input;
  int v_max_len = 4;
  std::optional<int> v_rank;
  std::optional<double> v_eps;
  sverify->add_option("--input", v_input, "SchottkySet JSON")->required();
  sverify->add_option("--max-len", v_max_len, "Longest test word")->check(CLI::NonNegativeNumber);
  sverify->add_option("--rank", v_rank, "Rank of the ambient free group (default: largest generator used)");
  sverify->add_option("--epsilon", v_eps, "Override the set's epsilon");
  sverify->callback([&] {
    std::ifstream in(v_input);
    if (!in) throw ConfigError("cannot read '" + v_input + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    SchottkySet S;
    try {
      S = SchottkySet::from_json(j);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("invalid Schottky set: ") + e.what());
    }
    int rank = 0;
    for (const auto& s : S.elements) rank = std::max(rank, s.max_generator());
    if (v_rank) rank = *v_rank;
    const SchottkyReport r =
        certify_schottky_exhaustive(S.elements, v_eps.value_or(S.epsilon), S.C, S.D, rank, v_max_len);
    const nlohmann::json out = {{"passed", r.passed},          {"cond1_worst", r.cond1_worst},
                                {"cond2_worst", r.cond2_worst}, {"cond3_ok", r.cond3_ok},
                                {"pairs_tested", r.pairs_tested}, {"coverage", r.coverage}};
    std::cout << out.dump(2) << '\n';
    if (!r.passed) {
      std::cerr << "INVARIANT VIOLATION: Schottky conditions fail; reproduce: pivotlab schottky verify --input "
                << v_input << " --max-len " << v_max_len << " --rank " << rank << '\n';
      exit_code = kExitInvariant;
    }
  });

  // spec canonical
  auto* spec = app.add_subcommand("spec", "Alternating specs");
  spec->require_subcommand(1);
  auto* canonical = spec->add_subcommand("canonical", "Decompose mu uniform on {x_i^(+-D)} against canonical_schottky");
  int c_rank = 8;
  std::int64_t c_power = 102;
  int c_N = 2;
  std::optional<std::string> c_out;
  canonical->add_option("--rank", c_rank, "Rank K (>= 5)");
  canonical->add_option("--power", c_power, "Power D");
  canonical->add_option("--N", c_N, "Block length N (>= 2)");
  canonical->add_option("--out", c_out, "JSON file (default stdout)");
  canonical->callback([&] { emit(c_out, canonical_alternating_spec(c_rank, c_power, c_N).to_json().dump(2) + "\n"); });

  // experiment bad-rate | pin-down | entropy
  auto* experiment = app.add_subcommand("experiment", "Monte Carlo experiments");
  experiment->require_subcommand(1);
  Overrides exp_ov;
  for (const char* name : {"bad-rate", "pin-down", "entropy"}) {
    auto* sub = experiment->add_subcommand(name, std::string("Run the ") + name + " experiment");
    exp_ov.attach(*sub);
    sub->callback([&, name] {
      ExperimentConfig c = base_config(exp_ov.config);
      c.experiment = name;
      exp_ov.apply(c);
      exit_code = cli::run_experiment(c, std::cout, std::cerr);
    });
  }

  // selfcheck
  auto* check = app.add_subcommand("selfcheck", "Fast deterministic invariant battery");
  std::uint64_t check_seed = 1;
  int check_threads = 1;
  std::optional<std::string> check_out;
  check->add_option("--seed", check_seed, "Master seed");
  check->add_option("--threads", check_threads, "Worker threads")->check(CLI::PositiveNumber);
  check->add_option("--out", check_out, "Report file (default stdout)");
  check->callback([&] {
    const SelfcheckReport r = selfcheck(check_seed, check_threads);
    emit(check_out, r.text());
    if (!r.passed()) {
      std::cerr << "INVARIANT VIOLATION: selfcheck failed; reproduce: pivotlab selfcheck --seed " << check_seed << '\n';
      exit_code = kExitInvariant;
    }
  });

  // run <config>
  auto* run = app.add_subcommand("run", "Run the experiment named in a config file");
  std::string run_config;
  Overrides run_ov;
  run->add_option("config", run_config, "JSON config file")->required();
  run_ov.attach(*run, false);
  run->callback([&] {
    ExperimentConfig c = load_config(run_config);
    run_ov.apply(c);
    exit_code = cli::run_experiment(c, std::cout, std::cerr);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return exit_code;
}
