#include "runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pivotlab/experiments.hpp"

namespace pivotlab::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
  const ExperimentConfig& config;
  std::ostream& log;
  std::ostream& err;
  int failures = 0;

  std::string path(const std::string& name) const { return (fs::path(config.out_dir) / name).string(); }

  std::string repro() const {
    return "reproduce: pivotlab run with config " + config.to_json().dump();
  }

  void fail(const std::string& what) {
    ++failures;
    err << "INVARIANT VIOLATION: " << what << "; " << repro() << '\n';
  }

  void save(const std::string& name, const std::string& text) {
    write_file(path(name), text);
    log << "wrote " << path(name) << '\n';
  }

  void save_json(const std::string& name, nlohmann::json j) {
    j["config"] = config.to_json();
    save(name, j.dump(2) + "\n");
  }
};

void check_pivots(Context& ctx, const PivotGrowthReport& r) {
  if (r.chain_violations > 0 || r.deviation_violations > 0) {
    ctx.fail(std::to_string(r.chain_violations) + " chain and " + std::to_string(r.deviation_violations) +
             " fellow-travel violations; first: " + r.first_failure.value_or("?"));
  }
}

void run_entropy(Context& ctx, const AlternatingSpec& spec) {
  EntropyGridConfig cfg;
  cfg.spec = spec;
  cfg.n_grid = ctx.config.n_grid;
  cfg.alpha_grid = ctx.config.alpha_grid;
  cfg.L_rule = ctx.config.L_rule();
  cfg.sim = ctx.config.simulation();
  cfg.bootstrap = ctx.config.bootstrap;
  const EntropyGridReport r = entropy_sublinearity_experiment(cfg);
  std::ostringstream csv;
  write_entropy_csv(csv, r);
  ctx.save("entropy.csv", csv.str());
  ctx.save_json("entropy.json", to_json(r));
  for (const auto& c : r.cells) {
    ctx.log << "n=" << c.n << " alpha=" << c.alpha << " L=" << c.L << " H/n=" << c.per_n(c.total)
            << " residual=" << c.residual << '\n';
    if (c.H_T > c.H_T_bound) {
      ctx.fail("H_T " + std::to_string(c.H_T) + " above bound " + std::to_string(c.H_T_bound) + " at n=" +
               std::to_string(c.n) + " alpha=" + std::to_string(c.alpha));
    }
    if (c.H_D > c.H_D_bound) {
      ctx.fail("H_D " + std::to_string(c.H_D) + " above bound " + std::to_string(c.H_D_bound) + " at n=" +
               std::to_string(c.n) + " alpha=" + std::to_string(c.alpha));
    }
  }
  check_pivots(ctx, r.pivots);
}

void run_bad_rate(Context& ctx, const AlternatingSpec& spec) {
  EntropyGridConfig cfg;
  cfg.spec = spec;
  cfg.n_grid = {*std::max_element(ctx.config.n_grid.begin(), ctx.config.n_grid.end())};
  cfg.alpha_grid = ctx.config.alpha_grid;
  cfg.L_rule = ctx.config.L_rule();
  cfg.sim = ctx.config.simulation();
  cfg.bootstrap = 0;
  const EntropyGridReport r = entropy_sublinearity_experiment(cfg);
  std::ostringstream csv;
  write_bad_rate_csv(csv, r);
  ctx.save("bad_rate.csv", csv.str());
  std::ostringstream pcsv;
  write_pivot_csv(pcsv, r.pivots);
  ctx.save("bad_rate_pivots.csv", pcsv.str());
  ctx.save_json("bad_rate.json", to_json(r));
  for (const auto& c : r.cells) {
    ctx.log << "n=" << c.n << " alpha=" << c.alpha << " L=" << c.L
            << " max interior bad (Wilson upper)=" << c.max_interior_bad_upper << '\n';
  }
  check_pivots(ctx, r.pivots);
}

void run_pin_down(Context& ctx, const AlternatingSpec& spec) {
  PinDownConfig cfg;
  cfg.spec = spec;
  cfg.n = ctx.config.pin_down_n;
  cfg.alpha = ctx.config.pin_down_alpha;
  cfg.L_rule = ctx.config.L_rule();
  cfg.sim = ctx.config.simulation();
  cfg.sim.trials = ctx.config.pin_down_trials;
  const PinDownSummary s = pin_down_experiment(cfg);
  std::ostringstream csv;
  write_pin_down_csv(csv, s);
  ctx.save("pin_down.csv", csv.str());
  ctx.save_json("pin_down.json", to_json(s));
  ctx.log << "pin-down: found " << s.found << "/" << s.trials << ", max candidates " << s.max_candidates
          << " (bound " << s.bound << ")\n";
  if (!s.passed()) ctx.fail("pin-down failed: " + s.first_failure.value_or("?"));
}

void run_pivots(Context& ctx, const AlternatingSpec& spec) {
  FellowTravelConfig cfg;
  cfg.spec = spec;
  cfg.blocks = ctx.config.pivot_blocks;
  cfg.sim = ctx.config.simulation();
  cfg.sim.trials = ctx.config.pivot_trials;
  cfg.sim.chain_check = ChainCheck::full;
  const PivotGrowthReport r = fellow_travel_experiment(cfg);
  std::ostringstream csv;
  write_pivot_csv(csv, r);
  ctx.save("pivots.csv", csv.str());
  ctx.save_json("pivots.json", to_json(r));
  ctx.log << "pivots: rate " << r.rate.mean << ", " << r.stable_total << " stable pivots, max deviation "
          << r.max_geodesic_deviation.to_string() << '\n';
  check_pivots(ctx, r);
}

}  // namespace

void write_file(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

int run_experiment(const ExperimentConfig& config, std::ostream& log, std::ostream& err) {
  config.validate();
  Context ctx{config, log, err};
  const AlternatingSpec spec = config.spec();
  const std::string& e = config.experiment;
  if (e == "pivots" || e == "all") run_pivots(ctx, spec);
  if (e == "bad-rate" || e == "all") run_bad_rate(ctx, spec);
  if (e == "pin-down" || e == "all") run_pin_down(ctx, spec);
  if (e == "entropy" || e == "all") run_entropy(ctx, spec);
  return ctx.failures == 0 ? kExitOk : kExitInvariant;
}

}  // namespace pivotlab::cli
