// Command-line front end: evaluates the Parisi functional, minimizes it over
// finite-step order parameters, runs temperature scans, Legendre-duality
// checks, REM closed forms and the SDE cross-check. All outputs are
// deterministic given the config and seeds; exit codes: 0 success,
// 1 numerical-check failure, 2 config error.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "parisi/errors.hpp"
#include "parisi/legendre.hpp"
#include "parisi/oracles.hpp"
#include "parisi/rem.hpp"
#include "parisi/sde.hpp"
#include "parisi/selftest.hpp"
#include "parisi/serialize.hpp"
#include "parisi/version.hpp"

namespace {

using namespace parisi;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  int threads = -1;
  long long seed = -1;
};

RunConfig load_config(const CommonArgs& args) {
  if (args.config_path.empty()) throw ConfigError("cli: --config is required");
  std::ifstream in(args.config_path);
  if (!in) throw ConfigError("cli: cannot open config " + args.config_path);
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_run_config(ss.str());
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.threads >= 0) cfg.threads = args.threads;
  if (args.seed >= 0) cfg.seed = static_cast<std::uint64_t>(args.seed);
  return cfg;
}

void write_output(const RunConfig& cfg, const std::string& filename, const std::string& body) {
  if (cfg.out_dir.empty()) {
    std::fputs(body.c_str(), stdout);
    return;
  }
  std::filesystem::create_directories(cfg.out_dir);
  const std::string path = cfg.out_dir + "/" + filename;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cli: cannot write " + path);
  out << body;
  std::fprintf(stderr, "wrote %s\n", path.c_str());
}

const Mixture& require_mixture(const RunConfig& cfg) {
  if (!cfg.mixture) throw ConfigError("cli: config needs a mixture");
  return *cfg.mixture;
}

double require_gamma(const RunConfig& cfg) {
  if (!cfg.gamma) throw ConfigError("cli: config needs gamma");
  return *cfg.gamma;
}

MinimizeOptions minimize_options(const RunConfig& cfg) {
  MinimizeOptions opts;
  opts.threads = cfg.threads;
  opts.seed = cfg.seed;
  if (cfg.grid) opts.final_grid = cfg.grid;
  return opts;
}

int cmd_eval(const RunConfig& cfg, bool dump_levels) {
  const Mixture& mix = require_mixture(cfg);
  const OrderParameter op =
      cfg.order_parameter ? *cfg.order_parameter : OrderParameter::replica_symmetric();
  const double gamma = require_gamma(cfg);
  const GridSpec grid = cfg.grid ? *cfg.grid : GridSpec::for_model(mix, gamma);
  const Evaluation ev = evaluate(mix, op, gamma, grid);
  write_output(cfg, "evaluation.json", evaluation_to_json(ev) + "\n");
  if (dump_levels)
    write_output(cfg, "levels.csv", levels_to_csv(solve_cascade(mix, op, gamma, grid)));
  return 0;
}

int cmd_minimize(const RunConfig& cfg) {
  const Mixture& mix = require_mixture(cfg);
  const ParisiMeasure pm = minimize(mix, require_gamma(cfg), cfg.k, minimize_options(cfg));
  write_output(cfg, "measure.json", measure_to_json(pm) + "\n");
  return 0;
}

int cmd_scan(const RunConfig& cfg) {
  const Mixture& mix = require_mixture(cfg);
  if (cfg.gamma_grid.empty()) throw ConfigError("cli: scan needs gamma_grid");
  const auto rows = temperature_scan(mix, cfg.gamma_grid, cfg.k, minimize_options(cfg));
  write_output(cfg, "scan.csv", scan_to_csv(rows));
  return 0;
}

int cmd_legendre(const RunConfig& cfg) {
  const Mixture& mix = require_mixture(cfg);
  if (!cfg.order_parameter) throw ConfigError("cli: legendre needs order_parameter");
  const LegendreResult lr = gamma_hat(mix, *cfg.order_parameter);
  write_output(cfg, "legendre.json", legendre_to_json(lr) + "\n");
  return 0;
}

int cmd_dual_check(const RunConfig& cfg) {
  const Mixture& mix = require_mixture(cfg);
  const double gamma = require_gamma(cfg);
  const ForwardDualityReport fwd =
      duality_forward(mix, gamma, cfg.k, cfg.tolerance, minimize_options(cfg));

  PhatCurve curve(mix, cfg.k, minimize_options(cfg));
  const ParisiMeasure pm = minimize(mix, gamma, cfg.k, minimize_options(cfg));
  const double claimed = cfg.claimed_gamma ? *cfg.claimed_gamma : gamma;
  const InverseDualityReport inv = duality_inverse(curve, pm.op, claimed, cfg.tolerance);

  JsonWriter w;
  w.begin_object();
  w.field("forward", std::string("see forward.json"));
  w.field("inverse", std::string("see inverse.json"));
  w.field("pass", fwd.pass && inv.pass);
  w.end_object();
  write_output(cfg, "forward.json", forward_report_to_json(fwd) + "\n");
  write_output(cfg, "inverse.json", inverse_report_to_json(inv) + "\n");
  write_output(cfg, "dual_check.json", w.str() + "\n");
  return fwd.pass && inv.pass ? 0 : 1;
}

int cmd_rem(const RunConfig& cfg) {
  std::vector<RemPoint> pts;
  if (!cfg.gamma_grid.empty())
    for (double g : cfg.gamma_grid) pts.push_back(p_rem(g));
  else if (cfg.gamma)
    pts.push_back(p_rem(*cfg.gamma));
  else
    throw ConfigError("cli: rem needs gamma or gamma_grid");
  write_output(cfg, "rem.csv", rem_to_csv(pts));
  if (cfg.samples > 0 && cfg.n_spins > 0 && cfg.gamma) {
    const RemMcResult mc = rem_finite_n_mc(cfg.n_spins, cfg.samples, *cfg.gamma, cfg.seed);
    write_output(cfg, "rem_mc.json", rem_mc_to_json(mc) + "\n");
  }
  return 0;
}

int cmd_sde_check(const RunConfig& cfg) {
  const Mixture& mix = require_mixture(cfg);
  const OrderParameter op =
      cfg.order_parameter ? *cfg.order_parameter : OrderParameter(2, {0.3, 0.7}, {0.4});
  const double gamma = require_gamma(cfg);
  const GridSpec grid = cfg.grid ? *cfg.grid : GridSpec::for_model(mix, gamma);
  const LevelSolution sol = solve_cascade(mix, op, gamma, grid);

  SimulateOptions so;
  so.n_paths = cfg.paths;
  so.n_steps = cfg.steps;
  so.seed = cfg.seed;
  so.threads = cfg.threads;
  so.control = cfg.control == "zero" ? ControlKind::zero : ControlKind::optimal;
  const PathBatch batch = simulate(sol, so);
  const MeanSe obj = variational_objective(batch);
  const MartingaleReport mart = martingale_check(batch, sol);
  write_output(cfg, "sde_check.json", objective_report_to_json(obj, sol.phi00(), mart) + "\n");
  const bool within = std::fabs(obj.mean - sol.phi00()) <= 3.0 * obj.se;
  return (so.control == ControlKind::optimal ? (within && mart.pass) : mart.pass) ? 0 : 1;
}

int cmd_selftest_run(int threads) {
  const auto results = run_selftest({}, threads);
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parisi functional toolkit: evaluation, minimization, Legendre duality"};
  app.set_version_flag("--version", parisi::kVersion);
  app.require_subcommand(1);

  CommonArgs common;
  bool dump_levels = false;

  auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    auto* opt = sub->add_option("--config", common.config_path, "JSON config file");
    if (needs_config) opt->required();
    sub->add_option("--out", common.out_dir, "output directory (default: stdout)");
    sub->add_option("--threads", common.threads, "worker threads (0 = auto)");
    sub->add_option("--seed", common.seed, "override config seed");
  };

  auto* eval = app.add_subcommand("eval", "evaluate the functional at one point");
  add_common(eval);
  eval->add_flag("--dump-levels", dump_levels, "also write level functions as CSV");
  auto* minimize_cmd = app.add_subcommand("minimize", "minimize over k-step order parameters");
  add_common(minimize_cmd);
  auto* scan = app.add_subcommand("scan", "temperature scan with warm starts");
  add_common(scan);
  auto* legendre_cmd = app.add_subcommand("legendre", "Legendre transform of one alpha");
  add_common(legendre_cmd);
  auto* dual = app.add_subcommand("dual-check", "forward + inverse duality reports");
  add_common(dual);
  auto* rem_cmd = app.add_subcommand("rem", "REM closed forms and finite-N Monte Carlo");
  add_common(rem_cmd);
  auto* sde = app.add_subcommand("sde-check", "stochastic-control Monte Carlo cross-check");
  add_common(sde);
  auto* self = app.add_subcommand("selftest", "run the full acceptance suite");
  add_common(self, /*needs_config=*/false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (self->parsed()) return cmd_selftest_run(std::max(common.threads, 0));
    const RunConfig cfg = load_config(common);
    if (eval->parsed()) return cmd_eval(cfg, dump_levels);
    if (minimize_cmd->parsed()) return cmd_minimize(cfg);
    if (scan->parsed()) return cmd_scan(cfg);
    if (legendre_cmd->parsed()) return cmd_legendre(cfg);
    if (dual->parsed()) return cmd_dual_check(cfg);
    if (rem_cmd->parsed()) return cmd_rem(cfg);
    if (sde->parsed()) return cmd_sde_check(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const InvalidOrderParameter& e) {
    std::fprintf(stderr, "config error: %s (index %d)\n", e.what(), e.index());
    return 2;
  } catch (const InvalidMixture& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
