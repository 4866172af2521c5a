// Variance-reduced agent evaluation for extensive-form games: corpus
// simulation, heuristic training with pre-evaluation commitment, MIVAT/AIVAT
// estimation with uniform or inverse-variance weighting, the
// heuristic-pathology attacks, and an embedded verification suite.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <vector>

#include "aivat/errors.hpp"
#include "commands.hpp"

using namespace aivat;
using namespace aivat::cli;

int main(int argc, char** argv) {
  CLI::App app{"aivat: variance-reduced agent evaluation"};
  app.require_subcommand(1);

  CommonOptions common;
  SimulateOptions simulate;
  HeuristicOptions heuristic;
  EvalOptions eval;
  AdamOptions adam;
  PathologyOptions pathology;
  CheckOptions check;
  ImportOptions import;

  auto add_common = [&](CLI::App* cmd, bool needs_input, bool needs_output) {
    auto* in = cmd->add_option("--input,-i", common.input, "corpus file (JSON lines)");
    if (needs_input) in->required();
    auto* out = cmd->add_option("--output,-o", common.output, "output path");
    if (needs_output) out->required();
    cmd->add_option("--seed", common.seed, "seed for every random choice");
    cmd->add_option("--track", common.track,
                    "tracked chance events: comma list of holes,flop,turn,river; "
                    "or all/none");
    cmd->add_flag("--pretty", common.pretty, "render an aligned table to stdout");
    cmd->add_flag("--explain", common.explain,
                  "print reference context from the large-scale experiments");
  };
  auto add_heuristic = [&](CLI::App* cmd) {
    cmd->add_option("--heuristic", heuristic.kind,
                    "zero | tabular | wb-linear | bayes-linear");
    cmd->add_option("--heuristic-file", heuristic.file,
                    "committed heuristic set (with .commit alongside)");
    cmd->add_option("--prior-scale", heuristic.prior_scale,
                    "weight prior variance of the Bayesian linear model");
    cmd->add_option("--noise-variance", heuristic.noise_variance,
                    "observation noise of the Bayesian linear model (mbb^2)");
    cmd->add_option("--hs-samples", heuristic.hs_samples,
                    "Monte Carlo samples for pre-river hold'em hand strength");
  };

  auto* sim = app.add_subcommand("simulate", "generate a synthetic corpus");
  add_common(sim, false, true);
  sim->add_option("--game", simulate.game, "kuhn | leduc")->required();
  sim->add_option("--hands", simulate.hands, "number of hands");

  auto* train = app.add_subcommand(
      "train", "fit a heuristic on a corpus and commit it (hash + timestamp)");
  add_common(train, true, true);
  add_heuristic(train);

  auto* ev = app.add_subcommand("eval", "estimate per-player win rates");
  add_common(ev, true, false);
  add_heuristic(ev);
  ev->add_option("--scheme", eval.scheme, "raw | mivat | aivat");
  ev->add_option("--weighting", eval.weighting, "uniform | ivw");
  ev->add_option("--kfold", eval.kfold, "train per fold, evaluate held-out hands");
  ev->add_option("--subsample", eval.subsample,
                 "subsample each training fold to this many hands");
  ev->add_flag("--allow-insample", eval.allow_insample,
               "override the fix-before-evaluation refusal");
  ev->add_option("--variance-floor", eval.variance_floor,
                 "clamp propagated variances below this floor (ivw)")
      ->expected(0, 1)
      ->default_str("1e-9");
  ev->add_option("--dump-hands", eval.dump_hands, "per-hand estimate CSV");
  ev->add_option("--dump-features", eval.dump_features, "realized-state feature CSV");
  ev->add_option("--dump-affine", eval.dump_affine, "affine decomposition dump");

  auto* path = app.add_subcommand(
      "pathology", "optimize a heuristic against the evaluation data");
  add_common(path, true, false);
  path->add_option("--attack", pathology.attack, "variance | tstat");
  path->add_option("--iters", adam.iterations, "Adam iterations");
  path->add_option("--lr", adam.learning_rate, "Adam learning rate");
  path->add_option("--beta1", adam.beta1, "Adam beta1");
  path->add_option("--beta2", adam.beta2, "Adam beta2");
  path->add_option("--weight-decay", adam.weight_decay, "Adam weight decay");
  path->add_option("--save-heuristic", pathology.save_heuristic,
                   "write the attacked table as a committed heuristic set");

  auto* chk = app.add_subcommand("check", "run the embedded verification suite");
  add_common(chk, false, false);
  chk->add_flag("--inject-group-corruption", check.inject_group_corruption)
      ->group("");  // negative-control hook, hidden from help

  auto* imp = app.add_subcommand("import", "best-effort ACPC log importer");
  add_common(imp, true, true);
  imp->add_option("--big-blind", import.big_blind, "big blind in chips");
  imp->add_option("--small-blind", import.small_blind, "small blind in chips");

  // Flat key=value config support: --config <file> supplies defaults for
  // any flag of the chosen subcommand; explicit flags override it.
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] != "--config") continue;
    const std::string path = args[i + 1];
    args.erase(args.begin() + static_cast<long>(i),
               args.begin() + static_cast<long>(i) + 2);
    std::ifstream config(path);
    if (!config) {
      std::cerr << "usage error: cannot open config file \"" << path << "\"\n";
      return kExitUsage;
    }
    std::string line;
    while (std::getline(config, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto sep = line.find('=');
      if (sep == std::string::npos) continue;
      std::string key = line.substr(0, sep);
      std::string value = line.substr(sep + 1);
      auto trim = [](std::string& s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(0, 1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
      };
      trim(key);
      trim(value);
      const std::string flag = "--" + key;
      bool overridden = false;
      for (const auto& arg : args) {
        if (arg == flag || arg.rfind(flag + "=", 0) == 0) overridden = true;
      }
      if (overridden) continue;
      args.push_back(flag);
      if (value != "true") args.push_back(value);
    }
    break;
  }
  try {
    std::vector<const char*> argv2;
    argv2.push_back(argv[0]);
    for (const auto& a : args) argv2.push_back(a.c_str());
    app.parse(static_cast<int>(argv2.size()), argv2.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  // --variance-floor without a value means the default floor.
  if (ev->count("--variance-floor") > 0 && eval.variance_floor < 0.0) {
    eval.variance_floor = 1e-9;
  }

  try {
    if (sim->parsed()) return cmd_simulate(common, simulate);
    if (train->parsed()) return cmd_train(common, heuristic);
    if (ev->parsed()) return cmd_eval(common, heuristic, eval);
    if (path->parsed()) return cmd_pathology(common, adam, pathology);
    if (chk->parsed()) return cmd_check(common, check);
    if (imp->parsed()) return cmd_import(common, import);
  } catch (const InvalidInputError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
