#ifndef AIVAT_TOOLS_COMMANDS_HPP
#define AIVAT_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aivat/hands.hpp"

namespace aivat::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitCheckFailure = 3;

struct CommonOptions {
  std::string input;
  std::string output;
  std::uint64_t seed = 1;
  std::string track = "flop,turn,river";
  bool pretty = false;
  bool explain = false;
};

struct SimulateOptions {
  std::string game = "kuhn";
  std::size_t hands = 1000;
};

struct HeuristicOptions {
  std::string kind = "zero";  // zero | tabular | wb-linear | bayes-linear
  std::string file;           // committed heuristic (model text + .commit)
  double prior_scale = 1.0;
  double noise_variance = 1e6;  // squared mbb; payoff residuals are ~1000 mbb
  int hs_samples = 1000;
};

struct EvalOptions {
  std::string scheme = "raw";  // raw | mivat | aivat
  std::string weighting = "uniform";
  int kfold = 0;
  std::size_t subsample = 0;
  bool allow_insample = false;
  double variance_floor = -1.0;  // < 0: no clamping
  std::string dump_hands;
  std::string dump_features;
  std::string dump_affine;
};

struct AdamOptions {
  double learning_rate = 100.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double weight_decay = 0.0;
  int iterations = -1;  // -1: per-attack default (250 variance, 10 tstat)
};

struct PathologyOptions {
  std::string attack = "variance";  // variance | tstat
  std::string save_heuristic;       // optional committed-table output
};

struct CheckOptions {
  bool inject_group_corruption = false;  // negative-control test hook
};

struct ImportOptions {
  long long big_blind = 100;
  long long small_blind = 50;
};

TrackedEvents parse_tracked(const std::string& spec);

int cmd_simulate(const CommonOptions& common, const SimulateOptions& options);
int cmd_train(const CommonOptions& common, const HeuristicOptions& heuristic);
int cmd_eval(const CommonOptions& common, const HeuristicOptions& heuristic,
             const EvalOptions& options);
int cmd_pathology(const CommonOptions& common, const AdamOptions& adam,
                  const PathologyOptions& options);
int cmd_check(const CommonOptions& common, const CheckOptions& options);
int cmd_import(const CommonOptions& common, const ImportOptions& options);

}  // namespace aivat::cli

#endif  // AIVAT_TOOLS_COMMANDS_HPP
