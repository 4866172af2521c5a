#ifndef AIVAT_GAME_HPP
#define AIVAT_GAME_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace aivat {

// A history is the sequence of raw action ids from the root. At chance nodes
// the action id is the dealt card; at player nodes it is a game-specific
// action code. Legal action ids are listed in ascending order, which makes
// the sequence a canonical address.
using History = std::vector<int>;

inline constexpr int kChancePlayer = -1;

// Canonical history id: comma-joined action ids ("" for the root).
std::string history_id(const History& h);
History parse_history_id(const std::string& id);

// Extensive-form game with chance nodes, terminal utilities, information-set
// keys, and the private-information swap sets U(h).
class Game {
 public:
  virtual ~Game() = default;

  virtual std::string name() const = 0;
  virtual int num_players() const = 0;  // non-chance players
  virtual bool is_terminal(const History& h) const = 0;
  // kChancePlayer at chance nodes; undefined for terminals.
  virtual int acting_player(const History& h) const = 0;
  virtual std::vector<int> legal_actions(const History& h) const = 0;
  // Aligned with legal_actions; only valid at chance nodes.
  virtual std::vector<double> chance_probs(const History& h) const = 0;
  virtual double utility(const History& z, int player) const = 0;
  // What `player` has observed in h: own private chance outcomes plus all
  // public actions. Serialized string, stable across U-swaps of other
  // players' private information.
  virtual std::string infoset_key(const History& h, int player) const = 0;
  // Histories differing from h only in `player`'s private chance outcomes,
  // including h itself. Default: no private information, {h}.
  virtual std::vector<History> u_set(const History& h, int player) const;

  bool is_chance(const History& h) const {
    return !is_terminal(h) && acting_player(h) == kChancePlayer;
  }

  // Walks h from the root; throws InvalidHistoryError on an illegal step.
  void validate_history(const History& h) const;
};

// Behavioral strategy: information-set key -> distribution over the legal
// actions of that set (aligned with legal_actions order).
struct Strategy {
  std::unordered_map<std::string, std::vector<double>> policy;

  // Throws MissingStrategyError when the key is absent.
  const std::vector<double>& probs_at(const std::string& infoset) const;
  bool empty() const { return policy.empty(); }
};

// One Strategy per non-chance player; chance behavior lives in the Game.
struct StrategyProfile {
  std::vector<Strategy> players;
};

struct ReachProbability {
  double total = 1.0;
  double chance = 1.0;
  std::vector<double> player;  // per non-chance player
};

// pi(h) and its per-player factors under `profile`.
ReachProbability reach_probability(const Game& game, const StrategyProfile& profile,
                                   const History& h);

// Exact sum over terminals of pi(z) u_i(z). Guarded at 10^7 terminals.
double expected_value_exact(const Game& game, const StrategyProfile& profile,
                            int player);

// One seeded playout to a terminal history. Deterministic given the seed.
History sample_playout(const Game& game, const StrategyProfile& profile,
                       std::uint64_t seed);

// U(h) for the acting player. Chance nodes are invalid input.
std::vector<History> enumerate_u_set(const Game& game, const History& h);

// Uniform behavioral strategy at every information set of every player.
StrategyProfile uniform_profile(const Game& game);

// Visits every terminal history (used by enumeration-style checks).
void for_each_terminal(const Game& game,
                       const std::function<void(const History&, double)>& fn);

// All information-set keys per player, discovered by full traversal.
std::vector<std::map<std::string, std::vector<int>>> enumerate_infosets(const Game& game);

}  // namespace aivat

#endif  // AIVAT_GAME_HPP
