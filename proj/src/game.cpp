#include "aivat/game.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "aivat/errors.hpp"
#include "aivat/numeric.hpp"

namespace aivat {

std::string history_id(const History& h) {
  std::string out;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(h[i]);
  }
  return out;
}

History parse_history_id(const std::string& id) {
  History h;
  if (id.empty()) return h;
  std::size_t pos = 0;
  while (pos <= id.size()) {
    std::size_t next = id.find(',', pos);
    if (next == std::string::npos) next = id.size();
    h.push_back(std::stoi(id.substr(pos, next - pos)));
    pos = next + 1;
  }
  return h;
}

std::vector<History> Game::u_set(const History& h, int /*player*/) const {
  return {h};
}

void Game::validate_history(const History& h) const {
  History prefix;
  prefix.reserve(h.size());
  for (int action : h) {
    if (is_terminal(prefix)) {
      throw InvalidHistoryError("history continues past a terminal: " + history_id(h));
    }
    auto legal = legal_actions(prefix);
    if (std::find(legal.begin(), legal.end(), action) == legal.end()) {
      throw InvalidHistoryError("illegal action " + std::to_string(action) +
                                " after \"" + history_id(prefix) + "\"");
    }
    prefix.push_back(action);
  }
}

const std::vector<double>& Strategy::probs_at(const std::string& infoset) const {
  auto it = policy.find(infoset);
  if (it == policy.end()) {
    throw MissingStrategyError("no strategy at information set \"" + infoset + "\"");
  }
  return it->second;
}

ReachProbability reach_probability(const Game& game, const StrategyProfile& profile,
                                   const History& h) {
  game.validate_history(h);
  ReachProbability reach;
  reach.player.assign(game.num_players(), 1.0);
  History prefix;
  prefix.reserve(h.size());
  for (int action : h) {
    auto legal = game.legal_actions(prefix);
    auto idx = static_cast<std::size_t>(
        std::find(legal.begin(), legal.end(), action) - legal.begin());
    if (game.is_chance(prefix)) {
      reach.chance *= game.chance_probs(prefix)[idx];
    } else {
      int p = game.acting_player(prefix);
      const auto& probs =
          profile.players.at(p).probs_at(game.infoset_key(prefix, p));
      reach.player[p] *= probs.at(idx);
    }
    prefix.push_back(action);
  }
  reach.total = reach.chance;
  for (double f : reach.player) reach.total *= f;
  return reach;
}

namespace {

void walk_terminals(const Game& game, const StrategyProfile* profile, History& h,
                    double reach, long long& count, long long limit,
                    const std::function<void(const History&, double)>& fn) {
  if (game.is_terminal(h)) {
    if (++count > limit) {
      throw TooLargeError("terminal enumeration guard exceeded (" +
                          std::to_string(limit) + ")");
    }
    fn(h, reach);
    return;
  }
  auto legal = game.legal_actions(h);
  std::vector<double> probs;
  if (game.is_chance(h)) {
    probs = game.chance_probs(h);
  } else if (profile != nullptr) {
    int p = game.acting_player(h);
    probs = profile->players.at(p).probs_at(game.infoset_key(h, p));
  } else {
    probs.assign(legal.size(), 1.0);
  }
  for (std::size_t i = 0; i < legal.size(); ++i) {
    h.push_back(legal[i]);
    walk_terminals(game, profile, h, reach * probs[i], count, limit, fn);
    h.pop_back();
  }
}

constexpr long long kEnumerationGuard = 10'000'000;

}  // namespace

double expected_value_exact(const Game& game, const StrategyProfile& profile,
                            int player) {
  std::vector<double> terms;
  History root;
  long long count = 0;
  walk_terminals(game, &profile, root, 1.0, count, kEnumerationGuard,
                 [&](const History& z, double reach) {
                   terms.push_back(reach * game.utility(z, player));
                 });
  return pairwise_sum(terms);
}

History sample_playout(const Game& game, const StrategyProfile& profile,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  History h;
  while (!game.is_terminal(h)) {
    auto legal = game.legal_actions(h);
    std::vector<double> probs;
    if (game.is_chance(h)) {
      probs = game.chance_probs(h);
    } else {
      int p = game.acting_player(h);
      probs = profile.players.at(p).probs_at(game.infoset_key(h, p));
    }
    double u = uniform01(rng());
    double acc = 0.0;
    std::size_t pick = legal.size() - 1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    h.push_back(legal[pick]);
  }
  return h;
}

std::vector<History> enumerate_u_set(const Game& game, const History& h) {
  game.validate_history(h);
  if (game.is_terminal(h)) {
    throw InvalidInputError("U(h) needs an acting player; \"" + history_id(h) +
                            "\" is terminal (use Game::u_set for terminals)");
  }
  if (game.is_chance(h)) {
    throw InvalidInputError("U(h) requested at a chance node: " + history_id(h));
  }
  return game.u_set(h, game.acting_player(h));
}

void for_each_terminal(const Game& game,
                       const std::function<void(const History&, double)>& fn) {
  History root;
  long long count = 0;
  walk_terminals(game, nullptr, root, 1.0, count, kEnumerationGuard,
                 [&](const History& z, double) { fn(z, 0.0); });
}

std::vector<std::map<std::string, std::vector<int>>> enumerate_infosets(const Game& game) {
  std::vector<std::map<std::string, std::vector<int>>> infosets(game.num_players());
  History h;
  std::function<void()> walk = [&]() {
    if (game.is_terminal(h)) return;
    if (!game.is_chance(h)) {
      int p = game.acting_player(h);
      infosets[p].emplace(game.infoset_key(h, p), game.legal_actions(h));
    }
    for (int action : game.legal_actions(h)) {
      h.push_back(action);
      walk();
      h.pop_back();
    }
  };
  walk();
  return infosets;
}

StrategyProfile uniform_profile(const Game& game) {
  StrategyProfile profile;
  profile.players.resize(game.num_players());
  auto infosets = enumerate_infosets(game);
  for (int p = 0; p < game.num_players(); ++p) {
    for (const auto& [key, actions] : infosets[p]) {
      profile.players[p].policy[key] =
          std::vector<double>(actions.size(), 1.0 / actions.size());
    }
  }
  return profile;
}

}  // namespace aivat
