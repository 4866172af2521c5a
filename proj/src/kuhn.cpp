#include "aivat/kuhn.hpp"

#include <array>

namespace aivat {

namespace {

const char* kCardNames = "JQK";

// Betting string after the two deals: 'p' or 'b' per action.
std::string betting_string(const History& h) {
  std::string s;
  for (std::size_t i = 2; i < h.size(); ++i) s += (h[i] == KuhnPoker::kBet) ? 'b' : 'p';
  return s;
}

// Terminal betting lines and who folded (-1 = showdown).
// pp: showdown 1; pbp: P0 folded; pbb: showdown 2; bp: P1 folded; bb: showdown 2.
bool betting_over(const std::string& s, int* folded, int* stake) {
  *folded = -1;
  *stake = 1;
  if (s == "pp") return true;
  if (s == "pbp") { *folded = 0; return true; }
  if (s == "pbb") { *stake = 2; return true; }
  if (s == "bp") { *folded = 1; return true; }
  if (s == "bb") { *stake = 2; return true; }
  return false;
}

}  // namespace

bool KuhnPoker::is_terminal(const History& h) const {
  if (h.size() < 2) return false;
  int folded, stake;
  return betting_over(betting_string(h), &folded, &stake);
}

int KuhnPoker::acting_player(const History& h) const {
  if (h.size() < 2) return kChancePlayer;
  return static_cast<int>(h.size() - 2) % 2;
}

std::vector<int> KuhnPoker::legal_actions(const History& h) const {
  if (h.empty()) return {0, 1, 2};
  if (h.size() == 1) {
    std::vector<int> cards;
    for (int c = 0; c < kNumCards; ++c) {
      if (c != h[0]) cards.push_back(c);
    }
    return cards;
  }
  return {kPass, kBet};
}

std::vector<double> KuhnPoker::chance_probs(const History& h) const {
  if (h.empty()) return {1.0 / 3, 1.0 / 3, 1.0 / 3};
  return {0.5, 0.5};
}

double KuhnPoker::utility(const History& z, int player) const {
  int folded, stake;
  betting_over(betting_string(z), &folded, &stake);
  int winner;
  if (folded >= 0) {
    winner = 1 - folded;
    stake = 1;  // the loser forfeits only the ante
  } else {
    winner = (z[0] > z[1]) ? 0 : 1;
  }
  return (player == winner) ? stake : -stake;
}

std::string KuhnPoker::infoset_key(const History& h, int player) const {
  std::string key = "P";
  key += std::to_string(player);
  key += "|c=";
  if (static_cast<std::size_t>(player) < h.size()) {
    key += kCardNames[h[player]];
  } else {
    key += '?';
  }
  key += "|h=";
  key += betting_string(h);
  return key;
}

std::vector<History> KuhnPoker::u_set(const History& h, int player) const {
  if (h.size() < 2 || player < 0 || player > 1) return {h};
  std::vector<History> out;
  int other = h[1 - player];
  for (int c = 0; c < kNumCards; ++c) {
    if (c == other) continue;
    History swapped = h;
    swapped[player] = c;
    out.push_back(std::move(swapped));
  }
  return out;
}

}  // namespace aivat
