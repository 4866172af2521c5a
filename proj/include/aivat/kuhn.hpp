#ifndef AIVAT_KUHN_HPP
#define AIVAT_KUHN_HPP

#include "aivat/game.hpp"

namespace aivat {

// Kuhn poker. Three cards J(0) < Q(1) < K(2), one-chip ante, one-chip bet.
//
// History layout: [card_p0, card_p1, betting...]. Chance action ids are the
// card ids; betting action ids are kPass (check, or fold facing a bet) and
// kBet (bet, or call facing a bet).
//
// Betting terminals: pp (showdown, 1 chip), pbp (bettor wins 1), pbb
// (showdown, 2), bp (bettor wins 1), bb (showdown, 2).
class KuhnPoker : public Game {
 public:
  static constexpr int kPass = 0;
  static constexpr int kBet = 1;
  static constexpr int kNumCards = 3;

  std::string name() const override { return "kuhn"; }
  int num_players() const override { return 2; }
  bool is_terminal(const History& h) const override;
  int acting_player(const History& h) const override;
  std::vector<int> legal_actions(const History& h) const override;
  std::vector<double> chance_probs(const History& h) const override;
  double utility(const History& z, int player) const override;
  std::string infoset_key(const History& h, int player) const override;
  std::vector<History> u_set(const History& h, int player) const override;
};

}  // namespace aivat

#endif  // AIVAT_KUHN_HPP
