#ifndef AIVAT_LEDUC_HPP
#define AIVAT_LEDUC_HPP

#include "aivat/game.hpp"

namespace aivat {

// Leduc poker. Six cards (J, Q, K in two suits), one-chip ante, two betting
// rounds with fixed bet sizes 2 (round one) and 4 (round two), at most two
// raises per round. A single public board card is dealt between the rounds.
// Showdown: pairing the board wins; otherwise the higher rank; equal ranks
// split.
//
// History layout: [card_p0, card_p1, round-1 betting..., board, round-2
// betting...]. Chance action ids are card ids rank*2+suit (J=0,1 Q=2,3
// K=4,5); betting action ids are kFold, kCall (check/call), kRaise. Folding
// is only legal facing a raise.
class LeducPoker : public Game {
 public:
  static constexpr int kFold = 0;
  static constexpr int kCall = 1;
  static constexpr int kRaise = 2;
  static constexpr int kNumCards = 6;
  static constexpr int kMaxRaises = 2;

  std::string name() const override { return "leduc"; }
  int num_players() const override { return 2; }
  bool is_terminal(const History& h) const override;
  int acting_player(const History& h) const override;
  std::vector<int> legal_actions(const History& h) const override;
  std::vector<double> chance_probs(const History& h) const override;
  double utility(const History& z, int player) const override;
  std::string infoset_key(const History& h, int player) const override;
  std::vector<History> u_set(const History& h, int player) const override;

  static int card_rank(int card) { return card / 2; }

 private:
  // Parsed betting state shared by the query methods.
  struct State {
    int next_player = 0;        // acting player if betting continues
    bool chance_next = false;   // board deal pending
    int board = -1;             // card id, -1 before the deal
    int folded = -1;            // player who folded, -1 if none
    bool showdown = false;
    int raises = 0;             // raises in the current round
    bool facing_raise = false;
    int round = 0;              // 0 or 1
    int contribution[2] = {1, 1};  // antes included
    std::string public_actions;    // 'c','r','f' and '/' at the board deal
  };
  State parse(const History& h) const;
};

}  // namespace aivat

#endif  // AIVAT_LEDUC_HPP
