#include "aivat/simulate.hpp"

#include <cstdio>

#include "aivat/errors.hpp"
#include "aivat/kuhn.hpp"
#include "aivat/leduc.hpp"
#include "aivat/numeric.hpp"

namespace aivat {

namespace {

// Kuhn cards J,Q,K map to Js,Qs,Ks; Leduc's two suits map to spades/hearts.
Card kuhn_card(int c) {
  static const char* names[3] = {"Js", "Qs", "Ks"};
  return parse_card(names[c]);
}

Card leduc_card(int c) {
  static const char* names[6] = {"Js", "Jh", "Qs", "Qh", "Ks", "Kh"};
  return parse_card(names[c]);
}

HandHistory base_hand(const std::string& id, HandHistory::Variant variant) {
  HandHistory h;
  h.id = id;
  h.variant = variant;
  h.num_players = 2;
  h.button = 0;
  // One-chip antes recorded through the blind fields.
  h.small_blind = 1;
  h.big_blind = 1;
  h.stacks = {100, 100};
  h.names = {"p0", "p1"};
  return h;
}

}  // namespace

HandHistory hand_from_kuhn(const History& z, const std::string& id) {
  KuhnPoker game;
  if (!game.is_terminal(z)) {
    throw InvalidHistoryError("kuhn history is not terminal");
  }
  HandHistory h = base_hand(id, HandHistory::Variant::kuhn);
  h.holes = {std::vector<Card>{kuhn_card(z[0])}, std::vector<Card>{kuhn_card(z[1])}};
  bool facing_bet = false;
  for (std::size_t i = 2; i < z.size(); ++i) {
    const int seat = static_cast<int>(i - 2) % 2;
    HandAction act;
    act.seat = seat;
    if (z[i] == KuhnPoker::kBet) {
      act.kind = facing_bet ? ActionKind::call : ActionKind::bet;
      act.amount = 1;
      facing_bet = true;
    } else {
      act.kind = facing_bet ? ActionKind::fold : ActionKind::check;
      act.amount = 0;
    }
    h.actions[static_cast<int>(Street::preflop)].push_back(act);
  }
  h.payoffs = {static_cast<long long>(game.utility(z, 0)),
               static_cast<long long>(game.utility(z, 1))};
  validate_hand(h);
  return h;
}

HandHistory hand_from_leduc(const History& z, const std::string& id) {
  LeducPoker game;
  if (!game.is_terminal(z)) {
    throw InvalidHistoryError("leduc history is not terminal");
  }
  HandHistory h = base_hand(id, HandHistory::Variant::leduc);
  h.holes = {std::vector<Card>{leduc_card(z[0])}, std::vector<Card>{leduc_card(z[1])}};

  // Walk the betting, tracking contributions so call/raise amounts (chips
  // added) can be recorded.
  long long contribution[2] = {1, 1};
  int street = static_cast<int>(Street::preflop);
  long long bet_size = 2;
  int seat = 0;
  bool board_next = false;
  for (std::size_t i = 2; i < z.size(); ++i) {
    if (board_next) {
      h.flop = {leduc_card(z[i])};
      street = static_cast<int>(Street::flop);
      bet_size = 4;
      seat = 0;
      board_next = false;
      continue;
    }
    HandAction act;
    act.seat = seat;
    const long long owed = contribution[1 - seat] - contribution[seat];
    if (z[i] == LeducPoker::kFold) {
      act.kind = ActionKind::fold;
      act.amount = 0;
    } else if (z[i] == LeducPoker::kRaise) {
      act.kind = owed > 0 ? ActionKind::raise : ActionKind::bet;
      act.amount = owed + bet_size;
      contribution[seat] += act.amount;
    } else {
      act.kind = owed > 0 ? ActionKind::call : ActionKind::check;
      act.amount = owed;
      contribution[seat] += owed;
    }
    h.actions[street].push_back(act);
    seat = 1 - seat;
    // A closed first round is followed by the board card.
    if (street == static_cast<int>(Street::preflop)) {
      History prefix(z.begin(), z.begin() + static_cast<long>(i) + 1);
      board_next = game.is_chance(prefix);
    }
  }
  h.payoffs = {static_cast<long long>(game.utility(z, 0)),
               static_cast<long long>(game.utility(z, 1))};
  validate_hand(h);
  return h;
}

std::vector<HandHistory> simulate_corpus(const std::string& game_name,
                                         std::size_t num_hands, std::uint64_t seed) {
  std::vector<HandHistory> hands;
  hands.reserve(num_hands);
  char id_buf[32];
  if (game_name == "kuhn") {
    KuhnPoker game;
    auto profile = uniform_profile(game);
    for (std::size_t t = 0; t < num_hands; ++t) {
      std::snprintf(id_buf, sizeof(id_buf), "kuhn-%06zu", t);
      const auto z = sample_playout(game, profile, seed ^ fnv1a64(std::string(id_buf)));
      hands.push_back(hand_from_kuhn(z, id_buf));
    }
  } else if (game_name == "leduc") {
    LeducPoker game;
    auto profile = uniform_profile(game);
    for (std::size_t t = 0; t < num_hands; ++t) {
      std::snprintf(id_buf, sizeof(id_buf), "leduc-%06zu", t);
      const auto z = sample_playout(game, profile, seed ^ fnv1a64(std::string(id_buf)));
      hands.push_back(hand_from_leduc(z, id_buf));
    }
  } else {
    throw InvalidInputError("unknown game \"" + game_name + "\" (kuhn or leduc)");
  }
  return hands;
}

}  // namespace aivat
