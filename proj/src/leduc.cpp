#include "aivat/leduc.hpp"

namespace aivat {

namespace {
const char* kRankNames = "JQK";
const char* kSuitNames = "sh";
const int kBetSize[2] = {2, 4};

std::string card_name(int card) {
  std::string s;
  s += kRankNames[card / 2];
  s += kSuitNames[card % 2];
  return s;
}
}  // namespace

LeducPoker::State LeducPoker::parse(const History& h) const {
  State st;
  std::size_t i = 2;
  if (h.size() < 2) {
    st.chance_next = false;
    st.next_player = kChancePlayer;  // still dealing private cards
    return st;
  }
  for (int round = 0; round < 2; ++round) {
    st.round = round;
    st.raises = 0;
    st.facing_raise = false;
    st.next_player = 0;
    // Betting round: ends on a call of a raise, on a check-check, or a fold.
    bool first_action = true;
    while (true) {
      if (i >= h.size()) return st;
      int a = h[i++];
      if (a == kFold) {
        st.folded = st.next_player;
        st.public_actions += 'f';
        return st;
      }
      if (a == kRaise) {
        ++st.raises;
        st.facing_raise = true;
        st.contribution[st.next_player] =
            st.contribution[1 - st.next_player] + kBetSize[round];
        st.public_actions += 'r';
        st.next_player = 1 - st.next_player;
        first_action = false;
        continue;
      }
      // kCall: a check when nothing is owed, else a call closing the round.
      st.contribution[st.next_player] = st.contribution[1 - st.next_player];
      st.public_actions += 'c';
      bool round_over = st.facing_raise || !first_action;
      st.next_player = 1 - st.next_player;
      first_action = false;
      if (round_over) break;
    }
    if (round == 0) {
      // Board deal pending.
      if (i >= h.size()) {
        st.chance_next = true;
        st.round = 1;
        return st;
      }
      st.board = h[i++];
      st.public_actions += '/';
      st.public_actions += card_name(st.board);
      st.public_actions += '/';
    } else {
      st.showdown = true;
      return st;
    }
  }
  return st;
}

bool LeducPoker::is_terminal(const History& h) const {
  if (h.size() < 2) return false;
  State st = parse(h);
  return st.folded >= 0 || st.showdown;
}

int LeducPoker::acting_player(const History& h) const {
  if (h.size() < 2) return kChancePlayer;
  State st = parse(h);
  if (st.chance_next) return kChancePlayer;
  return st.next_player;
}

std::vector<int> LeducPoker::legal_actions(const History& h) const {
  if (h.size() < 2 || parse(h).chance_next) {
    std::vector<int> cards;
    for (int c = 0; c < kNumCards; ++c) {
      bool used = false;
      for (std::size_t i = 0; i < h.size() && i < 2; ++i) used |= (h[i] == c);
      if (h.size() > 2) {
        // Board deal: both private cards are consumed.
        used = (c == h[0] || c == h[1]);
      }
      if (!used) cards.push_back(c);
    }
    return cards;
  }
  State st = parse(h);
  std::vector<int> actions;
  if (st.facing_raise) actions.push_back(kFold);
  actions.push_back(kCall);
  if (st.raises < kMaxRaises) actions.push_back(kRaise);
  return actions;
}

std::vector<double> LeducPoker::chance_probs(const History& h) const {
  auto legal = legal_actions(h);
  return std::vector<double>(legal.size(), 1.0 / legal.size());
}

double LeducPoker::utility(const History& z, int player) const {
  State st = parse(z);
  int winner;
  if (st.folded >= 0) {
    winner = 1 - st.folded;
  } else {
    int r0 = card_rank(z[0]);
    int r1 = card_rank(z[1]);
    int rb = card_rank(st.board);
    if (r0 == rb && r1 != rb) {
      winner = 0;
    } else if (r1 == rb && r0 != rb) {
      winner = 1;
    } else if (r0 != r1) {
      winner = (r0 > r1) ? 0 : 1;
    } else {
      return 0.0;  // split
    }
  }
  int loser = 1 - winner;
  double stake = st.contribution[loser];
  return (player == winner) ? stake : -stake;
}

std::string LeducPoker::infoset_key(const History& h, int player) const {
  State st = parse(h);
  std::string key = "P";
  key += std::to_string(player);
  key += "|c=";
  if (static_cast<std::size_t>(player) < h.size()) {
    key += card_name(h[player]);
  } else {
    key += '?';
  }
  key += "|h=";
  key += st.public_actions;
  return key;
}

std::vector<History> LeducPoker::u_set(const History& h, int player) const {
  if (h.size() < 2 || player < 0 || player > 1) return {h};
  State st = parse(h);
  std::vector<History> out;
  int other = h[1 - player];
  for (int c = 0; c < kNumCards; ++c) {
    if (c == other || c == st.board) continue;
    History swapped = h;
    swapped[player] = c;
    out.push_back(std::move(swapped));
  }
  return out;
}

}  // namespace aivat
