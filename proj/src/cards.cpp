#include "aivat/cards.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "aivat/errors.hpp"
#include "aivat/numeric.hpp"

namespace aivat {

namespace {
const std::string kRankChars = "23456789TJQKA";
const std::string kSuitChars = "cdhs";
}  // namespace

Card parse_card(const std::string& text) {
  if (text.size() != 2) {
    throw ParseError("card \"" + text + "\" must be rank+suit, e.g. \"As\"");
  }
  auto r = kRankChars.find(text[0]);
  auto s = kSuitChars.find(text[1]);
  if (r == std::string::npos || s == std::string::npos) {
    throw ParseError("unknown card \"" + text + "\"");
  }
  return Card{static_cast<std::int8_t>(r), static_cast<std::int8_t>(s)};
}

std::string card_text(const Card& card) {
  std::string s;
  s += kRankChars.at(card.rank);
  s += kSuitChars.at(card.suit);
  return s;
}

namespace {

// Highest straight's top rank in a rank bitmask, or -1. The wheel (A2345)
// reports top rank 3 (the five).
int straight_high(unsigned mask) {
  for (int high = 12; high >= 4; --high) {
    unsigned run = 0x1Fu << (high - 4);
    if ((mask & run) == run) return high;
  }
  // Wheel: A,2,3,4,5.
  unsigned wheel = (1u << 12) | 0xFu;
  if ((mask & wheel) == wheel) return 3;
  return -1;
}

std::uint32_t pack(HandCategory cat, int r1, int r2 = 0, int r3 = 0, int r4 = 0,
                   int r5 = 0) {
  return (static_cast<std::uint32_t>(cat) << 20) |
         (static_cast<std::uint32_t>(r1) << 16) |
         (static_cast<std::uint32_t>(r2) << 12) |
         (static_cast<std::uint32_t>(r3) << 8) |
         (static_cast<std::uint32_t>(r4) << 4) | static_cast<std::uint32_t>(r5);
}

}  // namespace

std::uint32_t evaluate_7card(std::span<const Card> cards) {
  if (cards.size() != 7) {
    throw InvalidInputError("evaluate_7card needs exactly 7 cards, got " +
                            std::to_string(cards.size()));
  }
  int rank_count[13] = {0};
  int suit_count[4] = {0};
  unsigned suit_mask[4] = {0};
  unsigned rank_mask = 0;
  for (std::size_t i = 0; i < cards.size(); ++i) {
    for (std::size_t j = i + 1; j < cards.size(); ++j) {
      if (cards[i] == cards[j]) {
        throw InvalidInputError("duplicate card " + card_text(cards[i]));
      }
    }
    ++rank_count[cards[i].rank];
    ++suit_count[cards[i].suit];
    suit_mask[cards[i].suit] |= 1u << cards[i].rank;
    rank_mask |= 1u << cards[i].rank;
  }

  // Flush / straight flush. At most one suit can hold five of seven cards.
  for (int s = 0; s < 4; ++s) {
    if (suit_count[s] < 5) continue;
    int sf = straight_high(suit_mask[s]);
    if (sf >= 0) return pack(HandCategory::straight_flush, sf);
    int picked[5];
    int n = 0;
    for (int r = 12; r >= 0 && n < 5; --r) {
      if (suit_mask[s] & (1u << r)) picked[n++] = r;
    }
    return pack(HandCategory::flush, picked[0], picked[1], picked[2], picked[3],
                picked[4]);
  }

  int quad = -1, trips_hi = -1, trips_lo = -1;
  int pair_hi = -1, pair_lo = -1;
  for (int r = 12; r >= 0; --r) {
    switch (rank_count[r]) {
      case 4:
        quad = r;
        break;
      case 3:
        (trips_hi < 0 ? trips_hi : trips_lo) = r;
        break;
      case 2:
        if (pair_hi < 0) {
          pair_hi = r;
        } else if (pair_lo < 0) {
          pair_lo = r;
        }
        break;
      default:
        break;
    }
  }

  auto kickers = [&](int count, int skip1, int skip2 = -1) {
    std::vector<int> out;
    for (int r = 12; r >= 0 && static_cast<int>(out.size()) < count; --r) {
      if (r == skip1 || r == skip2 || rank_count[r] == 0) continue;
      out.push_back(r);
    }
    return out;
  };

  if (quad >= 0) {
    return pack(HandCategory::quads, quad, kickers(1, quad)[0]);
  }
  if (trips_hi >= 0 && (trips_lo >= 0 || pair_hi >= 0)) {
    int fill = std::max(trips_lo, pair_hi);
    return pack(HandCategory::full_house, trips_hi, fill);
  }
  int st = straight_high(rank_mask);
  if (st >= 0) return pack(HandCategory::straight, st);
  if (trips_hi >= 0) {
    auto k = kickers(2, trips_hi);
    return pack(HandCategory::trips, trips_hi, k[0], k[1]);
  }
  if (pair_hi >= 0 && pair_lo >= 0) {
    auto k = kickers(1, pair_hi, pair_lo);
    return pack(HandCategory::two_pair, pair_hi, pair_lo, k[0]);
  }
  if (pair_hi >= 0) {
    auto k = kickers(3, pair_hi);
    return pack(HandCategory::pair, pair_hi, k[0], k[1], k[2]);
  }
  auto k = kickers(5, -1);
  return pack(HandCategory::high_card, k[0], k[1], k[2], k[3], k[4]);
}

HandCategory category_of(std::uint32_t ordinal) {
  return static_cast<HandCategory>(ordinal >> 20);
}

namespace {

// Win probability of `hole` against every opponent hole from `remaining`,
// ties counted 1/2. `board` must hold exactly 5 cards.
double river_win_probability(const std::array<Card, 2>& hole,
                             std::span<const Card> board,
                             std::span<const Card> remaining) {
  std::array<Card, 7> hand;
  std::copy(board.begin(), board.end(), hand.begin());
  hand[5] = hole[0];
  hand[6] = hole[1];
  const std::uint32_t hero = evaluate_7card(hand);

  double score = 0.0;
  long long count = 0;
  for (std::size_t i = 0; i < remaining.size(); ++i) {
    for (std::size_t j = i + 1; j < remaining.size(); ++j) {
      hand[5] = remaining[i];
      hand[6] = remaining[j];
      const std::uint32_t villain = evaluate_7card(hand);
      if (hero > villain) {
        score += 1.0;
      } else if (hero == villain) {
        score += 0.5;
      }
      ++count;
    }
  }
  return score / static_cast<double>(count);
}

std::vector<Card> deck_without(std::span<const Card> used) {
  std::vector<Card> deck;
  deck.reserve(52 - used.size());
  for (int id = 0; id < 52; ++id) {
    Card c = Card::from_id(id);
    if (std::find(used.begin(), used.end(), c) == used.end()) deck.push_back(c);
  }
  return deck;
}

void check_distinct(const std::array<Card, 2>& hole, std::span<const Card> board) {
  std::vector<Card> all(board.begin(), board.end());
  all.push_back(hole[0]);
  all.push_back(hole[1]);
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (all[i] == all[j]) {
        throw InvalidInputError("duplicate card " + card_text(all[i]) +
                                " between hole and board");
      }
    }
  }
}

// Enumerates every completion of the board to five cards, invoking fn with
// the complete board.
void for_each_completion(std::vector<Card>& board, std::vector<Card>& pool,
                         std::size_t pool_from,
                         const std::function<void(std::span<const Card>)>& fn) {
  if (board.size() == 5) {
    fn(board);
    return;
  }
  for (std::size_t i = pool_from; i < pool.size(); ++i) {
    board.push_back(pool[i]);
    for_each_completion(board, pool, i + 1, fn);
    board.pop_back();
  }
}

}  // namespace

HandStrength hand_strength(const std::array<Card, 2>& hole, std::span<const Card> board,
                           const ExactMode&) {
  check_distinct(hole, board);
  if (board.size() > 5) {
    throw InvalidInputError("board has more than 5 cards");
  }
  if (board.size() < 3) {
    throw TooLargeError("exact hand strength is limited to boards of 3+ cards; "
                        "use Monte Carlo mode pre-flop");
  }
  std::vector<Card> used(board.begin(), board.end());
  used.push_back(hole[0]);
  used.push_back(hole[1]);
  std::vector<Card> pool = deck_without(used);

  std::vector<double> probs;
  std::vector<Card> full(board.begin(), board.end());
  for_each_completion(full, pool, 0, [&](std::span<const Card> complete) {
    std::vector<Card> seen(complete.begin(), complete.end());
    seen.push_back(hole[0]);
    seen.push_back(hole[1]);
    probs.push_back(river_win_probability(hole, complete, deck_without(seen)));
  });

  HandStrength out;
  std::vector<double> sq(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) sq[i] = probs[i] * probs[i];
  out.hs = pairwise_mean(probs);
  out.hs2 = pairwise_mean(sq);
  return out;
}

HandStrength hand_strength(const std::array<Card, 2>& hole, std::span<const Card> board,
                           const McMode& mode) {
  check_distinct(hole, board);
  if (board.size() > 5) {
    throw InvalidInputError("board has more than 5 cards");
  }
  if (!mode.seed.has_value()) {
    throw MissingSeedError("Monte Carlo hand strength needs an explicit seed");
  }
  if (mode.samples <= 0) {
    throw InvalidInputError("Monte Carlo hand strength needs samples > 0");
  }
  if (board.size() == 5) {
    return hand_strength(hole, board, ExactMode{});
  }
  std::vector<Card> used(board.begin(), board.end());
  used.push_back(hole[0]);
  used.push_back(hole[1]);
  std::vector<Card> pool = deck_without(used);

  // Sampled completions repeat, so win probabilities are memoized per
  // completion; this changes nothing statistically.
  std::map<std::vector<Card>, double> memo;
  std::mt19937_64 rng(*mode.seed);
  const std::size_t need = 5 - board.size();
  std::vector<double> probs;
  probs.reserve(mode.samples);
  std::vector<Card> draw(pool.size());
  for (int s = 0; s < mode.samples; ++s) {
    // Partial Fisher-Yates for `need` cards.
    std::copy(pool.begin(), pool.end(), draw.begin());
    std::vector<Card> completion;
    completion.reserve(need);
    for (std::size_t k = 0; k < need; ++k) {
      const std::size_t pick =
          k + static_cast<std::size_t>(uniform01(rng()) *
                                       static_cast<double>(draw.size() - k));
      std::swap(draw[k], draw[pick]);
      completion.push_back(draw[k]);
    }
    std::vector<Card> key = completion;
    std::sort(key.begin(), key.end());
    auto it = memo.find(key);
    double p;
    if (it != memo.end()) {
      p = it->second;
    } else {
      std::vector<Card> full(board.begin(), board.end());
      full.insert(full.end(), completion.begin(), completion.end());
      std::vector<Card> seen = full;
      seen.push_back(hole[0]);
      seen.push_back(hole[1]);
      p = river_win_probability(hole, full, deck_without(seen));
      memo.emplace(std::move(key), p);
    }
    probs.push_back(p);
  }
  HandStrength out;
  std::vector<double> sq(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) sq[i] = probs[i] * probs[i];
  out.hs = pairwise_mean(probs);
  out.hs2 = pairwise_mean(sq);
  return out;
}

}  // namespace aivat
