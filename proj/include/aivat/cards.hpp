#ifndef AIVAT_CARDS_HPP
#define AIVAT_CARDS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aivat {

// A standard playing card. Ranks 0..12 map to 2..9,T,J,Q,K,A; suits 0..3 to
// c,d,h,s. Text form is rank then suit, e.g. "As".
struct Card {
  std::int8_t rank = 0;
  std::int8_t suit = 0;

  int id() const { return rank * 4 + suit; }
  static Card from_id(int id) {
    return Card{static_cast<std::int8_t>(id / 4), static_cast<std::int8_t>(id % 4)};
  }
  bool operator==(const Card& o) const { return rank == o.rank && suit == o.suit; }
  bool operator!=(const Card& o) const { return !(*this == o); }
  bool operator<(const Card& o) const { return id() < o.id(); }
};

Card parse_card(const std::string& text);
std::string card_text(const Card& card);

enum class HandCategory {
  high_card = 0,
  pair,
  two_pair,
  trips,
  straight,
  flush,
  full_house,
  quads,
  straight_flush,
};

// Total order over 7-card hands: higher is better, ties share ordinals.
// Encoding: category in the top nibble, then five 4-bit tiebreak ranks.
std::uint32_t evaluate_7card(std::span<const Card> cards);
HandCategory category_of(std::uint32_t ordinal);

// Hand strength: expected probability of beating one uniformly random
// opponent hand (ties count 1/2), and the expectation of that probability
// squared over board completions.
struct HandStrength {
  double hs = 0.0;
  double hs2 = 0.0;
};

struct ExactMode {};
struct McMode {
  int samples = 1000;
  std::optional<std::uint64_t> seed;  // required; its absence is an error
};

// `board` holds 0..5 cards. Exact mode enumerates all board completions and
// all C(45,2) opponent holes; it is allowed for boards of 3+ cards (1081
// completions at worst). Monte Carlo samples board completions with exact
// opponent-hole enumeration per completion.
HandStrength hand_strength(const std::array<Card, 2>& hole, std::span<const Card> board,
                           const ExactMode& mode);
HandStrength hand_strength(const std::array<Card, 2>& hole, std::span<const Card> board,
                           const McMode& mode);

}  // namespace aivat

#endif  // AIVAT_CARDS_HPP
