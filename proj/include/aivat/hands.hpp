#ifndef AIVAT_HANDS_HPP
#define AIVAT_HANDS_HPP

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aivat/cards.hpp"
#include "aivat/estimator.hpp"
#include "aivat/heuristics.hpp"

namespace aivat {

enum class Street { preflop = 0, flop = 1, turn = 2, river = 3 };
inline constexpr int kNumStreets = 4;
inline constexpr int kMaxSeats = 6;

enum class ActionKind { fold, check, call, bet, raise };

struct HandAction {
  int seat = 0;
  ActionKind kind = ActionKind::check;
  long long amount = 0;  // chips added to the pot by this action

  bool operator==(const HandAction&) const = default;
};

// One poker hand in the canonical JSON-lines corpus format. Payoffs are net
// chips per seat and sum to zero. `variant` selects the deck and the board
// shape: holdem (52 cards, flop 3 + turn + river), leduc (6 cards, a single
// flop card), kuhn (3 cards, no board).
struct HandHistory {
  enum class Variant { holdem, leduc, kuhn };

  std::string id;
  Variant variant = Variant::holdem;
  int num_players = 2;
  int button = 0;
  long long small_blind = 0;
  long long big_blind = 1;
  std::vector<long long> stacks;
  std::vector<std::string> names;
  std::vector<std::optional<std::vector<Card>>> holes;  // per seat; nullopt unknown
  std::vector<Card> flop;
  std::optional<Card> turn;
  std::optional<Card> river;
  std::array<std::vector<HandAction>, kNumStreets> actions;
  std::vector<long long> payoffs;

  bool operator==(const HandHistory&) const = default;

  double payoff_mbb(int seat) const {
    return static_cast<double>(payoffs.at(seat)) * 1000.0 /
           static_cast<double>(big_blind);
  }
};

// The deck implied by a variant. Kuhn: Js,Qs,Ks. Leduc: J,Q,K in spades and
// hearts. Holdem: all 52.
std::vector<Card> variant_deck(HandHistory::Variant variant);
std::string variant_name(HandHistory::Variant variant);
HandHistory::Variant parse_variant(const std::string& name);

// One hand per JSON line. parse/serialize round-trip to a canonical form.
HandHistory parse_hand(const std::string& line, int line_number = 0);
std::string serialize_hand(const HandHistory& hand);

// Reads a JSON-lines corpus, skipping '#' comment lines.
std::vector<HandHistory> load_corpus(const std::string& path);
void save_corpus(const std::vector<HandHistory>& hands, const std::string& path,
                 const std::string& header_comment);

// Structural validation: zero-sum payoffs, distinct cards, variant-shape
// board, and stub action legality (no action by a folded seat, no seat
// acting twice in a row within a street).
void validate_hand(const HandHistory& hand);

// Which chance deals the MIVAT correction tracks.
struct TrackedEvents {
  bool holes = false;
  bool flop = true;
  bool turn = true;
  bool river = true;

  static TrackedEvents board_only() { return TrackedEvents{}; }
  static TrackedEvents all() { return TrackedEvents{true, true, true, true}; }
};

// One tracked chance deal of a hand, in canonical order (hole cards by seat
// then card index, then f1, f2, f3, t, r).
struct DealSlot {
  std::string label;            // "h<seat>.<k>", "f1", "f2", "f3", "t", "r"
  Street street = Street::preflop;
  int seat = -1;                // hole deals only
  int hole_index = 0;           // which of the seat's cards (hole deals only)
  Card realized;
  std::vector<Card> candidates;  // includes the realized card
  long long pot_chips = 0;       // pot when the card was dealt
  std::vector<bool> folded;      // per seat, at deal time
};

// Enumerates the tracked deal slots of a hand. Throws DecompositionError if
// a street with recorded actions is missing its board card.
std::vector<DealSlot> enumerate_deal_slots(const HandHistory& hand,
                                           const TrackedEvents& tracked);

// Counterfactual history id "<hand id>|<slot label>|<card>".
std::string counterfactual_id(const std::string& hand_id, const std::string& slot_label,
                              const Card& card);

// MIVAT decomposition of one hand for one evaluated seat: each tracked deal
// becomes one correction group with uniform chance over its candidates, and
// b(z) is the realized payoff in mbb.
AffineEstimate mivat_decompose_hand(const HandHistory& hand,
                                    const TrackedEvents& tracked, int seat);

// Snapshot of one (possibly counterfactual) deal state.
struct StreetSnapshot {
  Street street = Street::preflop;
  double pot_mbb = 0.0;
  int non_folded = 0;
  std::vector<double> hs;   // per seat; 0 for folded or unknown holes
  std::vector<double> hs2;  // per seat
  std::vector<bool> active;
};

struct FeatureConfig {
  // Resolution of the exponent placement in "pot times hand strength
  // exponentiated by the number of non-folded players".
  enum class Exponent {
    pot_times_hs_pow_n,    // pot * HS^n (default)
    all_pow_n,             // (pot * HS)^n
    pot_pow_n_times_hs,    // pot^n * HS
  };
  Exponent exponent = Exponent::pot_times_hs_pow_n;
  int mc_samples = 1000;    // pre-river hold'em hand strength
  std::uint64_t seed = 1;   // corpus-level base for per-state MC seeds
};

// Snapshot of the state right after `slot` dealt `card` (pass the realized
// card for the actual state).
StreetSnapshot street_snapshot(const HandHistory& hand, const DealSlot& slot,
                               const Card& card, const FeatureConfig& config);

// [pot] ++ per-seat [pot*HS^n, pot*(HS^2)^n] (exponent per config), zero for
// folded or unknown seats. Fixed dimension 1 + 2*kMaxSeats.
Eigen::VectorXd extract_features(const HandHistory& hand, const StreetSnapshot& snapshot,
                                 const FeatureConfig& config);

inline constexpr int kFeatureDimension = 1 + 2 * kMaxSeats;

// Feature map over counterfactual ids for a whole corpus, with memoization
// (hand strength Monte Carlo is the expensive part).
class CorpusFeatures {
 public:
  CorpusFeatures(const std::vector<HandHistory>& hands, const TrackedEvents& tracked,
                 FeatureConfig config);

  // FeatureMap resolving "<hand>|<slot>|<card>" ids.
  FeatureMap map() const;

  // Training rows for the given hands: features of each realized tracked
  // state paired with the hand's final payoff (mbb) for `seat`.
  std::vector<std::pair<Eigen::VectorXd, double>> training_rows(
      const std::vector<std::size_t>& hand_indices, int seat) const;

 private:
  struct Shared;
  std::shared_ptr<Shared> shared_;
};

// Seeded shuffle split into k folds of near-equal size (difference <= 1).
std::vector<std::vector<std::size_t>> kfold_split(std::size_t num_hands, int k,
                                                  std::uint64_t seed);

// Seeded uniform subsample without replacement, returned in corpus order.
std::vector<std::size_t> subsample_training(const std::vector<std::size_t>& pool,
                                            std::size_t n, std::uint64_t seed);

// Best-effort importer for ACPC-style log lines
// ("STATE:0:cr200c/...:AsKd|QhQc/...:100|-100:alice|bob"). Amounts are
// cumulative raise-to values in that format and are recorded as given.
HandHistory parse_acpc_line(const std::string& line, long long big_blind,
                            long long small_blind, int line_number = 0);

}  // namespace aivat

#endif  // AIVAT_HANDS_HPP
