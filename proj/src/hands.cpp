#include "aivat/hands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "aivat/errors.hpp"
#include "aivat/numeric.hpp"

namespace aivat {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const char* kStreetNames[kNumStreets] = {"preflop", "flop", "turn", "river"};

const char* action_kind_name(ActionKind kind) {
  switch (kind) {
    case ActionKind::fold: return "fold";
    case ActionKind::check: return "check";
    case ActionKind::call: return "call";
    case ActionKind::bet: return "bet";
    case ActionKind::raise: return "raise";
  }
  return "?";
}

ActionKind parse_action_kind(const std::string& name, int line_number) {
  if (name == "fold") return ActionKind::fold;
  if (name == "check") return ActionKind::check;
  if (name == "call") return ActionKind::call;
  if (name == "bet") return ActionKind::bet;
  if (name == "raise") return ActionKind::raise;
  throw ParseError("line " + std::to_string(line_number) + ": unknown action kind \"" +
                   name + "\"");
}

}  // namespace

std::vector<Card> variant_deck(HandHistory::Variant variant) {
  switch (variant) {
    case HandHistory::Variant::kuhn:
      return {parse_card("Js"), parse_card("Qs"), parse_card("Ks")};
    case HandHistory::Variant::leduc:
      return {parse_card("Js"), parse_card("Jh"), parse_card("Qs"),
              parse_card("Qh"), parse_card("Ks"), parse_card("Kh")};
    case HandHistory::Variant::holdem: {
      std::vector<Card> deck(52);
      for (int id = 0; id < 52; ++id) deck[id] = Card::from_id(id);
      return deck;
    }
  }
  return {};
}

std::string variant_name(HandHistory::Variant variant) {
  switch (variant) {
    case HandHistory::Variant::holdem: return "holdem";
    case HandHistory::Variant::leduc: return "leduc";
    case HandHistory::Variant::kuhn: return "kuhn";
  }
  return "?";
}

HandHistory::Variant parse_variant(const std::string& name) {
  if (name == "holdem") return HandHistory::Variant::holdem;
  if (name == "leduc") return HandHistory::Variant::leduc;
  if (name == "kuhn") return HandHistory::Variant::kuhn;
  throw ParseError("unknown variant \"" + name + "\"");
}

HandHistory parse_hand(const std::string& line, int line_number) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_number) + ", column " +
                     std::to_string(e.byte) + ": " + e.what());
  }
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError("line " + std::to_string(line_number) + ": " + msg);
  };
  try {
    HandHistory h;
    h.id = j.at("id").get<std::string>();
    if (j.contains("variant")) h.variant = parse_variant(j.at("variant"));
    h.num_players = j.at("players").get<int>();
    if (h.num_players < 2 || h.num_players > kMaxSeats) {
      throw fail("players must be 2.." + std::to_string(kMaxSeats));
    }
    h.button = j.value("button", 0);
    const auto& blinds = j.at("blinds");
    h.small_blind = blinds.at(0).get<long long>();
    h.big_blind = blinds.at(1).get<long long>();
    h.stacks = j.at("stacks").get<std::vector<long long>>();
    h.names = j.at("names").get<std::vector<std::string>>();
    for (const auto& hole : j.at("holes")) {
      if (hole.is_null()) {
        h.holes.emplace_back(std::nullopt);
      } else {
        std::vector<Card> cards;
        for (const auto& c : hole) cards.push_back(parse_card(c.get<std::string>()));
        h.holes.emplace_back(std::move(cards));
      }
    }
    if (j.contains("board")) {
      const auto& board = j.at("board");
      if (board.contains("flop")) {
        for (const auto& c : board.at("flop")) {
          h.flop.push_back(parse_card(c.get<std::string>()));
        }
      }
      if (board.contains("turn")) h.turn = parse_card(board.at("turn"));
      if (board.contains("river")) h.river = parse_card(board.at("river"));
    }
    if (j.contains("actions")) {
      for (int s = 0; s < kNumStreets; ++s) {
        if (!j.at("actions").contains(kStreetNames[s])) continue;
        for (const auto& a : j.at("actions").at(kStreetNames[s])) {
          HandAction act;
          act.seat = a.at(0).get<int>();
          act.kind = parse_action_kind(a.at(1).get<std::string>(), line_number);
          act.amount = a.at(2).get<long long>();
          h.actions[s].push_back(act);
        }
      }
    }
    h.payoffs = j.at("payoffs").get<std::vector<long long>>();
    validate_hand(h);
    return h;
  } catch (const json::exception& e) {
    throw fail(e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError("line " + std::to_string(line_number) + ": " + e.what());
  }
}

std::string serialize_hand(const HandHistory& hand) {
  ordered_json j;
  j["id"] = hand.id;
  j["variant"] = variant_name(hand.variant);
  j["players"] = hand.num_players;
  j["button"] = hand.button;
  j["blinds"] = {hand.small_blind, hand.big_blind};
  j["stacks"] = hand.stacks;
  j["names"] = hand.names;
  ordered_json holes = ordered_json::array();
  for (const auto& hole : hand.holes) {
    if (!hole.has_value()) {
      holes.push_back(nullptr);
    } else {
      ordered_json cards = ordered_json::array();
      for (const Card& c : *hole) cards.push_back(card_text(c));
      holes.push_back(cards);
    }
  }
  j["holes"] = holes;
  ordered_json board = ordered_json::object();
  if (!hand.flop.empty()) {
    ordered_json flop = ordered_json::array();
    for (const Card& c : hand.flop) flop.push_back(card_text(c));
    board["flop"] = flop;
  }
  if (hand.turn.has_value()) board["turn"] = card_text(*hand.turn);
  if (hand.river.has_value()) board["river"] = card_text(*hand.river);
  if (!board.empty()) j["board"] = board;
  ordered_json actions = ordered_json::object();
  for (int s = 0; s < kNumStreets; ++s) {
    if (hand.actions[s].empty()) continue;
    ordered_json street = ordered_json::array();
    for (const HandAction& a : hand.actions[s]) {
      street.push_back({a.seat, action_kind_name(a.kind), a.amount});
    }
    actions[kStreetNames[s]] = street;
  }
  if (!actions.empty()) j["actions"] = actions;
  j["payoffs"] = hand.payoffs;
  return j.dump();
}

void validate_hand(const HandHistory& hand) {
  const int n = hand.num_players;
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
  };
  require(n >= 2 && n <= kMaxSeats, "players out of range");
  require(static_cast<int>(hand.stacks.size()) == n, "stacks size mismatch");
  require(static_cast<int>(hand.names.size()) == n, "names size mismatch");
  require(static_cast<int>(hand.holes.size()) == n, "holes size mismatch");
  require(static_cast<int>(hand.payoffs.size()) == n, "payoffs size mismatch");
  require(hand.big_blind > 0, "big blind must be positive");

  long long payoff_sum = 0;
  for (long long p : hand.payoffs) payoff_sum += p;
  require(payoff_sum == 0, "payoffs sum to " + std::to_string(payoff_sum) +
                               ", expected 0");

  // Deck membership and card-removal.
  const auto deck = variant_deck(hand.variant);
  const std::size_t hole_size = hand.variant == HandHistory::Variant::holdem ? 2 : 1;
  std::vector<Card> seen;
  auto add_card = [&](const Card& c, const char* where) {
    require(std::find(deck.begin(), deck.end(), c) != deck.end(),
            std::string("card ") + card_text(c) + " is not in the " +
                variant_name(hand.variant) + " deck");
    require(std::find(seen.begin(), seen.end(), c) == seen.end(),
            std::string("duplicate card ") + card_text(c) + " in " + where);
    seen.push_back(c);
  };
  for (const auto& hole : hand.holes) {
    if (!hole.has_value()) continue;
    require(hole->size() == hole_size, "hole must hold " +
                                           std::to_string(hole_size) + " card(s)");
    for (const Card& c : *hole) add_card(c, "holes");
  }
  for (const Card& c : hand.flop) add_card(c, "board");
  if (hand.turn.has_value()) add_card(*hand.turn, "board");
  if (hand.river.has_value()) add_card(*hand.river, "board");

  // Board shape per variant.
  switch (hand.variant) {
    case HandHistory::Variant::holdem:
      require(hand.flop.empty() || hand.flop.size() == 3, "hold'em flop needs 3 cards");
      require(!hand.turn.has_value() || hand.flop.size() == 3,
              "turn without a complete flop");
      require(!hand.river.has_value() || hand.turn.has_value(),
              "river without a turn");
      break;
    case HandHistory::Variant::leduc:
      require(hand.flop.size() <= 1, "leduc has a single board card");
      require(!hand.turn.has_value() && !hand.river.has_value(),
              "leduc has no turn or river");
      break;
    case HandHistory::Variant::kuhn:
      require(hand.flop.empty() && !hand.turn.has_value() && !hand.river.has_value(),
              "kuhn has no board");
      break;
  }

  // Stub legality: alternation within a street and no action after folding.
  std::vector<bool> folded(n, false);
  for (int s = 0; s < kNumStreets; ++s) {
    int last_seat = -1;
    for (const HandAction& a : hand.actions[s]) {
      require(a.seat >= 0 && a.seat < n, "action seat out of range");
      require(!folded[a.seat], "seat " + std::to_string(a.seat) +
                                   " acts after folding");
      require(a.seat != last_seat, "seat " + std::to_string(a.seat) +
                                       " acts twice in a row");
      last_seat = a.seat;
      if (a.kind == ActionKind::fold) folded[a.seat] = true;
    }
  }
}

std::vector<HandHistory> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open corpus file \"" + path + "\"");
  std::vector<HandHistory> hands;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line[0] == '#') continue;
    hands.push_back(parse_hand(line, line_number));
  }
  return hands;
}

void save_corpus(const std::vector<HandHistory>& hands, const std::string& path,
                 const std::string& header_comment) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open \"" + path + "\" for writing");
  if (!header_comment.empty()) out << "# " << header_comment << "\n";
  for (const auto& hand : hands) out << serialize_hand(hand) << "\n";
}

namespace {

long long initial_pot(const HandHistory& hand) {
  return hand.small_blind + hand.big_blind;
}

// Pot at the start of a street: posts plus everything added on earlier
// streets.
long long pot_at_street(const HandHistory& hand, Street street) {
  long long pot = initial_pot(hand);
  for (int s = 0; s < static_cast<int>(street); ++s) {
    for (const HandAction& a : hand.actions[s]) pot += a.amount;
  }
  return pot;
}

std::vector<bool> folded_before_street(const HandHistory& hand, Street street) {
  std::vector<bool> folded(hand.num_players, false);
  for (int s = 0; s < static_cast<int>(street); ++s) {
    for (const HandAction& a : hand.actions[s]) {
      if (a.kind == ActionKind::fold) folded[a.seat] = true;
    }
  }
  return folded;
}

std::vector<Card> remove_cards(std::vector<Card> deck, std::span<const Card> used) {
  deck.erase(std::remove_if(deck.begin(), deck.end(),
                            [&](const Card& c) {
                              return std::find(used.begin(), used.end(), c) !=
                                     used.end();
                            }),
             deck.end());
  return deck;
}

}  // namespace

std::string counterfactual_id(const std::string& hand_id, const std::string& slot_label,
                              const Card& card) {
  return hand_id + "|" + slot_label + "|" + card_text(card);
}

std::vector<DealSlot> enumerate_deal_slots(const HandHistory& hand,
                                           const TrackedEvents& tracked) {
  std::vector<DealSlot> slots;
  const auto deck = variant_deck(hand.variant);

  // All recorded hole cards; board candidate sets exclude them all, since
  // the dataset reveals them to the evaluator.
  std::vector<Card> all_holes;
  for (const auto& hole : hand.holes) {
    if (hole.has_value()) all_holes.insert(all_holes.end(), hole->begin(), hole->end());
  }

  if (tracked.holes) {
    std::vector<Card> dealt_before;
    for (int seat = 0; seat < hand.num_players; ++seat) {
      if (!hand.holes[seat].has_value()) continue;
      const auto& hole = *hand.holes[seat];
      for (std::size_t k = 0; k < hole.size(); ++k) {
        DealSlot slot;
        slot.label = "h" + std::to_string(seat) + "." + std::to_string(k);
        slot.street = Street::preflop;
        slot.seat = seat;
        slot.hole_index = static_cast<int>(k);
        slot.realized = hole[k];
        slot.candidates = remove_cards(deck, dealt_before);
        slot.pot_chips = initial_pot(hand);
        slot.folded.assign(hand.num_players, false);
        slots.push_back(std::move(slot));
        dealt_before.push_back(hole[k]);
      }
    }
  }

  struct BoardDeal {
    const char* label;
    bool tracked;
    std::optional<Card> card;
    Street street;
  };
  static const char* kFlopLabels[3] = {"f1", "f2", "f3"};
  const std::size_t flop_size =
      hand.variant == HandHistory::Variant::holdem
          ? 3
          : (hand.variant == HandHistory::Variant::leduc ? 1 : 0);
  std::vector<BoardDeal> board_deals;
  const bool flop_played =
      !hand.flop.empty() || !hand.actions[static_cast<int>(Street::flop)].empty();
  if (flop_played) {
    for (std::size_t i = 0; i < flop_size; ++i) {
      board_deals.push_back({kFlopLabels[i], tracked.flop,
                             i < hand.flop.size()
                                 ? std::optional<Card>(hand.flop[i])
                                 : std::nullopt,
                             Street::flop});
    }
  }
  if (hand.turn.has_value() || !hand.actions[static_cast<int>(Street::turn)].empty()) {
    board_deals.push_back({"t", tracked.turn, hand.turn, Street::turn});
  }
  if (hand.river.has_value() ||
      !hand.actions[static_cast<int>(Street::river)].empty()) {
    board_deals.push_back({"r", tracked.river, hand.river, Street::river});
  }

  std::vector<Card> earlier_board;
  for (const auto& deal : board_deals) {
    if (!deal.card.has_value()) {
      throw DecompositionError("hand " + hand.id + ": street \"" +
                               kStreetNames[static_cast<int>(deal.street)] +
                               "\" was played but its board card is missing");
    }
    if (deal.tracked) {
      DealSlot slot;
      slot.label = deal.label;
      slot.street = deal.street;
      slot.realized = *deal.card;
      std::vector<Card> known = all_holes;
      known.insert(known.end(), earlier_board.begin(), earlier_board.end());
      slot.candidates = remove_cards(deck, known);
      slot.pot_chips = pot_at_street(hand, deal.street);
      slot.folded = folded_before_street(hand, deal.street);
      slots.push_back(std::move(slot));
    }
    earlier_board.push_back(*deal.card);
  }
  return slots;
}

AffineEstimate mivat_decompose_hand(const HandHistory& hand,
                                    const TrackedEvents& tracked, int seat) {
  if (seat < 0 || seat >= hand.num_players) {
    throw InvalidInputError("seat " + std::to_string(seat) + " out of range");
  }
  AffineEstimate est;
  est.b = hand.payoff_mbb(seat);
  for (const DealSlot& slot : enumerate_deal_slots(hand, tracked)) {
    const double m = static_cast<double>(slot.candidates.size());
    if (std::find(slot.candidates.begin(), slot.candidates.end(), slot.realized) ==
        slot.candidates.end()) {
      throw DecompositionError("hand " + hand.id + ": realized card " +
                               card_text(slot.realized) + " at slot " + slot.label +
                               " is not among its candidates");
    }
    CorrectionGroup group;
    group.anchor = counterfactual_id(hand.id, slot.label, slot.realized);
    for (const Card& c : slot.candidates) {
      double coeff = 1.0 / m;
      if (c == slot.realized) coeff -= 1.0;
      group.members.emplace_back(counterfactual_id(hand.id, slot.label, c), coeff);
    }
    for (const auto& [id, coeff] : group.members) {
      if (coeff != 0.0) est.coeffs[id] += coeff;
    }
    est.groups.push_back(std::move(group));
  }
  return est;
}

namespace {

// Win probability of one Leduc card against a random opponent card given
// the board card: pairing the board wins, then rank, ties 1/2.
double leduc_win_probability(const Card& own, const Card& board,
                             std::span<const Card> opponents) {
  double score = 0.0;
  for (const Card& opp : opponents) {
    const bool own_pairs = own.rank == board.rank;
    const bool opp_pairs = opp.rank == board.rank;
    if (own_pairs != opp_pairs) {
      score += own_pairs ? 1.0 : 0.0;
    } else if (own.rank != opp.rank) {
      score += own.rank > opp.rank ? 1.0 : 0.0;
    } else {
      score += 0.5;
    }
  }
  return score / static_cast<double>(opponents.size());
}

struct VariantStrength {
  double hs = 0.0;
  double hs2 = 0.0;
};

// Hand strength of a seat's (possibly counterfactual) hole at a deal state.
VariantStrength state_strength(const HandHistory& hand, const std::vector<Card>& hole,
                               std::span<const Card> board,
                               const FeatureConfig& config,
                               const std::string& state_tag) {
  VariantStrength out;
  switch (hand.variant) {
    case HandHistory::Variant::kuhn: {
      // No board: strength against the two other cards.
      const auto deck = variant_deck(hand.variant);
      double wins = 0.0;
      for (const Card& opp : deck) {
        if (opp == hole[0]) continue;
        if (hole[0].rank > opp.rank) wins += 1.0;
        // Equal ranks cannot happen in the 3-card deck.
      }
      out.hs = wins / 2.0;
      out.hs2 = out.hs * out.hs;
      return out;
    }
    case HandHistory::Variant::leduc: {
      const auto deck = variant_deck(hand.variant);
      if (!board.empty()) {
        auto pool = remove_cards(deck, std::array<Card, 2>{hole[0], board[0]});
        out.hs = leduc_win_probability(hole[0], board[0], pool);
        out.hs2 = out.hs * out.hs;
        return out;
      }
      // Pre-board: average over board completions.
      auto boards = remove_cards(deck, std::array<Card, 1>{hole[0]});
      std::vector<double> probs;
      probs.reserve(boards.size());
      for (const Card& b : boards) {
        auto pool = remove_cards(deck, std::array<Card, 2>{hole[0], b});
        probs.push_back(leduc_win_probability(hole[0], b, pool));
      }
      out.hs = pairwise_mean(probs);
      std::vector<double> sq(probs.size());
      for (std::size_t i = 0; i < probs.size(); ++i) sq[i] = probs[i] * probs[i];
      out.hs2 = pairwise_mean(sq);
      return out;
    }
    case HandHistory::Variant::holdem: {
      std::array<Card, 2> hole2{hole.at(0), hole.at(1)};
      HandStrength strength;
      if (board.size() >= 3) {
        strength = hand_strength(hole2, board, ExactMode{});
      } else {
        McMode mc;
        mc.samples = config.mc_samples;
        mc.seed = config.seed ^ fnv1a64(state_tag);
        strength = hand_strength(hole2, board, mc);
      }
      out.hs = strength.hs;
      out.hs2 = strength.hs2;
      return out;
    }
  }
  return out;
}

}  // namespace

namespace {

// Board as seen right after `slot` dealt `card`: the realized board cards
// of earlier slots plus the (possibly counterfactual) card itself. Hole
// slots see an empty board.
std::vector<Card> board_at_slot(const HandHistory& hand, const DealSlot& slot,
                                const Card& card) {
  std::vector<Card> board;
  if (slot.seat >= 0) return board;
  if (slot.label == "f2") {
    board = {hand.flop.at(0)};
  } else if (slot.label == "f3") {
    board = {hand.flop.at(0), hand.flop.at(1)};
  } else if (slot.label == "t") {
    board = hand.flop;
  } else if (slot.label == "r") {
    board = hand.flop;
    board.push_back(hand.turn.value());
  }
  board.push_back(card);
  return board;
}

}  // namespace

StreetSnapshot street_snapshot(const HandHistory& hand, const DealSlot& slot,
                               const Card& card, const FeatureConfig& config) {
  StreetSnapshot snap;
  snap.street = slot.street;
  snap.pot_mbb = static_cast<double>(slot.pot_chips) * 1000.0 /
                 static_cast<double>(hand.big_blind);
  snap.non_folded = hand.num_players;
  for (bool f : slot.folded) {
    if (f) --snap.non_folded;
  }
  snap.hs.assign(hand.num_players, 0.0);
  snap.hs2.assign(hand.num_players, 0.0);
  snap.active.assign(hand.num_players, false);

  const auto board = board_at_slot(hand, slot, card);
  const std::size_t hole_size = hand.variant == HandHistory::Variant::holdem ? 2 : 1;
  for (int seat = 0; seat < hand.num_players; ++seat) {
    if (slot.folded[seat]) continue;
    // The seat's hole as known at this state.
    std::vector<Card> hole;
    if (slot.seat < 0) {
      // Board deal: every recorded hole is complete.
      if (!hand.holes[seat].has_value()) continue;
      hole = *hand.holes[seat];
    } else if (seat < slot.seat) {
      if (!hand.holes[seat].has_value()) continue;
      hole = *hand.holes[seat];
    } else if (seat == slot.seat) {
      // This seat's card at hole_index is the dealt one; earlier indices
      // are realized, later ones are not dealt yet.
      if (static_cast<std::size_t>(slot.hole_index) + 1 < hole_size) continue;
      hole = *hand.holes[seat];
      hole[slot.hole_index] = card;
    } else {
      continue;  // dealt later
    }
    if (hole.size() != hole_size) continue;
    const auto strength = state_strength(
        hand, hole, board, config,
        counterfactual_id(hand.id, slot.label, card) + "#" + std::to_string(seat));
    snap.hs[seat] = strength.hs;
    snap.hs2[seat] = strength.hs2;
    snap.active[seat] = true;
  }
  return snap;
}

Eigen::VectorXd extract_features(const HandHistory& hand, const StreetSnapshot& snapshot,
                                 const FeatureConfig& config) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(kFeatureDimension);
  const double pot = snapshot.pot_mbb;
  const double n = static_cast<double>(snapshot.non_folded);
  f[0] = pot;
  for (int seat = 0; seat < hand.num_players && seat < kMaxSeats; ++seat) {
    if (!snapshot.active[seat]) continue;
    double a = 0.0, b = 0.0;
    switch (config.exponent) {
      case FeatureConfig::Exponent::pot_times_hs_pow_n:
        a = pot * std::pow(snapshot.hs[seat], n);
        b = pot * std::pow(snapshot.hs2[seat], n);
        break;
      case FeatureConfig::Exponent::all_pow_n:
        a = std::pow(pot * snapshot.hs[seat], n);
        b = std::pow(pot * snapshot.hs2[seat], n);
        break;
      case FeatureConfig::Exponent::pot_pow_n_times_hs:
        a = std::pow(pot, n) * snapshot.hs[seat];
        b = std::pow(pot, n) * snapshot.hs2[seat];
        break;
    }
    f[1 + 2 * seat] = a;
    f[2 + 2 * seat] = b;
  }
  return f;
}

struct CorpusFeatures::Shared {
  std::vector<HandHistory> hands;
  TrackedEvents tracked;
  FeatureConfig config;
  std::unordered_map<std::string, std::size_t> hand_index;
  std::vector<std::vector<DealSlot>> slots;  // per hand, canonical order
  mutable std::unordered_map<std::string, Eigen::VectorXd> cache;

  const DealSlot& slot_of(std::size_t hand_idx, const std::string& label) const {
    for (const DealSlot& s : slots[hand_idx]) {
      if (s.label == label) return s;
    }
    throw MissingHeuristicValueError("hand " + hands[hand_idx].id +
                                     " has no tracked deal slot \"" + label + "\"");
  }

  Eigen::VectorXd features_of(const std::string& id) const {
    auto hit = cache.find(id);
    if (hit != cache.end()) return hit->second;
    // id = "<hand>|<slot>|<card>"; split from the right.
    const auto card_sep = id.rfind('|');
    const auto slot_sep = card_sep == std::string::npos
                              ? std::string::npos
                              : id.rfind('|', card_sep - 1);
    if (slot_sep == std::string::npos) {
      throw MissingHeuristicValueError("malformed counterfactual id \"" + id + "\"");
    }
    const std::string hand_id = id.substr(0, slot_sep);
    const std::string label = id.substr(slot_sep + 1, card_sep - slot_sep - 1);
    const Card card = parse_card(id.substr(card_sep + 1));
    auto it = hand_index.find(hand_id);
    if (it == hand_index.end()) {
      throw MissingHeuristicValueError("unknown hand \"" + hand_id + "\" in id \"" +
                                       id + "\"");
    }
    const HandHistory& hand = hands[it->second];
    const DealSlot& slot = slot_of(it->second, label);
    const auto snap = street_snapshot(hand, slot, card, config);
    Eigen::VectorXd f = extract_features(hand, snap, config);
    cache.emplace(id, f);
    return f;
  }
};

CorpusFeatures::CorpusFeatures(const std::vector<HandHistory>& hands,
                               const TrackedEvents& tracked, FeatureConfig config)
    : shared_(std::make_shared<Shared>()) {
  shared_->hands = hands;
  shared_->tracked = tracked;
  shared_->config = config;
  shared_->slots.reserve(hands.size());
  for (std::size_t i = 0; i < shared_->hands.size(); ++i) {
    shared_->hand_index.emplace(shared_->hands[i].id, i);
    shared_->slots.push_back(enumerate_deal_slots(shared_->hands[i], tracked));
  }
}

FeatureMap CorpusFeatures::map() const {
  FeatureMap fm;
  fm.dimension = kFeatureDimension;
  auto shared = shared_;
  fm.phi = [shared](const std::string& id) { return shared->features_of(id); };
  return fm;
}

std::vector<std::pair<Eigen::VectorXd, double>> CorpusFeatures::training_rows(
    const std::vector<std::size_t>& hand_indices, int seat) const {
  std::vector<std::pair<Eigen::VectorXd, double>> rows;
  for (std::size_t idx : hand_indices) {
    const HandHistory& hand = shared_->hands.at(idx);
    if (seat >= hand.num_players) continue;
    const double target = hand.payoff_mbb(seat);
    for (const DealSlot& slot : shared_->slots[idx]) {
      const std::string id = counterfactual_id(hand.id, slot.label, slot.realized);
      rows.emplace_back(shared_->features_of(id), target);
    }
  }
  return rows;
}

namespace {

// Deterministic Fisher-Yates over indices 0..n-1.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto j =
        i + static_cast<std::size_t>(uniform01(rng()) * static_cast<double>(n - i));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

}  // namespace

std::vector<std::vector<std::size_t>> kfold_split(std::size_t num_hands, int k,
                                                  std::uint64_t seed) {
  if (k < 2 || static_cast<std::size_t>(k) > num_hands) {
    throw InvalidInputError("k must be in [2, " + std::to_string(num_hands) +
                            "], got " + std::to_string(k));
  }
  const auto perm = seeded_permutation(num_hands, seed);
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < num_hands; ++i) {
    folds[i % k].push_back(perm[i]);
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

std::vector<std::size_t> subsample_training(const std::vector<std::size_t>& pool,
                                            std::size_t n, std::uint64_t seed) {
  if (n > pool.size()) {
    throw InvalidInputError("subsample of " + std::to_string(n) + " from " +
                            std::to_string(pool.size()) + " hands");
  }
  const auto perm = seeded_permutation(pool.size(), seed);
  std::vector<std::size_t> picked;
  picked.reserve(n);
  for (std::size_t i = 0; i < n; ++i) picked.push_back(pool[perm[i]]);
  std::sort(picked.begin(), picked.end());
  return picked;
}

HandHistory parse_acpc_line(const std::string& line, long long big_blind,
                            long long small_blind, int line_number) {
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError("line " + std::to_string(line_number) + ": " + msg);
  };
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    auto next = line.find(':', pos);
    if (next == std::string::npos) next = line.size();
    parts.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  if (parts.size() < 6 || parts[0] != "STATE") {
    throw fail("not an ACPC STATE line");
  }
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t p = 0;
    while (p <= s.size()) {
      auto q = s.find(sep, p);
      if (q == std::string::npos) q = s.size();
      out.push_back(s.substr(p, q - p));
      p = q + 1;
    }
    return out;
  };

  HandHistory h;
  h.id = "acpc-" + parts[1];
  h.variant = HandHistory::Variant::holdem;
  h.small_blind = small_blind;
  h.big_blind = big_blind;

  // Cards: holes separated by '|', then '/'-separated board streets.
  const auto board_parts = split(parts[3], '/');
  const auto hole_parts = split(board_parts[0], '|');
  h.num_players = static_cast<int>(hole_parts.size());
  auto parse_cards = [&](const std::string& text) {
    std::vector<Card> cards;
    if (text.size() % 2 != 0) throw fail("odd card string \"" + text + "\"");
    for (std::size_t i = 0; i < text.size(); i += 2) {
      cards.push_back(parse_card(text.substr(i, 2)));
    }
    return cards;
  };
  for (const auto& hp : hole_parts) {
    if (hp.empty()) {
      h.holes.emplace_back(std::nullopt);
    } else {
      h.holes.emplace_back(parse_cards(hp));
    }
  }
  if (board_parts.size() > 1) h.flop = parse_cards(board_parts[1]);
  if (board_parts.size() > 2) h.turn = parse_cards(board_parts[2]).at(0);
  if (board_parts.size() > 3) h.river = parse_cards(board_parts[3]).at(0);

  // Betting: '/'-separated streets of 'f', 'c', 'r<amount?>'. Seats are
  // assigned by cycling through non-folded seats in order, starting at the
  // first-to-act seat for the street (approximate for rotated games).
  std::vector<bool> folded(h.num_players, false);
  const auto streets = split(parts[2], '/');
  for (std::size_t s = 0; s < streets.size() && s < kNumStreets; ++s) {
    int seat;
    if (s == 0) {
      seat = h.num_players > 2 ? 2 : 1;
    } else {
      seat = 0;
    }
    auto advance = [&](int from) {
      int next = from;
      for (int step = 0; step < h.num_players; ++step) {
        next = (next + 1) % h.num_players;
        if (!folded[next]) return next;
      }
      return from;
    };
    if (folded[seat]) seat = advance(seat);
    const std::string& text = streets[s];
    std::size_t i = 0;
    while (i < text.size()) {
      HandAction act;
      act.seat = seat;
      const char c = text[i++];
      if (c == 'f') {
        act.kind = ActionKind::fold;
      } else if (c == 'c') {
        act.kind = ActionKind::call;
      } else if (c == 'r') {
        act.kind = ActionKind::raise;
        std::size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
          ++j;
        }
        if (j > i) act.amount = std::stoll(text.substr(i, j - i));
        i = j;
      } else {
        throw fail(std::string("unknown betting char '") + c + "'");
      }
      h.actions[s].push_back(act);
      if (act.kind == ActionKind::fold) folded[seat] = true;
      seat = advance(seat);
    }
  }

  const auto payoff_parts = split(parts[4], '|');
  if (static_cast<int>(payoff_parts.size()) != h.num_players) {
    throw fail("payoff count does not match player count");
  }
  for (const auto& p : payoff_parts) h.payoffs.push_back(std::stoll(p));
  const auto name_parts = split(parts[5], '|');
  for (const auto& nm : name_parts) h.names.push_back(nm);
  while (static_cast<int>(h.names.size()) < h.num_players) {
    h.names.push_back("p" + std::to_string(h.names.size()));
  }
  h.stacks.assign(h.num_players, 0);
  validate_hand(h);
  return h;
}

}  // namespace aivat
