#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "aivat/cards.hpp"
#include "aivat/errors.hpp"
#include "aivat/hands.hpp"
#include "aivat/numeric.hpp"
#include "aivat/simulate.hpp"
#include "poker_oracle.hpp"

using namespace aivat;

namespace {

std::array<Card, 7> random_seven(std::mt19937_64& rng) {
  std::array<int, 52> deck;
  for (int i = 0; i < 52; ++i) deck[i] = i;
  std::array<Card, 7> out;
  for (int k = 0; k < 7; ++k) {
    const int pick =
        k + static_cast<int>(uniform01(rng()) * static_cast<double>(52 - k));
    std::swap(deck[k], deck[pick]);
    out[k] = Card::from_id(deck[k]);
  }
  return out;
}

std::vector<Card> cards_of(std::initializer_list<const char*> names) {
  std::vector<Card> out;
  for (const char* n : names) out.push_back(parse_card(n));
  return out;
}

HandHistory minimal_holdem_hand() {
  // Blinds 50/100, both players check every street to showdown; seat 0's
  // pair of aces wins the 200-chip pot.
  const std::string line = R"({"id":"fixture-1","variant":"holdem","players":2,)"
      R"("button":0,"blinds":[50,100],"stacks":[10000,10000],)"
      R"("names":["alice","bob"],"holes":[["As","Ah"],["Kd","Qc"]],)"
      R"("board":{"flop":["2c","7d","Ts"],"turn":"3h","river":"9s"},)"
      R"("actions":{"preflop":[[0,"call",50],[1,"check",0]],)"
      R"("flop":[[0,"check",0],[1,"check",0]],)"
      R"("turn":[[0,"check",0],[1,"check",0]],)"
      R"("river":[[0,"check",0],[1,"check",0]]},"payoffs":[100,-100]})";
  return parse_hand(line, 1);
}

}  // namespace

TEST_CASE("card text round-trip and ids") {
  CHECK(card_text(parse_card("As")) == "As");
  CHECK(card_text(parse_card("2c")) == "2c");
  CHECK(parse_card("Td").id() == Card{8, 1}.id());
  CHECK_THROWS_AS(parse_card("Xx"), ParseError);
  CHECK_THROWS_AS(parse_card("A"), ParseError);
  for (int id = 0; id < 52; ++id) {
    CHECK(parse_card(card_text(Card::from_id(id))).id() == id);
  }
}

TEST_CASE("hand category axioms") {
  auto royal = cards_of({"Ac", "Kc", "Qc", "Jc", "Tc", "2d", "7h"});
  auto quads = cards_of({"9c", "9d", "9h", "9s", "Kc", "2d", "7h"});
  CHECK(evaluate_7card(royal) > evaluate_7card(quads));
  CHECK(category_of(evaluate_7card(royal)) == HandCategory::straight_flush);
  CHECK(category_of(evaluate_7card(quads)) == HandCategory::quads);

  auto wheel = cards_of({"Ac", "2d", "3h", "4s", "5c", "9d", "Jh"});
  CHECK(category_of(evaluate_7card(wheel)) == HandCategory::straight);
  auto broadway = cards_of({"Ac", "Kd", "Qh", "Js", "Tc", "9d", "2h"});
  CHECK(evaluate_7card(broadway) > evaluate_7card(wheel));

  auto duplicated = cards_of({"Ac", "Ac", "3h", "4s", "5c", "9d", "Jh"});
  CHECK_THROWS_AS(evaluate_7card(duplicated), InvalidInputError);
}

TEST_CASE("evaluator agrees with the 21-combination oracle") {
  std::mt19937_64 rng(424242);
  int mismatches = 0;
  for (int trial = 0; trial < 100000; ++trial) {
    const auto seven = random_seven(rng);
    if (evaluate_7card(seven) != test_oracle::naive_eval_7card(seven)) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("river nuts have strength one") {
  // Royal flush using both hole cards.
  std::array<Card, 2> hole{parse_card("As"), parse_card("Ks")};
  auto board = cards_of({"Qs", "Js", "Ts", "2d", "7c"});
  auto s = hand_strength(hole, board, ExactMode{});
  CHECK(s.hs == doctest::Approx(1.0));
  CHECK(s.hs2 == doctest::Approx(1.0));
}

TEST_CASE("board that plays gives everyone a tie") {
  std::array<Card, 2> hole{parse_card("2d"), parse_card("7c")};
  auto board = cards_of({"As", "Ks", "Qs", "Js", "Ts"});
  auto s = hand_strength(hole, board, ExactMode{});
  CHECK(s.hs == doctest::Approx(0.5));
}

TEST_CASE("river exact mode is deterministic and board-order invariant") {
  std::array<Card, 2> hole{parse_card("8h"), parse_card("9h")};
  auto board = cards_of({"2c", "7d", "Th", "Jh", "As"});
  auto first = hand_strength(hole, board, ExactMode{});
  auto again = hand_strength(hole, board, ExactMode{});
  CHECK(first.hs == again.hs);
  std::reverse(board.begin(), board.end());
  auto reversed = hand_strength(hole, board, ExactMode{});
  CHECK(first.hs == reversed.hs);
  CHECK(first.hs2 == reversed.hs2);
}

TEST_CASE("turn Monte Carlo tracks the exact enumeration") {
  std::array<Card, 2> hole{parse_card("Ah"), parse_card("Kd")};
  auto board = cards_of({"2c", "7d", "Ts", "3h"});
  auto exact = hand_strength(hole, board, ExactMode{});
  McMode mc;
  mc.samples = 100000;
  mc.seed = 99;
  auto sampled = hand_strength(hole, board, mc);
  CHECK(std::fabs(sampled.hs - exact.hs) < 0.01);
  CHECK(std::fabs(sampled.hs2 - exact.hs2) < 0.01);
}

TEST_CASE("Monte Carlo error halves when samples quadruple") {
  std::array<Card, 2> hole{parse_card("Qs"), parse_card("Qd")};
  auto board = cards_of({"2c", "7d", "Th", "8s"});
  const double truth = hand_strength(hole, board, ExactMode{}).hs;
  auto rms = [&](int samples, int reps) {
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
      McMode mc;
      mc.samples = samples;
      mc.seed = 1000 + r;
      const double err = hand_strength(hole, board, mc).hs - truth;
      acc += err * err;
    }
    return std::sqrt(acc / reps);
  };
  const double coarse = rms(50, 40);
  const double fine = rms(200, 40);
  // Statistical check: allow slack around the ideal factor of two.
  CHECK(fine < coarse * 0.75);
}

TEST_CASE("missing seed is rejected in Monte Carlo mode") {
  std::array<Card, 2> hole{parse_card("Ah"), parse_card("Kd")};
  auto board = cards_of({"2c", "7d", "Ts"});
  McMode mc;
  mc.samples = 100;
  CHECK_THROWS_AS(hand_strength(hole, board, mc), MissingSeedError);
}

TEST_CASE("minimal hand parses and validates") {
  auto hand = minimal_holdem_hand();
  CHECK(hand.num_players == 2);
  long long total = 0;
  for (auto p : hand.payoffs) total += p;
  CHECK(total == 0);
  CHECK(hand.payoff_mbb(0) == doctest::Approx(1000.0));
}

TEST_CASE("round-trip parse/serialize identity") {
  auto hand = minimal_holdem_hand();
  const auto text = serialize_hand(hand);
  CHECK(parse_hand(text, 1) == hand);
  // Serializing twice is stable (canonical form).
  CHECK(serialize_hand(parse_hand(text, 1)) == text);
}

TEST_CASE("round-trip identity on simulated corpora") {
  for (const char* game : {"kuhn", "leduc"}) {
    auto hands = simulate_corpus(game, 200, 11);
    for (const auto& hand : hands) {
      CHECK(parse_hand(serialize_hand(hand), 1) == hand);
    }
  }
}

TEST_CASE("duplicate card across hole and board is a validation error") {
  auto hand = minimal_holdem_hand();
  hand.flop[0] = parse_card("As");  // duplicates seat 0's hole
  CHECK_THROWS_AS(validate_hand(hand), ValidationError);
}

TEST_CASE("nonzero payoff sum is a validation error") {
  auto hand = minimal_holdem_hand();
  hand.payoffs = {100, -50};
  CHECK_THROWS_AS(validate_hand(hand), ValidationError);
}

TEST_CASE("malformed json reports line and column") {
  try {
    parse_hand("{\"id\": ", 7);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 7") != std::string::npos);
    CHECK(std::string(e.what()).find("column") != std::string::npos);
  }
}

TEST_CASE("folded seat acting again is rejected") {
  auto hand = minimal_holdem_hand();
  hand.actions[0] = {{0, ActionKind::fold, 0}, {1, ActionKind::check, 0},
                     {0, ActionKind::check, 0}};
  CHECK_THROWS_AS(validate_hand(hand), ValidationError);
}

TEST_CASE("deal slot enumeration for a full hold'em hand") {
  auto hand = minimal_holdem_hand();
  auto slots = enumerate_deal_slots(hand, TrackedEvents::board_only());
  REQUIRE(slots.size() == 5);  // f1 f2 f3 t r
  CHECK(slots[0].label == "f1");
  CHECK(slots[4].label == "r");
  // Both holes are known: 52 - 4 = 48 minus earlier board.
  CHECK(slots[0].candidates.size() == 48);
  CHECK(slots[1].candidates.size() == 47);
  CHECK(slots[2].candidates.size() == 46);
  CHECK(slots[3].candidates.size() == 45);
  CHECK(slots[4].candidates.size() == 44);
  // Pot when the flop was dealt: blinds plus preflop calls.
  CHECK(slots[0].pot_chips == 200);
}

TEST_CASE("hole tracking on kuhn corpora") {
  auto hands = simulate_corpus("kuhn", 5, 3);
  auto slots = enumerate_deal_slots(hands[0], TrackedEvents::all());
  REQUIRE(slots.size() == 2);  // one hole card each, no board
  CHECK(slots[0].label == "h0.0");
  CHECK(slots[0].candidates.size() == 3);
  CHECK(slots[1].label == "h1.0");
  CHECK(slots[1].candidates.size() == 2);
}

TEST_CASE("mivat decomposition coefficients") {
  auto hand = minimal_holdem_hand();
  TrackedEvents turn_only{false, false, true, false};
  auto est = mivat_decompose_hand(hand, turn_only, 0);
  CHECK(est.b == doctest::Approx(1000.0));  // 100 chips at bb=100
  REQUIRE(est.groups.size() == 1);
  // 52 - 4 hole - 3 flop = 45 candidates.
  CHECK(est.groups[0].members.size() == 45);
  const std::string realized = counterfactual_id("fixture-1", "t", parse_card("3h"));
  for (const auto& [id, coeff] : est.groups[0].members) {
    if (id == realized) {
      CHECK(coeff == doctest::Approx(1.0 / 45 - 1.0));
    } else {
      CHECK(coeff == doctest::Approx(1.0 / 45));
    }
  }
  double total = 0.0;
  for (const auto& [id, coeff] : est.groups[0].members) total += coeff;
  CHECK(std::fabs(total) < 1e-10);
}

TEST_CASE("empty tracking reduces to the raw payoff") {
  auto hand = minimal_holdem_hand();
  TrackedEvents none{false, false, false, false};
  auto est = mivat_decompose_hand(hand, none, 1);
  CHECK(est.coeffs.empty());
  CHECK(est.b == doctest::Approx(hand.payoff_mbb(1)));
}

TEST_CASE("constant heuristic leaves the raw payoff") {
  class ConstantHeuristic : public HeuristicModel {
   public:
    double value(const std::string&) const override { return 42.0; }
  };
  auto hand = minimal_holdem_hand();
  auto est = mivat_decompose_hand(hand, TrackedEvents::board_only(), 0);
  CHECK(evaluate_affine(est, ConstantHeuristic{}) ==
        doctest::Approx(est.b).epsilon(1e-12));
}

TEST_CASE("missing board card on a played street is a decomposition error") {
  auto hand = minimal_holdem_hand();
  hand.turn.reset();  // turn actions remain recorded
  CHECK_THROWS_AS(enumerate_deal_slots(hand, TrackedEvents::board_only()),
                  DecompositionError);
}

TEST_CASE("feature vector shape and hand-computed values") {
  auto hands = simulate_corpus("leduc", 30, 21);
  CorpusFeatures features(hands, TrackedEvents::board_only(), FeatureConfig{});
  auto fm = features.map();
  CHECK(fm.dimension == kFeatureDimension);
  for (const auto& hand : hands) {
    auto slots = enumerate_deal_slots(hand, TrackedEvents::board_only());
    for (const auto& slot : slots) {
      auto f = fm(counterfactual_id(hand.id, slot.label, slot.realized));
      REQUIRE(f.size() == kFeatureDimension);
      // Pot feature is positive, folded/unknown seats contribute zeros.
      CHECK(f[0] > 0.0);
    }
  }
}

TEST_CASE("heads-up feature example: pot 100, HS one half") {
  // Direct check of the exponent convention on a constructed snapshot.
  HandHistory hand;
  hand.id = "x";
  hand.num_players = 2;
  hand.big_blind = 1000;  // makes pot_mbb equal pot_chips / 1000 * 1000
  StreetSnapshot snap;
  snap.street = Street::flop;
  snap.pot_mbb = 100.0;
  snap.non_folded = 2;
  snap.hs = {0.5, 0.0};
  snap.hs2 = {0.3, 0.0};
  snap.active = {true, false};
  auto f = extract_features(hand, snap, FeatureConfig{});
  CHECK(f[0] == doctest::Approx(100.0));
  CHECK(f[1] == doctest::Approx(100.0 * 0.25));  // pot * HS^2
  CHECK(f[2] == doctest::Approx(100.0 * 0.09));  // pot * (HS2)^2
  CHECK(f[3] == 0.0);

  snap.non_folded = 1;
  auto g = extract_features(hand, snap, FeatureConfig{});
  CHECK(g[1] == doctest::Approx(100.0 * 0.5));  // survivor keeps pot * HS
}

TEST_CASE("kfold partitions the corpus evenly") {
  SUBCASE("ten singletons") {
    auto folds = kfold_split(10, 10, 5);
    CHECK(folds.size() == 10);
    for (const auto& fold : folds) CHECK(fold.size() == 1);
  }
  SUBCASE("balanced folds partition the corpus") {
    auto folds = kfold_split(10000, 10, 5);
    std::set<std::size_t> all;
    for (const auto& fold : folds) {
      CHECK(fold.size() == 1000);
      all.insert(fold.begin(), fold.end());
    }
    CHECK(all.size() == 10000);
  }
  SUBCASE("k out of range") {
    CHECK_THROWS_AS(kfold_split(5, 6, 1), InvalidInputError);
    CHECK_THROWS_AS(kfold_split(5, 1, 1), InvalidInputError);
  }
  SUBCASE("deterministic per seed") {
    CHECK(kfold_split(100, 7, 3) == kfold_split(100, 7, 3));
  }
}

TEST_CASE("subsampling the training fold") {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < 9000; ++i) pool.push_back(i);
  auto all = subsample_training(pool, 9000, 1);
  CHECK(all == pool);  // identity in corpus order
  auto sub = subsample_training(pool, 1000, 1);
  CHECK(sub.size() == 1000);
  CHECK(std::is_sorted(sub.begin(), sub.end()));
  CHECK(sub == subsample_training(pool, 1000, 1));
  CHECK_THROWS_AS(subsample_training(pool, 9001, 1), InvalidInputError);
}

TEST_CASE("corpus file round-trip with header comments") {
  auto hands = simulate_corpus("kuhn", 50, 9);
  const std::string path = "test_corpus_tmp.jsonl";
  save_corpus(hands, path, "test header");
  auto loaded = load_corpus(path);
  REQUIRE(loaded.size() == hands.size());
  for (std::size_t i = 0; i < hands.size(); ++i) CHECK(loaded[i] == hands[i]);
  std::remove(path.c_str());
}

TEST_CASE("parsing a 10k-hand corpus stays under the time budget") {
  auto hands = simulate_corpus("leduc", 10000, 77);
  const std::string path = "test_corpus_10k.jsonl";
  save_corpus(hands, path, "10k parse benchmark");
  const auto start = std::chrono::steady_clock::now();
  auto loaded = load_corpus(path);
  const auto elapsed = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - start).count();
  CHECK(loaded.size() == 10000);
  CHECK(elapsed < 5.0);
  std::remove(path.c_str());
}

TEST_CASE("bundled sample corpus round-trips and decomposes") {
  auto hands = load_corpus(AIVAT_SAMPLE_CORPUS);
  REQUIRE(hands.size() == 3);
  for (const auto& hand : hands) {
    CHECK(parse_hand(serialize_hand(hand), 1) == hand);
  }
  // Three-player hand with a mucked hole: turn candidates exclude the four
  // revealed hole cards and the flop.
  auto slots = enumerate_deal_slots(hands[0], TrackedEvents::board_only());
  REQUIRE(slots.size() == 5);
  CHECK(slots[3].label == "t");
  CHECK(slots[3].candidates.size() == 45);
  CHECK(slots[0].pot_chips == 300);  // blinds plus pre-flop betting
  CHECK(slots[3].pot_chips == 700);  // plus 400 more on the flop
  // Folded seat contributes no correction after its fold but stays in the
  // earlier groups.
  auto est = mivat_decompose_hand(hands[0], TrackedEvents::board_only(), 2);
  CHECK(est.b == doctest::Approx(7000.0));
  CHECK(est.groups.size() == 5);
  // Preflop fold: no board, no tracked nodes, estimate is the raw payoff.
  auto folded = mivat_decompose_hand(hands[1], TrackedEvents::board_only(), 0);
  CHECK(folded.coeffs.empty());
  CHECK(folded.b == doctest::Approx(-1000.0));
  // Unknown hole: candidates exclude only the revealed cards.
  auto partial = enumerate_deal_slots(hands[2], TrackedEvents::board_only());
  REQUIRE(partial.size() == 4);  // f1 f2 f3 t
  CHECK(partial[3].candidates.size() == 47);
}

TEST_CASE("ACPC import best effort") {
  const std::string line =
      "STATE:7:cr300c/cc/cc/cc:AsKd|QhQc/2c7d9s/Th/3d:500|-500:alice|bob";
  auto hand = parse_acpc_line(line, 100, 50, 1);
  CHECK(hand.id == "acpc-7");
  CHECK(hand.num_players == 2);
  CHECK(hand.payoffs[0] == 500);
  CHECK(hand.flop.size() == 3);
  CHECK(hand.turn.has_value());
  CHECK(hand.river.has_value());
  CHECK(hand.names[0] == "alice");
}

TEST_CASE("simulated kuhn corpus matches the game oracle") {
  auto hands = simulate_corpus("kuhn", 20000, 4);
  std::vector<double> payoffs(hands.size());
  for (std::size_t i = 0; i < hands.size(); ++i) {
    payoffs[i] = static_cast<double>(hands[i].payoffs[0]);
  }
  const double mean = pairwise_mean(payoffs);
  std::vector<double> sq(payoffs.size());
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    sq[i] = (payoffs[i] - mean) * (payoffs[i] - mean);
  }
  const double se =
      std::sqrt(pairwise_sum(sq) / (payoffs.size() - 1.0) / payoffs.size());
  // Frozen fixture: Kuhn uniform value for player 0 is 1/8.
  CHECK(std::fabs(mean - 0.125) < 4.0 * se);
}
