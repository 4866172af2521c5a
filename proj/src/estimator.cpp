#include "aivat/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "aivat/errors.hpp"
#include "aivat/numeric.hpp"

namespace aivat {

std::vector<std::string> AffineEstimate::coefficient_ids() const {
  std::vector<std::string> ids;
  ids.reserve(coeffs.size());
  for (const auto& [id, c] : coeffs) ids.push_back(id);
  return ids;
}

MonteCarloSummary monte_carlo_summary(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw InsufficientDataError("monte_carlo_summary needs at least 2 values, got " +
                                std::to_string(n));
  }
  MonteCarloSummary s;
  s.mean = pairwise_mean(values);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - s.mean;
    sq[i] = d * d;
  }
  s.sample_variance = pairwise_sum(sq) / static_cast<double>(n - 1);
  s.se = std::sqrt(s.sample_variance / static_cast<double>(n));
  return s;
}

double control_variate_estimate(double v, double w, double omega, double c) {
  return v - c * (w - omega);
}

double optimal_cv_coefficient(double cov_vw, double var_w) {
  if (!(var_w > 0.0)) {
    throw DegenerateVariateError("control variate has non-positive variance " +
                                 format_double(var_w));
  }
  return cov_vw / var_w;
}

namespace {

// Reach weight over chance and known players only. Factors of unknown
// players are constant within every U-group and cancel in each ratio.
class KnownReach {
 public:
  KnownReach(const Game& game, const StrategyProfile& profile,
             const EstimatorConfig& config)
      : game_(game), profile_(profile), config_(config) {}

  double weight(const History& h) const {
    double w = 1.0;
    History prefix;
    prefix.reserve(h.size());
    for (int action : h) {
      auto legal = game_.legal_actions(prefix);
      auto it = std::find(legal.begin(), legal.end(), action);
      auto idx = static_cast<std::size_t>(it - legal.begin());
      if (game_.is_chance(prefix)) {
        w *= game_.chance_probs(prefix)[idx];
      } else {
        int p = game_.acting_player(prefix);
        if (config_.known_players.count(p)) w *= action_prob(prefix, p, idx);
      }
      prefix.push_back(action);
    }
    return w;
  }

  double action_prob(const History& h, int player, std::size_t action_index) const {
    if (static_cast<std::size_t>(player) >= profile_.players.size() ||
        profile_.players[player].empty()) {
      throw MissingStrategyError("known player " + std::to_string(player) +
                                 " has no strategy");
    }
    const auto& probs =
        profile_.players[player].probs_at(game_.infoset_key(h, player));
    return probs.at(action_index);
  }

 private:
  const Game& game_;
  const StrategyProfile& profile_;
  const EstimatorConfig& config_;
};

}  // namespace

AffineEstimate decompose_affine(const Game& game, const History& z,
                                const StrategyProfile& profile,
                                const EstimatorConfig& config) {
  game.validate_history(z);
  if (!game.is_terminal(z)) {
    throw InvalidHistoryError("decompose_affine expects a terminal history, got \"" +
                              history_id(z) + "\"");
  }
  KnownReach reach(game, profile, config);
  AffineEstimate est;

  // Correction groups, one per realized step with a known action
  // distribution, in path order.
  History h;
  h.reserve(z.size());
  for (int realized : z) {
    const bool chance = game.is_chance(h);
    const int actor = chance ? kChancePlayer : game.acting_player(h);
    const bool known = chance || config.known_players.count(actor) > 0;
    if (!known) {
      h.push_back(realized);
      continue;
    }

    std::vector<History> group_histories;
    if (config.use_imaginary_observations && !chance) {
      group_histories = game.u_set(h, actor);
    } else {
      group_histories = {h};
    }

    auto legal = game.legal_actions(h);
    auto realized_it = std::find(legal.begin(), legal.end(), realized);
    auto realized_idx = static_cast<std::size_t>(realized_it - legal.begin());

    // Parent normalizer sum_{h' in U(h)} pi(h') and realized-action
    // normalizer sum_{h' in U(h)} pi(h'.a).
    double denom_parent = 0.0;
    double denom_realized = 0.0;
    std::vector<double> parent_weights(group_histories.size());
    for (std::size_t m = 0; m < group_histories.size(); ++m) {
      parent_weights[m] = reach.weight(group_histories[m]);
      denom_parent += parent_weights[m];
    }
    std::vector<std::vector<double>> step_probs(group_histories.size());
    for (std::size_t m = 0; m < group_histories.size(); ++m) {
      const History& hp = group_histories[m];
      if (chance) {
        step_probs[m] = game.chance_probs(hp);
      } else {
        step_probs[m].resize(legal.size());
        for (std::size_t ai = 0; ai < legal.size(); ++ai) {
          step_probs[m][ai] = reach.action_prob(hp, actor, ai);
        }
      }
      denom_realized += parent_weights[m] * step_probs[m][realized_idx];
    }
    if (!(denom_parent > 0.0)) {
      throw DegenerateGroupError("group at \"" + history_id(h) +
                                 "\" has zero total reach");
    }
    if (!(denom_realized > 0.0)) {
      throw DegenerateGroupError("realized action " + std::to_string(realized) +
                                 " at \"" + history_id(h) +
                                 "\" has zero reach over its U-group");
    }

    CorrectionGroup group;
    {
      History anchor = h;
      anchor.push_back(realized);
      group.anchor = history_id(anchor);
    }
    for (std::size_t m = 0; m < group_histories.size(); ++m) {
      for (std::size_t ai = 0; ai < legal.size(); ++ai) {
        const double child_weight = parent_weights[m] * step_probs[m][ai];
        double coeff = child_weight / denom_parent;
        if (ai == realized_idx) coeff -= child_weight / denom_realized;
        History child = group_histories[m];
        child.push_back(legal[ai]);
        group.members.emplace_back(history_id(child), coeff);
      }
    }
    for (const auto& [id, coeff] : group.members) {
      if (coeff != 0.0) est.coeffs[id] += coeff;
    }
    est.groups.push_back(std::move(group));

    h.push_back(realized);
  }

  // Base term: imaginary observations over the evaluated player's private
  // information, when it is computable (the player's own reach factors are
  // needed, so the player must be known).
  std::vector<History> base_group;
  if (config.use_imaginary_observations &&
      config.known_players.count(config.evaluated_player)) {
    base_group = game.u_set(z, config.evaluated_player);
  } else {
    base_group = {z};
  }
  double num = 0.0;
  double denom = 0.0;
  for (const History& zp : base_group) {
    const double w = reach.weight(zp);
    num += w * game.utility(zp, config.evaluated_player);
    denom += w;
  }
  if (!(denom > 0.0)) {
    throw DegenerateGroupError("base group of \"" + history_id(z) +
                               "\" has zero total reach");
  }
  est.b = num / denom;
  return est;
}

double evaluate_affine(const AffineEstimate& est, const HeuristicModel& heuristic) {
  std::vector<double> terms;
  terms.reserve(est.coeffs.size());
  for (const auto& [id, c] : est.coeffs) {
    terms.push_back(c * heuristic.value(id));
  }
  return est.b + pairwise_sum(terms);
}

double aivat_estimate(const Game& game, const History& z,
                      const StrategyProfile& profile, const EstimatorConfig& config,
                      const HeuristicModel& heuristic) {
  return evaluate_affine(decompose_affine(game, z, profile, config), heuristic);
}

std::string serialize_affine(const AffineEstimate& est) {
  std::string out = "b " + format_double(est.b) + "\n";
  for (const auto& group : est.groups) {
    out += "group " + group.anchor + "\n";
    for (const auto& [id, coeff] : group.members) {
      out += id + " " + format_double(coeff) + "\n";
    }
  }
  return out;
}

}  // namespace aivat
