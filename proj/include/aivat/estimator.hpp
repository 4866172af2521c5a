#ifndef AIVAT_ESTIMATOR_HPP
#define AIVAT_ESTIMATOR_HPP

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "aivat/game.hpp"
#include "aivat/heuristic_model.hpp"

namespace aivat {

// One correction group: the histories h'.a' spanned by a single realized
// step h.a with a known action distribution, together with their signed
// coefficients. Coefficients within a group sum to zero, so a constant
// heuristic contributes nothing.
struct CorrectionGroup {
  std::string anchor;  // realized h.a
  std::vector<std::pair<std::string, double>> members;
};

// An estimate linearized over heuristic outputs: v(z) = b + <c, v'(.)>.
// Coefficients are sparse, keyed by canonical history id.
struct AffineEstimate {
  double b = 0.0;
  std::map<std::string, double> coeffs;
  std::vector<CorrectionGroup> groups;

  // Nonzero-coefficient history ids in deterministic (lexicographic) order.
  std::vector<std::string> coefficient_ids() const;
};

struct EstimatorConfig {
  // Players whose action probabilities are known. Chance is always known.
  std::set<int> known_players;
  // Enables the U(.) grouping; off reduces to advantage sum / MIVAT.
  bool use_imaginary_observations = false;
  // Player whose utility v(z) = u_i(z) is being estimated.
  int evaluated_player = 0;
};

struct MonteCarloSummary {
  double mean = 0.0;
  double sample_variance = 0.0;  // T-1 divisor
  double se = 0.0;
};

// Mean, unbiased sample variance and standard error. Needs >= 2 values.
MonteCarloSummary monte_carlo_summary(std::span<const double> values);

// v - c (w - omega).
double control_variate_estimate(double v, double w, double omega, double c);

// cov(v, w) / var(w). var_w must be positive.
double optimal_cv_coefficient(double cov_vw, double var_w);

// Builds the affine decomposition (b(z), c(z)) for one terminal history.
// `profile` only needs strategies for config.known_players; everyone else's
// factors cancel within each group and are omitted from the reach weights.
AffineEstimate decompose_affine(const Game& game, const History& z,
                                const StrategyProfile& profile,
                                const EstimatorConfig& config);

// b + sum_h c_h v'(h).
double evaluate_affine(const AffineEstimate& est, const HeuristicModel& heuristic);

// Convenience: evaluate_affine(decompose_affine(...), heuristic).
double aivat_estimate(const Game& game, const History& z,
                      const StrategyProfile& profile, const EstimatorConfig& config,
                      const HeuristicModel& heuristic);

// Debug-dump record format: "b <value>" then one "<id> <coefficient>" line
// per nonzero coefficient, groups delimited by "group <anchor>" lines.
std::string serialize_affine(const AffineEstimate& est);

}  // namespace aivat

#endif  // AIVAT_ESTIMATOR_HPP
