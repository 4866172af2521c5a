#ifndef AIVAT_HEURISTICS_HPP
#define AIVAT_HEURISTICS_HPP

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "aivat/estimator.hpp"
#include "aivat/game.hpp"
#include "aivat/heuristic_model.hpp"

namespace aivat {

// v'(h) = theta_h, the maximally expressive per-history table. Unseen
// histories return `default_value` (0 keeps the estimator neutral there).
class TabularHeuristic : public HeuristicModel {
 public:
  TabularHeuristic() = default;
  explicit TabularHeuristic(std::unordered_map<std::string, double> theta,
                            double default_value = 0.0);

  void set(const std::string& history_id, double value);
  double value(const std::string& history_id) const override;

  const std::unordered_map<std::string, double>& table() const { return theta_; }
  double default_value() const { return default_value_; }

 private:
  std::unordered_map<std::string, double> theta_;
  double default_value_ = 0.0;
};

// Feature engineering function phi: history id -> R^d.
struct FeatureMap {
  int dimension = 0;
  std::function<Eigen::VectorXd(const std::string&)> phi;

  // phi(id) with the dimension checked.
  Eigen::VectorXd operator()(const std::string& history_id) const;
};

// v'(h) = phi(h)^T theta.
class LinearHeuristic : public HeuristicModel {
 public:
  LinearHeuristic(Eigen::VectorXd theta, FeatureMap features);
  double value(const std::string& history_id) const override;

  const Eigen::VectorXd& theta() const { return theta_; }
  const FeatureMap& features() const { return features_; }

 private:
  Eigen::VectorXd theta_;
  FeatureMap features_;
};

// Conjugate Gaussian posterior over linear weights. Equivalent to a GP with
// a dot-product kernel (scaled by the prior) plus a white noise kernel, but
// O(d^3) instead of O(n^3).
class BayesianLinearModel : public HeuristicModel {
 public:
  BayesianLinearModel() = default;
  BayesianLinearModel(Eigen::VectorXd posterior_mean,
                      Eigen::MatrixXd posterior_covariance, double noise_variance,
                      FeatureMap features);

  double value(const std::string& history_id) const override;
  bool provides_uncertainty() const override { return true; }
  // Latent (noise-free) joint by default; include_noise_in_joint toggles the
  // diagonal observation-noise term.
  void joint(const std::vector<std::string>& history_ids, Eigen::VectorXd* mean,
             Eigen::MatrixXd* covariance) const override;

  // Predictive distribution at a raw feature vector.
  double predictive_mean(const Eigen::VectorXd& phi) const;
  double predictive_variance(const Eigen::VectorXd& phi, bool include_noise) const;

  const Eigen::VectorXd& posterior_mean() const { return mean_; }
  const Eigen::MatrixXd& posterior_covariance() const { return covariance_; }
  double noise_variance() const { return noise_variance_; }
  const FeatureMap& features() const { return features_; }

  bool include_noise_in_joint = false;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  double noise_variance_ = 0.0;
  FeatureMap features_;
};

// Exact continuation values E[u_player | h] under a full strategy profile.
// The quality benchmark heuristic: expensive but true.
class GameValueHeuristic : public HeuristicModel {
 public:
  GameValueHeuristic(const Game& game, StrategyProfile profile, int player);
  double value(const std::string& history_id) const override;

 private:
  const Game& game_;
  StrategyProfile profile_;
  int player_;
  mutable std::mutex mutex_;  // guards the memo so queries stay concurrent-safe
  mutable std::unordered_map<std::string, double> cache_;
};

// psi(z) = sum_h c(z)_h phi(h): the estimate's aggregated feature vector,
// so that evaluate_affine(est, linear theta) = b + <psi, theta>.
Eigen::VectorXd psi_features(const AffineEstimate& est, const FeatureMap& features);

// Least-squares parameter minimizing the sample variance of {b_t + <psi_t,
// theta>}: theta* = X^-1 y with X the centered second-moment matrix of psi
// and y the centered cross moment against b. No regularization by default;
// a singular X (condition number > 1e12) throws HyperplaneDegeneracyError,
// which happens exactly when all psi_t lie on a common hyperplane. `ridge`
// > 0 is an optional extension, off by default.
Eigen::VectorXd closed_form_theta(
    const std::vector<std::pair<double, Eigen::VectorXd>>& b_psi, double ridge = 0.0);

// The sample-variance cost sum_t ((b_t - bbar) + <psi_t - psibar, theta>)^2.
double linear_variance_cost(const std::vector<std::pair<double, Eigen::VectorXd>>& b_psi,
                            const Eigen::VectorXd& theta);

// Conjugate posterior for targets y ~ N(phi^T w, noise), w ~ N(0, prior *
// I). Needs at least one row and positive hyperparameters.
BayesianLinearModel fit_bayesian_linear(
    const std::vector<std::pair<Eigen::VectorXd, double>>& data, double prior_scale,
    double noise_variance, FeatureMap features);

// Text record round-trip for fitted models (commitment target).
std::string serialize_bayesian_linear(const BayesianLinearModel& model);
BayesianLinearModel parse_bayesian_linear(const std::string& text, FeatureMap features);
std::string serialize_linear(const Eigen::VectorXd& theta);
Eigen::VectorXd parse_linear(const std::string& text);

}  // namespace aivat

#endif  // AIVAT_HEURISTICS_HPP
