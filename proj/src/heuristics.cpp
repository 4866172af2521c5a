#include "aivat/heuristics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "aivat/errors.hpp"
#include "aivat/numeric.hpp"

namespace aivat {

TabularHeuristic::TabularHeuristic(std::unordered_map<std::string, double> theta,
                                   double default_value)
    : theta_(std::move(theta)), default_value_(default_value) {
  for (const auto& [id, v] : theta_) {
    if (!std::isfinite(v)) {
      throw InvalidDataError("non-finite tabular value at \"" + id + "\"");
    }
  }
  if (!std::isfinite(default_value_)) {
    throw InvalidDataError("non-finite tabular default value");
  }
}

void TabularHeuristic::set(const std::string& history_id, double value) {
  if (!std::isfinite(value)) {
    throw InvalidDataError("non-finite tabular value at \"" + history_id + "\"");
  }
  theta_[history_id] = value;
}

double TabularHeuristic::value(const std::string& history_id) const {
  auto it = theta_.find(history_id);
  return it == theta_.end() ? default_value_ : it->second;
}

Eigen::VectorXd FeatureMap::operator()(const std::string& history_id) const {
  Eigen::VectorXd v = phi(history_id);
  if (v.size() != dimension) {
    throw FeatureDimensionError("feature map returned " + std::to_string(v.size()) +
                                " entries for \"" + history_id + "\", expected " +
                                std::to_string(dimension));
  }
  if (!v.allFinite()) {
    throw InvalidDataError("non-finite feature for \"" + history_id + "\"");
  }
  return v;
}

LinearHeuristic::LinearHeuristic(Eigen::VectorXd theta, FeatureMap features)
    : theta_(std::move(theta)), features_(std::move(features)) {
  if (theta_.size() != features_.dimension) {
    throw FeatureDimensionError("theta has " + std::to_string(theta_.size()) +
                                " entries, feature map expects " +
                                std::to_string(features_.dimension));
  }
}

double LinearHeuristic::value(const std::string& history_id) const {
  return features_(history_id).dot(theta_);
}

BayesianLinearModel::BayesianLinearModel(Eigen::VectorXd posterior_mean,
                                         Eigen::MatrixXd posterior_covariance,
                                         double noise_variance, FeatureMap features)
    : mean_(std::move(posterior_mean)),
      covariance_(std::move(posterior_covariance)),
      noise_variance_(noise_variance),
      features_(std::move(features)) {
  if (noise_variance_ < 0.0) {
    throw InvalidDataError("negative noise variance");
  }
}

double BayesianLinearModel::value(const std::string& history_id) const {
  return predictive_mean(features_(history_id));
}

double BayesianLinearModel::predictive_mean(const Eigen::VectorXd& phi) const {
  return phi.dot(mean_);
}

double BayesianLinearModel::predictive_variance(const Eigen::VectorXd& phi,
                                                bool include_noise) const {
  double var = phi.dot(covariance_ * phi);
  if (include_noise) var += noise_variance_;
  return std::max(0.0, var);
}

void BayesianLinearModel::joint(const std::vector<std::string>& history_ids,
                                Eigen::VectorXd* mean,
                                Eigen::MatrixXd* covariance) const {
  const auto n = static_cast<Eigen::Index>(history_ids.size());
  Eigen::MatrixXd phi(n, features_.dimension);
  for (Eigen::Index i = 0; i < n; ++i) {
    phi.row(i) = features_(history_ids[i]).transpose();
  }
  if (mean != nullptr) *mean = phi * mean_;
  if (covariance != nullptr) {
    *covariance = phi * covariance_ * phi.transpose();
    // Symmetrize away the last-ulp asymmetry of the triple product.
    *covariance = ((*covariance) + covariance->transpose()) / 2.0;
    if (include_noise_in_joint) {
      covariance->diagonal().array() += noise_variance_;
    }
  }
}

GameValueHeuristic::GameValueHeuristic(const Game& game, StrategyProfile profile,
                                       int player)
    : game_(game), profile_(std::move(profile)), player_(player) {}

double GameValueHeuristic::value(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(id);
  if (it != cache_.end()) return it->second;
  History h = parse_history_id(id);
  std::function<double(History&)> walk = [&](History& node) -> double {
    if (game_.is_terminal(node)) return game_.utility(node, player_);
    const std::string node_id = history_id(node);
    auto hit = cache_.find(node_id);
    if (hit != cache_.end()) return hit->second;
    auto legal = game_.legal_actions(node);
    std::vector<double> probs;
    if (game_.is_chance(node)) {
      probs = game_.chance_probs(node);
    } else {
      int p = game_.acting_player(node);
      probs = profile_.players.at(p).probs_at(game_.infoset_key(node, p));
    }
    double v = 0.0;
    for (std::size_t i = 0; i < legal.size(); ++i) {
      if (probs[i] == 0.0) continue;
      node.push_back(legal[i]);
      v += probs[i] * walk(node);
      node.pop_back();
    }
    cache_.emplace(node_id, v);
    return v;
  };
  double v = walk(h);
  cache_.emplace(id, v);
  return v;
}

Eigen::VectorXd psi_features(const AffineEstimate& est, const FeatureMap& features) {
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(features.dimension);
  for (const auto& [id, c] : est.coeffs) {
    psi += c * features(id);
  }
  return psi;
}

namespace {

struct CenteredMoments {
  Eigen::MatrixXd x;  // (1/T) sum psi psi^T - psibar psibar^T
  Eigen::VectorXd y;  // bbar psibar - (1/T) sum b psi
};

CenteredMoments centered_moments(
    const std::vector<std::pair<double, Eigen::VectorXd>>& b_psi) {
  if (b_psi.empty()) {
    throw InsufficientDataError("closed_form_theta needs at least one trial");
  }
  const auto d = b_psi.front().second.size();
  const double n = static_cast<double>(b_psi.size());
  Eigen::VectorXd psi_bar = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd cross = Eigen::VectorXd::Zero(d);
  double b_bar = 0.0;
  for (const auto& [b, psi] : b_psi) {
    if (psi.size() != d) {
      throw FeatureDimensionError("inconsistent psi dimensions in dataset");
    }
    psi_bar += psi;
    second += psi * psi.transpose();
    cross += b * psi;
    b_bar += b;
  }
  psi_bar /= n;
  b_bar /= n;
  CenteredMoments m;
  m.x = second / n - psi_bar * psi_bar.transpose();
  m.y = b_bar * psi_bar - cross / n;
  return m;
}

}  // namespace

Eigen::VectorXd closed_form_theta(
    const std::vector<std::pair<double, Eigen::VectorXd>>& b_psi, double ridge) {
  auto m = centered_moments(b_psi);
  if (ridge > 0.0) {
    m.x.diagonal().array() += ridge;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.x);
  const auto& ev = eig.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    throw HyperplaneDegeneracyError(
        "centered second-moment matrix is singular (condition " +
        format_double(lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity()) +
        "): the psi vectors lie on (or near) a common hyperplane, so no unique "
        "variance-minimizing linear parameter exists");
  }
  return eig.eigenvectors() *
         (eig.eigenvectors().transpose() * m.y).cwiseQuotient(ev);
}

double linear_variance_cost(const std::vector<std::pair<double, Eigen::VectorXd>>& b_psi,
                            const Eigen::VectorXd& theta) {
  const double n = static_cast<double>(b_psi.size());
  double b_bar = 0.0;
  Eigen::VectorXd psi_bar = Eigen::VectorXd::Zero(theta.size());
  for (const auto& [b, psi] : b_psi) {
    b_bar += b;
    psi_bar += psi;
  }
  b_bar /= n;
  psi_bar /= n;
  double cost = 0.0;
  for (const auto& [b, psi] : b_psi) {
    const double r = (b - b_bar) + (psi - psi_bar).dot(theta);
    cost += r * r;
  }
  return cost;
}

BayesianLinearModel fit_bayesian_linear(
    const std::vector<std::pair<Eigen::VectorXd, double>>& data, double prior_scale,
    double noise_variance, FeatureMap features) {
  if (data.empty()) {
    throw InsufficientDataError("fit_bayesian_linear needs at least one datum");
  }
  if (!(prior_scale > 0.0) || !(noise_variance > 0.0)) {
    throw InvalidDataError("prior_scale and noise_variance must be positive");
  }
  const int d = features.dimension;
  Eigen::MatrixXd precision = Eigen::MatrixXd::Identity(d, d) / prior_scale;
  Eigen::VectorXd moment = Eigen::VectorXd::Zero(d);
  for (const auto& [phi, target] : data) {
    if (phi.size() != d) {
      throw FeatureDimensionError("feature row has " + std::to_string(phi.size()) +
                                  " entries, expected " + std::to_string(d));
    }
    if (!phi.allFinite() || !std::isfinite(target)) {
      throw InvalidDataError("non-finite training datum");
    }
    precision += phi * phi.transpose() / noise_variance;
    moment += phi * target / noise_variance;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  Eigen::MatrixXd covariance = llt.solve(Eigen::MatrixXd::Identity(d, d));
  covariance = (covariance + covariance.transpose()) / 2.0;
  Eigen::VectorXd mean = covariance * moment;
  return BayesianLinearModel(std::move(mean), std::move(covariance), noise_variance,
                             std::move(features));
}

std::string serialize_bayesian_linear(const BayesianLinearModel& model) {
  std::string out = "aivat-heuristic v1\nkind bayes-linear\n";
  const auto d = model.posterior_mean().size();
  out += "dimension " + std::to_string(d) + "\n";
  out += "noise_variance " + format_double(model.noise_variance()) + "\n";
  out += "posterior_mean";
  for (Eigen::Index i = 0; i < d; ++i) {
    out += " " + format_double(model.posterior_mean()[i]);
  }
  out += "\nposterior_covariance";
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      out += " " + format_double(model.posterior_covariance()(i, j));
    }
  }
  out += "\n";
  return out;
}

BayesianLinearModel parse_bayesian_linear(const std::string& text, FeatureMap features) {
  std::istringstream in(text);
  std::string tok, kind;
  int d = -1;
  double noise = -1.0;
  if (!(in >> tok) || tok != "aivat-heuristic") {
    throw ParseError("not an aivat-heuristic record");
  }
  in >> tok;  // version
  while (in >> tok) {
    if (tok == "kind") {
      in >> kind;
    } else if (tok == "dimension") {
      in >> d;
    } else if (tok == "noise_variance") {
      in >> noise;
    } else if (tok == "posterior_mean") {
      break;
    } else {
      throw ParseError("unexpected field \"" + tok + "\" in heuristic record");
    }
  }
  if (kind != "bayes-linear" || d <= 0 || noise < 0.0) {
    throw ParseError("malformed bayes-linear record");
  }
  if (d != features.dimension) {
    throw FeatureDimensionError("serialized model dimension " + std::to_string(d) +
                                " does not match feature map dimension " +
                                std::to_string(features.dimension));
  }
  Eigen::VectorXd mean(d);
  for (int i = 0; i < d; ++i) {
    if (!(in >> mean[i])) throw ParseError("truncated posterior mean");
  }
  if (!(in >> tok) || tok != "posterior_covariance") {
    throw ParseError("missing posterior covariance");
  }
  Eigen::MatrixXd cov(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (!(in >> cov(i, j))) throw ParseError("truncated posterior covariance");
    }
  }
  return BayesianLinearModel(std::move(mean), std::move(cov), noise,
                             std::move(features));
}

std::string serialize_linear(const Eigen::VectorXd& theta) {
  std::string out = "aivat-heuristic v1\nkind wb-linear\n";
  out += "dimension " + std::to_string(theta.size()) + "\n";
  out += "theta";
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    out += " " + format_double(theta[i]);
  }
  out += "\n";
  return out;
}

Eigen::VectorXd parse_linear(const std::string& text) {
  std::istringstream in(text);
  std::string tok, kind;
  int d = -1;
  if (!(in >> tok) || tok != "aivat-heuristic") {
    throw ParseError("not an aivat-heuristic record");
  }
  in >> tok;  // version
  while (in >> tok) {
    if (tok == "kind") {
      in >> kind;
    } else if (tok == "dimension") {
      in >> d;
    } else if (tok == "theta") {
      break;
    } else {
      throw ParseError("unexpected field \"" + tok + "\" in heuristic record");
    }
  }
  if (kind != "wb-linear" || d <= 0) throw ParseError("malformed wb-linear record");
  Eigen::VectorXd theta(d);
  for (int i = 0; i < d; ++i) {
    if (!(in >> theta[i])) throw ParseError("truncated theta");
  }
  return theta;
}

}  // namespace aivat
