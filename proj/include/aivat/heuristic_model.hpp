#ifndef AIVAT_HEURISTIC_MODEL_HPP
#define AIVAT_HEURISTIC_MODEL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace aivat {

// A heuristic value function v'. Queried by canonical history id; producers
// of estimates and the heuristics applied to them agree on the id format
// (game histories use comma-joined action ids, hand corpora use
// "<hand>|<deal slot>|<card>").
class HeuristicModel {
 public:
  virtual ~HeuristicModel() = default;

  // Predictive mean v'(h). Throws MissingHeuristicValueError when the
  // heuristic cannot produce a value for this history.
  virtual double value(const std::string& history_id) const = 0;

  virtual bool provides_uncertainty() const { return false; }

  // Joint predictive distribution over several histories: mean vector and
  // covariance Sigma (symmetric PSD). Throws UncertaintyUnavailableError
  // unless overridden.
  virtual void joint(const std::vector<std::string>& history_ids,
                     Eigen::VectorXd* mean, Eigen::MatrixXd* covariance) const;
};

}  // namespace aivat

#endif  // AIVAT_HEURISTIC_MODEL_HPP
