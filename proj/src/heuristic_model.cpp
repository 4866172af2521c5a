#include "aivat/heuristic_model.hpp"

#include "aivat/errors.hpp"

namespace aivat {

void HeuristicModel::joint(const std::vector<std::string>&, Eigen::VectorXd*,
                           Eigen::MatrixXd*) const {
  throw UncertaintyUnavailableError(
      "this heuristic does not provide predictive uncertainty");
}

}  // namespace aivat
