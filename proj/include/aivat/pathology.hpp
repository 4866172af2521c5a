#ifndef AIVAT_PATHOLOGY_HPP
#define AIVAT_PATHOLOGY_HPP

#include <Eigen/Dense>
#include <string>
#include <unordered_map>
#include <vector>

#include "aivat/estimator.hpp"
#include "aivat/stats.hpp"

namespace aivat {

// A fixed evaluation dataset in affine form, with every counterfactual
// history mapped to one coordinate of the attack parameter vector theta.
// Only histories actually encountered carry coordinates.
struct PathologyDataset {
  struct Trial {
    double b = 0.0;
    std::vector<std::pair<int, double>> coeffs;  // (parameter index, c)
  };

  std::vector<Trial> trials;
  std::vector<std::string> parameter_ids;              // index -> history id
  std::unordered_map<std::string, int> parameter_index;  // history id -> index

  static PathologyDataset from_estimates(const std::vector<AffineEstimate>& estimates);

  int dimension() const { return static_cast<int>(parameter_ids.size()); }
  std::size_t num_trials() const { return trials.size(); }

  // Per-trial estimates b_t + <c_t, theta>.
  std::vector<double> estimates(const Eigen::VectorXd& theta) const;
  // Coordinate means of the sparse coefficient vectors.
  Eigen::VectorXd mean_coefficients() const;
  double mean_b() const;
};

struct AdamConfig {
  double learning_rate = 100.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double weight_decay = 0.0;
  double epsilon = 1e-8;
  int iterations = 250;
};

enum class ObjectiveKind { SampleVariance, TStatisticMinimize, TStatisticMaximize };

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::SampleVariance;
  double mu0 = 0.0;  // t-statistic null value
};

struct CostAndGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

// Sample-variance proxy C(theta) = sum_t ((b_t - bbar) + <c_t - cbar,
// theta>)^2 with its analytic gradient.
CostAndGradient sample_variance_cost(const Eigen::VectorXd& theta,
                                     const PathologyDataset& data);

// t(theta) = (vbar - mu0) / (s / sqrt(T)) with its analytic gradient.
// Throws DegenerateStatisticError when the sample deviation is zero.
CostAndGradient t_statistic(const Eigen::VectorXd& theta, const PathologyDataset& data,
                            double mu0);

struct OptimizeResult {
  Eigen::VectorXd theta;
  // Objective at theta0 followed by the value after each iteration
  // (iterations + 1 entries).
  std::vector<double> trace;
};

// Observes (iteration, theta, objective) after every evaluation, starting
// with iteration 0 at theta0.
using IterationObserver =
    std::function<void(int, const Eigen::VectorXd&, double)>;

// Adam with bias correction. SampleVariance and TStatisticMinimize descend;
// TStatisticMaximize ascends. Deterministic; throws DivergenceError if the
// objective leaves the finite range.
OptimizeResult optimize(const ObjectiveSpec& objective, const PathologyDataset& data,
                        const AdamConfig& adam, const Eigen::VectorXd& theta0,
                        const IterationObserver& observer = nullptr);

struct PhackReport {
  TTestResult losing;   // t minimized, tail P(T <= t)
  TTestResult winning;  // t maximized, tail P(T >= t)
};

// Runs the t-statistic attack in both directions from theta = 0 and reports
// the contradictory one-sided tests.
PhackReport phack_report(const PathologyDataset& data, const AdamConfig& adam,
                         double mu0 = 0.0);

}  // namespace aivat

#endif  // AIVAT_PATHOLOGY_HPP
