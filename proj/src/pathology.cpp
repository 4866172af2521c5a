#include "aivat/pathology.hpp"

#include <algorithm>
#include <cmath>

#include "aivat/errors.hpp"
#include "aivat/numeric.hpp"

namespace aivat {

PathologyDataset PathologyDataset::from_estimates(
    const std::vector<AffineEstimate>& estimates) {
  PathologyDataset data;
  // Sorted id order keeps the coordinate layout independent of trial order.
  std::map<std::string, int> index;
  for (const auto& est : estimates) {
    for (const auto& [id, c] : est.coeffs) index.emplace(id, 0);
  }
  data.parameter_ids.reserve(index.size());
  for (auto& [id, slot] : index) {
    slot = static_cast<int>(data.parameter_ids.size());
    data.parameter_ids.push_back(id);
    data.parameter_index.emplace(id, slot);
  }
  data.trials.reserve(estimates.size());
  for (const auto& est : estimates) {
    Trial trial;
    trial.b = est.b;
    trial.coeffs.reserve(est.coeffs.size());
    for (const auto& [id, c] : est.coeffs) {
      trial.coeffs.emplace_back(index.at(id), c);
    }
    data.trials.push_back(std::move(trial));
  }
  return data;
}

std::vector<double> PathologyDataset::estimates(const Eigen::VectorXd& theta) const {
  std::vector<double> out(trials.size());
  for (std::size_t t = 0; t < trials.size(); ++t) {
    double v = trials[t].b;
    for (const auto& [idx, c] : trials[t].coeffs) v += c * theta[idx];
    out[t] = v;
  }
  return out;
}

Eigen::VectorXd PathologyDataset::mean_coefficients() const {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dimension());
  for (const auto& trial : trials) {
    for (const auto& [idx, c] : trial.coeffs) mean[idx] += c;
  }
  if (!trials.empty()) mean /= static_cast<double>(trials.size());
  return mean;
}

double PathologyDataset::mean_b() const {
  std::vector<double> bs(trials.size());
  for (std::size_t t = 0; t < trials.size(); ++t) bs[t] = trials[t].b;
  return pairwise_mean(bs);
}

CostAndGradient sample_variance_cost(const Eigen::VectorXd& theta,
                                     const PathologyDataset& data) {
  if (theta.size() != data.dimension()) {
    throw FeatureDimensionError("theta has " + std::to_string(theta.size()) +
                                " entries, dataset has " +
                                std::to_string(data.dimension()) + " parameters");
  }
  const double b_bar = data.mean_b();
  const Eigen::VectorXd c_bar = data.mean_coefficients();
  const double cbar_dot = c_bar.dot(theta);

  CostAndGradient out;
  out.gradient = Eigen::VectorXd::Zero(theta.size());
  double residual_sum = 0.0;
  for (const auto& trial : data.trials) {
    double r = (trial.b - b_bar) - cbar_dot;
    for (const auto& [idx, c] : trial.coeffs) r += c * theta[idx];
    out.value += r * r;
    residual_sum += r;
    for (const auto& [idx, c] : trial.coeffs) out.gradient[idx] += 2.0 * r * c;
  }
  out.gradient -= 2.0 * residual_sum * c_bar;
  return out;
}

CostAndGradient t_statistic(const Eigen::VectorXd& theta, const PathologyDataset& data,
                            double mu0) {
  if (data.num_trials() < 2) {
    throw InsufficientDataError("t_statistic needs at least 2 trials");
  }
  if (theta.size() != data.dimension()) {
    throw FeatureDimensionError("theta has " + std::to_string(theta.size()) +
                                " entries, dataset has " +
                                std::to_string(data.dimension()) + " parameters");
  }
  const double n = static_cast<double>(data.num_trials());
  const double b_bar = data.mean_b();
  const Eigen::VectorXd c_bar = data.mean_coefficients();
  const double cbar_dot = c_bar.dot(theta);
  const double v_bar = b_bar + cbar_dot;

  // Centered residuals and their gradient pieces.
  double ss = 0.0;
  Eigen::VectorXd ss_grad = Eigen::VectorXd::Zero(theta.size());
  double residual_sum = 0.0;
  std::vector<double> residuals(data.trials.size());
  for (std::size_t t = 0; t < data.trials.size(); ++t) {
    const auto& trial = data.trials[t];
    double r = (trial.b - b_bar) - cbar_dot;
    for (const auto& [idx, c] : trial.coeffs) r += c * theta[idx];
    residuals[t] = r;
    ss += r * r;
    residual_sum += r;
    for (const auto& [idx, c] : trial.coeffs) ss_grad[idx] += 2.0 * r * c;
  }
  ss_grad -= 2.0 * residual_sum * c_bar;

  const double s2 = ss / (n - 1.0);
  const double s = std::sqrt(s2);
  if (!(s > 0.0)) {
    throw DegenerateStatisticError("zero sample standard deviation; "
                                   "t-statistic undefined");
  }
  CostAndGradient out;
  out.value = (v_bar - mu0) / (s / std::sqrt(n));
  // d t = sqrt(T) [ cbar s - (vbar - mu0) ds ] / s^2, ds = d(s^2) / (2 s).
  const Eigen::VectorXd s_grad = ss_grad / ((n - 1.0) * 2.0 * s);
  out.gradient = std::sqrt(n) * (c_bar * s - (v_bar - mu0) * s_grad) / s2;
  return out;
}

OptimizeResult optimize(const ObjectiveSpec& objective, const PathologyDataset& data,
                        const AdamConfig& adam, const Eigen::VectorXd& theta0,
                        const IterationObserver& observer) {
  if (!(adam.learning_rate > 0.0) || !(adam.epsilon > 0.0) || adam.beta1 < 0.0 ||
      adam.beta1 >= 1.0 || adam.beta2 < 0.0 || adam.beta2 >= 1.0) {
    throw InvalidDataError("invalid Adam configuration");
  }
  const bool ascend = objective.kind == ObjectiveKind::TStatisticMaximize;
  auto eval = [&](const Eigen::VectorXd& theta) -> CostAndGradient {
    if (objective.kind == ObjectiveKind::SampleVariance) {
      return sample_variance_cost(theta, data);
    }
    return t_statistic(theta, data, objective.mu0);
  };

  OptimizeResult result;
  result.theta = theta0;
  Eigen::VectorXd m = Eigen::VectorXd::Zero(theta0.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theta0.size());
  auto first = eval(result.theta);
  result.trace.push_back(first.value);
  if (observer) observer(0, result.theta, first.value);
  Eigen::VectorXd grad = first.gradient;
  for (int it = 1; it <= adam.iterations; ++it) {
    Eigen::VectorXd g = ascend ? Eigen::VectorXd(-grad) : grad;
    if (adam.weight_decay != 0.0) g += adam.weight_decay * result.theta;
    m = adam.beta1 * m + (1.0 - adam.beta1) * g;
    v = adam.beta2 * v + (1.0 - adam.beta2) * g.cwiseProduct(g);
    const double m_corr = 1.0 - std::pow(adam.beta1, it);
    const double v_corr = 1.0 - std::pow(adam.beta2, it);
    result.theta -=
        (adam.learning_rate / m_corr) *
        m.cwiseQuotient(((v / v_corr).cwiseSqrt().array() + adam.epsilon).matrix());
    auto step = eval(result.theta);
    if (!std::isfinite(step.value)) {
      throw DivergenceError("objective became non-finite at iteration " +
                            std::to_string(it));
    }
    result.trace.push_back(step.value);
    if (observer) observer(it, result.theta, step.value);
    grad = step.gradient;
  }
  return result;
}

PhackReport phack_report(const PathologyDataset& data, const AdamConfig& adam,
                         double mu0) {
  PhackReport report;
  const Eigen::VectorXd theta0 = Eigen::VectorXd::Zero(data.dimension());

  auto run = [&](ObjectiveKind kind) -> TTestResult {
    TTestResult r;
    Eigen::VectorXd theta = theta0;
    if (data.dimension() > 0) {
      ObjectiveSpec spec{kind, mu0};
      theta = optimize(spec, data, adam, theta0).theta;
    }
    const auto final_t = t_statistic(theta, data, mu0);
    r.t = final_t.value;
    r.dof = static_cast<double>(data.num_trials() - 1);
    r.direction = (kind == ObjectiveKind::TStatisticMaximize) ? TailDirection::greater
                                                              : TailDirection::less;
    const auto tail = student_t_tail(r.t, r.dof, r.direction);
    r.p_one_sided = tail.p;
    r.log10_p = tail.log10_p;
    return r;
  };

  report.losing = run(ObjectiveKind::TStatisticMinimize);
  report.winning = run(ObjectiveKind::TStatisticMaximize);
  return report;
}

}  // namespace aivat
