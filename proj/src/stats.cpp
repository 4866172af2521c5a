#include "aivat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aivat/errors.hpp"
#include "aivat/numeric.hpp"

namespace aivat {

namespace {

// Modified Lentz continued-fraction evaluation for the incomplete beta.
double beta_continued_fraction(double x, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  constexpr int kMaxTerms = 300;

  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double result = d;
  for (int m = 1; m <= kMaxTerms; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    result *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double delta = d * c;
    result *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return result;
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// log I_x(a,b); valid on the branch x <= (a+1)/(a+b+2).
double log_regularized_incomplete_beta(double x, double a, double b) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  double log_prefactor =
      a * std::log(x) + b * std::log1p(-x) - log_beta(a, b) - std::log(a);
  return log_prefactor + std::log(beta_continued_fraction(x, a, b));
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0) || !(a > 0.0) || !(b > 0.0)) {
    throw InvalidDataError("regularized_incomplete_beta domain violation");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (x <= (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_regularized_incomplete_beta(x, a, b));
  }
  return 1.0 - std::exp(log_regularized_incomplete_beta(1.0 - x, b, a));
}

double student_t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw InvalidDataError("student_t_cdf needs dof > 0");
  const double x = dof / (t * t + dof);
  const double half_tail = regularized_incomplete_beta(x, dof / 2.0, 0.5) / 2.0;
  return (t >= 0.0) ? 1.0 - half_tail : half_tail;
}

TailProbability student_t_tail(double t, double dof, TailDirection direction) {
  if (!(dof > 0.0)) throw InvalidDataError("student_t_tail needs dof > 0");
  // P(T >= t) for t >= 0 equals I_{v/(t^2+v)}(v/2, 1/2) / 2.
  const double into_tail = (direction == TailDirection::greater) ? t : -t;
  TailProbability out;
  if (into_tail <= 0.0) {
    out.p = (direction == TailDirection::greater) ? 1.0 - student_t_cdf(t, dof)
                                                  : student_t_cdf(t, dof);
    return out;
  }
  const double x = dof / (into_tail * into_tail + dof);
  const double a = dof / 2.0;
  const double b = 0.5;
  // The continued-fraction branch requires x below the crossover; for the
  // tiny tails we care about here it always is.
  if (x <= (a + 1.0) / (a + b + 2.0)) {
    const double log_p =
        log_regularized_incomplete_beta(x, a, b) - std::log(2.0);
    const double log10_p = log_p / std::log(10.0);
    if (log10_p < -300.0) {
      out.p = 0.0;
      out.log10_p = log10_p;
    } else {
      out.p = std::exp(log_p);
    }
  } else {
    out.p = (1.0 - regularized_incomplete_beta(1.0 - x, b, a)) / 2.0;
  }
  return out;
}

double propagate_variance(const AffineEstimate& est, const Eigen::MatrixXd& sigma) {
  const auto ids = est.coefficient_ids();
  const auto n = static_cast<Eigen::Index>(ids.size());
  if (sigma.rows() != n || sigma.cols() != n) {
    throw InvalidCovarianceError("covariance is " + std::to_string(sigma.rows()) +
                                 "x" + std::to_string(sigma.cols()) + ", expected " +
                                 std::to_string(n) + "x" + std::to_string(n));
  }
  if (n == 0) return 0.0;
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  if (!sigma.isApprox(sigma.transpose(), 1e-12)) {
    throw InvalidCovarianceError("covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma,
                                                     Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-9 * scale) {
    throw InvalidCovarianceError("covariance has eigenvalue " +
                                 format_double(eig.eigenvalues().minCoeff()));
  }
  Eigen::VectorXd c(n);
  for (Eigen::Index i = 0; i < n; ++i) c[i] = est.coeffs.at(ids[i]);
  const double var = c.dot(sigma * c);
  return std::max(0.0, var);
}

namespace {

std::vector<double> values_of(const std::vector<EstimateWithVariance>& estimates) {
  std::vector<double> v(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) v[i] = estimates[i].value;
  return v;
}

void require_enough(std::size_t n, const char* who) {
  if (n < 2) {
    throw InsufficientDataError(std::string(who) + " needs at least 2 estimates, got " +
                                std::to_string(n));
  }
}

}  // namespace

WeightedSummary uniform_mean(const std::vector<EstimateWithVariance>& estimates) {
  require_enough(estimates.size(), "uniform_mean");
  const auto values = values_of(estimates);
  const auto n = static_cast<double>(estimates.size());
  WeightedSummary s;
  s.scheme = WeightScheme::uniform;
  s.weights.assign(estimates.size(), 1.0);
  s.mean = pairwise_mean(values);
  std::vector<double> vars(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) vars[i] = estimates[i].variance;
  s.model_variance = pairwise_sum(vars) / (n * n);
  s.se = weighted_se(values, s.weights);
  return s;
}

WeightedSummary ivw_mean(const std::vector<EstimateWithVariance>& estimates) {
  require_enough(estimates.size(), "ivw_mean");
  WeightedSummary s;
  s.scheme = WeightScheme::ivw;
  s.weights.resize(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    if (!(estimates[i].variance > 0.0)) {
      throw InfiniteWeightError("estimate " + std::to_string(i) +
                                " has non-positive variance " +
                                format_double(estimates[i].variance) +
                                "; apply a variance floor to use IVW");
    }
    s.weights[i] = 1.0 / estimates[i].variance;
  }
  const auto values = values_of(estimates);
  s.mean = weighted_mean(values, s.weights);
  std::vector<double> w = s.weights;
  s.model_variance = 1.0 / pairwise_sum(w);
  s.se = weighted_se(values, s.weights);
  s.estimated_bias = estimate_ivw_bias(values, s.weights);
  return s;
}

double weighted_mean(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size() || values.empty()) {
    throw InsufficientDataError("weighted_mean needs matching nonempty spans");
  }
  // Normalizing by the max weight keeps equal-weight inputs bit-identical
  // to the unweighted path and avoids overflow for tiny variances.
  const double wmax = *std::max_element(weights.begin(), weights.end());
  std::vector<double> wn(weights.size()), wv(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    wn[i] = weights[i] / wmax;
    wv[i] = wn[i] * values[i];
  }
  return pairwise_sum(wv) / pairwise_sum(wn);
}

double weighted_se(std::span<const double> values, std::span<const double> weights) {
  const std::size_t n = values.size();
  require_enough(n, "weighted_se");
  if (weights.size() != n) {
    throw InsufficientDataError("weighted_se needs one weight per value");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw InvalidDataError("weights must be positive");
  }
  const double mean = weighted_mean(values, weights);
  const double wmax = *std::max_element(weights.begin(), weights.end());
  std::vector<double> wn(n), wd(n);
  for (std::size_t i = 0; i < n; ++i) {
    wn[i] = weights[i] / wmax;
    const double d = values[i] - mean;
    wd[i] = wn[i] * d * d;
  }
  const double nn = static_cast<double>(n);
  const double s2 =
      (pairwise_sum(wd) / pairwise_sum(wn)) * (nn / (nn - 1.0));
  return std::sqrt(s2 / nn);
}

double estimate_ivw_bias(std::span<const double> values, std::span<const double> weights) {
  const std::size_t n = values.size();
  require_enough(n, "estimate_ivw_bias");
  if (weights.size() != n) {
    throw InsufficientDataError("estimate_ivw_bias needs one weight per value");
  }
  const double wbar = pairwise_mean(weights);
  const double vbar = pairwise_mean(values);
  std::vector<double> cross(n);
  for (std::size_t i = 0; i < n; ++i) {
    cross[i] = (weights[i] - wbar) * (values[i] - vbar);
  }
  const double cov = pairwise_sum(cross) / static_cast<double>(n - 1);
  return cov / wbar;
}

TTestResult one_sided_t_test(std::span<const double> values,
                             std::span<const double> weights, double mu0,
                             TailDirection direction) {
  const std::size_t n = values.size();
  require_enough(n, "one_sided_t_test");
  double mean, se;
  if (weights.empty()) {
    std::vector<double> ones(n, 1.0);
    mean = pairwise_mean(values);
    se = weighted_se(values, ones);
  } else {
    mean = weighted_mean(values, weights);
    se = weighted_se(values, weights);
  }
  if (!(se > 0.0)) {
    throw DegenerateStatisticError("zero standard error; t-statistic undefined");
  }
  TTestResult r;
  r.direction = direction;
  r.dof = static_cast<double>(n - 1);
  r.t = (mean - mu0) / se;
  const auto tail = student_t_tail(r.t, r.dof, direction);
  r.p_one_sided = tail.p;
  r.log10_p = tail.log10_p;
  return r;
}

}  // namespace aivat
