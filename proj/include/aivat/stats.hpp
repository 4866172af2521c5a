#ifndef AIVAT_STATS_HPP
#define AIVAT_STATS_HPP

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "aivat/estimator.hpp"

namespace aivat {

// One per-trial estimate together with its propagated heuristic variance.
struct EstimateWithVariance {
  double value = 0.0;
  double variance = 0.0;
};

enum class WeightScheme { uniform, ivw };

// Aggregated batch result. `se` is the empirical (weighted) standard error
// of the mean; `model_variance` is the variance of the (weighted) mean
// implied by the per-trial variances. Both are reported because they answer
// different questions and need not agree on finite samples.
struct WeightedSummary {
  double mean = 0.0;
  double se = 0.0;
  double model_variance = 0.0;
  std::vector<double> weights;  // unnormalized w_t
  WeightScheme scheme = WeightScheme::uniform;
  std::optional<double> estimated_bias;  // ivw only
};

enum class TailDirection { greater, less };

struct TTestResult {
  double t = 0.0;
  double dof = 0.0;
  // p in (0,1] when representable. Below 1e-300 the p field is 0 and
  // log10_p carries the (finite, negative) magnitude instead.
  double p_one_sided = 0.0;
  std::optional<double> log10_p;
  TailDirection direction = TailDirection::greater;
};

// --- Student-t distribution (via the regularized incomplete beta) ---

// Regularized incomplete beta I_x(a, b).
double regularized_incomplete_beta(double x, double a, double b);

// P(T_dof <= t) for Student's t.
double student_t_cdf(double t, double dof);

// One-sided tail probability for Student's t, with a log10 fallback that
// stays finite where the plain value underflows.
// direction greater: P(T >= t); direction less: P(T <= t).
struct TailProbability {
  double p = 0.0;                 // 0 when underflowed
  std::optional<double> log10_p;  // set when p < 1e-300
};
TailProbability student_t_tail(double t, double dof, TailDirection direction);

// --- Aggregation ---

// c^T Sigma c over the estimate's nonzero-coefficient histories, in
// AffineEstimate::coefficient_ids() order. Sigma must be symmetric with
// eigenvalues >= -1e-9.
double propagate_variance(const AffineEstimate& est, const Eigen::MatrixXd& sigma);

// Plain arithmetic mean: model variance sum(Var)/T^2, empirical se s/sqrt(T).
WeightedSummary uniform_mean(const std::vector<EstimateWithVariance>& estimates);

// Inverse-variance weighting, w_t = 1/Var(v_t): model variance 1/sum(w),
// empirical weighted se, and the covariance-based bias estimate.
WeightedSummary ivw_mean(const std::vector<EstimateWithVariance>& estimates);

// Weighted standard error of the mean:
// (s*)^2 = (sum w (x - xbar*)^2 / sum w) * (N/(N-1)), SE* = sqrt((s*)^2 / N).
double weighted_se(std::span<const double> values, std::span<const double> weights);

// Weighted sample mean sum(w x)/sum(w).
double weighted_mean(std::span<const double> values, std::span<const double> weights);

// Asymptotic bias of the weighted average: sample Cov(w, v) / mean(w),
// with the T-1 covariance divisor.
double estimate_ivw_bias(std::span<const double> values, std::span<const double> weights);

// One-sided t-test of the (weighted) mean against mu0. Pass an empty weight
// span for the unweighted test.
TTestResult one_sided_t_test(std::span<const double> values,
                             std::span<const double> weights, double mu0,
                             TailDirection direction);

}  // namespace aivat

#endif  // AIVAT_STATS_HPP
