#include <doctest.h>

#include <cmath>
#include <random>

#include "aivat/errors.hpp"
#include "aivat/numeric.hpp"
#include "aivat/stats.hpp"

using namespace aivat;

TEST_CASE("propagate_variance quadratic forms") {
  AffineEstimate est;
  est.coeffs["a"] = 1.0;
  est.coeffs["b"] = -1.0;
  SUBCASE("identity covariance") {
    CHECK(propagate_variance(est, Eigen::MatrixXd::Identity(2, 2)) ==
          doctest::Approx(2.0));
  }
  SUBCASE("zero covariance: fully confident heuristic") {
    CHECK(propagate_variance(est, Eigen::MatrixXd::Zero(2, 2)) == 0.0);
  }
  SUBCASE("diagonal covariance reduces to the weighted sum of variances") {
    Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
    diag(0, 0) = 3.0;
    diag(1, 1) = 5.0;
    CHECK(propagate_variance(est, diag) == doctest::Approx(1.0 * 3.0 + 1.0 * 5.0));
  }
  SUBCASE("asymmetric covariance is rejected") {
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 0.5, -0.5, 1.0;
    CHECK_THROWS_AS(propagate_variance(est, bad), InvalidCovarianceError);
  }
  SUBCASE("negative eigenvalue is rejected") {
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
    CHECK_THROWS_AS(propagate_variance(est, bad), InvalidCovarianceError);
  }
  SUBCASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(propagate_variance(est, Eigen::MatrixXd::Identity(3, 3)),
                    InvalidCovarianceError);
  }
}

TEST_CASE("diagonal specialization matches the full quadratic form") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(0.1, 2.0);
  AffineEstimate est;
  for (int i = 0; i < 6; ++i) {
    est.coeffs["h" + std::to_string(i)] = dist(rng) - 1.0;
  }
  Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < 6; ++i) diag(i, i) = dist(rng);
  double by_sum = 0.0;
  const auto ids = est.coefficient_ids();
  for (int i = 0; i < 6; ++i) {
    const double c = est.coeffs.at(ids[i]);
    by_sum += c * c * diag(i, i);
  }
  CHECK(propagate_variance(est, diag) == doctest::Approx(by_sum).epsilon(1e-12));
}

TEST_CASE("uniform mean examples") {
  std::vector<EstimateWithVariance> es{{1.0, 1.0}, {3.0, 1.0}};
  auto s = uniform_mean(es);
  CHECK(s.mean == doctest::Approx(2.0));
  CHECK(s.model_variance == doctest::Approx(0.5));
  CHECK(s.scheme == WeightScheme::uniform);
  CHECK_THROWS_AS(uniform_mean({{1.0, 1.0}}), InsufficientDataError);
}

TEST_CASE("equal variances make IVW and uniform identical") {
  std::vector<EstimateWithVariance> es{{1.0, 2.0}, {3.0, 2.0}, {-0.5, 2.0}};
  auto u = uniform_mean(es);
  auto w = ivw_mean(es);
  CHECK(w.mean == u.mean);  // exact: normalized weights are exactly one
  CHECK(w.se == u.se);
  CHECK(w.model_variance == doctest::Approx(u.model_variance).epsilon(1e-15));
}

TEST_CASE("ivw mean examples") {
  SUBCASE("equal weights") {
    std::vector<EstimateWithVariance> es{{1.0, 1.0}, {3.0, 1.0}};
    auto s = ivw_mean(es);
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(s.model_variance == doctest::Approx(0.5));
  }
  SUBCASE("dominated weight") {
    std::vector<EstimateWithVariance> es{{1.0, 1.0}, {3.0, 1e6}};
    auto s = ivw_mean(es);
    CHECK(s.mean == doctest::Approx(1.000002).epsilon(1e-9));
    CHECK(s.model_variance == doctest::Approx(1.0).epsilon(1e-5));
  }
  SUBCASE("zero variance is an infinite weight") {
    std::vector<EstimateWithVariance> es{{1.0, 0.0}, {3.0, 1.0}};
    CHECK_THROWS_AS(ivw_mean(es), InfiniteWeightError);
  }
}

TEST_CASE("IVW is the minimum-variance weighting") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> var_dist(0.1, 5.0);
  std::uniform_real_distribution<double> w_dist(0.01, 10.0);
  for (int set = 0; set < 20; ++set) {
    const int n = 10;
    std::vector<double> variances(n);
    for (auto& v : variances) v = var_dist(rng);
    std::vector<double> inv(n);
    for (int i = 0; i < n; ++i) inv[i] = 1.0 / variances[i];
    const double ivw_var = 1.0 / pairwise_sum(inv);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> w(n);
      for (auto& x : w) x = w_dist(rng);
      double num = 0.0, den = 0.0;
      for (int i = 0; i < n; ++i) {
        num += w[i] * w[i] * variances[i];
        den += w[i];
      }
      CHECK(num / (den * den) >= ivw_var - 1e-12);
    }
  }
}

TEST_CASE("weighted SE worked example and reductions") {
  SUBCASE("hand-computed {0,0,4} with weights {1,1,2}") {
    std::vector<double> values{0.0, 0.0, 4.0};
    std::vector<double> weights{1.0, 1.0, 2.0};
    CHECK(weighted_mean(values, weights) == 2.0);
    CHECK(weighted_se(values, weights) == std::sqrt(2.0));  // exact
  }
  SUBCASE("equal weights reproduce the plain SE") {
    std::vector<double> values{1.0, 4.0, -2.0, 0.5};
    std::vector<double> ones(4, 1.0);
    auto plain = monte_carlo_summary(values);
    CHECK(weighted_se(values, ones) == doctest::Approx(plain.se).epsilon(1e-12));
  }
  SUBCASE("weight scale invariance") {
    std::vector<double> values{1.0, 4.0, -2.0, 0.5};
    std::vector<double> w{0.3, 1.1, 0.7, 2.2};
    std::vector<double> w10(4);
    for (int i = 0; i < 4; ++i) w10[i] = 10.0 * w[i];
    CHECK(weighted_se(values, w10) ==
          doctest::Approx(weighted_se(values, w)).epsilon(1e-12));
  }
}

TEST_CASE("ivw bias estimator") {
  SUBCASE("constant weights have zero covariance") {
    std::vector<double> values{1.0, 2.0, 3.0};
    std::vector<double> weights{2.0, 2.0, 2.0};
    CHECK(estimate_ivw_bias(values, weights) == doctest::Approx(0.0));
  }
  SUBCASE("planted covariance is recovered") {
    // w = 1 + u, v = 0.5 u + noise, u uniform on [-a, a]: Cov(w, v) = 0.5
    // Var(u); choose a so Cov/E[w] = 0.5.
    std::mt19937_64 rng(23);
    const double a = std::sqrt(3.0);  // Var(u) = a^2/3 = 1
    std::uniform_real_distribution<double> u_dist(-a, a);
    std::normal_distribution<double> noise(0.0, 0.5);
    const int n = 100000;
    std::vector<double> w(n), v(n);
    for (int i = 0; i < n; ++i) {
      const double u = u_dist(rng);
      w[i] = 2.0 + u;  // E[w] = 2
      v[i] = 1.0 * u + noise(rng);  // Cov(w, v) = Var(u) = 1; bias = 0.5
    }
    CHECK(estimate_ivw_bias(v, w) == doctest::Approx(0.5).epsilon(0.04));
  }
  SUBCASE("independent weights give a bias near zero") {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::uniform_real_distribution<double> w_dist(0.5, 1.5);
    const int n = 100000;
    std::vector<double> w(n), v(n);
    for (int i = 0; i < n; ++i) {
      w[i] = w_dist(rng);
      v[i] = noise(rng);
    }
    // SE of the covariance is about sd(w) sd(v) / sqrt(n).
    const double tol = 3.0 * (0.29 * 1.0) / std::sqrt(static_cast<double>(n));
    CHECK(std::fabs(estimate_ivw_bias(v, w)) < tol / 1.0);
  }
}

TEST_CASE("bias estimate error halves as the sample quadruples") {
  // RMS error across replicates at T and 4T; allow statistical slack around
  // the ideal factor of two.
  auto rms_error = [](int n, int reps, std::uint64_t seed) {
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
      std::mt19937_64 rng(seed + r);
      const double a = std::sqrt(3.0);
      std::uniform_real_distribution<double> u_dist(-a, a);
      std::normal_distribution<double> noise(0.0, 0.5);
      std::vector<double> w(n), v(n);
      for (int i = 0; i < n; ++i) {
        const double u = u_dist(rng);
        w[i] = 2.0 + u;
        v[i] = u + noise(rng);
      }
      const double err = estimate_ivw_bias(v, w) - 0.5;
      acc += err * err;
    }
    return std::sqrt(acc / reps);
  };
  const double coarse = rms_error(2000, 30, 100);
  const double fine = rms_error(8000, 30, 200);
  CHECK(fine < coarse * 0.7);
}

TEST_CASE("student-t distribution values") {
  // Standard table: one-sided p for t=2, dof=10 is 0.0367.
  auto tail = student_t_tail(2.0, 10.0, TailDirection::greater);
  CHECK(tail.p == doctest::Approx(0.0367).epsilon(5e-3));
  CHECK(std::fabs(tail.p - 0.0367) < 5e-4);

  // Symmetry and complementarity.
  auto less = student_t_tail(2.0, 10.0, TailDirection::less);
  CHECK(tail.p + less.p == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(student_t_cdf(0.0, 5.0) == doctest::Approx(0.5).epsilon(1e-12));

  // Large dof approaches the normal tail.
  auto z = student_t_tail(1.96, 1e6, TailDirection::greater);
  CHECK(z.p == doctest::Approx(0.025).epsilon(1e-2));
}

TEST_CASE("extreme t-statistics hand off to log10") {
  auto tail = student_t_tail(95.05, 9999.0, TailDirection::greater);
  CHECK(tail.p == 0.0);
  REQUIRE(tail.log10_p.has_value());
  CHECK(*tail.log10_p < -1000.0);
  CHECK(std::isfinite(*tail.log10_p));
  // The other side is certain.
  auto other = student_t_tail(95.05, 9999.0, TailDirection::less);
  CHECK(other.p == doctest::Approx(1.0));

  // Just inside the representable range there is no handoff.
  auto medium = student_t_tail(10.0, 30.0, TailDirection::greater);
  CHECK(medium.p > 0.0);
  CHECK(!medium.log10_p.has_value());
}

TEST_CASE("one-sided t-test") {
  std::vector<double> values{1.0, 2.0, 3.0};
  SUBCASE("mean equal to mu0 gives t = 0, p = 1/2") {
    auto r = one_sided_t_test(values, {}, 2.0, TailDirection::greater);
    CHECK(r.t == doctest::Approx(0.0));
    CHECK(r.p_one_sided == doctest::Approx(0.5));
    CHECK(r.dof == 2.0);
  }
  SUBCASE("hand-computed t") {
    auto r = one_sided_t_test(values, {}, 0.0, TailDirection::greater);
    CHECK(r.t == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
  }
  SUBCASE("direction flip complements the p-value") {
    auto g = one_sided_t_test(values, {}, 1.0, TailDirection::greater);
    auto l = one_sided_t_test(values, {}, 1.0, TailDirection::less);
    CHECK(g.p_one_sided + l.p_one_sided == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("zero deviation is degenerate") {
    std::vector<double> constant{2.0, 2.0, 2.0};
    CHECK_THROWS_AS(one_sided_t_test(constant, {}, 0.0, TailDirection::greater),
                    DegenerateStatisticError);
  }
  SUBCASE("constant weights match the unweighted test") {
    std::vector<double> w(3, 4.0);
    auto weighted = one_sided_t_test(values, w, 0.5, TailDirection::greater);
    auto plain = one_sided_t_test(values, {}, 0.5, TailDirection::greater);
    CHECK(weighted.t == doctest::Approx(plain.t).epsilon(1e-12));
    CHECK(weighted.p_one_sided == doctest::Approx(plain.p_one_sided).epsilon(1e-12));
  }
}

TEST_CASE("model variance tracks the empirical squared SE") {
  // Heteroscedastic synthetic trials: the Eq.-8 model variance should land
  // within 20% of the empirical squared standard error.
  std::mt19937_64 rng(37);
  std::normal_distribution<double> unit(0.0, 1.0);
  const int n = 10000;
  std::vector<EstimateWithVariance> es(n);
  for (int i = 0; i < n; ++i) {
    const double var = (i % 2 == 0) ? 0.5 : 3.0;
    es[i] = {unit(rng) * std::sqrt(var), var};
  }
  auto s = uniform_mean(es);
  CHECK(s.model_variance == doctest::Approx(s.se * s.se).epsilon(0.2));
}
