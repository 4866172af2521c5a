// Acceptance suite: one check per release criterion, each printing a single
// [PASS]/[FAIL] line. Run with a criterion number (1..14) or no argument for
// all. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "aivat/cards.hpp"
#include "aivat/errors.hpp"
#include "aivat/estimator.hpp"
#include "aivat/hands.hpp"
#include "aivat/heuristics.hpp"
#include "aivat/kuhn.hpp"
#include "aivat/leduc.hpp"
#include "aivat/numeric.hpp"
#include "aivat/pathology.hpp"
#include "aivat/simulate.hpp"
#include "aivat/stats.hpp"
#include "poker_oracle.hpp"

using namespace aivat;

namespace {

struct Outcome {
  bool passed = false;
  std::string details;
};

double exact_expectation(const Game& game, const StrategyProfile& profile,
                         const std::vector<AffineEstimate>& decomps,
                         const std::vector<double>& reaches,
                         const HeuristicModel& heuristic) {
  std::vector<double> terms(decomps.size());
  for (std::size_t i = 0; i < decomps.size(); ++i) {
    terms[i] = reaches[i] * evaluate_affine(decomps[i], heuristic);
  }
  (void)game;
  (void)profile;
  return pairwise_sum(terms);
}

// --- Criterion 1: exact unbiasedness on Kuhn and Leduc -----------------

Outcome criterion_unbiasedness() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const bool leduc : {false, true}) {
    KuhnPoker kuhn;
    LeducPoker leduc_game;
    const Game& game = leduc ? static_cast<const Game&>(leduc_game)
                             : static_cast<const Game&>(kuhn);
    auto profile = uniform_profile(game);
    EstimatorConfig config;
    config.known_players = {0, 1};
    config.use_imaginary_observations = true;
    const double truth = expected_value_exact(game, profile, 0);

    std::vector<AffineEstimate> decomps;
    std::vector<double> reaches;
    for_each_terminal(game, [&](const History& z, double) {
      decomps.push_back(decompose_affine(game, z, profile, config));
      reaches.push_back(reach_probability(game, profile, z).total);
    });

    std::mt19937_64 rng(leduc ? 11 : 7);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int h = 0; h < 100; ++h) {
      TabularHeuristic heuristic;
      for (const auto& est : decomps) {
        for (const auto& [id, c] : est.coeffs) heuristic.set(id, dist(rng));
      }
      worst = std::max(worst, std::fabs(exact_expectation(game, profile, decomps,
                                                          reaches, heuristic) -
                                        truth));
    }

    // Pathology-trained heuristic: attack a sampled dataset, then check the
    // exact expectation with the trained table.
    EstimatorConfig mivat;  // chance-only
    std::vector<AffineEstimate> sample;
    for (int t = 0; t < 300; ++t) {
      sample.push_back(decompose_affine(
          game, sample_playout(game, profile, 5000 + t), profile, mivat));
    }
    auto data = PathologyDataset::from_estimates(sample);
    AdamConfig adam;
    adam.learning_rate = 0.5;
    adam.iterations = 250;
    auto trained = optimize({ObjectiveKind::SampleVariance, 0.0}, data, adam,
                            Eigen::VectorXd::Zero(data.dimension()));
    TabularHeuristic attacked;
    for (int i = 0; i < data.dimension(); ++i) {
      attacked.set(data.parameter_ids[i], trained.theta[i]);
    }
    std::vector<AffineEstimate> mivat_decomps;
    std::vector<double> mivat_reaches;
    for_each_terminal(game, [&](const History& z, double) {
      mivat_decomps.push_back(decompose_affine(game, z, profile, mivat));
      mivat_reaches.push_back(reach_probability(game, profile, z).total);
    });
    worst = std::max(
        worst, std::fabs(exact_expectation(game, profile, mivat_decomps,
                                           mivat_reaches, attacked) -
                         truth));
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  Outcome out;
  out.passed = worst < 1e-10 && elapsed < 10.0;
  out.details = "worst |E[estimate] - E[value]| = " + format_double(worst) +
                ", runtime " + format_double(elapsed) + " s";
  return out;
}

// --- Criterion 2: variance reduction with the true-value heuristic -----

Outcome criterion_variance_reduction() {
  KuhnPoker game;
  auto profile = uniform_profile(game);
  GameValueHeuristic heuristic(game, profile, 0);
  EstimatorConfig config;
  config.known_players = {0, 1};
  config.use_imaginary_observations = true;
  const double truth = expected_value_exact(game, profile, 0);

  double raw_second = 0.0, est_second = 0.0, est_mean = 0.0;
  for_each_terminal(game, [&](const History& z, double) {
    const double pi = reach_probability(game, profile, z).total;
    const double u = game.utility(z, 0);
    const double v = aivat_estimate(game, z, profile, config, heuristic);
    raw_second += pi * u * u;
    est_second += pi * v * v;
    est_mean += pi * v;
  });
  const double raw_var = raw_second - truth * truth;
  const double est_var = est_second - est_mean * est_mean;
  Outcome out;
  out.passed = est_var < raw_var;
  out.details = "raw variance " + format_double(raw_var) + ", estimator variance " +
                format_double(est_var) + ", ratio " +
                format_double(est_var / raw_var);
  return out;
}

// --- Criterion 3: Adam reaches the closed-form optimum -----------------

Outcome criterion_normal_equation() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  std::uniform_int_distribution<int> pick(0, 199);
  PathologyDataset data;
  for (int i = 0; i < 200; ++i) {
    data.parameter_ids.push_back("p" + std::to_string(i));
    data.parameter_index.emplace(data.parameter_ids.back(), i);
  }
  for (int t = 0; t < 400; ++t) {
    PathologyDataset::Trial trial;
    trial.b = 3.0 * value(rng);
    std::set<int> used;
    for (int k = 0; k < 6; ++k) used.insert(pick(rng));
    for (int idx : used) trial.coeffs.emplace_back(idx, value(rng));
    data.trials.push_back(std::move(trial));
  }
  std::vector<std::pair<double, Eigen::VectorXd>> rows;
  for (const auto& trial : data.trials) {
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(200);
    for (const auto& [idx, c] : trial.coeffs) psi[idx] += c;
    rows.emplace_back(trial.b, psi);
  }
  const auto theta_star = closed_form_theta(rows);
  const auto at_star = sample_variance_cost(theta_star, data);

  ObjectiveSpec spec{ObjectiveKind::SampleVariance, 0.0};
  AdamConfig coarse;
  coarse.learning_rate = 0.5;
  coarse.iterations = 4000;
  auto stage1 = optimize(spec, data, coarse, Eigen::VectorXd::Zero(200));
  AdamConfig fine = coarse;
  fine.learning_rate = 0.01;
  fine.iterations = 4000;
  auto stage2 = optimize(spec, data, fine, stage1.theta);

  const double relative =
      (stage2.trace.back() - at_star.value) / std::max(1e-300, at_star.value);
  const double grad_scale = std::max(1.0, at_star.value);
  const double grad_norm = at_star.gradient.cwiseAbs().maxCoeff() / grad_scale;
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  Outcome out;
  out.passed = relative < 1e-4 && grad_norm < 1e-8 && elapsed < 30.0;
  out.details = "Adam cost within " + format_double(relative) +
                " relative of the closed form, scaled gradient sup-norm " +
                format_double(grad_norm) + ", runtime " + format_double(elapsed) +
                " s";
  return out;
}

// --- Criterion 4: pathology attacks on a 1000-hand Leduc corpus --------

Outcome criterion_pathology_analogues() {
  const auto start = std::chrono::steady_clock::now();
  auto hands = simulate_corpus("leduc", 1000, 404);
  std::vector<AffineEstimate> estimates;
  estimates.reserve(hands.size());
  for (const auto& hand : hands) {
    estimates.push_back(mivat_decompose_hand(hand, TrackedEvents::all(), 0));
  }
  auto data = PathologyDataset::from_estimates(estimates);

  AdamConfig adam;  // the reference configuration
  adam.learning_rate = 100.0;
  adam.beta1 = 0.9;
  adam.beta2 = 0.999;
  adam.weight_decay = 0.0;
  adam.iterations = 250;
  auto variance = optimize({ObjectiveKind::SampleVariance, 0.0}, data, adam,
                           Eigen::VectorXd::Zero(data.dimension()));
  const double ratio = variance.trace.back() / variance.trace.front();

  AdamConfig tstat_adam = adam;
  tstat_adam.iterations = 10;
  auto report = phack_report(data, tstat_adam, 0.0);
  const double p_losing = report.losing.log10_p.has_value()
                              ? std::pow(10.0, *report.losing.log10_p)
                              : report.losing.p_one_sided;
  const double p_winning = report.winning.log10_p.has_value()
                               ? std::pow(10.0, *report.winning.log10_p)
                               : report.winning.p_one_sided;
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  Outcome out;
  out.passed = ratio < 0.01 && report.losing.t < -5.0 && report.winning.t > 5.0 &&
               p_losing < 1e-6 && p_winning < 1e-6 && elapsed < 120.0;
  out.details = "variance ratio " + format_double(ratio) + ", t " +
                format_double(report.losing.t) + " / " +
                format_double(report.winning.t) + ", runtime " +
                format_double(elapsed) + " s";
  return out;
}

// --- Criterion 5: analytic gradients vs central differences ------------

Outcome criterion_gradients() {
  double worst = 0.0;
  for (int seed = 0; seed < 50; ++seed) {
    std::mt19937_64 rng(900 + seed);
    std::uniform_real_distribution<double> value(-2.0, 2.0);
    std::uniform_int_distribution<int> pick(0, 19);
    PathologyDataset data;
    for (int i = 0; i < 20; ++i) {
      data.parameter_ids.push_back("p" + std::to_string(i));
      data.parameter_index.emplace(data.parameter_ids.back(), i);
    }
    for (int t = 0; t < 40; ++t) {
      PathologyDataset::Trial trial;
      trial.b = 3.0 * value(rng);
      std::set<int> used;
      for (int k = 0; k < 4; ++k) used.insert(pick(rng));
      for (int idx : used) trial.coeffs.emplace_back(idx, value(rng));
      data.trials.push_back(std::move(trial));
    }
    Eigen::VectorXd theta(20);
    for (int i = 0; i < 20; ++i) theta[i] = value(rng);

    for (const bool tstat : {false, true}) {
      auto f = [&](const Eigen::VectorXd& th) {
        return tstat ? t_statistic(th, data, 0.0) : sample_variance_cost(th, data);
      };
      const auto at_theta = f(theta);
      const double step = 1e-5;
      for (int i = 0; i < 20; ++i) {
        Eigen::VectorXd up = theta, down = theta;
        up[i] += step;
        down[i] -= step;
        const double fd = (f(up).value - f(down).value) / (2.0 * step);
        const double denom = std::max(1.0, std::fabs(fd));
        worst = std::max(worst, std::fabs(fd - at_theta.gradient[i]) / denom);
      }
    }
  }
  Outcome out;
  out.passed = worst < 1e-5;
  out.details = "worst relative error " + format_double(worst);
  return out;
}

// --- Criterion 6: IVW optimality -----------------------------------------

Outcome criterion_ivw_optimality() {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> var_dist(0.05, 8.0);
  std::uniform_real_distribution<double> w_dist(0.001, 20.0);
  bool optimal = true;
  for (int set = 0; set < 100 && optimal; ++set) {
    std::vector<double> variances(12);
    for (auto& v : variances) v = var_dist(rng);
    double inv_sum = 0.0;
    for (double v : variances) inv_sum += 1.0 / v;
    const double ivw_var = 1.0 / inv_sum;
    for (int trial = 0; trial < 1000; ++trial) {
      double num = 0.0, den = 0.0;
      for (double v : variances) {
        const double w = w_dist(rng);
        num += w * w * v;
        den += w;
      }
      if (num / (den * den) < ivw_var - 1e-12) {
        optimal = false;
        break;
      }
    }
  }
  // Equal variances: IVW and uniform agree exactly.
  std::vector<EstimateWithVariance> es;
  std::mt19937_64 vrng(62);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int i = 0; i < 333; ++i) es.push_back({noise(vrng), 1.7});
  auto uni = uniform_mean(es);
  auto ivw = ivw_mean(es);
  const bool exact_match = uni.mean == ivw.mean && uni.se == ivw.se;
  Outcome out;
  out.passed = optimal && exact_match;
  out.details = std::string("all alternative weightings at or above the IVW "
                            "variance: ") +
                (optimal ? "yes" : "no") +
                "; equal-variance IVW equals uniform exactly: " +
                (exact_match ? "yes" : "no");
  return out;
}

// --- Criterion 7: bias estimator ---------------------------------------

Outcome criterion_bias_estimator() {
  std::mt19937_64 rng(71);
  const double a = std::sqrt(3.0);  // Var(u) = 1
  std::uniform_real_distribution<double> u_dist(-a, a);
  std::normal_distribution<double> noise(0.0, 0.5);
  const int n = 100000;
  std::vector<double> w(n), v(n);
  for (int i = 0; i < n; ++i) {
    const double u = u_dist(rng);
    w[i] = 2.0 + u;              // E[w] = 2
    v[i] = u + noise(rng);       // Cov(w, v) = 1, so bias = 0.5
  }
  const double planted = estimate_ivw_bias(v, w);

  std::vector<double> w2(n), v2(n);
  std::uniform_real_distribution<double> w_dist(0.5, 1.5);
  for (int i = 0; i < n; ++i) {
    w2[i] = w_dist(rng);
    v2[i] = noise(rng);
  }
  const double independent = estimate_ivw_bias(v2, w2);
  // SE of Cov(w,v)/E[w]: sd(w) sd(v) / (E[w] sqrt(n)).
  const double se = (std::sqrt(1.0 / 12.0) * 0.5) / (1.0 * std::sqrt(n));
  Outcome out;
  out.passed = std::fabs(planted - 0.5) < 0.02 && std::fabs(independent) < 3 * se;
  out.details = "planted-bias estimate " + format_double(planted) +
                " (target 0.5 +- 0.02), independent-weights estimate " +
                format_double(independent) + " (|.| < " + format_double(3 * se) +
                ")";
  return out;
}

// --- Criterion 8: IVW SE reduction vs the analytic prediction ----------

Outcome criterion_ivw_reduction() {
  std::mt19937_64 rng(81);
  std::normal_distribution<double> unit(0.0, 1.0);
  const int n = 20000;
  const double low = 1.0, high = 10.0;
  std::vector<EstimateWithVariance> es(n);
  for (int i = 0; i < n; ++i) {
    const double var = (i % 2 == 0) ? low : high;
    es[i] = {0.3 + unit(rng) * std::sqrt(var), var};
  }
  auto uni = uniform_mean(es);
  auto ivw = ivw_mean(es);
  const double measured = ivw.se / uni.se;
  // Model prediction: sqrt((1/sum 1/V) / (sum V / T^2)).
  const double analytic = std::sqrt(ivw.model_variance / uni.model_variance);
  Outcome out;
  out.passed =
      ivw.se < uni.se && std::fabs(measured - analytic) / analytic < 0.20;
  out.details = "uniform SE " + format_double(uni.se) + ", IVW weighted SE " +
                format_double(ivw.se) + ", measured ratio " +
                format_double(measured) + " vs analytic " +
                format_double(analytic);
  return out;
}

// --- Criterion 9: kernel equivalence ------------------------------------

Outcome criterion_kernel_equivalence() {
  const int d = 3, n = 5;
  FeatureMap fm;
  fm.dimension = d;
  fm.phi = [d](const std::string& id) {
    std::mt19937_64 rng(std::hash<std::string>{}(id));
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = dist(rng);
    return v;
  };
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double prior = 0.8, noise_var = 0.2;
  Eigen::MatrixXd train(n, d);
  Eigen::VectorXd targets(n);
  std::vector<std::pair<Eigen::VectorXd, double>> data;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) x[j] = dist(rng);
    const double y = 2.0 * dist(rng);
    train.row(i) = x.transpose();
    targets[i] = y;
    data.emplace_back(x, y);
  }
  auto model = fit_bayesian_linear(data, prior, noise_var, fm);

  Eigen::MatrixXd gram = prior * (train * train.transpose());
  gram.diagonal().array() += noise_var;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);

  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    Eigen::VectorXd x(d);
    for (int j = 0; j < d; ++j) x[j] = dist(rng);
    Eigen::VectorXd k_star = prior * (train * x);
    const double kernel_mean = k_star.dot(llt.solve(targets));
    const double kernel_var = prior * x.dot(x) - k_star.dot(llt.solve(k_star));
    worst = std::max(worst, std::fabs(kernel_mean - model.predictive_mean(x)));
    worst = std::max(worst,
                     std::fabs(kernel_var - model.predictive_variance(x, false)));
  }
  Outcome out;
  out.passed = worst < 1e-8;
  out.details = "worst |weight-space - kernel-space| = " + format_double(worst);
  return out;
}

// --- Criterion 10: hyperplane singularity --------------------------------

Outcome criterion_hyperplane() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<std::pair<double, Eigen::VectorXd>> data;
  for (int t = 0; t < 40; ++t) {
    Eigen::VectorXd psi(4);
    psi << 2.0, dist(rng), dist(rng), dist(rng);  // constant first coordinate
    data.emplace_back(dist(rng), psi);
  }
  bool threw = false;
  try {
    closed_form_theta(data);
  } catch (const HyperplaneDegeneracyError&) {
    threw = true;
  }
  bool solved = false;
  auto perturbed = data;
  for (auto& [b, psi] : perturbed) psi[0] += 1e-3 * dist(rng);
  try {
    closed_form_theta(perturbed);
    solved = true;
  } catch (const HyperplaneDegeneracyError&) {
  }
  Outcome out;
  out.passed = threw && solved;
  out.details = std::string("singularity raised on the hyperplane: ") +
                (threw ? "yes" : "no") +
                "; 1e-3 perturbation restores solvability: " +
                (solved ? "yes" : "no");
  return out;
}

// --- Criterion 11: weighted SE -------------------------------------------

Outcome criterion_weighted_se() {
  std::mt19937_64 rng(111);
  std::normal_distribution<double> noise(0.0, 2.0);
  std::vector<double> values(97);
  for (auto& v : values) v = noise(rng);
  std::vector<double> ones(values.size(), 1.0);
  const auto plain = monte_carlo_summary(values);
  const double equal_err = std::fabs(weighted_se(values, ones) - plain.se);

  std::vector<double> worked_values{0.0, 0.0, 4.0};
  std::vector<double> worked_weights{1.0, 1.0, 2.0};
  const double worked = weighted_se(worked_values, worked_weights);
  const bool exact = worked == std::sqrt(2.0);
  Outcome out;
  out.passed = equal_err < 1e-12 && exact;
  out.details = "equal-weight deviation " + format_double(equal_err) +
                ", worked example returns sqrt(2) exactly: " +
                (exact ? "yes" : "no");
  return out;
}

// --- Criterion 12: Student-t p-values ------------------------------------

Outcome criterion_student_t() {
  const auto table = student_t_tail(2.0, 10.0, TailDirection::greater);
  const double table_err = std::fabs(table.p - 0.0367);

  const auto extreme = student_t_tail(95.05, 9999.0, TailDirection::greater);
  const bool handoff = extreme.p == 0.0 && extreme.log10_p.has_value() &&
                       std::isfinite(*extreme.log10_p) && *extreme.log10_p < -300.0;
  const auto medium = student_t_tail(35.0, 9999.0, TailDirection::greater);
  const bool representable = medium.p > 0.0 && !medium.log10_p.has_value();
  Outcome out;
  out.passed = table_err < 5e-4 && handoff && representable;
  out.details = "p(t=2, dof=10) = " + format_double(table.p) +
                " (table 0.0367), extreme log10 p = " +
                format_double(extreme.log10_p.value_or(0.0));
  return out;
}

// --- Criterion 13: poker stack -------------------------------------------

Outcome criterion_poker() {
  std::mt19937_64 rng(131313);
  int mismatches = 0;
  for (int trial = 0; trial < 100000; ++trial) {
    std::array<int, 52> deck;
    for (int i = 0; i < 52; ++i) deck[i] = i;
    std::array<Card, 7> seven;
    for (int k = 0; k < 7; ++k) {
      const int pick =
          k + static_cast<int>(uniform01(rng()) * static_cast<double>(52 - k));
      std::swap(deck[k], deck[pick]);
      seven[k] = Card::from_id(deck[k]);
    }
    if (evaluate_7card(seven) != test_oracle::naive_eval_7card(seven)) {
      ++mismatches;
    }
  }

  std::array<Card, 2> hole{parse_card("8h"), parse_card("9h")};
  std::vector<Card> river_board{parse_card("2c"), parse_card("7d"), parse_card("Th"),
                                parse_card("Jh"), parse_card("As")};
  auto once = hand_strength(hole, river_board, ExactMode{});
  auto twice = hand_strength(hole, river_board, ExactMode{});
  const bool deterministic = once.hs == twice.hs && once.hs2 == twice.hs2;

  std::vector<Card> turn_board{parse_card("2c"), parse_card("7d"), parse_card("Ts"),
                               parse_card("3h")};
  std::array<Card, 2> turn_hole{parse_card("Ah"), parse_card("Kd")};
  auto exact = hand_strength(turn_hole, turn_board, ExactMode{});
  McMode mc;
  mc.samples = 100000;
  mc.seed = 1333;
  auto sampled = hand_strength(turn_hole, turn_board, mc);
  const double mc_err = std::fabs(sampled.hs - exact.hs);

  Outcome out;
  out.passed = mismatches == 0 && deterministic && mc_err < 0.01;
  out.details = std::to_string(mismatches) +
                " oracle mismatches in 100000 draws; turn MC error " +
                format_double(mc_err);
  return out;
}

// --- Criterion 14: end-to-end determinism --------------------------------

Outcome criterion_determinism() {
  const char* cli = std::getenv("AIVAT_CLI");
  Outcome out;
  if (cli == nullptr || *cli == '\0') {
    out.passed = false;
    out.details = "AIVAT_CLI is not set; cannot spawn the binary";
    return out;
  }
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "aivat_acceptance_c14";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto shell = [&](const std::string& command) {
    return std::system((command + " > /dev/null 2>&1").c_str()) == 0;
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
  };
  bool ok = true;
  for (int run = 1; run <= 2 && ok; ++run) {
    const std::string tag = std::to_string(run);
    const std::string corpus = (dir / ("corpus" + tag + ".jsonl")).string();
    const std::string csv = (dir / ("summary" + tag + ".csv")).string();
    ok &= shell(std::string(cli) + " simulate --game leduc --hands 300 --seed 77 -o " +
                corpus);
    ok &= shell(std::string(cli) + " eval -i " + corpus +
                " --scheme mivat --heuristic bayes-linear --kfold 5 --track all "
                "--weighting ivw -o " +
                csv);
  }
  if (!ok) {
    out.passed = false;
    out.details = "CLI invocation failed";
    fs::remove_all(dir);
    return out;
  }
  const bool corpora_match =
      slurp(dir / "corpus1.jsonl") == slurp(dir / "corpus2.jsonl");
  const bool summaries_match =
      slurp(dir / "summary1.csv") == slurp(dir / "summary2.csv");
  const bool nonempty = !slurp(dir / "summary1.csv").empty();
  fs::remove_all(dir);
  out.passed = corpora_match && summaries_match && nonempty;
  out.details = std::string("corpora byte-identical: ") +
                (corpora_match ? "yes" : "no") +
                "; summary CSVs byte-identical: " + (summaries_match ? "yes" : "no");
  return out;
}

struct Criterion {
  int number;
  const char* name;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "unbiasedness under random and attacked heuristics", criterion_unbiasedness},
      {2, "variance reduction with the true-value heuristic", criterion_variance_reduction},
      {3, "Adam matches the closed-form variance optimum", criterion_normal_equation},
      {4, "pathology attacks on a 1000-hand Leduc corpus", criterion_pathology_analogues},
      {5, "analytic gradients match central differences", criterion_gradients},
      {6, "inverse-variance weighting is optimal", criterion_ivw_optimality},
      {7, "weighted-average bias estimator", criterion_bias_estimator},
      {8, "IVW standard-error reduction matches the model", criterion_ivw_reduction},
      {9, "weight-space and kernel-space posteriors agree", criterion_kernel_equivalence},
      {10, "hyperplane degeneracy is detected and recoverable", criterion_hyperplane},
      {11, "weighted standard error", criterion_weighted_se},
      {12, "Student-t tail probabilities", criterion_student_t},
      {13, "poker evaluator and hand strength", criterion_poker},
      {14, "end-to-end CLI determinism", criterion_determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failures = 0;
  for (const auto& criterion : criteria()) {
    if (only != 0 && criterion.number != only) continue;
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome.passed = false;
      outcome.details = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s - %s\n", outcome.passed ? "PASS" : "FAIL",
                criterion.number, criterion.name, outcome.details.c_str());
    if (!outcome.passed) ++failures;
  }
  return failures;
}
