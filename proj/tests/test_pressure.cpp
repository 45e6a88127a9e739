#include "fquant/fquant.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace fquant;

namespace {

RifsSpec random_spec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const std::size_t N = 1 + rng() % 4;
  std::vector<std::vector<std::pair<double, double>>> maps;
  std::vector<std::vector<double>> probs;
  std::vector<double> zeta;
  double zs = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t k = 2 + rng() % 3;
    std::vector<std::pair<double, double>> comp;
    std::vector<double> p;
    double ps = 0;
    for (std::size_t j = 0; j < k; ++j) {
      comp.emplace_back(0.9 / static_cast<double>(k) * u(rng), static_cast<double>(j) / static_cast<double>(k));
      p.push_back(u(rng));
      ps += p.back();
    }
    for (auto& x : p) x /= ps;
    maps.push_back(comp);
    probs.push_back(p);
    zeta.push_back(u(rng));
    zs += zeta.back();
  }
  for (auto& z : zeta) z /= zs;
  return make_interval_spec(maps, probs, zeta);
}

// Independent oracle: plain double bisection on the exponent s itself (not on z),
// f(s) = sum_i zeta_i log sum_j (p c^r)^{s/(r+s)}, over s in (0, 1e3).
double kappa_oracle(const RifsSpec& spec, double r) {
  auto f = [&](double s) {
    double t = 0;
    for (std::size_t i = 0; i < spec.components.size(); ++i) {
      double sum = 0;
      for (std::size_t j = 0; j < spec.components[i].size(); ++j)
        sum += std::pow(spec.components[i].probs[j] * std::pow(spec.components[i].maps[j].ratio, r), s / (r + s));
      t += spec.zeta[i] * std::log(sum);
    }
    return t;
  };
  double lo = 1e-12, hi = 1e3;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double expected_log_b(const RifsSpec& spec, double r, double z, double* sd = nullptr) {
  const auto logb = log_brackets(spec, r, z);
  double mean = 0, sq = 0;
  for (std::size_t i = 0; i < logb.size(); ++i) {
    mean += spec.zeta[i] * logb[i];
    sq += spec.zeta[i] * logb[i] * logb[i];
  }
  if (sd) *sd = std::sqrt(std::max(0.0, sq - mean * mean));
  return mean;
}

}  // namespace

TEST(Kappa, EqualWeightClosedForm) {
  const RifsSpec spec = fixtures::example(2);
  for (double r : {0.5, 1.0, 2.0, 4.0}) {
    const PressureSolution s = solve_kappa(spec, r);
    EXPECT_NEAR(s.exponent, std::log(2.0) / std::log(5.0), 1e-10) << "r = " << r;
    EXPECT_NEAR(s.exponent, r * s.z / (1 - s.z), 1e-12 * s.exponent);
    EXPECT_LE(std::abs(s.residual), 1e-12);
    EXPECT_LE(s.iterations, 200);
  }
}

TEST(Kappa, SingleHalvingSystem) {
  const RifsSpec spec = make_interval_spec({{{0.5, 0.0}, {0.5, 0.5}}}, {{0.5, 0.5}}, {1.0});
  EXPECT_NEAR(solve_kappa(spec, 1.0).exponent, 1.0, 1e-12);
}

TEST(Kappa, RandomSpecsResidualAndOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const RifsSpec spec = random_spec(rng);
    const double r = 0.25 + 3.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    const PressureSolution s = solve_kappa(spec, r);
    EXPECT_LE(std::abs(expected_pressure(spec, r, s.z)), 1e-12);
    EXPECT_NEAR(s.exponent, kappa_oracle(spec, r), 1e-9 * std::max(1.0, s.exponent));
  }
}

TEST(Kappa, PressureStrictlyDecreasing) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const RifsSpec spec = random_spec(rng);
    double prev = expected_pressure(spec, 1.0, 0.0);
    for (double z = 1e-3; z <= 1.0; z += 1e-3) {
      const double cur = expected_pressure(spec, 1.0, z);
      EXPECT_LT(cur, prev);
      prev = cur;
    }
  }
}

TEST(Kappa, IdenticalComponentsMatchSingleIfs) {
  const RifsSpec single = make_interval_spec({{{0.2, 0.0}, {0.3, 0.4}, {0.1, 0.85}}}, {{0.2, 0.5, 0.3}}, {1.0});
  const RifsSpec triple = make_interval_spec(
      {{{0.2, 0.0}, {0.3, 0.4}, {0.1, 0.85}}, {{0.2, 0.0}, {0.3, 0.4}, {0.1, 0.85}}, {{0.2, 0.0}, {0.3, 0.4}, {0.1, 0.85}}},
      {{0.2, 0.5, 0.3}, {0.2, 0.5, 0.3}, {0.2, 0.5, 0.3}}, {0.2, 0.3, 0.5});
  for (double r : {0.5, 1.0, 3.0}) {
    // deterministic exponent: sum_j (p_j c_j^r)^{k/(r+k)} = 1
    const double k = kappa_oracle(single, r);
    EXPECT_NEAR(solve_kappa(triple, r).exponent, k, 1e-10);
    EXPECT_NEAR(solve_kappa(single, r).exponent, k, 1e-10);
  }
}

TEST(LevelPressure, SumOverLevelIsOne) {
  const RifsSpec spec = fixtures::example(3);
  const Word omega = sample_word(spec, 6, 10);
  for (double r : {0.5, 1.0, 2.0}) {
    const PressureSolution s = solve_level_pressure(spec, omega, 10, r);
    double total = 0;
    for (const auto& m : enumerate_level(spec, omega, 10).members) total += std::exp(s.z * m.geom.log_weight(r));
    EXPECT_NEAR(total, 1.0, 1e-10);
    EXPECT_LE(std::abs(s.residual), 1e-12);
  }
}

TEST(LevelPressure, PeriodicWordIndependentOfRepetitions) {
  const RifsSpec spec = fixtures::example(3);
  const Word w = Word::periodic({0, 1, 1});
  EXPECT_NEAR(solve_level_pressure(spec, w, 3, 1.0).exponent, solve_level_pressure(spec, w, 300, 1.0).exponent, 1e-12);
}

TEST(Tnr, LevelAntichainEqualsLevelPressure) {
  const RifsSpec spec = fixtures::example(1);
  const Word omega = sample_word(spec, 2, 8);
  const Antichain level = enumerate_level(spec, omega, 8);
  EXPECT_NEAR(solve_tnr(level, 1.0).exponent, solve_level_pressure(spec, omega, 8, 1.0).exponent, 1e-12);
}

TEST(Tnr, BracketedByLevelPressures) {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const RifsSpec spec = random_spec(rng);
    const Word omega = sample_word(spec, rng(), 64);
    const double n = trial == 0 ? 37.0 : static_cast<double>(2 + rng() % 199);
    const double r = 0.5 + static_cast<double>(rng() % 4) * 0.5;
    const auto [gamma, st] = build_gamma(spec, omega, n, r);
    if (gamma.size() < 2) continue;
    const double t = solve_tnr(gamma, r).exponent;
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (std::size_t k = st.l1; k <= st.l2; ++k) {
      const double s = solve_level_pressure(spec, omega, k, r).exponent;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    EXPECT_LE(lo, t + 1e-12);
    EXPECT_LE(t, hi + 1e-12);
    ++checked;
  }
  EXPECT_GE(checked, 150);
}

TEST(LevelPressure, StrongLawOnExample3) {
  const RifsSpec spec = fixtures::example(3);
  const double kappa = solve_kappa(spec, 1.0).exponent;
  std::vector<double> medians;
  for (std::size_t n : {25u, 50u, 100u, 200u}) {
    std::vector<double> err;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
      err.push_back(std::abs(solve_level_pressure(spec, sample_word(spec, seed, n), n, 1.0).exponent - kappa));
    medians.push_back(median(err));
  }
  for (std::size_t k = 1; k < medians.size(); ++k) EXPECT_LE(medians[k], medians[k - 1]);
  EXPECT_LE(medians.back(), 0.02);
}

TEST(WindowProducts, Example2IdenticallyOne) {
  const RifsSpec spec = fixtures::example(2);
  const double kappa = solve_kappa(spec, 1.0).exponent;
  const WindowProducts wp = window_products(spec, sample_word(spec, 0, 400), 1.0, kappa, 200, 200);
  for (std::size_t n = 0; n <= 200; n += 7)
    for (std::size_t k = 1; k <= 200; k += 3) EXPECT_NEAR(wp.log_product(n, k), 0.0, 1e-12);
  EXPECT_NEAR(wp.min_product(), 1.0, 1e-12);
  EXPECT_NEAR(wp.max_product(), 1.0, 1e-12);
  EXPECT_TRUE(wp.consistent_with_omega_prime());
}

TEST(WindowProducts, Example3LetterCountIdentity) {
  const RifsSpec spec = fixtures::example(3);
  const double r = 1.0;
  const double kappa = solve_kappa(spec, r).exponent;
  const double z = kappa / (r + kappa);
  const auto logb = log_brackets(spec, r, z);
  EXPECT_NEAR(logb[0] + logb[1], 0.0, 1e-12);  // B_1 B_2 = 1
  const Word omega = sample_word(spec, 3, 2000);
  const WindowProducts wp = window_products(spec, omega, r, kappa, 0, 2000);
  long long ones = 0, twos = 0;
  for (std::size_t n = 1; n <= 2000; ++n) {
    (omega.at(n - 1) == 0 ? ones : twos) += 1;
    EXPECT_NEAR(wp.log_product(0, n), static_cast<double>(twos - ones) * logb[1], 1e-10);
  }
}

TEST(WindowProducts, SingleComponentIsOne) {
  const RifsSpec spec = make_interval_spec({{{0.3, 0.0}, {0.2, 0.5}}}, {{0.4, 0.6}}, {1.0});
  const double kappa = solve_kappa(spec, 2.0).exponent;
  const WindowProducts wp = window_products(spec, sample_word(spec, 0, 100), 2.0, kappa, 50, 50);
  EXPECT_NEAR(wp.min_log(), 0.0, 1e-12);
  EXPECT_NEAR(wp.max_log(), 0.0, 1e-12);
}

TEST(WindowProducts, ExtremaMatchFullGrid) {
  const RifsSpec spec = fixtures::example(3);
  const double kappa = solve_kappa(spec, 1.0).exponent;
  const WindowProducts wp = window_products(spec, sample_word(spec, 8, 200), 1.0, kappa, 60, 40);
  double lo = 1e300, hi = -1e300;
  for (std::size_t n = 0; n <= 60; ++n)
    for (std::size_t k = 1; k <= 40; ++k) {
      lo = std::min(lo, wp.log_product(n, k));
      hi = std::max(hi, wp.log_product(n, k));
    }
  EXPECT_DOUBLE_EQ(wp.min_log(), lo);
  EXPECT_DOUBLE_EQ(wp.max_log(), hi);
  const auto m = wp.matrix();
  EXPECT_NEAR(std::log(m[5][9]), wp.log_product(5, 10), 1e-12);
  std::ostringstream os;
  wp.write_csv(os);
  EXPECT_EQ(os.str().substr(0, 21), "n;nprime;log_product\n");
}

TEST(Ergodic, HomogeneousIsZero) {
  const RifsSpec spec = fixtures::example(2);
  const double kappa = solve_kappa(spec, 1.0).exponent;
  const Word omega = sample_word(spec, 1, 100);
  for (std::size_t n : {1u, 10u, 100u}) EXPECT_NEAR(ergodic_average(spec, omega, 1.0, kappa / (1 + kappa), n), 0.0, 1e-15);
}

TEST(Ergodic, Example3CentralLimitScale) {
  const RifsSpec spec = fixtures::example(3);
  const double kappa = solve_kappa(spec, 1.0).exponent;
  const double z0 = kappa / (1 + kappa);
  const std::size_t n = 10000;
  double sd = 0;
  EXPECT_NEAR(expected_log_b(spec, 1.0, z0, &sd), 0.0, 1e-12);
  const double avg = ergodic_average(spec, sample_word(spec, 0, n), 1.0, z0, n);
  EXPECT_LE(std::abs(avg), 3 * sd / std::sqrt(static_cast<double>(n)));

  const double z = 0.5 * z0;
  const double mean = expected_log_b(spec, 1.0, z, &sd);
  EXPECT_GT(mean, 0.0);
  const double avg_low = ergodic_average(spec, sample_word(spec, 0, n), 1.0, z, n);
  EXPECT_NEAR(avg_low, mean, 3 * sd / std::sqrt(static_cast<double>(n)));
  const auto series = ergodic_series(spec, sample_word(spec, 0, n), 1.0, z, n);
  EXPECT_DOUBLE_EQ(series.back(), avg_low);
}

TEST(LeastSquares, ExactLine) {
  const LinearFit f = least_squares({1, 2, 3, 4}, {3, 5, 7, 9});
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.stderr_slope, 0.0, 1e-14);
}
