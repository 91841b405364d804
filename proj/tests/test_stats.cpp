#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "kalikow/random.hpp"
#include "kalikow/stats.hpp"
#include "test_support.hpp"

using namespace kalikow;

TEST_CASE("rate_test") {
  // 1.8 * 1000 = 1800 expected, sd = sqrt(1800) ~ 42.4
  CHECK(stats::rate_test(1800, 1.8, 1000.0, 0.05).passed);
  CHECK(stats::rate_test(1800, 1.8, 1000.0, 0.05).z == 0.0);
  CHECK(stats::rate_test(1880, 1.8, 1000.0, 0.05).passed);
  CHECK_FALSE(stats::rate_test(1890, 1.8, 1000.0, 0.05).passed);
  CHECK(stats::rate_test(1890, 1.8, 1000.0, 0.05).z == doctest::Approx(90.0 / std::sqrt(1800.0)));
  CHECK_FALSE(stats::rate_test(1700, 1.8, 1000.0, 0.05).passed);

  SUBCASE("calibrated on Poisson counts") {
    RandomStream rng(3);
    constexpr int trials = 2000;
    constexpr double alpha = 0.05;
    int passed = 0;
    for (int k = 0; k < trials; ++k) {
      passed += stats::rate_test(rng.poisson(1800.0), 1.8, 1000.0, alpha).passed ? 1 : 0;
    }
    const double slack = 3.0 * std::sqrt(alpha * (1 - alpha) / trials);
    CHECK(static_cast<double>(passed) / trials >= 1.0 - alpha - slack);
  }
}

TEST_CASE("normal quantile and survival") {
  CHECK(stats::normal_quantile(0.975) == doctest::Approx(1.959963984540054));
  CHECK(stats::normal_quantile(0.5) == doctest::Approx(0.0));
  CHECK(stats::normal_survival(1.959963984540054) == doctest::Approx(0.025));
  CHECK(stats::normal_survival(0.0) == doctest::Approx(0.5));
}

TEST_CASE("kolmogorov_survival") {
  CHECK(stats::kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(stats::kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
  CHECK(stats::kolmogorov_survival(0.1) == 1.0);
  for (double x : {0.5, 0.8, 1.0, 1.5, 2.0}) {
    CHECK(stats::kolmogorov_survival(x) == doctest::Approx(kalikow::testing::kolmogorov_q(x)));
  }
}

TEST_CASE("ks_two_sample") {
  RandomStream rng(8);
  std::vector<double> a(1000), b(1000);
  for (auto& x : a) x = rng.uniform();

  const auto same = stats::ks_two_sample(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);

  for (auto& x : b) x = 0.5 + rng.uniform();
  const auto shifted = stats::ks_two_sample(a, b);
  CHECK(std::abs(shifted.statistic - 0.5) < 0.05);
  CHECK(shifted.p_value < 1e-10);

  const std::vector<double> small(19, 1.0);
  CHECK_THROWS_AS(stats::ks_two_sample(small, a), stats::InsufficientData);
  CHECK_THROWS_AS(stats::ks_two_sample(a, small), stats::InsufficientData);

  SUBCASE("rejection rate under the null is at most alpha") {
    constexpr int trials = 1000;
    constexpr double alpha = 0.05;
    int rejected = 0;
    for (int k = 0; k < trials; ++k) {
      std::vector<double> x(200), y(300);
      for (auto& v : x) v = rng.exponential(1.0);
      for (auto& v : y) v = rng.exponential(1.0);
      rejected += stats::ks_two_sample(x, y).p_value < alpha ? 1 : 0;
    }
    const double slack = 3.0 * std::sqrt(alpha * (1 - alpha) / trials);
    CHECK(static_cast<double>(rejected) / trials <= alpha + slack);
  }
}

TEST_CASE("mann_whitney") {
  const std::vector<double> lo{1, 2, 3, 4, 5}, hi{6, 7, 8, 9, 10};
  const auto r = stats::mann_whitney(hi, lo);
  CHECK(r.u == 25.0);
  CHECK(r.z > 2.0);
  CHECK(r.p_greater < 0.01);
  CHECK(stats::mann_whitney(lo, hi).u == 0.0);
  CHECK(stats::mann_whitney(lo, hi).p_greater > 0.99);

  // Ties count one half.
  const std::vector<double> x{1, 2, 2}, y{2, 3};
  CHECK(stats::mann_whitney(x, y).u == doctest::Approx(1.0));

  const std::vector<double> flat(10, 4.0);
  CHECK(stats::mann_whitney(flat, flat).p_greater == doctest::Approx(0.5));
}

TEST_CASE("summaries") {
  const std::vector<double> xs{3, 1, 2, 10};
  CHECK(stats::mean(xs) == 4.0);
  CHECK(stats::median(xs) == 2.5);
  CHECK(stats::variance(xs) == doctest::Approx(50.0 / 3.0));
  const std::vector<double> odd{5, 1, 3};
  CHECK(stats::median(odd) == 3.0);
}
