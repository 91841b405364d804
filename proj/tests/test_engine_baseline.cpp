#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "kalikow/engine_baseline.hpp"
#include "kalikow/stats.hpp"
#include "test_support.hpp"

using namespace kalikow;

namespace {

FiniteHawkesModel lone(double w, double nu, double memory, double bound) {
  return FiniteHawkesModel({NeuronId{0, 0}}, {{w}}, {nu}, memory, bound);
}

std::size_t total(const SpikeTrains& trains) {
  std::size_t n = 0;
  for (const auto& t : trains) n += t.size();
  return n;
}

// Integrates the no-new-spike intensity on a fine grid until it reaches `target`.
double brute_inverse(const FiniteHawkesModel& m, const SpikeTrains& h, double t, double target) {
  constexpr double step = 1e-5;
  double acc = 0.0, s = t;
  while (true) {
    const double rate = intensity_without_new_spikes(m, h, 0, s + step / 2, t);
    if (acc + rate * step >= target) return s + (target - acc) / rate;
    acc += rate * step;
    s += step;
  }
}

}  // namespace

TEST_CASE("no coupling gives Poisson(nu) for every variant") {
  const auto m = lone(0.0, 1.8, 1.0, 2.0);
  const double L = 2000.0;
  const auto inv = simulate_ogata_inverse(m, 0.0, L, 1);
  const auto thin = simulate_ogata_thinning(m, 0.0, L, 2);
  const auto thin4 = simulate_ogata_thinning(m, 0.0, L, 3, 4.0);  // accept rate nu / 4
  const auto full = simulate_kalikow_full(m, 0.0, L, 4);
  for (const auto* trains : {&inv, &thin, &thin4, &full}) {
    CHECK(stats::rate_test(total(*trains), 1.8, L, 0.003).passed);
    CHECK(std::is_sorted((*trains)[0].begin(), (*trains)[0].end()));
  }
}

TEST_CASE("intensity_without_new_spikes") {
  const FiniteHawkesModel m({NeuronId{0, 0}, NeuronId{1, 0}}, {{0.0, 0.3}, {0.0, 0.0}},
                            {0.2, 0.2}, 1.0, 2.0);
  const SpikeTrains h{{}, {2.0}};
  CHECK(intensity_without_new_spikes(m, h, 0, 2.1, 2.1) == doctest::Approx(0.5));
  CHECK(intensity_without_new_spikes(m, h, 0, 2.9, 2.1) == doctest::Approx(0.5));
  CHECK(intensity_without_new_spikes(m, h, 0, 3.0, 2.1) == doctest::Approx(0.5));
  CHECK(intensity_without_new_spikes(m, h, 0, 3.0001, 2.1) == doctest::Approx(0.2));
  CHECK(intensity_without_new_spikes(m, h, 1, 2.5, 2.1) == doctest::Approx(0.2));
}

TEST_CASE("next-event inversion") {
  // phi = 1.5 on [5, 5.7), then 1.0
  const auto m = lone(0.5, 1.0, 1.0, 2.0);
  const SpikeTrains h{{4.7}};
  const double t = 5.0;

  SUBCASE("matches brute-force integration") {
    for (double e : {0.01, 0.5, 1.0, 1.05, 1.2, 3.0}) {
      CHECK(next_event_time(m, h, 0, t, e) == doctest::Approx(brute_inverse(m, h, t, e)).epsilon(1e-4));
    }
    CHECK(next_event_time(m, h, 0, t, 1.05) == doctest::Approx(5.7));
    CHECK(next_event_time(m, h, 0, t, 2.05) == doctest::Approx(6.7));
  }

  SUBCASE("waiting time has the analytic law") {
    RandomStream rng(31);
    std::vector<double> waits;
    for (int k = 0; k < 100'000; ++k) waits.push_back(next_event_time(m, h, 0, t, rng.exponential(1.0)) - t);
    const auto cdf = [](double s) {
      if (s <= 0) return 0.0;
      const double cum = s < 0.7 ? 1.5 * s : 1.05 + (s - 0.7);
      return 1.0 - std::exp(-cum);
    };
    CHECK(kalikow::testing::ks_one_sample_p(waits, cdf) > 0.001);
  }

  SUBCASE("zero rate never fires") {
    const auto quiet = lone(0.5, 0.0, 1.0, 2.0);
    CHECK(std::isinf(next_event_time(quiet, SpikeTrains{{}}, 0, t, 0.3)));
    CHECK(next_event_time(quiet, h, 0, t, 0.3) == doctest::Approx(5.6));
  }

  CHECK_THROWS_AS(next_event_time(m, SpikeTrains{{5.0}}, 0, t, 1.0), std::invalid_argument);
}

TEST_CASE("thinning ceiling") {
  const auto m = lone(0.0, 1.8, 1.0, 2.0);
  CHECK_THROWS_AS(simulate_ogata_thinning(m, 0.0, 100.0, 1, 1.0), CeilingViolated);
  CHECK_NOTHROW(simulate_ogata_thinning(m, 0.0, 100.0, 1));
  CHECK_THROWS_AS(simulate_ogata_thinning(m, 0.0, 100.0, 1, 0.0), std::invalid_argument);
}

TEST_CASE("the three simulators agree on a self-exciting neuron") {
  const auto m = FiniteHawkesModel::coupled({NeuronId{0, 0}}, {{0.5}}, 2.0);
  constexpr int replicas = 300;
  std::vector<double> inv, thin, full;
  for (int k = 0; k < replicas; ++k) {
    inv.push_back(static_cast<double>(total(simulate_ogata_inverse(m, 0.0, 30.0, 100 + k))));
    thin.push_back(static_cast<double>(total(simulate_ogata_thinning(m, 0.0, 30.0, 100 + k))));
    full.push_back(static_cast<double>(total(simulate_kalikow_full(m, 0.0, 30.0, 100 + k))));
  }
  const auto welch = [](const std::vector<double>& a, const std::vector<double>& b) {
    return std::abs(stats::mean(a) - stats::mean(b)) /
           std::sqrt(stats::variance(a) / a.size() + stats::variance(b) / b.size());
  };
  CHECK(welch(inv, thin) < 4.0);
  CHECK(welch(inv, full) < 4.0);
  CHECK(stats::ks_two_sample(inv, full).p_value > 0.001);
  // Excitation raises the rate above nu = 0.9 but never above M = 2.
  CHECK(stats::mean(inv) / 30.0 > 0.95);
  CHECK(stats::mean(inv) / 30.0 < 2.0);
}

TEST_CASE("baselines are deterministic in the seed") {
  const auto m = FiniteHawkesModel::coupled({NeuronId{0, 0}, NeuronId{1, 0}},
                                            {{0.3, 0.2}, {0.1, 0.4}}, 2.0);
  CHECK(simulate_ogata_inverse(m, 0.0, 20.0, 9) == simulate_ogata_inverse(m, 0.0, 20.0, 9));
  CHECK(simulate_ogata_thinning(m, 0.0, 20.0, 9) == simulate_ogata_thinning(m, 0.0, 20.0, 9));
  CHECK(simulate_kalikow_full(m, 0.0, 20.0, 9) == simulate_kalikow_full(m, 0.0, 20.0, 9));
  CHECK(simulate_ogata_inverse(m, 0.0, 20.0, 9) != simulate_ogata_inverse(m, 0.0, 20.0, 10));
}
