#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "kalikow/engine_bf.hpp"
#include "kalikow/stats.hpp"
#include "test_support.hpp"

using namespace kalikow;
using kalikow::testing::ScriptedModel;

namespace {

const NeuronId kTarget{0, 0};
const NeuronId kOther{1, 0};

// Target reads `kOther` over [-len, 0); every other neuron has the empty
// neighborhood and rate phi0.
ScriptedModel reader_model(double bound, double len, double phi0_other) {
  return ScriptedModel(
      bound,
      [len](const NeuronId& i, RandomStream&) {
        return i == kTarget ? NeighborhoodTemplate::single(kOther, {-len, 0.0})
                            : NeighborhoodTemplate{};
      },
      [phi0_other](const NeuronId& i) { return i == kTarget ? 0.0 : phi0_other; });
}

}  // namespace

TEST_CASE("lambda(empty) = 1 gives a Poisson(phi_empty) output") {
  const LatticeGaussianHawkesModel m(1.0, 1.0, 2.0);
  const auto r = simulate_bf(m, kTarget, 0.0, 1000.0, 17);
  const auto test = stats::rate_test(r.accepted_output.size(), 1.8, 1000.0, 0.003);
  CHECK(test.passed);
  CHECK(r.points.size() == r.candidate_count);
  CHECK(r.poisson_fills.empty());
  for (const auto& p : r.points) CHECK(p.v_mark() == NeighborhoodMark::empty);
}

TEST_CASE("empty horizon") {
  const LatticeGaussianHawkesModel m(1.0, 0.25, 2.0);
  const auto r = simulate_bf(m, kTarget, 3.0, 3.0, 1);
  CHECK(r.accepted_output.empty());
  CHECK(r.points.empty());
  CHECK(r.coverage.measure() == 0.0);
  CHECK_THROWS_AS(simulate_bf(m, kTarget, 3.0, 2.0, 1), std::invalid_argument);
}

TEST_CASE("backward expansion") {
  SUBCASE("all-empty neighborhoods create nothing") {
    const ScriptedModel m(
        2.0, [](const NeuronId&, RandomStream&) { return NeighborhoodTemplate{}; },
        [](const NeuronId&) { return 1.0; });
    BackwardForwardEngine e(m, kTarget, 0.0, 10.0, 5);
    for (double t : {1.0, 2.0, 3.0}) e.add_candidate(t);
    CHECK(e.backward_expand() == 0);
    CHECK(e.record().poisson_fills.empty());
  }

  SUBCASE("a fully covered neighborhood creates nothing") {
    // The target reads its own past, which lies in the candidate horizon.
    const ScriptedModel m(
        2.0,
        [](const NeuronId& i, RandomStream&) { return NeighborhoodTemplate::single(i, {-1.0, 0.0}); },
        [](const NeuronId&) { return 1.0; });
    BackwardForwardEngine e(m, kTarget, 0.0, 10.0, 5);
    e.add_candidate(4.0);
    const auto before = e.record().coverage;
    CHECK(e.backward_expand() == 0);
    CHECK(e.record().coverage == before);
    CHECK(e.record().points[0].v_mark() == NeighborhoodMark::window);
    CHECK(e.record().tallies.at(kTarget).requests == 1);
  }

  SUBCASE("an uncovered neighborhood gets Poisson(M L) points") {
    constexpr double bound = 2.0, len = 1.5;
    const auto m = reader_model(bound, len, 1.0);
    constexpr int replicas = 10'000;
    std::vector<double> observed(40, 0.0);
    for (int k = 0; k < replicas; ++k) {
      BackwardForwardEngine e(m, kTarget, 10.0, 10.0, 1000 + k);
      e.add_candidate(10.0);
      const auto created = e.backward_expand();
      REQUIRE(created < observed.size());
      observed[created] += 1.0;
      const auto& r = e.record();
      REQUIRE(r.poisson_fills.size() == 1);
      REQUIRE(r.poisson_fills[0] == Region{kOther, {10.0 - len, 10.0}});
      for (std::size_t p = 1; p < r.points.size(); ++p) {
        REQUIRE(r.points[p].origin() == Origin::backward);
        REQUIRE(r.points[p].generation() == 1);
        REQUIRE(r.points[p].time() >= 10.0 - len);
        REQUIRE(r.points[p].time() < 10.0);
      }
    }
    std::vector<double> expected;
    for (unsigned n = 0; n < observed.size(); ++n) {
      expected.push_back(replicas * kalikow::testing::poisson_pmf(n, bound * len));
    }
    const auto [stat, dof] = kalikow::testing::chi_square(observed, expected);
    CHECK(stat < kalikow::testing::chi_square_critical(dof, 0.01));
  }
}

TEST_CASE("forward thinning probabilities") {
  SUBCASE("empty neighborhood accepts with phi_empty / M") {
    const LatticeGaussianHawkesModel m(1.0, 1.0, 2.0);
    const auto r = simulate_bf(m, kTarget, 0.0, 5000.0, 23);
    const double p = static_cast<double>(r.accepted_output.size()) / r.candidate_count;
    CHECK(std::abs(p - 0.9) < 3.0 * std::sqrt(0.09 / r.candidate_count));
  }

  SUBCASE("window neighborhood accepts with min(count, M) / M") {
    // kOther always fires, so the count in the window is the fill count.
    constexpr double bound = 2.0;
    const auto m = reader_model(bound, 0.5, bound);
    int with_one = 0, accepted_one = 0;
    for (int k = 0; k < 6000; ++k) {
      BackwardForwardEngine e(m, kTarget, 10.0, 10.0, 50'000 + k);
      e.add_candidate(10.0);
      e.backward_expand();
      e.forward_thin();
      const auto& r = e.record();
      const auto count = r.points.size() - 1;
      for (std::size_t p = 1; p < r.points.size(); ++p) REQUIRE(r.points[p].accepted());
      const bool acc = r.points[0].accepted();
      if (count == 0) REQUIRE_FALSE(acc);
      if (count >= 2) REQUIRE(acc);
      if (count == 1) {
        ++with_one;
        accepted_one += acc ? 1 : 0;
      }
    }
    REQUIRE(with_one > 1000);
    const double p = static_cast<double>(accepted_one) / with_one;
    CHECK(std::abs(p - 0.5) < 3.0 * std::sqrt(0.25 / with_one));
  }
}

TEST_CASE("candidate gaps are Exp(M)") {
  const LatticeGaussianHawkesModel m(1.0, 0.25, 2.0);
  std::vector<double> gaps;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto r = simulate_bf(m, kTarget, 0.0, 100.0, seed);
    std::vector<double> times;
    for (const auto& p : r.points) {
      if (p.origin() == Origin::candidate) times.push_back(p.time());
    }
    REQUIRE(std::is_sorted(times.begin(), times.end()));
    for (std::size_t k = 1; k < times.size(); ++k) gaps.push_back(times[k] - times[k - 1]);
  }
  REQUIRE(gaps.size() > 10'000);
  const double p = kalikow::testing::ks_one_sample_p(
      gaps, [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-2.0 * x); });
  CHECK(p > 0.001);
}

TEST_CASE("determinism") {
  const LatticeGaussianHawkesModel m(1.0, 0.25, 2.0);
  const auto a = simulate_bf(m, NeuronId{4, -7}, 0.0, 50.0, 77);
  const auto b = simulate_bf(m, NeuronId{4, -7}, 0.0, 50.0, 77);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    CHECK(a.points[k].time() == b.points[k].time());
    CHECK(a.points[k].neuron() == b.points[k].neuron());
    CHECK(a.points[k].accepted() == b.points[k].accepted());
    CHECK(a.points[k].neighborhood() == b.points[k].neighborhood());
  }
  CHECK(a.coverage == b.coverage);
  CHECK(a.tallies == b.tallies);
  CHECK(a.accepted_output == b.accepted_output);
  const auto c = simulate_bf(m, NeuronId{4, -7}, 0.0, 50.0, 78);
  CHECK(c.accepted_output != a.accepted_output);
}

TEST_CASE("randomized runs keep order, marks and coverage sound") {
  RandomStream rng(2024);
  BfOptions options;
  options.check_soundness = true;
  for (int trial = 0; trial < 400; ++trial) {
    const double bound = 1.0 + 4.0 * rng.uniform();
    const double lambda_empty = 0.05 + 0.9 * rng.uniform();
    const double sigma = 0.3 + 3.0 * rng.uniform();
    const LatticeGaussianHawkesModel m(sigma, lambda_empty, bound);
    const double t0 = -5.0 + 10.0 * rng.uniform();
    SimulationRecord r;
    REQUIRE_NOTHROW(r = simulate_bf(m, kTarget, t0, t0 + 10.0, 9000 + trial, options));
    std::string problem;
    REQUIRE_MESSAGE(coverage_sound(r, &problem), problem);
    for (const auto& p : r.points) {
      REQUIRE(p.v_mark() != NeighborhoodMark::unassigned);
      REQUIRE(p.x_mark() != AcceptMark::unassigned);
      if (p.origin() == Origin::candidate) {
        REQUIRE(p.neuron() == kTarget);
        REQUIRE(p.generation() == 0);
      }
    }
    double fills = 0.0;
    for (const auto& f : r.poisson_fills) fills += f.interval.length();
    REQUIRE(std::abs(r.coverage.measure() - (fills + 10.0)) < 1e-9 * (1.0 + fills));
  }
}

TEST_CASE("marks are assigned once") {
  MarkedPoint p(1.0, kTarget, Origin::candidate, 0, 0);
  p.assign_neighborhood(NeighborhoodTemplate{});
  CHECK_THROWS_AS(p.assign_neighborhood(NeighborhoodTemplate{}), std::logic_error);
  p.assign_accept(true);
  CHECK_THROWS_AS(p.assign_accept(false), std::logic_error);
}

TEST_CASE("supercritical models") {
  const FiniteHawkesModel m({kTarget}, {{0.95}}, {0.1}, 20.0, 5.0);
  CHECK_FALSE(m.validate().ok());
  CHECK_THROWS_AS(simulate_bf(m, kTarget, 0.0, 50.0, 1), InvalidModel);
  BfOptions options;
  options.override_sparsity = true;
  options.limits.max_points = 5000;
  CHECK_THROWS_AS(simulate_bf(m, kTarget, 0.0, 50.0, 1, options), LimitExceeded);
  options.limits.max_points = 1'000'000;
  options.limits.max_generations = 3;
  CHECK_THROWS_AS(simulate_bf(m, kTarget, 0.0, 50.0, 1, options), LimitExceeded);
}
