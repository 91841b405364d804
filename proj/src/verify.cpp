#include "kalikow/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "kalikow/analysis.hpp"
#include "kalikow/engine_baseline.hpp"
#include "kalikow/engine_bf.hpp"
#include "kalikow/format.hpp"
#include "kalikow/io.hpp"
#include "kalikow/model.hpp"
#include "kalikow/random.hpp"
#include "kalikow/stats.hpp"

namespace kalikow::verify {

namespace {

using Clock = std::chrono::steady_clock;

constexpr NeuronId kOrigin{0, 0};
// Pre-run for the inversion oracle so that it is compared in its stationary
// regime, like the backward-forward output.
constexpr double kOracleWarmup = 50.0;

CriterionResult timed(int id, std::string name, double budget,
                      const std::function<bool(std::ostringstream&)>& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.budget_seconds = budget;
  std::ostringstream detail;
  const auto start = Clock::now();
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
    ok = false;
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (r.seconds >= budget) detail << "; over time budget";
  r.passed = ok && r.seconds < budget;
  r.detail = detail.str();
  return r;
}

std::uint64_t replica_seed(std::uint64_t root, std::string_view tag, std::size_t k) {
  return derive_seed(root, tag) + mix64(k);
}

void append_isis(const std::vector<double>& times, std::vector<double>& out) {
  for (std::size_t k = 1; k < times.size(); ++k) out.push_back(times[k] - times[k - 1]);
}

std::vector<double> restrict_to(const std::vector<double>& times, double t0, double t1) {
  std::vector<double> out;
  for (double t : times) {
    if (t >= t0 && t <= t1) out.push_back(t);
  }
  return out;
}

double count_z(const std::vector<double>& a, const std::vector<double>& b) {
  const double se = std::sqrt(stats::variance(a) / static_cast<double>(a.size()) +
                              stats::variance(b) / static_cast<double>(b.size()));
  return se > 0.0 ? (stats::mean(a) - stats::mean(b)) / se : 0.0;
}

}  // namespace

CriterionResult poisson_reduction(std::uint64_t seed) {
  return timed(1, "Poisson reduction", 20.0, [&](std::ostringstream& d) {
    const LatticeGaussianHawkesModel model(1.0, 1.0, 2.0);
    const double rate = 1.8;
    int within = 0;
    double slowest_ms = 0.0;
    for (std::size_t s = 0; s < 20; ++s) {
      const auto rec = simulate_bf(model, kOrigin, 0.0, 1000.0, replica_seed(seed, "c1", s));
      const auto z = stats::rate_test(rec.accepted_output.size(), rate, 1000.0, 0.0027).z;
      if (std::abs(z) < 3.0) ++within;
      slowest_ms = std::max(slowest_ms, rec.wall_ms);
    }
    d << within << "/20 runs within 3 sigma of rate 1.8; slowest run " << slowest_ms << " ms";
    return within >= 19 && slowest_ms < 1000.0;
  });
}

CriterionResult oracle_equivalence(std::uint64_t seed) {
  return timed(2, "Oracle equivalence (BF vs inversion)", 60.0, [&](std::ostringstream& d) {
    const auto model = FiniteHawkesModel::coupled({kOrigin}, {{0.5}}, 2.0);
    std::vector<double> isi_bf, isi_oracle, count_bf, count_oracle;
    for (std::size_t r = 0; r < 200; ++r) {
      const auto rec = simulate_bf(model, kOrigin, 0.0, 100.0, replica_seed(seed, "c2-bf", r));
      append_isis(rec.accepted_output, isi_bf);
      count_bf.push_back(static_cast<double>(rec.accepted_output.size()));
      const auto trains = simulate_ogata_inverse(model, -kOracleWarmup, 100.0,
                                                 replica_seed(seed, "c2-oracle", r));
      const auto kept = restrict_to(trains[0], 0.0, 100.0);
      append_isis(kept, isi_oracle);
      count_oracle.push_back(static_cast<double>(kept.size()));
    }
    const auto ks = stats::ks_two_sample(isi_bf, isi_oracle);
    const double z = count_z(count_bf, count_oracle);
    d << "KS D=" << ks.statistic << " p=" << ks.p_value << "; mean counts "
      << stats::mean(count_bf) << " vs " << stats::mean(count_oracle) << " z=" << z;
    return ks.p_value > 0.01 && std::abs(z) < 3.0;
  });
}

CriterionResult baseline_equivalence(std::uint64_t seed) {
  return timed(3, "Three-way baseline equivalence", 60.0, [&](std::ostringstream& d) {
    const auto model = FiniteHawkesModel::coupled(
        {NeuronId{0, 0}, NeuronId{1, 0}, NeuronId{2, 0}},
        {{0.5, 0.0, 0.0}, {0.3, 0.2, 0.0}, {0.0, 0.3, 0.2}}, 2.0);
    std::vector<double> isi[3];
    std::vector<double> counts[3];
    for (std::size_t r = 0; r < 200; ++r) {
      const SpikeTrains runs[3] = {
          simulate_ogata_inverse(model, 0.0, 100.0, replica_seed(seed, "c3-inverse", r)),
          simulate_ogata_thinning(model, 0.0, 100.0, replica_seed(seed, "c3-thinning", r)),
          simulate_kalikow_full(model, 0.0, 100.0, replica_seed(seed, "c3-kalikow", r)),
      };
      for (int v = 0; v < 3; ++v) {
        double total = 0.0;
        for (const auto& train : runs[v]) {
          append_isis(train, isi[v]);
          total += static_cast<double>(train.size());
        }
        counts[v].push_back(total);
      }
    }
    const char* names[3] = {"inverse", "thinning", "kalikow-full"};
    bool ok = true;
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        const auto ks = stats::ks_two_sample(isi[a], isi[b]);
        if (a + b > 1) d << "; ";
        d << names[a] << "/" << names[b] << ": KS p=" << ks.p_value
          << " count z=" << count_z(counts[a], counts[b]);
        ok = ok && ks.p_value > 0.01;
      }
    }
    return ok;
  });
}

CriterionResult decomposition_identity(std::uint64_t seed) {
  return timed(4, "Decomposition identity", 1.0, [&](std::ostringstream& d) {
    RandomStream rng(seed, "c4");
    constexpr std::size_t n = 5;
    std::vector<NeuronId> neurons;
    for (std::size_t i = 0; i < n; ++i) neurons.push_back(NeuronId{static_cast<std::int64_t>(i), 0});
    std::vector<std::vector<double>> weights(n, std::vector<double>(n));
    std::vector<double> nu(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double row_total = 0.95 * rng.uniform();
      double raw_sum = 0.0;
      for (auto& w : weights[i]) raw_sum += (w = rng.uniform() < 0.3 ? 0.0 : rng.uniform());
      for (auto& w : weights[i]) w = raw_sum > 0.0 ? w * row_total / raw_sum : 0.0;
      nu[i] = 0.5 * rng.uniform();
    }
    const FiniteHawkesModel model(neurons, weights, nu, 0.7, 3.0);
    double worst = 0.0;
    for (std::size_t h = 0; h < 1000; ++h) {
      const double t = 10.0 * rng.uniform();
      std::vector<Spike> history;
      const auto spikes = rng.poisson(12.0);
      for (std::uint64_t k = 0; k < spikes; ++k) {
        history.push_back(Spike{neurons[static_cast<std::size_t>(rng.uniform() * n)],
                                t - 1.5 * rng.uniform() - 1e-9});
      }
      for (const auto& i : neurons) {
        worst = std::max(worst, std::abs(model.reconstructed_intensity(i, t, history) -
                                         model.hawkes_intensity(i, t, history)));
      }
    }
    d << "max |reconstructed - direct| = " << worst << " over 1000 histories x 5 neurons";
    return worst <= 1e-12;
  });
}

CriterionResult branching(std::uint64_t seed) {
  return timed(5, "Branching diagnostics", 30.0, [&](std::ostringstream& d) {
    const LatticeGaussianHawkesModel model(1.0, 0.25, 2.0);
    constexpr std::size_t runs = 10'000;
    constexpr std::size_t depth = 10;
    std::size_t extinct = 0, nodes = 0, children = 0;
    std::vector<double> z_sum(depth + 1, 0.0);
    for (std::size_t r = 0; r < runs; ++r) {
      const auto tree = dominating_tree_sim(model, kOrigin, replica_seed(seed, "c5", r), 10'000);
      extinct += tree.extinct ? 1 : 0;
      nodes += tree.nodes;
      children += tree.children;
      for (std::size_t k = 0; k <= depth && k < tree.generation_sizes.size(); ++k) {
        z_sum[k] += static_cast<double>(tree.generation_sizes[k]);
      }
    }
    const double offspring = static_cast<double>(children) / static_cast<double>(nodes);
    bool z_ok = true;
    d << "extinct " << extinct << "/" << runs << "; mean offspring " << offspring << " over "
      << nodes << " nodes; E Z^k / 0.9^k:";
    for (std::size_t k = 0; k <= depth; ++k) {
      const double mean_z = z_sum[k] / runs;
      const double ceiling = 1.1 * std::pow(0.9, static_cast<double>(k));
      d << " " << mean_z / std::pow(0.9, static_cast<double>(k));
      z_ok = z_ok && mean_z < ceiling;
    }
    return extinct == runs && offspring >= 0.88 && offspring <= 0.92 && z_ok;
  });
}

CriterionResult reference_run(std::uint64_t seed) {
  return timed(6, "Reference run cost profile", 60.0, [&](std::ostringstream& d) {
    const LatticeGaussianHawkesModel model(1.0, 0.25, 2.0);
    std::vector<double> accepted, ratio;
    for (std::size_t s = 0; s < 20; ++s) {
      const auto rec = simulate_bf(model, kOrigin, 0.0, 100.0, replica_seed(seed, "c6", s));
      const auto n = static_cast<double>(rec.accepted_output.size());
      accepted.push_back(n);
      ratio.push_back(n > 0 ? static_cast<double>(rec.points.size()) / n : INFINITY);
    }
    const double med_acc = stats::median(accepted);
    const double med_ratio = stats::median(ratio);
    d << "median accepted at (0,0) " << med_acc << "; median total/accepted " << med_ratio;
    return med_acc >= 40 && med_acc <= 160 && med_ratio >= 5 && med_ratio <= 20;
  });
}

CriterionResult parameter_trends(std::uint64_t seed) {
  return timed(7, "Spread and cost trends", 300.0, [&](std::ostringstream& d) {
    constexpr std::size_t replicas = 50;
    struct Sample {
      std::vector<double> distinct;
      std::vector<double> total_points;
    };
    auto sample = [&](double sigma, double lambda_empty, double bound, std::string_view tag) {
      const LatticeGaussianHawkesModel model(sigma, lambda_empty, bound);
      Sample out;
      for (std::size_t r = 0; r < replicas; ++r) {
        const auto rec = simulate_bf(model, kOrigin, 0.0, 100.0, replica_seed(seed, tag, r));
        const auto hm = request_heatmap(rec);
        out.distinct.push_back(static_cast<double>(hm.distinct_requested()));
        out.total_points.push_back(static_cast<double>(rec.points.size()));
      }
      return out;
    };
    const auto narrow = sample(1.0, 0.25, 2.0, "c7-s1");
    const auto wide = sample(3.0, 0.25, 2.0, "c7-s3");
    const auto fast = sample(3.0, 0.25, 20.0, "c7-m20");
    const auto sparse = sample(3.0, 0.5, 2.0, "c7-l05");

    const auto spread = stats::mann_whitney(wide.distinct, narrow.distinct);
    const double cost_ratio = stats::median(fast.total_points) / stats::median(wide.total_points);
    const auto shrink = stats::mann_whitney(wide.distinct, sparse.distinct);
    d << "(a) distinct requested sigma=3 " << stats::mean(wide.distinct) << " vs sigma=1 "
      << stats::mean(narrow.distinct) << ", one-sided p=" << spread.p_greater
      << "; (b) median points M=20/M=2 = " << cost_ratio << "; (c) distinct requested"
      << " lambda=0.25 " << stats::mean(wide.distinct) << " vs lambda=0.5 "
      << stats::mean(sparse.distinct) << ", one-sided p=" << shrink.p_greater;
    return spread.p_greater < 0.05 && cost_ratio >= 5.0 && cost_ratio <= 20.0 &&
           shrink.p_greater < 0.05;
  });
}

CriterionResult soundness_determinism(std::uint64_t seed) {
  return timed(8, "Coverage soundness and determinism", 60.0, [&](std::ostringstream& d) {
    RandomStream rng(seed, "c8");
    std::size_t sound = 0, identical = 0;
    std::string first_problem;
    for (std::size_t c = 0; c < 100; ++c) {
      std::unique_ptr<KalikowModel> model;
      if (c % 4 == 3) {
        const double row = 0.2 + 0.6 * rng.uniform();
        const double a = rng.uniform();
        model = std::make_unique<FiniteHawkesModel>(FiniteHawkesModel::coupled(
            {NeuronId{0, 0}, NeuronId{0, 1}, NeuronId{1, 0}},
            {{row * a, row * (1 - a), 0.0}, {0.0, row * a, row * (1 - a)},
             {row * (1 - a), 0.0, row * a}},
            1.0 + 4.0 * rng.uniform()));
      } else {
        model = std::make_unique<LatticeGaussianHawkesModel>(
            0.5 + 2.5 * rng.uniform(), 0.1 + 0.8 * rng.uniform(), 1.0 + 4.0 * rng.uniform());
      }
      const double t1 = 10.0 + 40.0 * rng.uniform();
      const std::uint64_t run_seed = rng.engine()();
      const auto first = simulate_bf(*model, kOrigin, 0.0, t1, run_seed);
      const auto second = simulate_bf(*model, kOrigin, 0.0, t1, run_seed);
      std::string problem;
      if (coverage_sound(first, &problem)) {
        ++sound;
      } else if (first_problem.empty()) {
        first_problem = problem;
      }
      if (io::points_csv(first) == io::points_csv(second)) ++identical;
    }
    d << sound << "/100 sound, " << identical << "/100 byte-identical";
    if (!first_problem.empty()) d << "; first problem: " << first_problem;
    return sound == 100 && identical == 100;
  });
}

std::vector<CriterionResult> run_suite(const std::string& suite, std::uint64_t seed) {
  std::vector<CriterionResult> out;
  const bool all = suite == "all";
  if (all || suite == "poisson") {
    out.push_back(poisson_reduction(seed));
  }
  if (all || suite == "oracle") {
    out.push_back(oracle_equivalence(seed));
    out.push_back(baseline_equivalence(seed));
    out.push_back(decomposition_identity(seed));
  }
  if (all || suite == "branching") out.push_back(branching(seed));
  if (all || suite == "figures") {
    out.push_back(reference_run(seed));
    out.push_back(parameter_trends(seed));
  }
  if (all || suite == "poisson") out.push_back(soundness_determinism(seed));
  if (out.empty()) throw std::invalid_argument("unknown verify suite '" + suite + "'");
  return out;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name << " (" << r.seconds << " s / "
    << r.budget_seconds << " s): " << r.detail;
  return s.str();
}

std::string to_json(const std::vector<CriterionResult>& results) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : results) {
    j.push_back({{"id", r.id},
                 {"name", r.name},
                 {"passed", r.passed},
                 {"detail", r.detail},
                 {"seconds", r.seconds},
                 {"budget_seconds", r.budget_seconds}});
  }
  return j.dump(2) + "\n";
}

}  // namespace kalikow::verify
