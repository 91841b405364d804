#include "kalikow/engine_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "kalikow/format.hpp"
#include "kalikow/random.hpp"

namespace kalikow {

namespace {

/// Spikes of one neuron within the last A seconds.
class RecentSpikes {
 public:
  void push(double t) { times_.push_back(t); }
  void prune(double before) {
    while (!times_.empty() && times_.front() < before) times_.pop_front();
  }
  const std::deque<double>& times() const { return times_; }

 private:
  std::deque<double> times_;
};

struct Network {
  const FiniteHawkesModel& model;
  std::vector<RecentSpikes> recent;
  SpikeTrains trains;

  explicit Network(const FiniteHawkesModel& m) : model(m), recent(m.size()), trains(m.size()) {}

  void prune(double t) {
    for (auto& r : recent) r.prune(t - model.memory());
  }

  void spike(std::size_t j, double t, double t0, double t1) {
    recent[j].push(t);
    if (t >= t0 && t <= t1) trains[j].push_back(t);
  }

  /// phi_abs(s, t) of neuron i; recent spikes are all in [t - A, t).
  double intensity(std::size_t i, double s) const {
    double rate = model.nu(i);
    for (std::size_t j = 0; j < recent.size(); ++j) {
      const double w = model.weight(i, j);
      if (w == 0.0) continue;
      const auto& ts = recent[j].times();
      // count of spikes in [s - A, t)
      const auto n = ts.end() - std::lower_bound(ts.begin(), ts.end(), s - model.memory());
      rate += w * std::min(static_cast<double>(n), model.bound());
    }
    return rate;
  }

  /// Value of phi_abs_i on the open segment just after `s`: spikes r with
  /// r + A > s still count.
  double rate_after(std::size_t i, double s) const {
    double rate = model.nu(i);
    for (std::size_t j = 0; j < recent.size(); ++j) {
      const double w = model.weight(i, j);
      if (w == 0.0) continue;
      const auto& ts = recent[j].times();
      const auto n = std::count_if(ts.begin(), ts.end(),
                                   [&](double r) { return r + model.memory() > s; });
      rate += w * std::min(static_cast<double>(n), model.bound());
    }
    return rate;
  }

  /// Solves int_t^T phi_abs_i(s, t) ds = target for T.
  double invert(std::size_t i, double t, double target) const {
    std::vector<double> exits;
    for (std::size_t j = 0; j < recent.size(); ++j) {
      if (model.weight(i, j) == 0.0) continue;
      for (double r : recent[j].times()) exits.push_back(r + model.memory());
    }
    std::sort(exits.begin(), exits.end());
    double cursor = t;
    double remaining = target;
    for (double edge : exits) {
      if (edge <= cursor) continue;
      // phi_abs is constant on [cursor, edge)
      const double rate = rate_after(i, cursor);
      const double mass = rate * (edge - cursor);
      if (mass >= remaining) return cursor + remaining / rate;
      remaining -= mass;
      cursor = edge;
    }
    const double base = model.nu(i);
    if (!(base > 0.0)) return std::numeric_limits<double>::infinity();
    return cursor + remaining / base;
  }
};

}  // namespace

double intensity_without_new_spikes(const FiniteHawkesModel& model, const SpikeTrains& trains,
                                    std::size_t i, double s, double t) {
  double rate = model.nu(i);
  for (std::size_t j = 0; j < trains.size(); ++j) {
    const auto& ts = trains[j];
    const auto lo = std::lower_bound(ts.begin(), ts.end(), s - model.memory());
    const auto hi = std::lower_bound(ts.begin(), ts.end(), t);
    const double n = hi > lo ? static_cast<double>(hi - lo) : 0.0;
    rate += model.weight(i, j) * std::min(n, model.bound());
  }
  return rate;
}

double next_event_time(const FiniteHawkesModel& model, const SpikeTrains& history,
                       std::size_t i, double t, double target) {
  Network net(model);
  for (std::size_t j = 0; j < history.size() && j < model.size(); ++j) {
    for (double r : history[j]) {
      if (r >= t) throw std::invalid_argument("history must end before t");
      if (r >= t - model.memory()) net.recent[j].push(r);
    }
  }
  return net.invert(i, t, target);
}

SpikeTrains simulate_ogata_inverse(const FiniteHawkesModel& model, double t0, double t1,
                                   std::uint64_t seed) {
  RandomStream rng(seed, "ogata-inverse");
  Network net(model);
  double t = t0;
  while (t <= t1) {
    net.prune(t);
    double best = std::numeric_limits<double>::infinity();
    std::size_t winner = 0;
    for (std::size_t i = 0; i < model.size(); ++i) {
      const double candidate = net.invert(i, t, rng.exponential(1.0));
      if (candidate < best) {
        best = candidate;
        winner = i;
      }
    }
    if (!std::isfinite(best)) break;  // no neuron can ever fire again
    if (best <= t1) net.spike(winner, best, t0, t1);
    t = best;
  }
  return std::move(net.trains);
}

SpikeTrains simulate_ogata_thinning(const FiniteHawkesModel& model, double t0, double t1,
                                    std::uint64_t seed, std::optional<double> ceiling) {
  const double top = ceiling.value_or(2.0 * model.bound());
  if (!(top > 0.0)) throw std::invalid_argument("thinning ceiling must be positive");
  RandomStream proposals(seed, "ogata-proposals");
  RandomStream marks(seed, "ogata-marks");
  Network net(model);
  double t = t0;
  while (t <= t1) {
    net.prune(t);
    double best = std::numeric_limits<double>::infinity();
    std::size_t winner = 0;
    for (std::size_t i = 0; i < model.size(); ++i) {
      const double candidate = t + proposals.exponential(top);
      if (candidate < best) {
        best = candidate;
        winner = i;
      }
    }
    const double rate = net.intensity(winner, best);
    if (rate > top) {
      throw CeilingViolated("intensity " + format_real(rate) + " exceeds ceiling " +
                            format_real(top));
    }
    if (marks.bernoulli(rate / top) && best <= t1) net.spike(winner, best, t0, t1);
    t = best;
  }
  return std::move(net.trains);
}

SpikeTrains simulate_kalikow_full(const FiniteHawkesModel& model, double t0, double t1,
                                  std::uint64_t seed) {
  RandomStream candidates(seed, "kalikow-candidates");
  RandomStream choices(seed, "kalikow-neighborhoods");
  RandomStream marks(seed, "kalikow-marks");
  const double bound = model.bound();
  const auto& neurons = model.neurons();
  SpikeTrains accepted(model.size());
  std::vector<Spike> inside;
  double t = t0;
  while (true) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t winner = 0;
    for (std::size_t i = 0; i < model.size(); ++i) {
      const double candidate = t + candidates.exponential(bound);
      if (candidate < best) {
        best = candidate;
        winner = i;
      }
    }
    if (best > t1) break;
    t = best;
    const NeuronId& self = neurons[winner];
    const auto v = model.sample_neighborhood(self, choices);
    inside.clear();
    for (const auto& r : v.shifted(t)) {
      const auto& ts = accepted[model.index_of(r.neuron)];
      auto it = std::lower_bound(ts.begin(), ts.end(), r.interval.start);
      for (; it != ts.end() && *it < r.interval.end; ++it) inside.push_back(Spike{r.neuron, *it});
    }
    const double phi = model.phi_v(self, v, t, inside);
    if (marks.bernoulli(phi / bound)) accepted[winner].push_back(t);
  }
  return accepted;
}

}  // namespace kalikow
