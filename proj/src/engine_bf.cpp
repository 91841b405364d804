#include "kalikow/engine_bf.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_set>

#include "kalikow/format.hpp"

namespace kalikow {

void MarkedPoint::assign_neighborhood(NeighborhoodTemplate v) {
  if (v_mark_ != NeighborhoodMark::unassigned) {
    throw std::logic_error("neighborhood mark assigned twice");
  }
  v_mark_ = v.empty() ? NeighborhoodMark::empty : NeighborhoodMark::window;
  neighborhood_ = std::move(v);
}

void MarkedPoint::assign_accept(bool accepted) {
  if (x_mark_ != AcceptMark::unassigned) throw std::logic_error("accept mark assigned twice");
  x_mark_ = accepted ? AcceptMark::accepted : AcceptMark::rejected;
}

bool forward_order(const MarkedPoint& a, const MarkedPoint& b) {
  if (a.time() != b.time()) return a.time() < b.time();
  if (a.neuron() != b.neuron()) return a.neuron() < b.neuron();
  return a.sequence() < b.sequence();
}

BackwardForwardEngine::BackwardForwardEngine(const KalikowModel& model, NeuronId target, double t0,
                                             double t1, std::uint64_t seed, BfOptions options)
    : model_(model),
      options_(options),
      bound_(model.bound()),
      candidates_(seed, "candidates"),
      neighborhoods_(seed, "neighborhood-choices"),
      fills_(seed, "poisson-fills"),
      thinning_(seed, "bernoullis"),
      frontier_(t0) {
  if (!(t0 <= t1)) throw std::invalid_argument("simulation horizon needs t0 <= t1");
  if (!options_.override_sparsity) {
    const auto report = model_.validate();
    if (!report.ok()) {
      std::string why = "model failed validation";
      for (const auto& m : report.messages) why += "; " + m;
      throw InvalidModel(why);
    }
  }
  record_.target = target;
  record_.t0 = t0;
  record_.t1 = t1;
  record_.seed = seed;
  record_.fingerprint = model_.fingerprint();
  record_.coverage.insert(Region{target, TimeInterval{t0, t1}});
}

std::size_t BackwardForwardEngine::add_point(double time, const NeuronId& neuron, Origin origin,
                                             std::uint32_t generation) {
  if (record_.points.size() >= options_.limits.max_points) {
    throw LimitExceeded("point limit of " + std::to_string(options_.limits.max_points) +
                        " exceeded");
  }
  const std::size_t idx = record_.points.size();
  record_.points.emplace_back(time, neuron, origin, generation, idx);
  auto& row = by_neuron_[neuron];
  auto pos = std::upper_bound(row.begin(), row.end(), time, [this](double t, std::size_t k) {
    return t < record_.points[k].time();
  });
  row.insert(pos, idx);
  unassigned_v_.push_back(idx);
  unthinned_.push_back(idx);
  return idx;
}

std::size_t BackwardForwardEngine::add_candidate(double time) {
  if (time < frontier_) throw std::logic_error("candidates must be scheduled in time order");
  frontier_ = time;
  ++record_.candidate_count;
  return add_point(time, record_.target, Origin::candidate, 0);
}

void BackwardForwardEngine::fill_poisson(const Region& region, std::uint32_t generation,
                                         std::vector<std::size_t>& created) {
  const double length = region.interval.length();
  const auto count = fills_.poisson(bound_ * length);
  std::vector<double> times(count);
  for (auto& t : times) t = region.interval.start + length * fills_.uniform();
  std::sort(times.begin(), times.end());
  for (double t : times) created.push_back(add_point(t, region.neuron, Origin::backward, generation));
  auto& tally = record_.tallies[region.neuron];
  tally.simulated_time += length;
  tally.simulated_points += count;
  record_.poisson_fills.push_back(region);
}

std::size_t BackwardForwardEngine::backward_expand() {
  std::vector<std::size_t> created;
  std::size_t generations = 0;
  while (!unassigned_v_.empty()) {
    if (++generations > options_.limits.max_generations) {
      throw LimitExceeded("backward expansion exceeded " +
                          std::to_string(options_.limits.max_generations) + " generations");
    }
    const auto batch = std::exchange(unassigned_v_, {});
    for (const std::size_t idx : batch) {
      const double time = record_.points[idx].time();
      const NeuronId neuron = record_.points[idx].neuron();
      const std::uint32_t generation = record_.points[idx].generation();
      auto v = model_.sample_neighborhood(neuron, neighborhoods_);
      if (!v.empty()) {
        const auto regions = v.shifted(time);
        for (const auto& r : regions) {
          if (r.interval.end > time || r.interval.end > frontier_) {
            throw std::logic_error("neighborhood of point at " + format_real(time) +
                                   " reaches into its future");
          }
          ++record_.tallies[r.neuron].requests;
        }
        for (const auto& piece : record_.coverage.uncovered(regions)) {
          fill_poisson(piece, generation + 1, created);
        }
        record_.coverage.insert(regions);
      }
      record_.points[idx].assign_neighborhood(std::move(v));
    }
  }
  return created.size();
}

std::vector<Spike> BackwardForwardEngine::accepted_inside(const std::vector<Region>& regions,
                                                          std::size_t for_point) const {
  std::vector<Spike> out;
  std::unordered_set<std::size_t> seen;
  for (const auto& r : regions) {
    auto row_it = by_neuron_.find(r.neuron);
    if (row_it == by_neuron_.end()) continue;
    const auto& row = row_it->second;
    auto it = std::lower_bound(row.begin(), row.end(), r.interval.start,
                               [this](std::size_t k, double t) { return record_.points[k].time() < t; });
    for (; it != row.end() && record_.points[*it].time() < r.interval.end; ++it) {
      const auto& p = record_.points[*it];
      if (p.x_mark() == AcceptMark::unassigned) {
        throw OrderingViolation("point at " + format_real(record_.points[for_point].time()) +
                                " reads unmarked point at " + format_real(p.time()) + " on " +
                                to_string(p.neuron()));
      }
      if (p.accepted() && (regions.size() == 1 || seen.insert(*it).second)) {
        out.push_back(Spike{p.neuron(), p.time()});
      }
    }
  }
  return out;
}

void BackwardForwardEngine::forward_thin() {
  auto order = std::exchange(unthinned_, {});
  std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    return forward_order(record_.points[a], record_.points[b]);
  });
  for (const std::size_t idx : order) {
    auto& p = record_.points[idx];
    double phi = 0.0;
    switch (p.v_mark()) {
      case NeighborhoodMark::unassigned:
        throw OrderingViolation("thinning a point whose neighborhood is not drawn");
      case NeighborhoodMark::empty:
        phi = model_.phi_empty(p.neuron());
        break;
      case NeighborhoodMark::window: {
        const auto spikes = accepted_inside(p.neighborhood().shifted(p.time()), idx);
        phi = model_.phi_v(p.neuron(), p.neighborhood(), p.time(), spikes);
        break;
      }
    }
    p.assign_accept(thinning_.bernoulli(phi / bound_));
  }
}

void BackwardForwardEngine::run() {
  const auto started = std::chrono::steady_clock::now();
  const double t0 = record_.t0;
  const double t1 = record_.t1;
  if (t0 < t1) {
    double next = t0 + candidates_.exponential(bound_);
    while (next < t1) {
      add_candidate(next);
      backward_expand();
      forward_thin();
      next += candidates_.exponential(bound_);
    }
  }
  record_.accepted_output.clear();
  for (const auto& p : record_.points) {
    if (p.origin() == Origin::candidate && p.accepted() && p.time() >= t0 && p.time() <= t1) {
      record_.accepted_output.push_back(p.time());
    }
  }
  std::sort(record_.accepted_output.begin(), record_.accepted_output.end());
  if (options_.check_soundness) {
    std::string problem;
    if (!coverage_sound(record_, &problem)) throw std::logic_error("coverage unsound: " + problem);
  }
  record_.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
}

SimulationRecord simulate_bf(const KalikowModel& model, NeuronId target, double t0, double t1,
                             std::uint64_t seed, BfOptions options) {
  BackwardForwardEngine engine(model, target, t0, t1, seed, options);
  engine.run();
  return engine.take();
}

bool coverage_sound(const SimulationRecord& record, std::string* problem) {
  std::map<NeuronId, std::vector<TimeInterval>> fills;
  for (const auto& r : record.poisson_fills) fills[r.neuron].push_back(r.interval);
  const TimeInterval horizon{record.t0, record.t1};
  for (auto& [neuron, intervals] : fills) {
    std::sort(intervals.begin(), intervals.end(),
              [](const TimeInterval& a, const TimeInterval& b) { return a.start < b.start; });
    for (std::size_t k = 0; k < intervals.size(); ++k) {
      const auto& iv = intervals[k];
      if (k > 0 && intervals[k - 1].end > iv.start) {
        if (problem) {
          *problem = "fills overlap on " + to_string(neuron) + " at " + format_real(iv.start);
        }
        return false;
      }
      if (neuron == record.target && !horizon.empty() && iv.start < horizon.end &&
          horizon.start < iv.end) {
        if (problem) *problem = "fill on the target overlaps the candidate horizon";
        return false;
      }
    }
  }
  return true;
}

}  // namespace kalikow
