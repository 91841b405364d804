#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "kalikow/engine_bf.hpp"
#include "kalikow/model.hpp"

namespace kalikow {

struct HeatmapCell {
  std::size_t requests = 0;
  double simulated_time = 0.0;  // Poisson fills, plus the horizon on the target

  friend bool operator==(const HeatmapCell&, const HeatmapCell&) = default;
};

/// Per-neuron request counts and simulated time of one run.
struct HeatmapSummary {
  NeuronId target;
  std::map<NeuronId, HeatmapCell> cells;
  std::size_t accepted_count = 0;
  std::size_t total_points = 0;

  /// Number of neurons other than the target that were ever requested.
  std::size_t distinct_requested() const;
  /// Fraction of requests within Chebyshev distance `radius` of the target.
  double request_share_within(std::int64_t radius) const;
};

HeatmapSummary request_heatmap(const SimulationRecord& record);

struct RasterPoint {
  NeuronId neuron;
  double time = 0.0;
  AcceptMark mark = AcceptMark::unassigned;
  Origin origin = Origin::backward;

  friend bool operator==(const RasterPoint&, const RasterPoint&) = default;
};

struct Raster {
  std::vector<RasterPoint> points;
  std::vector<Region> segments;  // covered intervals clipped to the window

  friend bool operator==(const Raster&, const Raster&) = default;
};

/// Points (accepted and rejected) and covered segments of the listed neurons
/// inside `window`.
Raster raster(const SimulationRecord& record, const std::vector<NeuronId>& neurons,
              const TimeInterval& window);

/// Dominating branching tree of the backward phase, without overlap pruning:
/// each node draws v from lambda of its neuron and has Poisson(l(v) M)
/// children, each placed uniformly over v and marked with the neuron of the
/// entry it falls in.
struct TreeResult {
  std::vector<std::size_t> generation_sizes;  // Z^(0) = 1, Z^(1), ...
  bool extinct = false;
  std::size_t nodes = 0;     // nodes whose offspring were drawn
  std::size_t children = 0;  // total offspring of those nodes
};

TreeResult dominating_tree_sim(const KalikowModel& model, const NeuronId& root,
                               std::uint64_t seed, std::size_t max_generations,
                               std::size_t max_nodes = 10'000'000);

}  // namespace kalikow
