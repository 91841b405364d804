#include "kalikow/analysis.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "kalikow/random.hpp"

namespace kalikow {

std::size_t HeatmapSummary::distinct_requested() const {
  std::size_t n = 0;
  for (const auto& [neuron, cell] : cells) {
    if (neuron != target && cell.requests > 0) ++n;
  }
  return n;
}

double HeatmapSummary::request_share_within(std::int64_t radius) const {
  std::size_t near = 0;
  std::size_t total = 0;
  for (const auto& [neuron, cell] : cells) {
    total += cell.requests;
    const auto dist = std::max(std::llabs(neuron.x - target.x), std::llabs(neuron.y - target.y));
    if (dist <= radius) near += cell.requests;
  }
  return total == 0 ? 1.0 : static_cast<double>(near) / static_cast<double>(total);
}

HeatmapSummary request_heatmap(const SimulationRecord& record) {
  HeatmapSummary summary;
  summary.target = record.target;
  for (const auto& [neuron, tally] : record.tallies) {
    summary.cells[neuron] = HeatmapCell{tally.requests, tally.simulated_time};
  }
  summary.cells[record.target].simulated_time += TimeInterval{record.t0, record.t1}.length();
  summary.accepted_count = record.accepted_output.size();
  summary.total_points = record.points.size();
  return summary;
}

Raster raster(const SimulationRecord& record, const std::vector<NeuronId>& neurons,
              const TimeInterval& window) {
  const std::set<NeuronId> wanted(neurons.begin(), neurons.end());
  Raster out;
  for (const auto& p : record.points) {
    if (wanted.contains(p.neuron()) && window.contains(p.time())) {
      out.points.push_back(RasterPoint{p.neuron(), p.time(), p.x_mark(), p.origin()});
    }
  }
  std::sort(out.points.begin(), out.points.end(), [](const RasterPoint& a, const RasterPoint& b) {
    return a.time != b.time ? a.time < b.time : a.neuron < b.neuron;
  });
  for (const auto& neuron : wanted) {
    for (const auto& iv : record.coverage.row(neuron)) {
      const TimeInterval clipped{std::max(iv.start, window.start), std::min(iv.end, window.end)};
      if (!clipped.empty()) out.segments.push_back(Region{neuron, clipped});
    }
  }
  return out;
}

TreeResult dominating_tree_sim(const KalikowModel& model, const NeuronId& root,
                               std::uint64_t seed, std::size_t max_generations,
                               std::size_t max_nodes) {
  RandomStream choices(seed, "tree-neighborhoods");
  RandomStream offspring(seed, "tree-offspring");
  const double bound = model.bound();
  TreeResult result;
  std::vector<NeuronId> current{root};
  result.generation_sizes.push_back(1);
  std::size_t population = 1;
  while (!current.empty()) {
    if (result.generation_sizes.size() > max_generations || population > max_nodes) {
      return result;  // truncated
    }
    std::vector<NeuronId> next;
    for (const auto& neuron : current) {
      ++result.nodes;
      const auto v = model.sample_neighborhood(neuron, choices);
      if (v.empty()) continue;
      const double length = v.total_length();
      const auto count = offspring.poisson(length * bound);
      result.children += count;
      for (std::uint64_t c = 0; c < count; ++c) {
        double where = offspring.uniform() * length;
        const NeighborhoodEntry* home = &v.entries().back();
        for (const auto& e : v.entries()) {
          if (where < e.window.length()) {
            home = &e;
            break;
          }
          where -= e.window.length();
        }
        next.push_back(home->neuron);
      }
    }
    population += next.size();
    if (next.empty()) break;
    result.generation_sizes.push_back(next.size());
    current = std::move(next);
  }
  result.extinct = true;
  return result;
}

}  // namespace kalikow
