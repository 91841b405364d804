#include "kalikow/types.hpp"

#include <string>

namespace kalikow {

std::string to_string(const NeuronId& id) {
  return "(" + std::to_string(id.x) + "," + std::to_string(id.y) + ")";
}

NeighborhoodTemplate::NeighborhoodTemplate(std::vector<NeighborhoodEntry> entries)
    : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (!(e.window.end <= 0.0) || e.window.empty()) {
      throw ContractViolation("neighborhood window must be non-empty and end at or before 0");
    }
  }
}

double NeighborhoodTemplate::total_length() const {
  double total = 0.0;
  for (const auto& e : entries_) total += e.window.length();
  return total;
}

std::vector<Region> NeighborhoodTemplate::shifted(double anchor) const {
  std::vector<Region> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    out.push_back(Region{e.neuron, TimeInterval{anchor + e.window.start, anchor + e.window.end}});
  }
  return out;
}

}  // namespace kalikow
