#pragma once

#include <map>
#include <span>
#include <vector>

#include "kalikow/types.hpp"

namespace kalikow {

/// Per-neuron union of visited half-open time intervals. Each row is sorted
/// by start, pairwise disjoint, and never holds two abutting intervals.
class CoverageMap {
 public:
  using Row = std::vector<TimeInterval>;

  /// The part of `regions` not already covered, as disjoint non-empty pieces.
  /// Overlaps between the query's own entries are reported once.
  std::vector<Region> uncovered(std::span<const Region> regions) const;

  void insert(const Region& region);
  void insert(std::span<const Region> regions);

  bool covers(const NeuronId& neuron, double t) const;

  double measure() const;
  double measure(const NeuronId& neuron) const;

  const std::map<NeuronId, Row>& rows() const { return rows_; }
  const Row& row(const NeuronId& neuron) const;

  friend bool operator==(const CoverageMap&, const CoverageMap&) = default;

 private:
  std::map<NeuronId, Row> rows_;
};

/// interval \ row, for a sorted disjoint row. Empty pieces are dropped.
std::vector<TimeInterval> subtract(const TimeInterval& interval, const CoverageMap::Row& row);

}  // namespace kalikow
