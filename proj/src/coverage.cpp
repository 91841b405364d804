#include "kalikow/coverage.hpp"

#include <algorithm>

namespace kalikow {

namespace {

const CoverageMap::Row kEmptyRow;

}  // namespace

std::vector<TimeInterval> subtract(const TimeInterval& interval, const CoverageMap::Row& row) {
  std::vector<TimeInterval> out;
  if (interval.empty()) return out;
  // First interval that could overlap: the one before the first start > interval.start.
  auto it = std::upper_bound(row.begin(), row.end(), interval.start,
                             [](double t, const TimeInterval& iv) { return t < iv.start; });
  if (it != row.begin()) --it;
  double cursor = interval.start;
  for (; it != row.end() && it->start < interval.end; ++it) {
    if (it->end <= cursor) continue;
    if (it->start > cursor) out.push_back(TimeInterval{cursor, it->start});
    cursor = std::max(cursor, it->end);
    if (cursor >= interval.end) break;
  }
  if (cursor < interval.end) out.push_back(TimeInterval{cursor, interval.end});
  return out;
}

std::vector<Region> CoverageMap::uncovered(std::span<const Region> regions) const {
  std::vector<Region> out;
  CoverageMap reported;
  for (const auto& r : regions) {
    for (const auto& piece : subtract(r.interval, row(r.neuron))) {
      for (const auto& fresh : subtract(piece, reported.row(r.neuron))) {
        out.push_back(Region{r.neuron, fresh});
        reported.insert(out.back());
      }
    }
  }
  return out;
}

void CoverageMap::insert(const Region& region) {
  if (region.interval.empty()) return;
  auto& row = rows_[region.neuron];
  double start = region.interval.start;
  double end = region.interval.end;
  // Intervals with end >= start touch or overlap the new one from the left.
  auto first = std::lower_bound(row.begin(), row.end(), start,
                                [](const TimeInterval& iv, double t) { return iv.end < t; });
  auto last = first;
  while (last != row.end() && last->start <= end) {
    start = std::min(start, last->start);
    end = std::max(end, last->end);
    ++last;
  }
  first = row.erase(first, last);
  row.insert(first, TimeInterval{start, end});
}

void CoverageMap::insert(std::span<const Region> regions) {
  for (const auto& r : regions) insert(r);
}

bool CoverageMap::covers(const NeuronId& neuron, double t) const {
  const auto& r = row(neuron);
  auto it = std::upper_bound(r.begin(), r.end(), t,
                             [](double x, const TimeInterval& iv) { return x < iv.start; });
  return it != r.begin() && std::prev(it)->contains(t);
}

double CoverageMap::measure() const {
  double total = 0.0;
  for (const auto& [neuron, row] : rows_) {
    for (const auto& iv : row) total += iv.length();
  }
  return total;
}

double CoverageMap::measure(const NeuronId& neuron) const {
  double total = 0.0;
  for (const auto& iv : row(neuron)) total += iv.length();
  return total;
}

const CoverageMap::Row& CoverageMap::row(const NeuronId& neuron) const {
  auto it = rows_.find(neuron);
  return it == rows_.end() ? kEmptyRow : it->second;
}

}  // namespace kalikow
