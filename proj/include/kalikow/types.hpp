#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kalikow {

/// Lattice site on Z^2. Finite models place neuron k at (k, 0).
struct NeuronId {
  std::int64_t x = 0;
  std::int64_t y = 0;

  friend constexpr auto operator<=>(const NeuronId&, const NeuronId&) = default;
};

std::string to_string(const NeuronId& id);

/// Half-open time interval [start, end), in seconds.
struct TimeInterval {
  double start = 0.0;
  double end = 0.0;

  constexpr double length() const { return end > start ? end - start : 0.0; }
  constexpr bool empty() const { return !(start < end); }
  constexpr bool contains(double t) const { return start <= t && t < end; }

  friend constexpr bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

/// A (neuron, absolute time interval) pair.
struct Region {
  NeuronId neuron;
  TimeInterval interval;

  friend constexpr bool operator==(const Region&, const Region&) = default;
};

/// One entry of a neighborhood: the window is relative to the anchor and
/// lies in the strict past (window.end <= 0).
struct NeighborhoodEntry {
  NeuronId neuron;
  TimeInterval window;

  friend constexpr bool operator==(const NeighborhoodEntry&, const NeighborhoodEntry&) = default;
};

/// A finite set of (neuron, past window) pairs. No entries encodes the
/// empty neighborhood.
class NeighborhoodTemplate {
 public:
  NeighborhoodTemplate() = default;
  explicit NeighborhoodTemplate(std::vector<NeighborhoodEntry> entries);

  static NeighborhoodTemplate single(NeuronId neuron, TimeInterval window) {
    return NeighborhoodTemplate({NeighborhoodEntry{neuron, window}});
  }

  bool empty() const { return entries_.empty(); }
  const std::vector<NeighborhoodEntry>& entries() const { return entries_; }

  /// Sum of window lengths over all entries, whatever the neuron.
  double total_length() const;

  /// Windows translated so that relative time 0 maps to `anchor`.
  std::vector<Region> shifted(double anchor) const;

  friend bool operator==(const NeighborhoodTemplate&, const NeighborhoodTemplate&) = default;

 private:
  std::vector<NeighborhoodEntry> entries_;
};

/// An accepted spike, as read by local intensity rules.
struct Spike {
  NeuronId neuron;
  double time = 0.0;
};

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kalikow
