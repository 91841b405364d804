#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kalikow/coverage.hpp"
#include "kalikow/model.hpp"
#include "kalikow/random.hpp"
#include "kalikow/types.hpp"

namespace kalikow {

class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point was about to be thinned while a point inside its neighborhood was
/// still unmarked. Only an engine bug can cause this.
class OrderingViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Origin { candidate, backward };
enum class NeighborhoodMark { unassigned, empty, window };
enum class AcceptMark { unassigned, rejected, accepted };

/// A simulated point with its neuron, neighborhood and thinning marks. Each
/// mark is assigned at most once.
class MarkedPoint {
 public:
  MarkedPoint(double time, NeuronId neuron, Origin origin, std::uint32_t generation,
              std::size_t sequence)
      : time_(time), neuron_(neuron), origin_(origin), generation_(generation), sequence_(sequence) {}

  double time() const { return time_; }
  const NeuronId& neuron() const { return neuron_; }
  Origin origin() const { return origin_; }
  std::uint32_t generation() const { return generation_; }
  std::size_t sequence() const { return sequence_; }

  NeighborhoodMark v_mark() const { return v_mark_; }
  const NeighborhoodTemplate& neighborhood() const { return neighborhood_; }
  AcceptMark x_mark() const { return x_mark_; }
  bool accepted() const { return x_mark_ == AcceptMark::accepted; }

  void assign_neighborhood(NeighborhoodTemplate v);
  void assign_accept(bool accepted);

  /// Restores marks from a serialized record, where templates are not kept.
  void restore_marks(NeighborhoodMark v, AcceptMark x) {
    v_mark_ = v;
    x_mark_ = x;
  }

 private:
  double time_;
  NeuronId neuron_;
  Origin origin_;
  std::uint32_t generation_;
  std::size_t sequence_;
  NeighborhoodMark v_mark_ = NeighborhoodMark::unassigned;
  NeighborhoodTemplate neighborhood_;
  AcceptMark x_mark_ = AcceptMark::unassigned;
};

/// Orders points by (time, neuron, creation sequence).
bool forward_order(const MarkedPoint& a, const MarkedPoint& b);

struct NeuronTally {
  std::size_t requests = 0;        // times a drawn neighborhood pointed at this neuron
  double simulated_time = 0.0;     // length of Poisson fills on this neuron
  std::size_t simulated_points = 0;

  friend bool operator==(const NeuronTally&, const NeuronTally&) = default;
};

struct Limits {
  std::size_t max_points = 1'000'000;
  std::size_t max_generations = 10'000;
};

struct BfOptions {
  Limits limits;
  bool override_sparsity = false;
  /// Check exact disjointness of all Poisson fills after the run.
  bool check_soundness = false;
};

struct SimulationRecord {
  NeuronId target;
  double t0 = 0.0;
  double t1 = 0.0;
  std::uint64_t seed = 0;
  std::string fingerprint;
  std::vector<MarkedPoint> points;
  CoverageMap coverage;
  std::vector<Region> poisson_fills;
  std::map<NeuronId, NeuronTally> tallies;
  std::vector<double> accepted_output;
  std::size_t candidate_count = 0;
  double wall_ms = 0.0;
};

/// Backward-forward perfect simulation of one neuron on [t0, t1).
///
/// Candidates on the target arrive as a rate-M Poisson stream. For each, the
/// backward phase draws neighborhoods recursively and fills every region not
/// yet visited with a rate-M Poisson process; the forward phase then thins
/// the new points in time order, each one reading only accepted points of
/// its own neighborhood.
///
/// The coverage map starts with (target, [t0, t1)): that region is realized by
/// the candidate stream itself, so neighborhoods reaching into it reuse the
/// candidates already drawn.
class BackwardForwardEngine {
 public:
  BackwardForwardEngine(const KalikowModel& model, NeuronId target, double t0, double t1,
                        std::uint64_t seed, BfOptions options = {});

  /// Appends a candidate on the target with unassigned marks; returns its index.
  std::size_t add_candidate(double time);

  /// Draws neighborhoods until every point has one, filling uncovered parts
  /// with Poisson points. Returns the number of points created.
  std::size_t backward_expand();

  /// Assigns accept marks to every unthinned point, earliest first.
  void forward_thin();

  /// Runs the full schedule on [t0, t1).
  void run();

  const SimulationRecord& record() const { return record_; }
  SimulationRecord take() { return std::move(record_); }

 private:
  std::size_t add_point(double time, const NeuronId& neuron, Origin origin,
                        std::uint32_t generation);
  void fill_poisson(const Region& region, std::uint32_t generation,
                    std::vector<std::size_t>& created);
  std::vector<Spike> accepted_inside(const std::vector<Region>& regions, std::size_t for_point) const;

  const KalikowModel& model_;
  BfOptions options_;
  double bound_;
  RandomStream candidates_;
  RandomStream neighborhoods_;
  RandomStream fills_;
  RandomStream thinning_;
  SimulationRecord record_;
  double frontier_;  // latest candidate time; no request may reach past it
  std::vector<std::size_t> unassigned_v_;
  std::vector<std::size_t> unthinned_;
  // Point indices per neuron, sorted by (time, sequence).
  std::map<NeuronId, std::vector<std::size_t>> by_neuron_;
};

/// Runs the engine. Throws InvalidModel if validation fails without override,
/// LimitExceeded if the backward phase outgrows the limits.
SimulationRecord simulate_bf(const KalikowModel& model, NeuronId target, double t0, double t1,
                             std::uint64_t seed, BfOptions options = {});

/// True iff every Poisson fill is disjoint from every other fill on the same
/// neuron and from (target, [t0, t1)). `problem` receives the first conflict.
bool coverage_sound(const SimulationRecord& record, std::string* problem = nullptr);

}  // namespace kalikow
