#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "kalikow/analysis.hpp"
#include "kalikow/engine_baseline.hpp"
#include "kalikow/engine_bf.hpp"
#include "kalikow/model.hpp"

namespace kalikow::io {

/// Unreadable or malformed input, or an unwritable output.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { lattice_gaussian, finite };

struct RunConfig {
  ModelKind kind = ModelKind::lattice_gaussian;
  std::shared_ptr<const KalikowModel> model;
  NeuronId target;
  double t0 = 0.0;
  double t1 = 0.0;
  std::uint64_t seed = 0;
  Limits limits;
  bool override_sparsity = false;

  /// Non-null iff kind == finite.
  const FiniteHawkesModel* finite() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

// points.csv: time,neuron_x,neuron_y,origin,generation,v_kind,accepted
// sorted by (time, neuron, creation sequence).
void write_points_csv(std::ostream& out, const SimulationRecord& record);
std::string points_csv(const SimulationRecord& record);
/// Restores the points of a record. Neighborhood templates are not stored,
/// only their kind.
std::vector<MarkedPoint> read_points_csv(std::istream& in);

// heatmap.csv: neuron_x,neuron_y,requests,simulated_time
void write_heatmap_csv(std::ostream& out, const HeatmapSummary& summary);

// coverage.csv: neuron_x,neuron_y,start,end
void write_coverage_csv(std::ostream& out, const CoverageMap& coverage);
CoverageMap read_coverage_csv(std::istream& in);

// tallies.csv: neuron_x,neuron_y,requests,simulated_time,simulated_points
void write_tallies_csv(std::ostream& out, const std::map<NeuronId, NeuronTally>& tallies);
std::map<NeuronId, NeuronTally> read_tallies_csv(std::istream& in);

// raster.csv: kind,neuron_x,neuron_y,start,end,accepted,origin
// kind is point (start == end) or segment (accepted and origin are "-").
void write_raster_csv(std::ostream& out, const Raster& raster);
Raster read_raster_csv(std::istream& in);

// spikes.csv: time,neuron_x,neuron_y sorted by (time, neuron)
void write_spikes_csv(std::ostream& out, const FiniteHawkesModel& model, const SpikeTrains& trains);

/// summary.json: accepted_count, total_points, covered_measure, seed,
/// model_fingerprint, wall_ms, plus target/t0/t1 so the directory can be
/// reloaded.
std::string summary_json(const SimulationRecord& record);

/// Writes points.csv, summary.json, coverage.csv and tallies.csv.
void save_record(const std::filesystem::path& dir, const SimulationRecord& record);
SimulationRecord load_record(const std::filesystem::path& dir);

}  // namespace kalikow::io
