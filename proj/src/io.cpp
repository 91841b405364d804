#include "kalikow/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kalikow/format.hpp"

namespace kalikow::io {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> fields;
  std::string::size_type from = 0;
  while (true) {
    const auto at = line.find(sep, from);
    fields.push_back(line.substr(from, at - from));
    if (at == std::string::npos) break;
    from = at + 1;
  }
  return fields;
}

double parse_real(const std::string& s) {
  // strtod round-trips the %.17g output exactly and accepts inf/nan.
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw IoError("bad number '" + s + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw IoError("bad integer '" + s + "'");
  return v;
}

/// Reads a CSV with the exact expected header; returns data rows.
std::vector<std::vector<std::string>> read_table(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV, expected header '" + header + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw IoError("unexpected CSV header '" + line + "'");
  const auto width = split(header).size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != width) throw IoError("CSV row has wrong field count: '" + line + "'");
    rows.push_back(std::move(fields));
  }
  return rows;
}

NeuronId neuron_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw IoError("neuron must be [x, y]");
  return NeuronId{j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>()};
}

const char* origin_name(Origin o) { return o == Origin::candidate ? "candidate" : "backward"; }

const char* v_name(NeighborhoodMark v) {
  switch (v) {
    case NeighborhoodMark::empty:
      return "empty";
    case NeighborhoodMark::window:
      return "window";
    default:
      return "na";
  }
}

const char* x_name(AcceptMark x) {
  switch (x) {
    case AcceptMark::accepted:
      return "1";
    case AcceptMark::rejected:
      return "0";
    default:
      return "na";
  }
}

Origin parse_origin(const std::string& s) {
  if (s == "candidate") return Origin::candidate;
  if (s == "backward") return Origin::backward;
  throw IoError("bad origin '" + s + "'");
}

NeighborhoodMark parse_v(const std::string& s) {
  if (s == "na") return NeighborhoodMark::unassigned;
  if (s == "empty") return NeighborhoodMark::empty;
  if (s == "window") return NeighborhoodMark::window;
  throw IoError("bad v_kind '" + s + "'");
}

AcceptMark parse_x(const std::string& s) {
  if (s == "na") return AcceptMark::unassigned;
  if (s == "0") return AcceptMark::rejected;
  if (s == "1") return AcceptMark::accepted;
  throw IoError("bad accepted flag '" + s + "'");
}

}  // namespace

const FiniteHawkesModel* RunConfig::finite() const {
  return kind == ModelKind::finite ? dynamic_cast<const FiniteHawkesModel*>(model.get()) : nullptr;
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  try {
    const auto& m = doc.at("model");
    const auto kind = m.at("kind").get<std::string>();
    const double bound = m.at("M").get<double>();
    try {
      if (kind == "lattice-gaussian") {
        for (const char* key : {"nu", "A", "neurons", "weights"}) {
          if (m.contains(key)) {
            throw IoError(std::string("lattice-gaussian model derives nu and A; '") + key +
                          "' must not be supplied");
          }
        }
        cfg.kind = ModelKind::lattice_gaussian;
        cfg.model = std::make_shared<LatticeGaussianHawkesModel>(
            m.at("sigma").get<double>(), m.at("lambda_empty").get<double>(), bound);
      } else if (kind == "finite") {
        std::vector<NeuronId> neurons;
        for (const auto& n : m.at("neurons")) neurons.push_back(neuron_from_json(n));
        cfg.kind = ModelKind::finite;
        cfg.model = std::make_shared<FiniteHawkesModel>(
            std::move(neurons), m.at("weights").get<std::vector<std::vector<double>>>(),
            m.at("nu").get<std::vector<double>>(), m.at("A").get<double>(), bound);
      } else {
        throw IoError("unknown model kind '" + kind + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw InvalidModel(e.what());
    }
    cfg.target = neuron_from_json(doc.at("target"));
    cfg.t0 = doc.at("t0").get<double>();
    cfg.t1 = doc.at("t1").get<double>();
    if (!doc.at("seed").is_number_unsigned()) throw IoError("seed must be an unsigned integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("limits")) {
      const auto& l = doc.at("limits");
      cfg.limits.max_points = l.value("max_points", cfg.limits.max_points);
      cfg.limits.max_generations = l.value("max_generations", cfg.limits.max_generations);
    }
    cfg.override_sparsity = doc.value("override_sparsity", false);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed config: ") + e.what());
  }
  if (!(cfg.t0 <= cfg.t1)) throw IoError("config needs t0 <= t1");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

void write_points_csv(std::ostream& out, const SimulationRecord& record) {
  std::vector<const MarkedPoint*> order;
  order.reserve(record.points.size());
  for (const auto& p : record.points) order.push_back(&p);
  std::sort(order.begin(), order.end(),
            [](const MarkedPoint* a, const MarkedPoint* b) { return forward_order(*a, *b); });
  out << "time,neuron_x,neuron_y,origin,generation,v_kind,accepted\n";
  for (const auto* p : order) {
    out << format_real(p->time()) << ',' << p->neuron().x << ',' << p->neuron().y << ','
        << origin_name(p->origin()) << ',' << p->generation() << ',' << v_name(p->v_mark()) << ','
        << x_name(p->x_mark()) << '\n';
  }
}

std::string points_csv(const SimulationRecord& record) {
  std::ostringstream ss;
  write_points_csv(ss, record);
  return ss.str();
}

std::vector<MarkedPoint> read_points_csv(std::istream& in) {
  std::vector<MarkedPoint> points;
  for (const auto& f :
       read_table(in, "time,neuron_x,neuron_y,origin,generation,v_kind,accepted")) {
    MarkedPoint p(parse_real(f[0]),
                  NeuronId{parse_int<std::int64_t>(f[1]), parse_int<std::int64_t>(f[2])},
                  parse_origin(f[3]), parse_int<std::uint32_t>(f[4]), points.size());
    p.restore_marks(parse_v(f[5]), parse_x(f[6]));
    points.push_back(std::move(p));
  }
  return points;
}

void write_heatmap_csv(std::ostream& out, const HeatmapSummary& summary) {
  out << "neuron_x,neuron_y,requests,simulated_time\n";
  for (const auto& [n, cell] : summary.cells) {
    out << n.x << ',' << n.y << ',' << cell.requests << ',' << format_real(cell.simulated_time)
        << '\n';
  }
}

void write_coverage_csv(std::ostream& out, const CoverageMap& coverage) {
  out << "neuron_x,neuron_y,start,end\n";
  for (const auto& [n, row] : coverage.rows()) {
    for (const auto& iv : row) {
      out << n.x << ',' << n.y << ',' << format_real(iv.start) << ',' << format_real(iv.end)
          << '\n';
    }
  }
}

CoverageMap read_coverage_csv(std::istream& in) {
  CoverageMap map;
  for (const auto& f : read_table(in, "neuron_x,neuron_y,start,end")) {
    map.insert(Region{NeuronId{parse_int<std::int64_t>(f[0]), parse_int<std::int64_t>(f[1])},
                      TimeInterval{parse_real(f[2]), parse_real(f[3])}});
  }
  return map;
}

void write_tallies_csv(std::ostream& out, const std::map<NeuronId, NeuronTally>& tallies) {
  out << "neuron_x,neuron_y,requests,simulated_time,simulated_points\n";
  for (const auto& [n, t] : tallies) {
    out << n.x << ',' << n.y << ',' << t.requests << ',' << format_real(t.simulated_time) << ','
        << t.simulated_points << '\n';
  }
}

std::map<NeuronId, NeuronTally> read_tallies_csv(std::istream& in) {
  std::map<NeuronId, NeuronTally> tallies;
  for (const auto& f :
       read_table(in, "neuron_x,neuron_y,requests,simulated_time,simulated_points")) {
    tallies[NeuronId{parse_int<std::int64_t>(f[0]), parse_int<std::int64_t>(f[1])}] =
        NeuronTally{parse_int<std::size_t>(f[2]), parse_real(f[3]), parse_int<std::size_t>(f[4])};
  }
  return tallies;
}

void write_raster_csv(std::ostream& out, const Raster& raster) {
  out << "kind,neuron_x,neuron_y,start,end,accepted,origin\n";
  for (const auto& p : raster.points) {
    const auto t = format_real(p.time);
    out << "point," << p.neuron.x << ',' << p.neuron.y << ',' << t << ',' << t << ','
        << x_name(p.mark) << ',' << origin_name(p.origin) << '\n';
  }
  for (const auto& s : raster.segments) {
    out << "segment," << s.neuron.x << ',' << s.neuron.y << ',' << format_real(s.interval.start)
        << ',' << format_real(s.interval.end) << ",-,-\n";
  }
}

Raster read_raster_csv(std::istream& in) {
  Raster raster;
  for (const auto& f : read_table(in, "kind,neuron_x,neuron_y,start,end,accepted,origin")) {
    const NeuronId n{parse_int<std::int64_t>(f[1]), parse_int<std::int64_t>(f[2])};
    if (f[0] == "point") {
      raster.points.push_back(RasterPoint{n, parse_real(f[3]), parse_x(f[5]), parse_origin(f[6])});
    } else if (f[0] == "segment") {
      raster.segments.push_back(Region{n, TimeInterval{parse_real(f[3]), parse_real(f[4])}});
    } else {
      throw IoError("bad raster row kind '" + f[0] + "'");
    }
  }
  return raster;
}

void write_spikes_csv(std::ostream& out, const FiniteHawkesModel& model,
                      const SpikeTrains& trains) {
  std::vector<std::pair<double, NeuronId>> rows;
  for (std::size_t i = 0; i < trains.size(); ++i) {
    for (double t : trains[i]) rows.emplace_back(t, model.neurons()[i]);
  }
  std::sort(rows.begin(), rows.end());
  out << "time,neuron_x,neuron_y\n";
  for (const auto& [t, n] : rows) out << format_real(t) << ',' << n.x << ',' << n.y << '\n';
}

std::string summary_json(const SimulationRecord& record) {
  json j;
  j["accepted_count"] = record.accepted_output.size();
  j["total_points"] = record.points.size();
  j["covered_measure"] = record.coverage.measure();
  j["seed"] = record.seed;
  j["model_fingerprint"] = record.fingerprint;
  j["wall_ms"] = record.wall_ms;
  j["target"] = {record.target.x, record.target.y};
  j["t0"] = record.t0;
  j["t1"] = record.t1;
  j["candidate_count"] = record.candidate_count;
  return j.dump(2) + "\n";
}

void save_record(const std::filesystem::path& dir, const SimulationRecord& record) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  {
    auto out = open_output(dir / "points.csv");
    write_points_csv(out, record);
  }
  {
    auto out = open_output(dir / "summary.json");
    out << summary_json(record);
  }
  {
    auto out = open_output(dir / "coverage.csv");
    write_coverage_csv(out, record.coverage);
  }
  {
    auto out = open_output(dir / "tallies.csv");
    write_tallies_csv(out, record.tallies);
  }
}

SimulationRecord load_record(const std::filesystem::path& dir) {
  SimulationRecord record;
  try {
    const auto summary = json::parse(read_file(dir / "summary.json"));
    record.seed = summary.at("seed").get<std::uint64_t>();
    record.fingerprint = summary.at("model_fingerprint").get<std::string>();
    record.wall_ms = summary.at("wall_ms").get<double>();
    record.target = neuron_from_json(summary.at("target"));
    record.t0 = summary.at("t0").get<double>();
    record.t1 = summary.at("t1").get<double>();
    record.candidate_count = summary.value("candidate_count", std::size_t{0});
  } catch (const json::exception& e) {
    throw IoError("malformed summary.json: " + std::string(e.what()));
  }
  {
    std::ifstream in(dir / "points.csv", std::ios::binary);
    if (!in) throw IoError("cannot open " + (dir / "points.csv").string());
    record.points = read_points_csv(in);
  }
  {
    std::ifstream in(dir / "coverage.csv", std::ios::binary);
    if (!in) throw IoError("cannot open " + (dir / "coverage.csv").string());
    record.coverage = read_coverage_csv(in);
  }
  {
    std::ifstream in(dir / "tallies.csv", std::ios::binary);
    if (!in) throw IoError("cannot open " + (dir / "tallies.csv").string());
    record.tallies = read_tallies_csv(in);
  }
  for (const auto& p : record.points) {
    if (p.origin() == Origin::candidate && p.accepted() && p.time() >= record.t0 &&
        p.time() <= record.t1) {
      record.accepted_output.push_back(p.time());
    }
  }
  return record;
}

}  // namespace kalikow::io
