#include "kalikow/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kalikow/analysis.hpp"
#include "kalikow/engine_baseline.hpp"
#include "kalikow/engine_bf.hpp"
#include "kalikow/format.hpp"
#include "kalikow/io.hpp"
#include "kalikow/verify.hpp"

namespace kalikow::cli {

namespace fs = std::filesystem;

namespace {

NeuronId parse_neuron(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw io::IoError("neuron must be written x:y, got '" + text + "'");
  try {
    return NeuronId{std::stoll(text.substr(0, colon)), std::stoll(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw io::IoError("neuron must be written x:y, got '" + text + "'");
  }
}

TimeInterval parse_window(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("missing comma");
    return TimeInterval{std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw io::IoError("window must be written a,b, got '" + text + "'");
  }
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io::IoError("cannot write " + path.string());
  return out;
}

std::string short_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void print_report(std::ostream& out, const ValidationReport& report) {
  out << "lambda mass: " << short_real(report.lambda_mass) << (report.mass_ok ? " ok" : " FAIL")
      << "\n"
      << "max phi_empty: " << short_real(report.max_phi_empty)
      << (report.phi_empty_ok ? " ok" : " FAIL") << "\n"
      << "zeta: " << short_real(report.sparsity) << (report.sparsity_ok ? " ok" : " FAIL")
      << "\n";
  for (const auto& m : report.messages) out << "note: " << m << "\n";
}

int cmd_validate(const std::string& config_path, bool override_flag, std::ostream& out,
                 std::ostream& err) {
  const auto cfg = io::load_config(config_path);
  const auto report = cfg.model->validate();
  print_report(out, report);
  if (report.ok()) return kOk;
  if (override_flag || cfg.override_sparsity) {
    err << "warning: model fails validation; continuing because of override\n";
    return kOk;
  }
  err << "error: model fails validation\n";
  return kValidationFailure;
}

int cmd_simulate_bf(const std::string& config_path, const fs::path& out_dir, std::ostream& out) {
  const auto cfg = io::load_config(config_path);
  BfOptions options;
  options.limits = cfg.limits;
  options.override_sparsity = cfg.override_sparsity;
  const auto record = simulate_bf(*cfg.model, cfg.target, cfg.t0, cfg.t1, cfg.seed, options);
  io::save_record(out_dir, record);
  out << "accepted " << record.accepted_output.size() << " of " << record.candidate_count
      << " candidates; " << record.points.size() << " points simulated; covered measure "
      << format_real(record.coverage.measure()) << "\n";
  return kOk;
}

int cmd_simulate_ogata(const std::string& config_path, const std::string& variant,
                       const fs::path& out_dir, std::ostream& out) {
  const auto cfg = io::load_config(config_path);
  const auto* model = cfg.finite();
  if (model == nullptr) throw InvalidModel("simulate-ogata needs a finite model config");
  if (!cfg.override_sparsity && variant == "kalikow-full") {
    const auto report = model->validate();
    if (!report.ok()) throw InvalidModel("model fails validation");
  }
  SpikeTrains trains;
  if (variant == "inverse") {
    trains = simulate_ogata_inverse(*model, cfg.t0, cfg.t1, cfg.seed);
  } else if (variant == "thinning") {
    trains = simulate_ogata_thinning(*model, cfg.t0, cfg.t1, cfg.seed);
  } else {
    trains = simulate_kalikow_full(*model, cfg.t0, cfg.t1, cfg.seed);
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw io::IoError("cannot create " + out_dir.string());
  {
    auto f = open_output(out_dir / "spikes.csv");
    io::write_spikes_csv(f, *model, trains);
  }
  nlohmann::json summary;
  summary["variant"] = variant;
  summary["seed"] = cfg.seed;
  summary["model_fingerprint"] = model->fingerprint();
  summary["t0"] = cfg.t0;
  summary["t1"] = cfg.t1;
  std::size_t total = 0;
  auto counts = nlohmann::json::array();
  for (std::size_t i = 0; i < trains.size(); ++i) {
    counts.push_back({{"neuron", {model->neurons()[i].x, model->neurons()[i].y}},
                      {"count", trains[i].size()}});
    total += trains[i].size();
  }
  summary["counts"] = counts;
  summary["total_spikes"] = total;
  {
    auto f = open_output(out_dir / "summary.json");
    f << summary.dump(2) << "\n";
  }
  out << variant << ": " << total << " spikes\n";
  return kOk;
}

int cmd_verify(const std::string& suite, const std::string& config_path, const fs::path& out_dir,
               std::ostream& out) {
  const auto cfg = io::load_config(config_path);
  const auto results = verify::run_suite(suite, cfg.seed);
  bool all_passed = true;
  for (const auto& r : results) {
    out << verify::format_line(r) << "\n";
    all_passed = all_passed && r.passed;
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  auto f = open_output(out_dir / "verify.json");
  f << verify::to_json(results);
  return all_passed ? kOk : kValidationFailure;
}

int cmd_heatmap(const fs::path& record_dir, const fs::path& out_csv, std::ostream& out) {
  const auto record = io::load_record(record_dir);
  const auto summary = request_heatmap(record);
  auto f = open_output(out_csv);
  io::write_heatmap_csv(f, summary);
  out << summary.cells.size() << " neurons; " << summary.accepted_count << " accepted; "
      << summary.total_points << " points\n";
  return kOk;
}

int cmd_raster(const fs::path& record_dir, const std::vector<std::string>& neuron_args,
               const std::string& window_arg, const fs::path& out_csv, std::ostream& out) {
  const auto record = io::load_record(record_dir);
  std::vector<NeuronId> neurons;
  for (const auto& a : neuron_args) neurons.push_back(parse_neuron(a));
  const auto r = raster(record, neurons, parse_window(window_arg));
  auto f = open_output(out_csv);
  io::write_raster_csv(f, r);
  out << r.points.size() << " points, " << r.segments.size() << " segments\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Backward-forward perfect simulation of one neuron in a Hawkes network"};
  app.require_subcommand(1);

  std::string config, out_path, variant = "inverse", suite, record_dir, window;
  std::vector<std::string> neurons;
  bool override_flag = false;

  auto* sim_bf = app.add_subcommand("simulate-bf", "Run the backward-forward engine");
  sim_bf->add_option("--config", config, "JSON run configuration")->required();
  sim_bf->add_option("--out", out_path, "Output directory")->required();

  auto* sim_og = app.add_subcommand("simulate-ogata", "Run a finite-network baseline simulator");
  sim_og->add_option("--config", config)->required();
  sim_og->add_option("--variant", variant)
      ->check(CLI::IsMember({"inverse", "thinning", "kalikow-full"}));
  sim_og->add_option("--out", out_path)->required();

  auto* ver = app.add_subcommand("verify", "Run a statistical verification suite");
  ver->add_option("--suite", suite)
      ->required()
      ->check(CLI::IsMember({"poisson", "oracle", "branching", "figures", "all"}));
  ver->add_option("--config", config, "Config whose seed seeds the suite")->required();
  ver->add_option("--out", out_path)->required();

  auto* heat = app.add_subcommand("heatmap", "Per-neuron request/simulated-time table");
  heat->add_option("--record", record_dir, "Directory written by simulate-bf")->required();
  heat->add_option("--out", out_path, "Output CSV")->required();

  auto* ras = app.add_subcommand("raster", "Points and covered segments of selected neurons");
  ras->add_option("--record", record_dir)->required();
  ras->add_option("--neurons", neurons, "Neurons as x:y, comma separated")
      ->required()
      ->delimiter(',');
  ras->add_option("--window", window, "Time window a,b")->required();
  ras->add_option("--out", out_path)->required();

  auto* val = app.add_subcommand("validate", "Check decomposition and sparsity conditions");
  val->add_option("--config", config)->required();
  val->add_flag("--override", override_flag, "Exit 0 even if the sparsity check fails");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kIoError;
  }

  try {
    if (*sim_bf) return cmd_simulate_bf(config, out_path, out);
    if (*sim_og) return cmd_simulate_ogata(config, variant, out_path, out);
    if (*ver) return cmd_verify(suite, config, out_path, out);
    if (*heat) return cmd_heatmap(record_dir, out_path, out);
    if (*ras) return cmd_raster(record_dir, neurons, window, out_path, out);
    if (*val) return cmd_validate(config, override_flag, out, err);
  } catch (const InvalidModel& e) {
    err << "error: invalid model: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const io::IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const LimitExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kLimitOrAssertion;
  } catch (const std::logic_error& e) {
    err << "error: internal assertion: " << e.what() << "\n";
    return kLimitOrAssertion;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kLimitOrAssertion;
  }
  return kOk;
}

}  // namespace kalikow::cli
