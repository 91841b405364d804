#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "kalikow/analysis.hpp"
#include "kalikow/cli.hpp"
#include "kalikow/engine_baseline.hpp"
#include "kalikow/engine_bf.hpp"
#include "kalikow/io.hpp"
#include "kalikow/stats.hpp"

namespace py = pybind11;
using namespace kalikow;

namespace {

using Pair = std::pair<std::int64_t, std::int64_t>;

NeuronId to_id(const Pair& p) { return NeuronId{p.first, p.second}; }
Pair to_pair(const NeuronId& n) { return {n.x, n.y}; }

py::dict report_dict(const ValidationReport& r) {
  py::dict d;
  d["lambda_mass"] = r.lambda_mass;
  d["mass_ok"] = r.mass_ok;
  d["min_lambda_empty"] = r.min_lambda_empty;
  d["max_phi_empty"] = r.max_phi_empty;
  d["phi_empty_ok"] = r.phi_empty_ok;
  d["zeta"] = r.sparsity;
  d["zeta_ok"] = r.sparsity_ok;
  d["ok"] = r.ok();
  d["messages"] = r.messages;
  return d;
}

const char* origin_name(Origin o) { return o == Origin::candidate ? "candidate" : "backward"; }

py::list points_list(const SimulationRecord& r) {
  py::list out;
  for (const auto& p : r.points) {
    py::dict d;
    d["time"] = p.time();
    d["neuron"] = to_pair(p.neuron());
    d["origin"] = origin_name(p.origin());
    d["generation"] = p.generation();
    d["accepted"] = p.accepted();
    d["empty_neighborhood"] = p.v_mark() == NeighborhoodMark::empty;
    out.append(d);
  }
  return out;
}

py::dict tallies_dict(const SimulationRecord& r) {
  py::dict d;
  for (const auto& [n, t] : r.tallies) {
    d[py::cast(to_pair(n))] = py::make_tuple(t.requests, t.simulated_time, t.simulated_points);
  }
  return d;
}

py::dict heatmap_dict(const SimulationRecord& r) {
  const auto h = request_heatmap(r);
  py::dict cells;
  for (const auto& [n, c] : h.cells) {
    cells[py::cast(to_pair(n))] = py::make_tuple(c.requests, c.simulated_time);
  }
  py::dict d;
  d["cells"] = cells;
  d["accepted_count"] = h.accepted_count;
  d["total_points"] = h.total_points;
  d["distinct_requested"] = h.distinct_requested();
  return d;
}

}  // namespace

PYBIND11_MODULE(_kalikow, m) {
  m.doc() = "Backward-forward perfect simulation of one neuron in a Hawkes network";

  py::register_exception<InvalidModel>(m, "InvalidModel", PyExc_ValueError);
  py::register_exception<LimitExceeded>(m, "LimitExceeded", PyExc_RuntimeError);
  py::register_exception<io::IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<stats::InsufficientData>(m, "InsufficientData", PyExc_ValueError);

  py::class_<KalikowModel, std::shared_ptr<KalikowModel>>(m, "KalikowModel")
      .def_property_readonly("bound", &KalikowModel::bound)
      .def("phi_empty", [](const KalikowModel& k, const Pair& i) { return k.phi_empty(to_id(i)); })
      .def("validate", [](const KalikowModel& k) { return report_dict(k.validate()); })
      .def("fingerprint", &KalikowModel::fingerprint);

  py::class_<LatticeGaussianHawkesModel, KalikowModel, std::shared_ptr<LatticeGaussianHawkesModel>>(
      m, "LatticeGaussianHawkesModel")
      .def(py::init<double, double, double>(), py::arg("sigma"), py::arg("lambda_empty"),
           py::arg("M"))
      .def_property_readonly("sigma", &LatticeGaussianHawkesModel::sigma)
      .def_property_readonly("lambda_empty", &LatticeGaussianHawkesModel::lambda_empty)
      .def_property_readonly("nu", &LatticeGaussianHawkesModel::nu)
      .def_property_readonly("memory", &LatticeGaussianHawkesModel::memory)
      .def("cell_probability", &LatticeGaussianHawkesModel::cell_probability);

  py::class_<FiniteHawkesModel, KalikowModel, std::shared_ptr<FiniteHawkesModel>>(
      m, "FiniteHawkesModel")
      .def(py::init([](const std::vector<Pair>& neurons, std::vector<std::vector<double>> weights,
                       std::vector<double> nu, double memory, double bound) {
             std::vector<NeuronId> ids;
             for (const auto& p : neurons) ids.push_back(to_id(p));
             return std::make_shared<FiniteHawkesModel>(std::move(ids), std::move(weights),
                                                        std::move(nu), memory, bound);
           }),
           py::arg("neurons"), py::arg("weights"), py::arg("nu"), py::arg("memory"), py::arg("M"))
      .def_static(
          "coupled",
          [](const std::vector<Pair>& neurons, std::vector<std::vector<double>> weights,
             double bound) {
            std::vector<NeuronId> ids;
            for (const auto& p : neurons) ids.push_back(to_id(p));
            return std::make_shared<FiniteHawkesModel>(
                FiniteHawkesModel::coupled(std::move(ids), std::move(weights), bound));
          },
          py::arg("neurons"), py::arg("weights"), py::arg("M"))
      .def_property_readonly("memory", &FiniteHawkesModel::memory)
      .def_property_readonly("size", &FiniteHawkesModel::size)
      .def("nu", &FiniteHawkesModel::nu)
      .def("weight", &FiniteHawkesModel::weight)
      .def("hawkes_intensity",
           [](const FiniteHawkesModel& k, const Pair& i, double t,
              const std::vector<std::pair<Pair, double>>& history) {
             std::vector<Spike> h;
             for (const auto& [n, s] : history) h.push_back(Spike{to_id(n), s});
             return k.hawkes_intensity(to_id(i), t, h);
           },
           py::arg("neuron"), py::arg("t"), py::arg("history"));

  py::class_<SimulationRecord>(m, "SimulationRecord")
      .def_property_readonly("target", [](const SimulationRecord& r) { return to_pair(r.target); })
      .def_readonly("t0", &SimulationRecord::t0)
      .def_readonly("t1", &SimulationRecord::t1)
      .def_readonly("seed", &SimulationRecord::seed)
      .def_readonly("fingerprint", &SimulationRecord::fingerprint)
      .def_readonly("accepted", &SimulationRecord::accepted_output)
      .def_readonly("candidate_count", &SimulationRecord::candidate_count)
      .def_readonly("wall_ms", &SimulationRecord::wall_ms)
      .def_property_readonly("total_points",
                             [](const SimulationRecord& r) { return r.points.size(); })
      .def_property_readonly("covered_measure",
                             [](const SimulationRecord& r) { return r.coverage.measure(); })
      .def("points", &points_list)
      .def("tallies", &tallies_dict)
      .def("heatmap", &heatmap_dict)
      .def("points_csv", &io::points_csv)
      .def("summary_json", &io::summary_json)
      .def("save", [](const SimulationRecord& r, const std::filesystem::path& dir) {
        io::save_record(dir, r);
      })
      .def("coverage_sound", [](const SimulationRecord& r) { return coverage_sound(r); });

  m.def(
      "simulate_bf",
      [](const KalikowModel& model, const Pair& target, double t0, double t1, std::uint64_t seed,
         bool override_sparsity, std::size_t max_points, std::size_t max_generations) {
        BfOptions options;
        options.override_sparsity = override_sparsity;
        options.limits.max_points = max_points;
        options.limits.max_generations = max_generations;
        py::gil_scoped_release release;
        return simulate_bf(model, to_id(target), t0, t1, seed, options);
      },
      py::arg("model"), py::arg("target") = Pair{0, 0}, py::arg("t0") = 0.0, py::arg("t1") = 100.0,
      py::arg("seed") = 0, py::arg("override_sparsity") = false,
      py::arg("max_points") = Limits{}.max_points,
      py::arg("max_generations") = Limits{}.max_generations);

  m.def("load_record", [](const std::filesystem::path& dir) { return io::load_record(dir); });

  m.def(
      "simulate_ogata",
      [](const FiniteHawkesModel& model, double t0, double t1, std::uint64_t seed,
         const std::string& variant) {
        py::gil_scoped_release release;
        if (variant == "inverse") return simulate_ogata_inverse(model, t0, t1, seed);
        if (variant == "thinning") return simulate_ogata_thinning(model, t0, t1, seed);
        if (variant == "kalikow-full") return simulate_kalikow_full(model, t0, t1, seed);
        throw std::invalid_argument("variant must be inverse, thinning or kalikow-full");
      },
      py::arg("model"), py::arg("t0"), py::arg("t1"), py::arg("seed"),
      py::arg("variant") = "inverse");

  m.def(
      "dominating_tree",
      [](const KalikowModel& model, const Pair& root, std::uint64_t seed,
         std::size_t max_generations) {
        const auto t = dominating_tree_sim(model, to_id(root), seed, max_generations);
        py::dict d;
        d["generation_sizes"] = t.generation_sizes;
        d["extinct"] = t.extinct;
        d["nodes"] = t.nodes;
        d["children"] = t.children;
        return d;
      },
      py::arg("model"), py::arg("root") = Pair{0, 0}, py::arg("seed") = 0,
      py::arg("max_generations") = 1000);

  m.def(
      "rate_test",
      [](std::size_t count, double rate, double length, double alpha) {
        const auto r = stats::rate_test(count, rate, length, alpha);
        return py::make_tuple(r.z, r.passed);
      },
      py::arg("count"), py::arg("rate"), py::arg("length"), py::arg("alpha") = 0.05);
  m.def("ks_two_sample", [](const std::vector<double>& a, const std::vector<double>& b) {
    const auto r = stats::ks_two_sample(a, b);
    return py::make_tuple(r.statistic, r.p_value);
  });
  m.def("mann_whitney", [](const std::vector<double>& a, const std::vector<double>& b) {
    const auto r = stats::mann_whitney(a, b);
    return py::make_tuple(r.u, r.z, r.p_greater);
  });

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "kalikow");
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
}
