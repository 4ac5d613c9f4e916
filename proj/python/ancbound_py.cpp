#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ancbound/anc.hpp"
#include "ancbound/dsp.hpp"
#include "ancbound/errors.hpp"
#include "ancbound/experiment.hpp"
#include "ancbound/info_bound.hpp"
#include "ancbound/room.hpp"
#include "ancbound/support_bound.hpp"

namespace py = pybind11;
using namespace ancbound;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vec(const Array& a) {
  if (a.ndim() != 1) throw ArgumentError("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

Array to_array(const std::vector<double>& v) { return Array(static_cast<py::ssize_t>(v.size()), v.data()); }

ExperimentConfig parse_config(const std::string& config_json) {
  return ExperimentConfig::from_json(nlohmann::json::parse(config_json.empty() ? "{}" : config_json));
}

}  // namespace

PYBIND11_MODULE(_ancbound, m) {
  m.doc() = "Native core of the ancbound toolkit; JSON crosses the boundary as strings.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<UndefinedMetricError>(m, "UndefinedMetricError", PyExc_ArithmeticError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("default_config_json", [] { return ExperimentConfig{}.to_json().dump(); });

  m.def(
      "simulate_paths",
      [](const std::string& config_json, double t60) {
        const auto cfg = parse_config(config_json);
        const auto p = simulate_paths(cfg.geometry, t60);
        return py::make_tuple(to_array(p.primary.vec()), to_array(p.secondary.vec()));
      },
      py::arg("config_json"), py::arg("t60_s"));

  m.def(
      "welch_psd",
      [](const Array& x, int fs, std::size_t window_len, double overlap) {
        const auto psd = welch_psd(Waveform(to_vec(x), fs), window_len, overlap);
        return py::make_tuple(to_array(psd.freqs_hz), to_array(psd.power_density));
      },
      py::arg("x"), py::arg("sample_rate_hz"), py::arg("window_len") = 1024, py::arg("overlap") = 0.75);

  m.def(
      "mutual_information",
      [](const Array& d, const Array& y, int fs, int bin_count, double bandwidth_scale,
         std::size_t frame_len, std::size_t frame_hop) {
        const KdeConfig kde{bin_count, bandwidth_scale, frame_len, frame_hop};
        return mutual_information(Waveform(to_vec(d), fs), Waveform(to_vec(y), fs), kde).to_json().dump();
      },
      py::arg("d"), py::arg("y"), py::arg("sample_rate_hz") = 16000, py::arg("bin_count") = 128,
      py::arg("bandwidth_scale") = 1.0, py::arg("frame_len") = 4096, py::arg("frame_hop") = 4096);

  m.def(
      "support_bound",
      [](const Array& primary, const Array& secondary, int fs, std::size_t fft_size, double threshold_db) {
        const PathPair paths{ImpulseResponse(to_vec(primary), fs), ImpulseResponse(to_vec(secondary), fs)};
        return support_bound_db(paths, std::nullopt, fft_size, threshold_db).to_json().dump();
      },
      py::arg("primary"), py::arg("secondary"), py::arg("sample_rate_hz") = 16000,
      py::arg("fft_size") = 1024, py::arg("threshold_db") = 45.0);

  m.def(
      "nmse_db",
      [](const Array& e, const Array& d, int fs) {
        return nmse_db(Waveform(to_vec(e), fs), Waveform(to_vec(d), fs)).db;
      },
      py::arg("e"), py::arg("d"), py::arg("sample_rate_hz") = 16000);

  m.def(
      "synth_noise",
      [](const std::string& kind, double seconds, int fs, std::uint64_t seed) {
        return to_array(synth_noise(parse_noise_kind(kind), seconds, fs, seed).vec());
      },
      py::arg("kind"), py::arg("seconds"), py::arg("sample_rate_hz") = 16000, py::arg("seed") = 0);

  m.def(
      "run_bound",
      [](const std::string& config_json, const std::string& noise, double t60, const std::string& canceller) {
        const auto cfg = parse_config(config_json);
        const NoiseInput in = load_noise_input(noise, cfg);
        const PathPair paths = simulate_paths(cfg.geometry, t60);
        py::gil_scoped_release release;
        const AncRun run = run_pipeline(in.x, paths, make_canceller(canceller, in.id, t60, cfg, in.x.size()));
        BoundRow row = evaluate_run(run, paths, cfg);
        row.noise_id = in.id;
        row.t60_s = t60;
        row.canceller = canceller;
        row.seed = cfg.seed;
        return row.to_json().dump();
      },
      py::arg("config_json"), py::arg("noise"), py::arg("t60_s"), py::arg("canceller"));

  m.def(
      "run_sweep",
      [](const std::string& config_json) {
        const auto cfg = parse_config(config_json);
        std::vector<BoundRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_sweep(cfg);
        }
        return py::make_tuple(report_json(rows, cfg.to_json()).dump(), report_csv(rows));
      },
      py::arg("config_json"));
}
