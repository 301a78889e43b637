// pybind11 surface over the sandcast core: the numeric primitives operate on
// numpy arrays / lists, the pipeline helpers on paths, mirroring the CLI.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sandcast/ingest.hpp"
#include "sandcast/mann.hpp"
#include "sandcast/metrics.hpp"
#include "sandcast/nn.hpp"
#include "sandcast/pipeline.hpp"
#include "sandcast/preprocess.hpp"
#include "sandcast/selftest.hpp"
#include "sandcast/synth.hpp"
#include "sandcast/volume.hpp"

#include <sstream>

namespace py = pybind11;
using namespace sandcast;

namespace {

std::vector<double> to_vec(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    return {a.data(), a.data() + a.size()};
}

py::dict report_to_dict(const mann::BlindReport& rep) {
    py::dict d;
    for (const auto& row : rep.rows) {
        py::dict r;
        r["cc"] = row.cc;
        r["rmse"] = row.rmse;
        r["aem"] = row.aem;
        r["n"] = row.n;
        r["time_s"] = row.time_s;
        d[row.scope.c_str()] = r;
    }
    return d;
}

} // namespace

PYBIND11_MODULE(_sandcast, m) {
    m.doc() = "Well-tops-guided modular neural network prediction of sand fraction";

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    // metrics
    m.def("cc", [](const py::array_t<double>& t, const py::array_t<double>& p) {
        return metrics::cc(to_vec(t), to_vec(p));
    }, py::arg("target"), py::arg("predicted"));
    m.def("rmse", [](const py::array_t<double>& t, const py::array_t<double>& p) {
        return metrics::rmse(to_vec(t), to_vec(p));
    }, py::arg("target"), py::arg("predicted"));
    m.def("aem", [](const py::array_t<double>& t, const py::array_t<double>& p) {
        return metrics::aem(to_vec(t), to_vec(p));
    }, py::arg("target"), py::arg("predicted"));

    // numeric primitives
    m.def("resample_uniform",
          [](const py::array_t<double>& t, const py::array_t<double>& v, double t_start,
             double t_end, double dt) {
              auto out = ingest::resample_uniform(to_vec(t), to_vec(v), t_start, t_end, dt);
              return py::array_t<double>(static_cast<py::ssize_t>(out.size()), out.data());
          },
          py::arg("t"), py::arg("v"), py::arg("t_start"), py::arg("t_end"), py::arg("dt"),
          "Not-a-knot cubic spline resampling onto a uniform grid");

    m.def("moving_average_filter",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& grid, int w) {
              if (grid.ndim() != 2) throw DataError("filter: expected a 2D array");
              const auto rows = static_cast<std::size_t>(grid.shape(0));
              const auto cols = static_cast<std::size_t>(grid.shape(1));
              auto out = volume::moving_average_filter(to_vec(grid), rows, cols, w);
              py::array_t<double> res({grid.shape(0), grid.shape(1)});
              std::copy(out.begin(), out.end(), res.mutable_data());
              return res;
          },
          py::arg("grid"), py::arg("w"),
          "NaN-aware moving average over a 2D grid, window cropped at edges");

    m.def("check_capacity", &nn::check_capacity, py::arg("hidden"), py::arg("n_train"));

    // pipeline, path-level (mirrors the CLI subcommands)
    m.def("synth_export",
          [](const std::string& out_dir, std::uint64_t seed, int wells, int inlines, int xlines,
             std::size_t samples, double noise_sigma) {
              synth::SynthConfig cfg;
              cfg.seed = seed;
              cfg.n_wells = wells;
              cfg.n_inlines = inlines;
              cfg.n_xlines = xlines;
              cfg.nt = samples;
              cfg.noise_sigma = noise_sigma;
              synth::export_field(synth::generate(cfg), out_dir);
          },
          py::arg("out_dir"), py::arg("seed") = 42, py::arg("wells") = 8, py::arg("inlines") = 40,
          py::arg("xlines") = 40, py::arg("samples") = 300, py::arg("noise_sigma") = 0.02);

    m.def("ingest",
          [](const std::string& data_dir, const std::string& out_csv) {
              const std::string out =
                  out_csv.empty() ? data_dir + "/wells_integrated.csv" : out_csv;
              return pipeline::ingest_run(data_dir, out).size();
          },
          py::arg("data_dir"), py::arg("out_csv") = "");

    m.def("train",
          [](const std::string& data_dir, const std::string& blind, const std::string& out_model,
             int hidden, int max_epoch, double err_min, std::uint64_t seed) {
              auto in = pipeline::load_training_inputs(data_dir);
              nn::TrainConfig cfg;
              cfg.max_epoch = max_epoch;
              cfg.err_min = err_min;
              cfg.seed = seed;
              mann::HiddenSpec spec;
              if (hidden >= 1) spec.fixed = {{hidden, hidden, hidden}};
              auto model = pipeline::train_run(in, blind, cfg, spec);
              mann::save_model(model, out_model);
              py::dict d;
              for (int z = 0; z < 3; ++z) {
                  const auto& zone = model.zones[static_cast<std::size_t>(z)];
                  py::dict zd;
                  zd["hidden"] = zone.mlp.hidden;
                  zd["epochs"] = zone.trace.epochs_run;
                  zd["train_rmse"] = zone.trace.best_rmse;
                  zd["time_s"] = zone.trace.wall_time_s;
                  d[preprocess::kZoneNames[static_cast<std::size_t>(z)]] = zd;
              }
              return d;
          },
          py::arg("data_dir"), py::arg("blind"), py::arg("out_model"), py::arg("hidden") = -1,
          py::arg("max_epoch") = 2000, py::arg("err_min") = 1e-4, py::arg("seed") = 0,
          "hidden < 1 selects the size automatically");

    m.def("train_single",
          [](const std::string& data_dir, const std::string& blind, const std::string& out_model,
             int hidden, int max_epoch, double err_min, std::uint64_t seed) {
              auto in = pipeline::load_training_inputs(data_dir);
              nn::TrainConfig cfg;
              cfg.max_epoch = max_epoch;
              cfg.err_min = err_min;
              cfg.seed = seed;
              auto model = mann::train_single_ann(in.wells, in.tops, blind, cfg, hidden);
              mann::save_single(model, out_model);
              py::dict d;
              d["hidden"] = model.mlp.hidden;
              d["epochs"] = model.trace.epochs_run;
              d["train_rmse"] = model.trace.best_rmse;
              d["time_s"] = model.trace.wall_time_s;
              return d;
          },
          py::arg("data_dir"), py::arg("blind"), py::arg("out_model"), py::arg("hidden") = -1,
          py::arg("max_epoch") = 2000, py::arg("err_min") = 1e-4, py::arg("seed") = 0);

    m.def("blind_test",
          [](const std::string& data_dir, const std::string& model_path,
             const std::string& single_path, const std::string& out_csv) {
              auto in = pipeline::load_training_inputs(data_dir);
              auto model = mann::load_model(model_path);
              auto single = mann::load_single(single_path);
              auto rep = pipeline::blind_test_run(in, model, single);
              if (!out_csv.empty()) mann::write_report_csv(out_csv, rep);
              return report_to_dict(rep);
          },
          py::arg("data_dir"), py::arg("model"), py::arg("single"), py::arg("out_csv") = "");

    m.def("predict_well",
          [](const std::string& data_dir, const std::string& model_path) {
              auto in = pipeline::load_training_inputs(data_dir);
              auto model = mann::load_model(model_path);
              const ingest::WellLog* blind = nullptr;
              for (const auto& w : in.wells)
                  if (w.well_id == model.blind_well_id) blind = &w;
              if (!blind) throw DataError("unknown-well: " + model.blind_well_id);
              auto pred =
                  mann::predict_well(model, *blind, preprocess::tops_for(in.tops, blind->well_id));
              py::dict d;
              d["t_ms"] = py::array_t<double>(static_cast<py::ssize_t>(blind->t.size()),
                                              blind->t.data());
              d["target"] = py::array_t<double>(
                  static_cast<py::ssize_t>(blind->sand_fraction.size()),
                  blind->sand_fraction.data());
              d["predicted"] =
                  py::array_t<double>(static_cast<py::ssize_t>(pred.size()), pred.data());
              return d;
          },
          py::arg("data_dir"), py::arg("model"));

    m.def("volume_predict",
          [](const std::string& model_path, const std::string& volume_csv,
             const std::string& horizons_csv, const std::string& out_csv, int threads) {
              auto model = mann::load_model(model_path);
              auto vol = ingest::load_attribute_volume(volume_csv);
              auto hz = volume::load_horizons(horizons_csv);
              auto sand = volume::predict_volume(model, vol, hz, threads);
              volume::write_sand_volume(out_csv, sand);
              return sand.n_traces() * sand.nt;
          },
          py::arg("model"), py::arg("volume_csv"), py::arg("horizons_csv"), py::arg("out_csv"),
          py::arg("threads") = 1);

    m.def("filter_volume",
          [](const std::string& in_csv, const std::string& out_csv, int w, int threads) {
              auto vol = volume::load_sand_volume(in_csv);
              volume::write_sand_volume(out_csv, volume::filter_volume(vol, w, threads));
          },
          py::arg("in_csv"), py::arg("out_csv"), py::arg("w") = 3, py::arg("threads") = 1);

    m.def("write_section",
          [](const std::string& volume_csv, int inline_no, const std::string& out,
             const std::string& format) {
              auto vol = volume::load_sand_volume(volume_csv);
              auto sec = volume::extract_section(vol, inline_no);
              volume::write_section(sec, out,
                                    format == "pgm" ? volume::SectionFormat::pgm
                                                    : volume::SectionFormat::csv);
          },
          py::arg("volume_csv"), py::arg("inline_no"), py::arg("out"), py::arg("format") = "csv");

    m.def("selftest",
          [](int threads) {
              std::ostringstream os;
              auto sum = selftest::run_all(os, threads);
              py::print(os.str());
              return sum.ok();
          },
          py::arg("threads") = 1, "Runs the acceptance property suite; returns True on pass");

    m.attr("__version__") = "1.0.0";
}
