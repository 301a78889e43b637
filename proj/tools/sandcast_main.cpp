// sandcast — well-tops-guided sand fraction prediction from seismic attributes.
// Subcommands cover the full workflow: synthetic data, integration, zone-wise
// training, blind testing, volumetric prediction, filtering and sections.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sandcast/errors.hpp"
#include "sandcast/metrics.hpp"
#include "sandcast/parallel.hpp"
#include "sandcast/pipeline.hpp"
#include "sandcast/runlog.hpp"
#include "sandcast/selftest.hpp"

namespace fs = std::filesystem;
using namespace sandcast;

namespace {

struct CommandResult {
    std::map<std::string, std::string> input_hashes;
    std::map<std::string, double> metrics;
};

void hash_input(CommandResult& res, const std::string& path) {
    res.input_hashes[path] = runlog::hex64(runlog::fnv1a64_file(path));
}

mann::HiddenSpec parse_hidden_spec(const std::string& s) {
    mann::HiddenSpec spec;
    if (s == "auto") return spec;
    std::array<int, 3> fixed{};
    std::stringstream ss(s);
    std::string tok;
    int i = 0;
    while (std::getline(ss, tok, ',')) {
        if (i >= 3) throw UsageError("--hidden wants 'auto', one size, or three sizes H1,H2,H3");
        try {
            fixed[static_cast<std::size_t>(i)] = std::stoi(tok);
        } catch (...) {
            throw UsageError("--hidden: '" + tok + "' is not an integer");
        }
        ++i;
    }
    if (i == 1) fixed = {fixed[0], fixed[0], fixed[0]};
    else if (i != 3) throw UsageError("--hidden wants 'auto', one size, or three sizes H1,H2,H3");
    for (int h : fixed)
        if (h < 1) throw UsageError("--hidden sizes must be >= 1");
    spec.fixed = fixed;
    return spec;
}

std::string join_path(const std::string& dir, const char* name) {
    return (fs::path(dir) / name).string();
}

void hash_training_inputs(CommandResult& res, const std::string& data_dir) {
    hash_input(res, join_path(data_dir, "wells_integrated.csv"));
    hash_input(res, join_path(data_dir, "tops.csv"));
}

void add_report_metrics(CommandResult& res, const mann::BlindReport& rep) {
    for (const auto& row : rep.rows) {
        res.metrics["cc_" + row.scope] = row.cc;
        res.metrics["rmse_" + row.scope] = row.rmse;
        res.metrics["aem_" + row.scope] = row.aem;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sandcast — zone-modular neural prediction of sand fraction from seismic attributes"};
    app.require_subcommand(1);

    // ---- synth ----
    auto* synth_cmd = app.add_subcommand("synth", "Generate a deterministic synthetic field");
    struct {
        std::uint64_t seed = 42;
        std::string out;
        int wells = 8, inlines = 40, xlines = 40;
        std::size_t samples = 300;
        double t0 = 800.0, dt = 2.0, noise = 0.02;
        int harmonics = 8;
    } synth_opt;
    synth_cmd->add_option("--seed", synth_opt.seed, "RNG seed")->capture_default_str();
    synth_cmd->add_option("--out", synth_opt.out, "Output directory")->required();
    synth_cmd->add_option("--wells", synth_opt.wells)->capture_default_str();
    synth_cmd->add_option("--inlines", synth_opt.inlines)->capture_default_str();
    synth_cmd->add_option("--xlines", synth_opt.xlines)->capture_default_str();
    synth_cmd->add_option("--samples", synth_opt.samples)->capture_default_str();
    synth_cmd->add_option("--t0", synth_opt.t0, "ms")->capture_default_str();
    synth_cmd->add_option("--dt", synth_opt.dt, "ms")->capture_default_str();
    synth_cmd->add_option("--noise", synth_opt.noise, "target noise sigma")->capture_default_str();
    synth_cmd->add_option("--harmonics", synth_opt.harmonics)->capture_default_str();

    // ---- ingest ----
    auto* ingest_cmd = app.add_subcommand(
        "ingest", "Integrate raw logs + checkshots + locations + volume to 0.10 ms");
    struct {
        std::string data;
        std::string out;
        double dt_out = ingest::kDtOut;
    } ingest_opt;
    ingest_cmd->add_option("--data", ingest_opt.data, "Data directory")->required();
    ingest_cmd->add_option("--out", ingest_opt.out, "Output CSV (default <data>/wells_integrated.csv)");
    ingest_cmd->add_option("--dt-out", ingest_opt.dt_out, "ms")->capture_default_str();

    // ---- train ----
    auto* train_cmd = app.add_subcommand("train", "Train the three-zone MANN (leave one well out)");
    struct {
        std::string data, blind, hidden = "auto", out;
        int max_epoch = 2000;
        double err_min = 1e-4;
        std::uint64_t seed = 0;
    } train_opt;
    train_cmd->add_option("--data", train_opt.data)->required();
    train_cmd->add_option("--blind", train_opt.blind, "Blind well id")->required();
    train_cmd->add_option("--hidden", train_opt.hidden, "'auto', H, or H1,H2,H3")->capture_default_str();
    train_cmd->add_option("--max-epoch", train_opt.max_epoch)->capture_default_str();
    train_cmd->add_option("--err-min", train_opt.err_min)->capture_default_str();
    train_cmd->add_option("--seed", train_opt.seed)->capture_default_str();
    train_cmd->add_option("--out", train_opt.out, "Model JSON path")->required();

    // ---- train-single ----
    auto* single_cmd = app.add_subcommand("train-single", "Train the single-ANN baseline");
    struct {
        std::string data, blind, hidden = "auto", match_mann, out;
        int max_epoch = 2000;
        double err_min = 1e-4;
        std::uint64_t seed = 0;
    } single_opt;
    single_cmd->add_option("--data", single_opt.data)->required();
    single_cmd->add_option("--blind", single_opt.blind)->required();
    single_cmd->add_option("--hidden", single_opt.hidden, "'auto' or H")->capture_default_str();
    single_cmd->add_option("--match-mann", single_opt.match_mann,
                           "MANN model JSON; forces H = H1+H2+H3 (capacity-matched)");
    single_cmd->add_option("--max-epoch", single_opt.max_epoch)->capture_default_str();
    single_cmd->add_option("--err-min", single_opt.err_min)->capture_default_str();
    single_cmd->add_option("--seed", single_opt.seed)->capture_default_str();
    single_cmd->add_option("--out", single_opt.out)->required();

    // ---- blind-test ----
    auto* blind_cmd = app.add_subcommand("blind-test", "Evaluate saved models on the blind well");
    struct {
        std::string data, model, single, out;
    } blind_opt;
    blind_cmd->add_option("--data", blind_opt.data)->required();
    blind_cmd->add_option("--model", blind_opt.model, "MANN model JSON")->required();
    blind_cmd->add_option("--single", blind_opt.single, "Single-ANN model JSON")->required();
    blind_cmd->add_option("--out", blind_opt.out, "Report CSV")->required();

    // ---- compare ----
    auto* compare_cmd = app.add_subcommand(
        "compare", "Train MANN + single ANN in-process and report metrics with measured times");
    struct {
        std::string data, blind, hidden = "auto", single_hidden = "matched", out;
        std::string save_mann, save_single;
        int max_epoch = 2000;
        double err_min = 1e-4;
        std::uint64_t seed = 0;
    } compare_opt;
    compare_cmd->add_option("--data", compare_opt.data)->required();
    compare_cmd->add_option("--blind", compare_opt.blind)->required();
    compare_cmd->add_option("--hidden", compare_opt.hidden, "'auto', H, or H1,H2,H3")->capture_default_str();
    compare_cmd->add_option("--single-hidden", compare_opt.single_hidden,
                            "'matched' (H1+H2+H3), 'auto', or H")->capture_default_str();
    compare_cmd->add_option("--max-epoch", compare_opt.max_epoch)->capture_default_str();
    compare_cmd->add_option("--err-min", compare_opt.err_min)->capture_default_str();
    compare_cmd->add_option("--seed", compare_opt.seed)->capture_default_str();
    compare_cmd->add_option("--out", compare_opt.out, "Report CSV")->required();
    compare_cmd->add_option("--save-mann", compare_opt.save_mann, "Optional MANN model output");
    compare_cmd->add_option("--save-single", compare_opt.save_single, "Optional baseline output");

    // ---- volume-predict ----
    auto* volpred_cmd = app.add_subcommand("volume-predict", "Predict sand fraction over a volume");
    struct {
        std::string model, volume, horizons, out;
        int threads = default_threads();
    } volpred_opt;
    volpred_cmd->add_option("--model", volpred_opt.model)->required();
    volpred_cmd->add_option("--volume", volpred_opt.volume, "Attribute volume CSV")->required();
    volpred_cmd->add_option("--horizons", volpred_opt.horizons, "Horizon CSV")->required();
    volpred_cmd->add_option("--out", volpred_opt.out, "Sand fraction volume CSV")->required();
    volpred_cmd->add_option("--threads", volpred_opt.threads)->capture_default_str();

    // ---- filter ----
    auto* filter_cmd = app.add_subcommand("filter", "NaN-aware moving average, per inline section");
    struct {
        std::string in, out;
        int window = 3;
        int threads = default_threads();
    } filter_opt;
    filter_cmd->add_option("--in", filter_opt.in, "Sand fraction volume CSV")->required();
    filter_cmd->add_option("--out", filter_opt.out)->required();
    filter_cmd->add_option("--window", filter_opt.window, "odd window size")->capture_default_str();
    filter_cmd->add_option("--threads", filter_opt.threads)->capture_default_str();

    // ---- section ----
    auto* section_cmd = app.add_subcommand("section", "Extract one inline as CSV grid or PGM");
    struct {
        std::string volume, format = "csv", out;
        int inline_no = 0;
    } section_opt;
    section_cmd->add_option("--volume", section_opt.volume)->required();
    section_cmd->add_option("--inline", section_opt.inline_no)->required();
    section_cmd->add_option("--format", section_opt.format, "csv or pgm")->capture_default_str();
    section_cmd->add_option("--out", section_opt.out)->required();

    // ---- selftest ----
    auto* selftest_cmd = app.add_subcommand("selftest", "Run the acceptance property suite");
    struct {
        int threads = default_threads();
    } selftest_opt;
    selftest_cmd->add_option("--threads", selftest_opt.threads)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << "usage error: " << e.what() << '\n';
        std::cerr << app.help() << '\n';
        return 1;
    }

    std::ostringstream argv_line;
    for (int i = 0; i < argc; ++i) argv_line << (i ? " " : "") << argv[i];

    runlog::Entry entry;
    entry.argv_line = argv_line.str();
    const auto t_begin = std::chrono::steady_clock::now();
    int exit_code = 0;
    bool selftest_failed = false;

    try {
        CommandResult res;

        if (synth_cmd->parsed()) {
            entry.command = "synth";
            entry.seed = synth_opt.seed;
            entry.has_seed = true;
            synth::SynthConfig cfg;
            cfg.seed = synth_opt.seed;
            cfg.n_wells = synth_opt.wells;
            cfg.n_inlines = synth_opt.inlines;
            cfg.n_xlines = synth_opt.xlines;
            cfg.nt = synth_opt.samples;
            cfg.t0 = synth_opt.t0;
            cfg.dt = synth_opt.dt;
            cfg.noise_sigma = synth_opt.noise;
            cfg.n_harmonics = synth_opt.harmonics;
            auto field = synth::generate(cfg);
            synth::export_field(field, synth_opt.out);
            res.metrics["wells"] = cfg.n_wells;
            res.metrics["traces"] = static_cast<double>(field.volume.n_traces());
            std::cout << "wrote synthetic field (" << cfg.n_wells << " wells, "
                      << field.volume.n_traces() << " traces x " << field.volume.nt
                      << " samples) to " << synth_opt.out << '\n';
        } else if (ingest_cmd->parsed()) {
            entry.command = "ingest";
            for (const char* f : {"wells.csv", "checkshots.csv", "locations.csv", "volume.csv"})
                hash_input(res, join_path(ingest_opt.data, f));
            const std::string out = ingest_opt.out.empty()
                                        ? join_path(ingest_opt.data, "wells_integrated.csv")
                                        : ingest_opt.out;
            auto wells = pipeline::ingest_run(ingest_opt.data, out, ingest_opt.dt_out);
            std::size_t n = 0;
            for (const auto& w : wells) n += w.t.size();
            res.metrics["wells"] = static_cast<double>(wells.size());
            res.metrics["samples"] = static_cast<double>(n);
            std::cout << "integrated " << wells.size() << " wells (" << n << " samples at "
                      << ingest_opt.dt_out << " ms) -> " << out << '\n';
        } else if (train_cmd->parsed()) {
            entry.command = "train";
            entry.seed = train_opt.seed;
            entry.has_seed = true;
            hash_training_inputs(res, train_opt.data);
            auto in = pipeline::load_training_inputs(train_opt.data);
            nn::TrainConfig cfg;
            cfg.max_epoch = train_opt.max_epoch;
            cfg.err_min = train_opt.err_min;
            cfg.seed = train_opt.seed;
            auto model = pipeline::train_run(in, train_opt.blind,
                                             cfg, parse_hidden_spec(train_opt.hidden));
            mann::save_model(model, train_opt.out);
            for (int z = 0; z < 3; ++z) {
                const auto& zone = model.zones[static_cast<std::size_t>(z)];
                const std::string name = preprocess::kZoneNames[static_cast<std::size_t>(z)];
                res.metrics["H_" + name] = zone.mlp.hidden;
                res.metrics["rmse_" + name] = zone.trace.best_rmse;
                std::cout << name << ": H=" << zone.mlp.hidden << " epochs="
                          << zone.trace.epochs_run << " train RMSE=" << zone.trace.best_rmse
                          << " (" << nn::stop_reason_name(zone.trace.stop_reason) << ", "
                          << zone.trace.wall_time_s << " s)\n";
            }
            std::cout << "saved MANN model -> " << train_opt.out << '\n';
        } else if (single_cmd->parsed()) {
            entry.command = "train-single";
            entry.seed = single_opt.seed;
            entry.has_seed = true;
            hash_training_inputs(res, single_opt.data);
            auto in = pipeline::load_training_inputs(single_opt.data);
            nn::TrainConfig cfg;
            cfg.max_epoch = single_opt.max_epoch;
            cfg.err_min = single_opt.err_min;
            cfg.seed = single_opt.seed;
            int hidden = -1;
            if (!single_opt.match_mann.empty()) {
                hash_input(res, single_opt.match_mann);
                hidden = mann::load_model(single_opt.match_mann).total_hidden();
            } else if (single_opt.hidden != "auto") {
                try {
                    hidden = std::stoi(single_opt.hidden);
                } catch (...) {
                    throw UsageError("--hidden: '" + single_opt.hidden + "' is not an integer");
                }
                if (hidden < 1) throw UsageError("--hidden must be >= 1");
            }
            auto model = mann::train_single_ann(in.wells, in.tops, single_opt.blind, cfg, hidden);
            mann::save_single(model, single_opt.out);
            res.metrics["H"] = model.mlp.hidden;
            res.metrics["rmse"] = model.trace.best_rmse;
            std::cout << "single ANN: H=" << model.mlp.hidden << " epochs="
                      << model.trace.epochs_run << " train RMSE=" << model.trace.best_rmse << " ("
                      << model.trace.wall_time_s << " s)\nsaved -> " << single_opt.out << '\n';
        } else if (blind_cmd->parsed()) {
            entry.command = "blind-test";
            hash_training_inputs(res, blind_opt.data);
            hash_input(res, blind_opt.model);
            hash_input(res, blind_opt.single);
            auto in = pipeline::load_training_inputs(blind_opt.data);
            auto model = mann::load_model(blind_opt.model);
            auto single = mann::load_single(blind_opt.single);
            auto rep = pipeline::blind_test_run(in, model, single);
            mann::write_report_csv(blind_opt.out, rep);
            add_report_metrics(res, rep);
            for (const auto& row : rep.rows)
                std::cout << row.scope << ": cc=" << row.cc << " rmse=" << row.rmse
                          << " aem=" << row.aem << " n=" << row.n << '\n';
            std::cout << "wrote report -> " << blind_opt.out << '\n';
        } else if (compare_cmd->parsed()) {
            entry.command = "compare";
            entry.seed = compare_opt.seed;
            entry.has_seed = true;
            hash_training_inputs(res, compare_opt.data);
            auto in = pipeline::load_training_inputs(compare_opt.data);
            nn::TrainConfig cfg;
            cfg.max_epoch = compare_opt.max_epoch;
            cfg.err_min = compare_opt.err_min;
            cfg.seed = compare_opt.seed;
            auto model = pipeline::train_run(in, compare_opt.blind, cfg,
                                             parse_hidden_spec(compare_opt.hidden));
            int single_hidden;
            if (compare_opt.single_hidden == "matched")
                single_hidden = model.total_hidden();
            else if (compare_opt.single_hidden == "auto")
                single_hidden = -1;
            else {
                try {
                    single_hidden = std::stoi(compare_opt.single_hidden);
                } catch (...) {
                    throw UsageError("--single-hidden wants 'matched', 'auto' or an integer");
                }
                if (single_hidden < 1) throw UsageError("--single-hidden must be >= 1");
            }
            auto single =
                mann::train_single_ann(in.wells, in.tops, compare_opt.blind, cfg, single_hidden);
            auto rep = pipeline::blind_test_run(in, model, single);
            mann::write_report_csv(compare_opt.out, rep);
            if (!compare_opt.save_mann.empty()) mann::save_model(model, compare_opt.save_mann);
            if (!compare_opt.save_single.empty())
                mann::save_single(single, compare_opt.save_single);
            add_report_metrics(res, rep);
            for (const auto& row : rep.rows)
                std::cout << row.scope << ": cc=" << row.cc << " rmse=" << row.rmse
                          << " aem=" << row.aem << " n=" << row.n << " time_s=" << row.time_s
                          << '\n';
            std::cout << "wrote report -> " << compare_opt.out << '\n';
        } else if (volpred_cmd->parsed()) {
            entry.command = "volume-predict";
            hash_input(res, volpred_opt.model);
            hash_input(res, volpred_opt.volume);
            hash_input(res, volpred_opt.horizons);
            auto model = mann::load_model(volpred_opt.model);
            auto vol = ingest::load_attribute_volume(volpred_opt.volume);
            auto hz = volume::load_horizons(volpred_opt.horizons);
            auto [sand, secs] = metrics::timed([&] {
                return volume::predict_volume(model, vol, hz, volpred_opt.threads);
            });
            volume::write_sand_volume(volpred_opt.out, sand);
            std::size_t n_nan = 0;
            for (double v : sand.values) n_nan += std::isnan(v);
            res.metrics["traces"] = static_cast<double>(sand.n_traces());
            res.metrics["nan_fraction"] =
                static_cast<double>(n_nan) / static_cast<double>(sand.values.size());
            std::cout << "predicted " << sand.n_traces() << " traces x " << sand.nt
                      << " samples in " << secs << " s -> " << volpred_opt.out << '\n';
        } else if (filter_cmd->parsed()) {
            entry.command = "filter";
            hash_input(res, filter_opt.in);
            auto vol = volume::load_sand_volume(filter_opt.in);
            auto out = volume::filter_volume(vol, filter_opt.window, filter_opt.threads);
            volume::write_sand_volume(filter_opt.out, out);
            res.metrics["window"] = filter_opt.window;
            std::cout << "filtered (window " << filter_opt.window << ") -> " << filter_opt.out
                      << '\n';
        } else if (section_cmd->parsed()) {
            entry.command = "section";
            hash_input(res, section_opt.volume);
            auto vol = volume::load_sand_volume(section_opt.volume);
            auto sec = volume::extract_section(vol, section_opt.inline_no);
            volume::SectionFormat fmt;
            if (section_opt.format == "csv")
                fmt = volume::SectionFormat::csv;
            else if (section_opt.format == "pgm")
                fmt = volume::SectionFormat::pgm;
            else
                throw UsageError("--format wants csv or pgm, got '" + section_opt.format + "'");
            volume::write_section(sec, section_opt.out, fmt);
            res.metrics["inline"] = section_opt.inline_no;
            std::cout << "wrote inline " << section_opt.inline_no << " section -> "
                      << section_opt.out << '\n';
        } else if (selftest_cmd->parsed()) {
            entry.command = "selftest";
            auto sum = selftest::run_all(std::cout, selftest_opt.threads);
            res.metrics["passed"] = sum.passed;
            res.metrics["failed"] = sum.failed;
            selftest_failed = !sum.ok();
        }

        entry.input_hashes = res.input_hashes;
        entry.metrics = res.metrics;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        exit_code = 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        exit_code = 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        exit_code = 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        exit_code = 2;
    }

    entry.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    if (exit_code != 0)
        entry.status = "error:" + std::to_string(exit_code);
    else if (selftest_failed)
        entry.status = "selftest_failed";
    try {
        runlog::append(entry);
    } catch (const std::exception& e) {
        std::cerr << "warning: could not append run log: " << e.what() << '\n';
    }
    if (selftest_failed && exit_code == 0) exit_code = 2;
    return exit_code;
}
