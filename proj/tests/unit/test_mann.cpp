#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "sandcast/errors.hpp"
#include "sandcast/mann.hpp"
#include "sandcast/metrics.hpp"
#include "sandcast/pipeline.hpp"
#include "sandcast/rng.hpp"
#include "test_util.hpp"

using namespace sandcast;
using testutil::TempDir;
using testutil::slurp;

namespace {

// small zone-distinct field shared by the training tests
struct SmallField {
    synth::SynthField field;
    std::vector<ingest::WellLog> wells;

    SmallField() {
        synth::SynthConfig cfg;
        cfg.seed = 11;
        cfg.n_wells = 4;
        cfg.n_inlines = 12;
        cfg.n_xlines = 12;
        cfg.nt = 120;
        field = synth::generate(cfg);
        wells = pipeline::integrate_field(field);
    }
};

const SmallField& small_field() {
    static SmallField f;
    return f;
}

nn::TrainConfig quick_config(std::uint64_t seed, int epochs = 40) {
    nn::TrainConfig cfg;
    cfg.max_epoch = epochs;
    cfg.err_min = 1e-6;
    cfg.seed = seed;
    return cfg;
}

mann::MannModel zero_networks_model(const std::string& blind) {
    mann::MannModel m;
    m.blind_well_id = blind;
    const std::array<std::pair<double, double>, 3> ranges = {
        std::pair{0.0, 0.2}, {0.4, 0.6}, {0.6, 1.0}};
    for (int z = 0; z < 3; ++z) {
        auto& zm = m.zones[static_cast<std::size_t>(z)];
        zm.mlp.hidden = 1;
        zm.mlp.w1 = {0.0, 0.0, 0.0};
        zm.mlp.b1 = {0.0};
        zm.mlp.w2 = {0.0};
        zm.mlp.b2 = 0.0;
        zm.zstats.mean = {0.0, 0.0, 0.0};
        zm.zstats.std = {1.0, 1.0, 1.0};
        zm.mstats.y_min = ranges[static_cast<std::size_t>(z)].first;
        zm.mstats.y_max = ranges[static_cast<std::size_t>(z)].second;
    }
    return m;
}

} // namespace

TEST_CASE("train_mann structure and determinism") {
    const auto& sf = small_field();
    auto zoned = preprocess::partition_lowo(sf.wells, sf.field.tops, "W2");
    mann::HiddenSpec hidden;
    hidden.fixed = {{2, 2, 2}};
    auto model = mann::train_mann(zoned, quick_config(3), hidden);

    CHECK(model.blind_well_id == "W2");
    for (const auto& z : model.zones) {
        CHECK(z.trace.epochs_run > 0);
        CHECK(z.trace.rmse_history.size() == static_cast<std::size_t>(z.trace.epochs_run));
        CHECK(z.mlp.hidden == 2);
    }

    TempDir dir("mannsave");
    auto model2 = mann::train_mann(zoned, quick_config(3), hidden);
    mann::save_model(model, dir.file("a.json"));
    mann::save_model(model2, dir.file("b.json"));
    CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));
}

TEST_CASE("train_mann rejects an empty zone") {
    const auto& sf = small_field();
    auto zoned = preprocess::partition_lowo(sf.wells, sf.field.tops, "W2");
    zoned.zones[1].train.clear();
    CHECK_THROWS_WITH_AS(mann::train_mann(zoned, quick_config(1), {}),
                         doctest::Contains("empty-zone"), DataError);
}

TEST_CASE("predict_well routes by zone with the left-closed rule") {
    const auto& sf = small_field();
    const auto& blind = sf.wells[0];
    const auto& tops = preprocess::tops_for(sf.field.tops, blind.well_id);
    auto model = zero_networks_model(blind.well_id);

    auto pred = mann::predict_well(model, blind, tops);
    REQUIRE(pred.size() == blind.t.size());

    // all-zero nets emit normalized 0.5; denormalization identifies the zone
    const double v1 = 0.1, v2 = 0.5, v3 = 0.8;
    auto r = preprocess::segment_zones(blind, tops);
    for (std::size_t k = 0; k < pred.size(); ++k) {
        const double want = k < r.i1 ? v1 : (k < r.i2 ? v2 : v3);
        CHECK(pred[k] == doctest::Approx(want).epsilon(1e-12));
    }
    // boundary samples belong to the deeper zone
    CHECK(blind.t[r.i1] >= tops.top1_t);
    CHECK(pred[r.i1] == doctest::Approx(v2).epsilon(1e-12));
    CHECK(pred[r.i2] == doctest::Approx(v3).epsilon(1e-12));
    CHECK(pred[r.i1 - 1] == doctest::Approx(v1).epsilon(1e-12));
}

TEST_CASE("predict_well output stays in [0,1]") {
    const auto& sf = small_field();
    auto zoned = preprocess::partition_lowo(sf.wells, sf.field.tops, "W1");
    mann::HiddenSpec hidden;
    hidden.fixed = {{2, 2, 2}};
    auto model = mann::train_mann(zoned, quick_config(5, 20), hidden);
    const auto& blind = sf.wells[0];
    auto pred = mann::predict_well(model, blind,
                                   preprocess::tops_for(sf.field.tops, blind.well_id));
    for (double v : pred) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("train_single_ann pools the zones and compromises") {
    const auto& sf = small_field();
    auto cfg = quick_config(7, 60);
    auto single = mann::train_single_ann(sf.wells, sf.field.tops, "W2", cfg, 6);

    std::size_t n_train = 0;
    for (const auto& w : sf.wells)
        if (w.well_id != "W2") n_train += w.t.size();
    CHECK(nn::check_capacity(6, n_train));

    auto single2 = mann::train_single_ann(sf.wells, sf.field.tops, "W2", cfg, 6);
    CHECK(single.mlp.w1 == single2.mlp.w1);
    CHECK(single.mlp.b2 == single2.mlp.b2);

    // zone-distinct generators force the pooled fit to be no better than the
    // worst per-zone fit
    mann::HiddenSpec hidden;
    hidden.fixed = {{6, 6, 6}};
    auto zoned = preprocess::partition_lowo(sf.wells, sf.field.tops, "W2");
    auto model = mann::train_mann(zoned, cfg, hidden);
    double worst_zone = 0.0;
    for (const auto& z : model.zones) worst_zone = std::max(worst_zone, z.trace.best_rmse);
    CHECK(single.trace.best_rmse >= worst_zone);

    CHECK_THROWS_WITH_AS(mann::train_single_ann(sf.wells, sf.field.tops, "W9", cfg, 4),
                         doctest::Contains("unknown-well"), DataError);
}

TEST_CASE("compare: degenerate equality when zones carry identical data") {
    // well whose three zones hold identical copies of the same series
    ingest::WellLog w;
    w.well_id = "W1";
    UniformRng rng(13);
    const std::size_t block = 40;
    std::vector<double> imp(block), amp(block), frq(block), sf(block);
    for (std::size_t i = 0; i < block; ++i) {
        imp[i] = rng.uniform(-1, 1);
        amp[i] = rng.uniform(-1, 1);
        frq[i] = rng.uniform(-1, 1);
        sf[i] = rng.uniform(0.2, 0.8);
    }
    for (int rep = 0; rep < 3; ++rep)
        for (std::size_t i = 0; i < block; ++i) {
            w.t.push_back(static_cast<double>(w.t.size()) * 0.1);
            w.impedance.push_back(imp[i]);
            w.inst_amp.push_back(amp[i]);
            w.inst_freq.push_back(frq[i]);
            w.sand_fraction.push_back(sf[i]);
        }
    ingest::WellTops tops{"W1", w.t[block], w.t[2 * block]};

    auto shared_mlp = nn::init_weights(3, 99);
    mann::MannModel m;
    m.blind_well_id = "W1";
    mann::SingleModel s;
    s.blind_well_id = "W1";
    s.mlp = shared_mlp;
    s.zstats.mean = {0, 0, 0};
    s.zstats.std = {1, 1, 1};
    s.mstats.y_min = 0.0;
    s.mstats.y_max = 1.0;
    for (auto& zm : m.zones) {
        zm.mlp = shared_mlp;
        zm.zstats = s.zstats;
        zm.mstats = s.mstats;
        zm.trace.wall_time_s = 0.5;
    }

    auto rep = mann::compare(m, s, w, tops);
    const auto& avg = rep.row("average");
    const auto& single_row = rep.row("single_ann");
    CHECK(avg.cc == doctest::Approx(single_row.cc).epsilon(1e-12));
    CHECK(avg.rmse == doctest::Approx(single_row.rmse).epsilon(1e-12));
    CHECK(avg.aem == doctest::Approx(single_row.aem).epsilon(1e-12));
    CHECK(avg.time_s == doctest::Approx(1.5)); // t1 + t2 + t3
    CHECK(rep.row("weighted_average").cc == doctest::Approx(avg.cc).epsilon(1e-12));
}

TEST_CASE("compare metrics match a direct recomputation") {
    const auto& sf = small_field();
    auto zoned = preprocess::partition_lowo(sf.wells, sf.field.tops, "W3");
    mann::HiddenSpec hidden;
    hidden.fixed = {{2, 2, 2}};
    auto cfg = quick_config(2, 30);
    auto model = mann::train_mann(zoned, cfg, hidden);
    auto single = mann::train_single_ann(sf.wells, sf.field.tops, "W3", cfg, 6);
    const auto& blind = sf.wells[2];
    REQUIRE(blind.well_id == "W3");
    const auto& tops = preprocess::tops_for(sf.field.tops, "W3");

    auto rep = mann::compare(model, single, blind, tops);
    auto pred = mann::predict_well(model, blind, tops);
    auto r = preprocess::segment_zones(blind, tops);
    std::span<const double> t_z1(blind.sand_fraction.data(), r.i1);
    std::span<const double> p_z1(pred.data(), r.i1);
    CHECK(rep.row("Z1").cc == metrics::cc(t_z1, p_z1));
    CHECK(rep.row("Z1").rmse == metrics::rmse(t_z1, p_z1));
    CHECK(rep.row("Z1").aem == metrics::aem(t_z1, p_z1));
    CHECK(rep.row("Z1").n == r.i1);

    auto pred_s = mann::predict_well_single(single, blind);
    CHECK(rep.row("single_ann").cc == metrics::cc(blind.sand_fraction, pred_s));

    // blind mismatch
    auto single_other = single;
    single_other.blind_well_id = "W4";
    CHECK_THROWS_WITH_AS(mann::compare(model, single_other, blind, tops),
                         doctest::Contains("inconsistent-comparison"), DataError);
}

TEST_CASE("model persistence") {
    const auto& sf = small_field();
    auto zoned = preprocess::partition_lowo(sf.wells, sf.field.tops, "W4");
    mann::HiddenSpec hidden;
    hidden.fixed = {{3, 2, 2}};
    auto model = mann::train_mann(zoned, quick_config(8, 25), hidden);

    TempDir dir("persist");
    const auto path = dir.file("model.json");
    mann::save_model(model, path);
    auto back = mann::load_model(path);

    CHECK(back.blind_well_id == model.blind_well_id);
    CHECK(back.seed == model.seed);
    for (int z = 0; z < 3; ++z) {
        const auto& a = model.zones[static_cast<std::size_t>(z)];
        const auto& b = back.zones[static_cast<std::size_t>(z)];
        CHECK(a.mlp.hidden == b.mlp.hidden);
        CHECK(a.mlp.w1 == b.mlp.w1); // bitwise
        CHECK(a.mlp.b1 == b.mlp.b1);
        CHECK(a.mlp.w2 == b.mlp.w2);
        CHECK(a.mlp.b2 == b.mlp.b2);
        for (int j = 0; j < 3; ++j) {
            CHECK(a.zstats.mean[j] == b.zstats.mean[j]);
            CHECK(a.zstats.std[j] == b.zstats.std[j]);
        }
        CHECK(a.mstats.y_min == b.mstats.y_min);
        CHECK(a.mstats.y_max == b.mstats.y_max);
        CHECK(a.trace.best_rmse == b.trace.best_rmse);
        CHECK(a.trace.epochs_run == b.trace.epochs_run);
        CHECK(a.trace.stop_reason == b.trace.stop_reason);
    }
}

TEST_CASE("load_model rejects malformed files") {
    TempDir dir("badmodel");
    SUBCASE("two zones only") {
        auto model = zero_networks_model("W1");
        const auto path = dir.file("m.json");
        mann::save_model(model, path);
        auto text = slurp(path);
        // drop the last zone object: cheap surgery via json reparse
        auto j = nlohmann::json::parse(text);
        j["zones"].erase(2);
        testutil::write_file(dir, "two.json", j.dump());
        CHECK_THROWS_WITH_AS(mann::load_model(dir.file("two.json")),
                             doctest::Contains("malformed-model"), DataError);
    }
    SUBCASE("wrong format string") {
        testutil::write_file(dir, "fmt.json", R"({"format":"other","zones":[]})");
        CHECK_THROWS_AS(mann::load_model(dir.file("fmt.json")), DataError);
    }
    SUBCASE("not json at all") {
        testutil::write_file(dir, "junk.json", "not json");
        CHECK_THROWS_WITH_AS(mann::load_model(dir.file("junk.json")),
                             doctest::Contains("malformed-model"), DataError);
    }
    SUBCASE("hand-built minimal model loads and predicts") {
        auto model = zero_networks_model("W9");
        const auto path = dir.file("mini.json");
        mann::save_model(model, path);
        auto back = mann::load_model(path);
        ingest::WellLog w;
        w.well_id = "W9";
        for (int k = 0; k < 30; ++k) {
            w.t.push_back(0.1 * k);
            w.impedance.push_back(0.0);
            w.inst_amp.push_back(0.0);
            w.inst_freq.push_back(0.0);
            w.sand_fraction.push_back(0.5);
        }
        ingest::WellTops tops{"W9", 1.0, 2.0};
        auto pred = mann::predict_well(back, w, tops);
        CHECK(pred.size() == w.t.size());
        CHECK(pred[0] == doctest::Approx(0.1).epsilon(1e-12));
    }
}

TEST_CASE("single model persistence round trip") {
    const auto& sf = small_field();
    auto single = mann::train_single_ann(sf.wells, sf.field.tops, "W1", quick_config(4, 20), 4);
    TempDir dir("singlesave");
    const auto path = dir.file("single.json");
    mann::save_single(single, path);
    auto back = mann::load_single(path);
    CHECK(back.mlp.w1 == single.mlp.w1);
    CHECK(back.mstats.y_min == single.mstats.y_min);
    CHECK(back.blind_well_id == "W1");
}
