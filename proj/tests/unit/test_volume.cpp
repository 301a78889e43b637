#include <doctest.h>

#include <cmath>

#include "sandcast/errors.hpp"
#include "sandcast/pipeline.hpp"
#include "sandcast/rng.hpp"
#include "sandcast/volume.hpp"
#include "test_util.hpp"

using namespace sandcast;
using testutil::TempDir;

namespace {

const double kNan = std::nan("");

bool same_grid(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::isnan(a[i]) != std::isnan(b[i])) return false;
        if (!std::isnan(a[i]) && a[i] != b[i]) return false;
    }
    return true;
}

} // namespace

TEST_CASE("moving average filter worked examples") {
    SUBCASE("3x3 impulse, w=3") {
        std::vector<double> g = {0, 0, 0, 0, 9, 0, 0, 0, 0};
        auto f = volume::moving_average_filter(g, 3, 3, 3);
        CHECK(f[4] == 1.0);   // center: mean of all nine
        CHECK(f[0] == 2.25);  // corner: 9/4 over the cropped window
    }
    SUBCASE("2x2 with NaN, w=3") {
        std::vector<double> g = {kNan, 2, 2, 2};
        auto f = volume::moving_average_filter(g, 2, 2, 3);
        CHECK(f[0] == 2.0);
    }
    SUBCASE("constant grid stays constant") {
        std::vector<double> g(30, 5.0);
        for (int w : {1, 3, 5}) {
            auto f = volume::moving_average_filter(g, 5, 6, w);
            for (double v : f) CHECK(v == 5.0);
        }
    }
    SUBCASE("all-NaN window produces NaN") {
        std::vector<double> g(9, kNan);
        auto f = volume::moving_average_filter(g, 3, 3, 3);
        for (double v : f) CHECK(std::isnan(v));
    }
}

TEST_CASE("filter w=1 is the identity on non-NaN cells") {
    UniformRng rng(8);
    std::vector<double> g(64);
    for (auto& v : g) v = rng.next01() < 0.2 ? kNan : rng.uniform(-3, 3);
    auto f = volume::moving_average_filter(g, 8, 8, 1);
    CHECK(same_grid(f, g));
}

TEST_CASE("filter rejects bad windows") {
    std::vector<double> g(9, 0.0);
    CHECK_THROWS_WITH_AS(volume::moving_average_filter(g, 3, 3, 2),
                         doctest::Contains("invalid-window"), DataError);
    CHECK_THROWS_AS(volume::moving_average_filter(g, 3, 3, 0), DataError);
    CHECK_THROWS_AS(volume::moving_average_filter(g, 3, 3, -3), DataError);
}

TEST_CASE("filter output bounded by input range") {
    UniformRng rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> g(100);
        double lo = 1e9, hi = -1e9;
        for (auto& v : g) {
            v = rng.next01() < 0.25 ? kNan : rng.uniform(-5, 5);
            if (!std::isnan(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        auto f = volume::moving_average_filter(g, 10, 10, 3);
        for (double v : f)
            if (!std::isnan(v)) {
                CHECK(v >= lo);
                CHECK(v <= hi);
            }
    }
}

TEST_CASE("filter is non-progressive (reads only the input)") {
    // a progressive (in-place) filter would smear the first row's result
    // into the second row's window; compare against the exact means
    std::vector<double> g = {8, 0, 0, 0, 0, 0, 0, 0, 0};
    auto f = volume::moving_average_filter(g, 3, 3, 3);
    CHECK(f[0] == 2.0);        // (8+0+0+0)/4
    CHECK(f[4] == doctest::Approx(8.0 / 9.0));
    CHECK(f[8] == 0.0);        // far corner untouched by the 8
}

namespace {

// fixture: predictable model (all-zero nets output normalized 0.5) over a
// tiny volume with one unpicked trace
struct VolumeFixture {
    ingest::AttributeVolume vol;
    volume::HorizonGrid hz;
    mann::MannModel model;

    VolumeFixture() {
        vol.inlines = {1, 2};
        vol.xlines = {7, 8};
        vol.t0 = 100.0;
        vol.dt = 2.0;
        vol.nt = 50;
        const std::size_t n = vol.n_traces() * vol.nt;
        vol.impedance.assign(n, 0.0);
        vol.inst_amp.assign(n, 0.0);
        vol.inst_freq.assign(n, 0.0);

        hz.inlines = vol.inlines;
        hz.xlines = vol.xlines;
        hz.top1 = {130.0, 131.0, 132.0, kNan};
        hz.top2 = {160.0, 161.0, 162.0, kNan};

        model.blind_well_id = "W1";
        const std::array<std::pair<double, double>, 3> ranges = {
            std::pair{0.0, 0.2}, {0.4, 0.6}, {0.6, 1.0}};
        for (int z = 0; z < 3; ++z) {
            auto& zm = model.zones[static_cast<std::size_t>(z)];
            zm.mlp.hidden = 1;
            zm.mlp.w1 = {0, 0, 0};
            zm.mlp.b1 = {0};
            zm.mlp.w2 = {0};
            zm.mlp.b2 = 0;
            zm.zstats.mean = {0, 0, 0};
            zm.zstats.std = {1, 1, 1};
            zm.mstats.y_min = ranges[static_cast<std::size_t>(z)].first;
            zm.mstats.y_max = ranges[static_cast<std::size_t>(z)].second;
        }
    }
};

} // namespace

TEST_CASE("predict_volume shapes, routing, NaN handling") {
    VolumeFixture fx;
    auto sand = volume::predict_volume(fx.model, fx.vol, fx.hz, 1);
    CHECK(sand.values.size() == fx.vol.n_traces() * fx.vol.nt);

    // unpicked trace is all NaN
    for (std::size_t k = 0; k < sand.nt; ++k) CHECK(std::isnan(sand.values[3 * sand.nt + k]));

    // picked traces: value changes exactly at horizon crossings
    for (std::size_t ti = 0; ti < 3; ++ti) {
        for (std::size_t k = 0; k < sand.nt; ++k) {
            const double t = sand.time_at(k);
            const double want = t < fx.hz.top1[ti] ? 0.1 : (t < fx.hz.top2[ti] ? 0.5 : 0.8);
            CHECK(sand.values[ti * sand.nt + k] == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("predict_volume geometry checks and parallel determinism") {
    VolumeFixture fx;
    SUBCASE("geometry mismatch") {
        auto hz_bad = fx.hz;
        hz_bad.xlines = {7, 9};
        CHECK_THROWS_WITH_AS(volume::predict_volume(fx.model, fx.vol, hz_bad, 1),
                             doctest::Contains("geometry"), DataError);
    }
    SUBCASE("serial equals parallel bitwise") {
        auto a = volume::predict_volume(fx.model, fx.vol, fx.hz, 1);
        auto b = volume::predict_volume(fx.model, fx.vol, fx.hz, 4);
        CHECK(same_grid(a.values, b.values));
    }
}

TEST_CASE("predict_volume agrees with predict_well at a well trace") {
    synth::SynthConfig cfg;
    cfg.seed = 21;
    cfg.n_wells = 3;
    cfg.n_inlines = 10;
    cfg.n_xlines = 10;
    cfg.nt = 100;
    auto field = synth::generate(cfg);
    auto wells = pipeline::integrate_field(field);

    nn::TrainConfig tc;
    tc.max_epoch = 30;
    tc.err_min = 1e-6;
    tc.seed = 2;
    mann::HiddenSpec hidden;
    hidden.fixed = {{2, 2, 2}};
    auto zoned = preprocess::partition_lowo(wells, field.tops, "W2");
    auto model = mann::train_mann(zoned, tc, hidden);

    auto sand = volume::predict_volume(model, field.volume, field.horizons, 1);
    const auto& blind = *std::find_if(wells.begin(), wells.end(),
                                      [](const auto& w) { return w.well_id == "W2"; });
    auto pred_log = mann::predict_well(model, blind, preprocess::tops_for(field.tops, "W2"));

    const auto& loc = *std::find_if(field.locations.begin(), field.locations.end(),
                                    [](const auto& l) { return l.well_id == "W2"; });
    const auto ti = field.volume.trace_index(loc.inline_no, loc.xline_no);
    REQUIRE(ti.has_value());

    // compare at the 2 ms knots shared by both grids
    std::size_t compared = 0;
    for (std::size_t k = 0; k < sand.nt; ++k) {
        const double t = sand.time_at(k);
        const double pos = (t - blind.t.front()) / ingest::kDtOut;
        const auto j = static_cast<std::ptrdiff_t>(std::llround(pos));
        if (j < 0 || j >= static_cast<std::ptrdiff_t>(blind.t.size())) continue;
        if (std::fabs(blind.t[static_cast<std::size_t>(j)] - t) > 1e-9) continue;
        CHECK(std::fabs(sand.values[*ti * sand.nt + k] -
                        pred_log[static_cast<std::size_t>(j)]) <= 1e-6);
        ++compared;
    }
    CHECK(compared > 50);
}

TEST_CASE("filter_volume per-inline independence and identity") {
    UniformRng rng(14);
    volume::SandFractionVolume vol;
    vol.inlines = {1, 2, 3};
    vol.xlines = {10, 11, 12, 13};
    vol.t0 = 0.0;
    vol.dt = 2.0;
    vol.nt = 20;
    vol.values.resize(vol.n_traces() * vol.nt);
    for (auto& v : vol.values) v = rng.next01() < 0.1 ? kNan : rng.next01();

    auto filtered = volume::filter_volume(vol, 3, 1);
    CHECK(same_grid(volume::filter_volume(vol, 3, 3).values, filtered.values));

    SUBCASE("w=1 identity") {
        auto f1 = volume::filter_volume(vol, 1, 1);
        CHECK(same_grid(f1.values, vol.values));
    }
    SUBCASE("permuting inlines permutes the output identically") {
        volume::SandFractionVolume permuted = vol;
        // swap inline blocks 0 and 2 (relabel so indices stay sorted)
        const std::size_t block = vol.xlines.size() * vol.nt;
        std::copy(vol.values.begin() + 2 * static_cast<std::ptrdiff_t>(block),
                  vol.values.begin() + 3 * static_cast<std::ptrdiff_t>(block),
                  permuted.values.begin());
        std::copy(vol.values.begin(), vol.values.begin() + static_cast<std::ptrdiff_t>(block),
                  permuted.values.begin() + 2 * static_cast<std::ptrdiff_t>(block));
        auto fp = volume::filter_volume(permuted, 3, 1);
        for (std::size_t i = 0; i < block; ++i) {
            CHECK((std::isnan(fp.values[i]) ? std::isnan(filtered.values[2 * block + i])
                                            : fp.values[i] == filtered.values[2 * block + i]));
            CHECK((std::isnan(fp.values[2 * block + i])
                       ? std::isnan(filtered.values[i])
                       : fp.values[2 * block + i] == filtered.values[i]));
        }
    }
}

TEST_CASE("sections") {
    VolumeFixture fx;
    auto sand = volume::predict_volume(fx.model, fx.vol, fx.hz, 1);

    SUBCASE("shape and missing inline") {
        auto s = volume::extract_section(sand, 1);
        CHECK(s.values.size() == sand.xlines.size() * sand.nt);
        CHECK(s.xlines == sand.xlines);
        CHECK_THROWS_WITH_AS(volume::extract_section(sand, 42),
                             doctest::Contains("missing-inline"), DataError);
    }
    SUBCASE("CSV round trip is bitwise") {
        auto s = volume::extract_section(sand, 2);
        TempDir dir("section");
        const auto path = dir.file("s.csv");
        volume::write_section(s, path, volume::SectionFormat::csv);
        auto back = volume::read_section_csv(path);
        CHECK(back.xlines == s.xlines);
        REQUIRE(back.values.size() == s.values.size());
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            if (std::isnan(s.values[i]))
                CHECK(std::isnan(back.values[i]));
            else
                CHECK(back.values[i] == s.values[i]);
        }
    }
    SUBCASE("all-NaN section writes an all-zero PGM with a sidecar note") {
        volume::Section s;
        s.inline_no = 5;
        s.xlines = {1, 2};
        s.times = {0.0, 2.0, 4.0};
        s.values.assign(6, kNan);
        TempDir dir("pgm");
        const auto path = dir.file("s.pgm");
        volume::write_section(s, path, volume::SectionFormat::pgm);
        const auto pgm = testutil::slurp(path);
        CHECK(pgm.rfind("P2\n3 2\n255\n", 0) == 0);
        for (char c : pgm.substr(10)) CHECK((c == '0' || c == ' ' || c == '\n'));
        const auto meta = testutil::slurp(path + ".meta.txt");
        CHECK(meta.find("degenerate") != std::string::npos);
    }
}

TEST_CASE("sand volume CSV round trip with NaN") {
    VolumeFixture fx;
    auto sand = volume::predict_volume(fx.model, fx.vol, fx.hz, 1);
    TempDir dir("sandvol");
    const auto path = dir.file("sand.csv");
    volume::write_sand_volume(path, sand);
    auto back = volume::load_sand_volume(path);
    CHECK(back.inlines == sand.inlines);
    CHECK(back.nt == sand.nt);
    CHECK(same_grid(back.values, sand.values));
}

TEST_CASE("horizon CSV round trip with nulls") {
    VolumeFixture fx;
    TempDir dir("hz");
    const auto path = dir.file("horizons.csv");
    volume::write_horizons(path, fx.hz);
    auto back = volume::load_horizons(path);
    CHECK(back.inlines == fx.hz.inlines);
    CHECK(same_grid(back.top1, fx.hz.top1));
    CHECK(same_grid(back.top2, fx.hz.top2));
}
