#include <doctest.h>

#include <cmath>

#include "sandcast/errors.hpp"
#include "sandcast/pipeline.hpp"
#include "sandcast/runlog.hpp"
#include "sandcast/synth.hpp"
#include "test_util.hpp"

using namespace sandcast;
using testutil::TempDir;

namespace {

synth::SynthConfig small_config(std::uint64_t seed = 5) {
    synth::SynthConfig cfg;
    cfg.seed = seed;
    cfg.n_wells = 4;
    cfg.n_inlines = 14;
    cfg.n_xlines = 14;
    cfg.nt = 100;
    return cfg;
}

} // namespace

TEST_CASE("generate is deterministic") {
    auto a = synth::generate(small_config());
    auto b = synth::generate(small_config());
    CHECK(a.volume.impedance == b.volume.impedance);
    CHECK(a.volume.inst_freq == b.volume.inst_freq);
    CHECK(a.ground_truth.values == b.ground_truth.values);
    CHECK(a.horizons.top1 == b.horizons.top1);
    REQUIRE(a.logs.size() == b.logs.size());
    for (std::size_t w = 0; w < a.logs.size(); ++w) {
        REQUIRE(a.logs[w].samples.size() == b.logs[w].samples.size());
        for (std::size_t k = 0; k < a.logs[w].samples.size(); ++k) {
            CHECK(a.logs[w].samples[k].md == b.logs[w].samples[k].md);
            CHECK(a.logs[w].samples[k].sand_fraction == b.logs[w].samples[k].sand_fraction);
        }
    }

    auto c = synth::generate(small_config(6));
    CHECK(a.volume.impedance != c.volume.impedance);
}

TEST_CASE("well logs equal the ground truth along the trace") {
    auto cfg = small_config();
    SUBCASE("with noise") { cfg.noise_sigma = 0.02; }
    SUBCASE("noise-free") { cfg.noise_sigma = 0.0; }
    auto f = synth::generate(cfg);
    for (std::size_t w = 0; w < f.logs.size(); ++w) {
        const auto& loc = f.locations[w];
        auto ti = f.volume.trace_index(loc.inline_no, loc.xline_no);
        REQUIRE(ti.has_value());
        for (std::size_t k = 0; k < f.volume.nt; ++k)
            CHECK(f.logs[w].samples[k].sand_fraction ==
                  f.ground_truth.values[*ti * f.volume.nt + k]);
    }
}

TEST_CASE("field invariants") {
    auto f = synth::generate(small_config());
    for (double v : f.ground_truth.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    const double t_last = f.volume.time_at(f.volume.nt - 1);
    for (std::size_t i = 0; i < f.horizons.top1.size(); ++i) {
        CHECK(f.horizons.top1[i] < f.horizons.top2[i]);
        CHECK(f.horizons.top1[i] >= f.volume.t0);
        CHECK(f.horizons.top2[i] <= t_last);
    }
    // attribute ranges are plausible
    for (double v : f.volume.impedance) {
        CHECK(v >= 4.0e6);
        CHECK(v <= 1.2e7);
    }
    for (double v : f.volume.inst_freq) {
        CHECK(v >= 5.0);
        CHECK(v <= 60.0);
    }
    // pairwise well spacing in grid cells
    for (std::size_t a = 0; a < f.locations.size(); ++a)
        for (std::size_t b = a + 1; b < f.locations.size(); ++b) {
            const double di = f.locations[a].inline_no - f.locations[b].inline_no;
            const double dx = f.locations[a].xline_no - f.locations[b].xline_no;
            CHECK(std::hypot(di, dx) >= 5.0);
        }
    // tops sit strictly inside each integrated log
    auto wells = pipeline::integrate_field(f);
    for (const auto& w : wells) {
        const auto& tops = preprocess::tops_for(f.tops, w.well_id);
        CHECK(w.t.front() < tops.top1_t);
        CHECK(tops.top1_t < tops.top2_t);
        CHECK(tops.top2_t < w.t.back());
    }
}

TEST_CASE("grid too small for the spacing rule") {
    auto cfg = small_config();
    cfg.n_inlines = 3;
    cfg.n_xlines = 3;
    cfg.n_wells = 8;
    CHECK_THROWS_WITH_AS(synth::generate(cfg), doctest::Contains("grid too small"), DataError);
}

TEST_CASE("export / re-ingest round trip") {
    auto f = synth::generate(small_config());
    TempDir dir("export");
    synth::export_field(f, dir.path.string());

    // byte-stable across repeated exports of the same field
    const auto h1 = runlog::fnv1a64_file(dir.file("volume.csv"));
    TempDir dir2("export2");
    synth::export_field(f, dir2.path.string());
    CHECK(h1 == runlog::fnv1a64_file(dir2.file("volume.csv")));
    CHECK(runlog::fnv1a64_file(dir.file("wells.csv")) ==
          runlog::fnv1a64_file(dir2.file("wells.csv")));

    auto raw = pipeline::load_data_dir(dir.path.string());
    CHECK(raw.volume.inlines == f.volume.inlines);
    CHECK(raw.volume.nt == f.volume.nt);
    // text round trip is exact at 17 significant digits
    CHECK(raw.volume.impedance == f.volume.impedance);
    REQUIRE(raw.logs.size() == f.logs.size());
    for (std::size_t w = 0; w < raw.logs.size(); ++w)
        CHECK(raw.logs[w].samples.size() == f.logs[w].samples.size());

    auto tops = ingest::load_tops(dir.file("tops.csv"));
    REQUIRE(tops.size() == f.tops.size());
    for (std::size_t i = 0; i < tops.size(); ++i) {
        CHECK(tops[i].top1_t == f.tops[i].top1_t);
        CHECK(tops[i].top2_t == f.tops[i].top2_t);
    }

    // the full pipeline runs off the exported files
    auto wells = pipeline::integrate_wells(raw);
    CHECK(wells.size() == 4);
    for (const auto& w : wells) {
        CHECK(w.t.size() > 1900); // ~198 ms span at 0.1 ms
        for (std::size_t k = 1; k < w.t.size(); ++k)
            CHECK(std::fabs((w.t[k] - w.t[k - 1]) - 0.1) < 1e-12);
        for (double y : w.sand_fraction) {
            CHECK(y >= 0.0);
            CHECK(y <= 1.0);
        }
    }
}

TEST_CASE("config validation") {
    auto cfg = small_config();
    cfg.n_wells = 1;
    CHECK_THROWS_AS(synth::generate(cfg), DataError);
    cfg = small_config();
    cfg.nt = 3;
    CHECK_THROWS_AS(synth::generate(cfg), DataError);
    cfg = small_config();
    cfg.noise_sigma = -1.0;
    CHECK_THROWS_AS(synth::generate(cfg), DataError);
}
