#include "sandcast/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "sandcast/csv.hpp"
#include "sandcast/errors.hpp"
#include "sandcast/rng.hpp"

namespace sandcast::synth {

namespace {

constexpr double kMdPerMs = 0.75; // constant-velocity checkshot: md = 0.75 * twt

struct Harmonic {
    double amp, ki, kx, kt, phase;
};

struct FieldSpec {
    std::vector<Harmonic> harmonics;
    double lo, hi; // affine target range
    double amp_sum;

    double value(double i, double x, double t) const {
        double v = 0.0;
        for (const auto& h : harmonics) v += h.amp * std::cos(h.ki * i + h.kx * x + h.kt * t + h.phase);
        const double unit = (v / amp_sum + 1.0) * 0.5; // [-1,1] -> [0,1]
        return lo + unit * (hi - lo);
    }
};

FieldSpec draw_field(UniformRng& rng, int n_harmonics, double lo, double hi) {
    FieldSpec f;
    f.lo = lo;
    f.hi = hi;
    f.amp_sum = 0.0;
    for (int k = 0; k < n_harmonics; ++k) {
        Harmonic h;
        h.amp = rng.uniform(0.5, 1.5);
        h.ki = rng.uniform(-0.35, 0.35);  // rad per inline cell
        h.kx = rng.uniform(-0.35, 0.35);  // rad per xline cell
        double kt = rng.uniform(0.02, 0.06); // rad per ms, sign drawn separately
        h.kt = rng.next01() < 0.5 ? -kt : kt;
        h.phase = rng.uniform(0.0, 2.0 * M_PI);
        f.amp_sum += h.amp;
        f.harmonics.push_back(h);
    }
    return f;
}

struct Surface {
    double base, amp, ai, ax, pi, px;
    double value(double i, double x) const {
        return base + amp * 0.5 * (std::sin(ai * i + pi) + std::cos(ax * x + px));
    }
};

Surface draw_surface(UniformRng& rng, double base, double amp) {
    return {base, amp,         rng.uniform(0.05, 0.20), rng.uniform(0.05, 0.20),
            rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.0, 2.0 * M_PI)};
}

double logsig(double u) { return 1.0 / (1.0 + std::exp(-u)); }

} // namespace

SynthField generate(const SynthConfig& cfg) {
    if (cfg.n_wells < 2) throw DataError("synth config: n_wells must be >= 2");
    if (cfg.n_inlines < 2 || cfg.n_xlines < 2) throw DataError("synth config: grid too small");
    if (cfg.nt < 4) throw DataError("synth config: need >= 4 time samples");
    if (!(cfg.dt > 0)) throw DataError("synth config: dt must be positive");
    if (cfg.noise_sigma < 0) throw DataError("synth config: noise_sigma must be >= 0");
    if (cfg.n_harmonics < 1) throw DataError("synth config: need >= 1 harmonic");
    if (!(0.0 < cfg.top1_frac && cfg.top1_frac < cfg.top2_frac && cfg.top2_frac < 1.0))
        throw DataError("synth config: need 0 < top1_frac < top2_frac < 1");

    UniformRng rng(cfg.seed);
    const double span = static_cast<double>(cfg.nt - 1) * cfg.dt;
    const double t_last = cfg.t0 + span;

    // drawing order is part of the format: attributes, horizons, wells
    const FieldSpec f_imp = draw_field(rng, cfg.n_harmonics, 4.0e6, 1.2e7);
    const FieldSpec f_amp = draw_field(rng, cfg.n_harmonics, 0.0, 1.0);
    const FieldSpec f_frq = draw_field(rng, cfg.n_harmonics, 5.0, 60.0);

    const double pert = std::min(6.0, 0.04 * span); // keep top1 < top2 with wide margin
    const Surface top1 = draw_surface(rng, cfg.t0 + cfg.top1_frac * span, pert);
    const Surface top2 = draw_surface(rng, cfg.t0 + cfg.top2_frac * span, pert);

    SynthField field;
    auto& vol = field.volume;
    vol.t0 = cfg.t0;
    vol.dt = cfg.dt;
    vol.nt = cfg.nt;
    for (int i = 0; i < cfg.n_inlines; ++i) vol.inlines.push_back(100 + i);
    for (int x = 0; x < cfg.n_xlines; ++x) vol.xlines.push_back(200 + x);
    const std::size_t n_traces = vol.n_traces();
    vol.impedance.resize(n_traces * cfg.nt);
    vol.inst_amp.resize(n_traces * cfg.nt);
    vol.inst_freq.resize(n_traces * cfg.nt);

    auto& hz = field.horizons;
    hz.inlines = vol.inlines;
    hz.xlines = vol.xlines;
    hz.top1.resize(n_traces);
    hz.top2.resize(n_traces);

    for (int i = 0; i < cfg.n_inlines; ++i) {
        for (int x = 0; x < cfg.n_xlines; ++x) {
            const std::size_t ti = static_cast<std::size_t>(i) * cfg.n_xlines + x;
            hz.top1[ti] = top1.value(i, x);
            hz.top2[ti] = top2.value(i, x);
            for (std::size_t k = 0; k < cfg.nt; ++k) {
                const double t = vol.time_at(k);
                const std::size_t idx = ti * cfg.nt + k;
                vol.impedance[idx] = f_imp.value(i, x, t);
                vol.inst_amp[idx] = f_amp.value(i, x, t);
                vol.inst_freq[idx] = f_frq.value(i, x, t);
            }
        }
    }

    // per-zone population stats of each attribute over the whole volume,
    // used to z-score the inputs of the zone functions
    double zmean[3][3] = {}, zstd[3][3] = {};
    {
        std::size_t zn[3] = {};
        const std::vector<double>* attrs[3] = {&vol.impedance, &vol.inst_amp, &vol.inst_freq};
        for (std::size_t ti = 0; ti < n_traces; ++ti)
            for (std::size_t k = 0; k < cfg.nt; ++k) {
                const double t = vol.time_at(k);
                const int z = t < hz.top1[ti] ? 0 : (t < hz.top2[ti] ? 1 : 2);
                ++zn[z];
                for (int a = 0; a < 3; ++a) zmean[z][a] += (*attrs[a])[ti * cfg.nt + k];
            }
        for (int z = 0; z < 3; ++z)
            for (int a = 0; a < 3; ++a) zmean[z][a] /= static_cast<double>(zn[z]);
        for (std::size_t ti = 0; ti < n_traces; ++ti)
            for (std::size_t k = 0; k < cfg.nt; ++k) {
                const double t = vol.time_at(k);
                const int z = t < hz.top1[ti] ? 0 : (t < hz.top2[ti] ? 1 : 2);
                for (int a = 0; a < 3; ++a) {
                    const double d = (*attrs[a])[ti * cfg.nt + k] - zmean[z][a];
                    zstd[z][a] += d * d;
                }
            }
        for (int z = 0; z < 3; ++z)
            for (int a = 0; a < 3; ++a) zstd[z][a] = std::sqrt(zstd[z][a] / static_cast<double>(zn[z]));
    }

    auto& gt = field.ground_truth;
    gt.inlines = vol.inlines;
    gt.xlines = vol.xlines;
    gt.t0 = vol.t0;
    gt.dt = vol.dt;
    gt.nt = vol.nt;
    gt.values.resize(n_traces * cfg.nt);
    for (std::size_t ti = 0; ti < n_traces; ++ti) {
        const std::size_t i = ti / static_cast<std::size_t>(cfg.n_xlines);
        const std::size_t x = ti % static_cast<std::size_t>(cfg.n_xlines);
        for (std::size_t k = 0; k < cfg.nt; ++k) {
            const double t = vol.time_at(k);
            const int z = t < hz.top1[ti] ? 0 : (t < hz.top2[ti] ? 1 : 2);
            const std::size_t idx = ti * cfg.nt + k;
            const double u1 = (vol.impedance[idx] - zmean[z][0]) / zstd[z][0];
            const double u2 = (vol.inst_amp[idx] - zmean[z][1]) / zstd[z][1];
            const double u3 = (vol.inst_freq[idx] - zmean[z][2]) / zstd[z][2];
            double f = 0.0;
            switch (z) {
                case 0: f = logsig(1.2 * u1 - 0.8 * u2 + 0.5 * u3); break;
                case 1: f = logsig(0.9 * u1 * u1 - 0.6 * u1 * u2 + 0.4 * u3 - 0.3); break;
                default: f = logsig(0.7 * std::sin(2.0 * u1) + 0.8 * u3 - 0.5 * u2); break;
            }
            f += cfg.noise_sigma * keyed_normal(cfg.seed, i, x, k);
            gt.values[idx] = std::clamp(f, 0.0, 1.0);
        }
    }

    // well placement: seeded rejection sampling, pairwise spacing >= min_well_spacing cells
    std::vector<std::pair<int, int>> placed;
    const int max_attempts = 10000;
    int attempts = 0;
    while (static_cast<int>(placed.size()) < cfg.n_wells) {
        if (++attempts > max_attempts)
            throw DataError("synth config: grid too small for well spacing (placed " +
                            std::to_string(placed.size()) + " of " +
                            std::to_string(cfg.n_wells) + ")");
        const int i = static_cast<int>(rng.next01() * cfg.n_inlines);
        const int x = static_cast<int>(rng.next01() * cfg.n_xlines);
        bool ok = true;
        for (const auto& [pi, px] : placed) {
            const double d = std::hypot(static_cast<double>(i - pi), static_cast<double>(x - px));
            if (d < cfg.min_well_spacing) {
                ok = false;
                break;
            }
        }
        if (ok) placed.emplace_back(i, x);
    }

    for (int wi = 0; wi < cfg.n_wells; ++wi) {
        const auto [gi, gx] = placed[static_cast<std::size_t>(wi)];
        const std::string id = "W" + std::to_string(wi + 1);
        const std::size_t ti = static_cast<std::size_t>(gi) * cfg.n_xlines + gx;

        ingest::WellLocation loc{id, vol.inlines[static_cast<std::size_t>(gi)],
                                 vol.xlines[static_cast<std::size_t>(gx)]};
        field.locations.push_back(loc);

        ingest::RawWellLog log;
        log.well_id = id;
        for (std::size_t k = 0; k < cfg.nt; ++k)
            log.samples.push_back({kMdPerMs * vol.time_at(k), gt.values[ti * cfg.nt + k]});
        field.logs.push_back(std::move(log));

        ingest::Checkshot cs;
        cs.well_id = id;
        const int n_pairs = 7;
        for (int j = 0; j < n_pairs; ++j) {
            const double t = (j == n_pairs - 1)
                                 ? t_last
                                 : cfg.t0 + span * static_cast<double>(j) / (n_pairs - 1);
            cs.md.push_back(kMdPerMs * t);
            cs.twt.push_back(t);
        }
        field.checkshots.push_back(std::move(cs));

        field.tops.push_back({id, hz.top1[ti], hz.top2[ti]});
    }
    return field;
}

void export_field(const SynthField& field, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory " + dir + ": " + ec.message());
    const auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };

    {
        std::ofstream out(path("wells.csv"), std::ios::binary);
        if (!out) throw DataError("cannot write " + path("wells.csv"));
        out << "well_id,md_m,sand_fraction\n";
        for (const auto& log : field.logs)
            for (const auto& s : log.samples) {
                const double sf = std::isnan(s.sand_fraction) ? ingest::kNullSentinel
                                                              : s.sand_fraction;
                out << log.well_id << ',' << csv::format_double(s.md) << ','
                    << csv::format_double(sf) << '\n';
            }
    }
    {
        std::ofstream out(path("checkshots.csv"), std::ios::binary);
        if (!out) throw DataError("cannot write " + path("checkshots.csv"));
        out << "well_id,md_m,twt_ms\n";
        for (const auto& cs : field.checkshots)
            for (std::size_t j = 0; j < cs.md.size(); ++j)
                out << cs.well_id << ',' << csv::format_double(cs.md[j]) << ','
                    << csv::format_double(cs.twt[j]) << '\n';
    }
    {
        std::ofstream out(path("locations.csv"), std::ios::binary);
        if (!out) throw DataError("cannot write " + path("locations.csv"));
        out << "well_id,inline,xline\n";
        for (const auto& loc : field.locations)
            out << loc.well_id << ',' << loc.inline_no << ',' << loc.xline_no << '\n';
    }
    {
        std::ofstream out(path("tops.csv"), std::ios::binary);
        if (!out) throw DataError("cannot write " + path("tops.csv"));
        out << "well_id,top_name,twt_ms\n";
        for (const auto& t : field.tops) {
            out << t.well_id << ",Top1," << csv::format_double(t.top1_t) << '\n';
            out << t.well_id << ",Top2," << csv::format_double(t.top2_t) << '\n';
        }
    }
    {
        std::ofstream out(path("volume.csv"), std::ios::binary);
        if (!out) throw DataError("cannot write " + path("volume.csv"));
        out << "inline,xline,t_ms,impedance,inst_amp,inst_freq\n";
        const auto& v = field.volume;
        for (std::size_t i = 0; i < v.inlines.size(); ++i)
            for (std::size_t x = 0; x < v.xlines.size(); ++x) {
                const std::size_t ti = i * v.xlines.size() + x;
                for (std::size_t k = 0; k < v.nt; ++k)
                    out << v.inlines[i] << ',' << v.xlines[x] << ','
                        << csv::format_double(v.time_at(k)) << ','
                        << csv::format_double(v.impedance[ti * v.nt + k]) << ','
                        << csv::format_double(v.inst_amp[ti * v.nt + k]) << ','
                        << csv::format_double(v.inst_freq[ti * v.nt + k]) << '\n';
            }
    }
    volume::write_horizons(path("horizons.csv"), field.horizons);
    volume::write_sand_volume(path("ground_truth.csv"), field.ground_truth);
}

} // namespace sandcast::synth
