#include "sandcast/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "sandcast/errors.hpp"

namespace sandcast::preprocess {

ZoneRanges segment_zones(const ingest::WellLog& log, const ingest::WellTops& tops) {
    if (log.t.empty()) throw DataError("segment_zones: well " + log.well_id + " has no samples");
    if (!(log.t.front() < tops.top1_t && tops.top1_t < tops.top2_t && tops.top2_t < log.t.back()))
        throw DataError("tops precondition violated for well " + log.well_id +
                        ": need first_t < top1 < top2 < last_t");
    ZoneRanges r;
    r.n = log.t.size();
    r.i1 = static_cast<std::size_t>(
        std::lower_bound(log.t.begin(), log.t.end(), tops.top1_t) - log.t.begin());
    r.i2 = static_cast<std::size_t>(
        std::lower_bound(log.t.begin(), log.t.end(), tops.top2_t) - log.t.begin());
    if (r.i1 == 0 || r.i1 == r.i2 || r.i2 == r.n)
        throw DataError("empty-zone: well " + log.well_id + " has an empty zone");
    return r;
}

ZScoreStats fit_zscore(std::span<const std::array<double, 3>> rows) {
    if (rows.size() < 2) throw DataError("fit_zscore: need >= 2 rows, got " +
                                         std::to_string(rows.size()));
    ZScoreStats s;
    const double n = static_cast<double>(rows.size());
    for (const auto& r : rows)
        for (int j = 0; j < 3; ++j) s.mean[j] += r[j];
    for (int j = 0; j < 3; ++j) s.mean[j] /= n;
    for (const auto& r : rows)
        for (int j = 0; j < 3; ++j) {
            const double d = r[j] - s.mean[j];
            s.std[j] += d * d;
        }
    for (int j = 0; j < 3; ++j) {
        s.std[j] = std::sqrt(s.std[j] / n);
        if (!(s.std[j] > 0.0) || !std::isfinite(s.std[j]))
            throw DataError("degenerate-predictor: predictor " + std::to_string(j) +
                            " has zero variance");
    }
    return s;
}

std::array<double, 3> apply_zscore(const ZScoreStats& s, const std::array<double, 3>& x) {
    return {(x[0] - s.mean[0]) / s.std[0], (x[1] - s.mean[1]) / s.std[1],
            (x[2] - s.mean[2]) / s.std[2]};
}

MinMaxStats fit_minmax(std::span<const double> targets) {
    if (targets.empty()) throw DataError("fit_minmax: empty target set");
    MinMaxStats s;
    s.y_min = *std::min_element(targets.begin(), targets.end());
    s.y_max = *std::max_element(targets.begin(), targets.end());
    if (!(s.y_max > s.y_min))
        throw DataError("degenerate-target: y_max equals y_min (" + std::to_string(s.y_min) + ")");
    return s;
}

double apply_minmax(const MinMaxStats& s, double y) {
    return s.a + (s.b - s.a) * (y - s.y_min) / (s.y_max - s.y_min);
}

double invert_minmax(const MinMaxStats& s, double y_norm) {
    return s.y_min + (y_norm - s.a) * (s.y_max - s.y_min) / (s.b - s.a);
}

const ingest::WellTops& tops_for(const std::vector<ingest::WellTops>& tops,
                                 const std::string& well_id) {
    for (const auto& t : tops)
        if (t.well_id == well_id) return t;
    throw DataError("no tops entry for well " + well_id);
}

ZonedDataset partition_lowo(const std::vector<ingest::WellLog>& wells,
                            const std::vector<ingest::WellTops>& tops,
                            const std::string& blind_id) {
    if (wells.size() < 2) throw DataError("partition_lowo: need >= 2 wells");
    bool blind_found = false;
    for (const auto& w : wells) blind_found |= (w.well_id == blind_id);
    if (!blind_found) throw DataError("unknown-well: blind well " + blind_id + " not in dataset");

    ZonedDataset ds;
    ds.blind_well_id = blind_id;

    // raw (un-normalized) patterns, wells in input order, time ascending
    std::array<std::vector<Pattern>, 3> raw_train, raw_test;
    for (const auto& w : wells) {
        const auto& wt = tops_for(tops, w.well_id);
        ZoneRanges r = segment_zones(w, wt);
        const bool is_blind = (w.well_id == blind_id);
        for (std::size_t k = 0; k < r.n; ++k) {
            Zone z = k < r.i1 ? Zone::Z1 : (k < r.i2 ? Zone::Z2 : Zone::Z3);
            Pattern p;
            p.x = {w.impedance[k], w.inst_amp[k], w.inst_freq[k]};
            p.y = w.sand_fraction[k];
            p.well_id = w.well_id;
            p.t = w.t[k];
            p.zone = z;
            (is_blind ? raw_test : raw_train)[static_cast<int>(z)].push_back(std::move(p));
        }
    }

    for (int z = 0; z < 3; ++z) {
        auto& zd = ds.zones[z];
        if (raw_train[z].empty())
            throw DataError(std::string("empty-zone: no training patterns in ") + kZoneNames[z]);
        std::vector<std::array<double, 3>> xs;
        std::vector<double> ys;
        xs.reserve(raw_train[z].size());
        ys.reserve(raw_train[z].size());
        for (const auto& p : raw_train[z]) {
            xs.push_back(p.x);
            ys.push_back(p.y);
        }
        zd.zstats = fit_zscore(xs);
        zd.mstats = fit_minmax(ys);
        auto normalize = [&](std::vector<Pattern>& v) {
            for (auto& p : v) {
                p.x = apply_zscore(zd.zstats, p.x);
                p.y = apply_minmax(zd.mstats, p.y);
            }
        };
        zd.train = std::move(raw_train[z]);
        zd.test = std::move(raw_test[z]);
        normalize(zd.train);
        normalize(zd.test);
    }
    return ds;
}

} // namespace sandcast::preprocess
