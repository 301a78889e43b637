#include "sandcast/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>

#include "sandcast/csv.hpp"
#include "sandcast/errors.hpp"
#include "sandcast/spline.hpp"

namespace sandcast::ingest {

namespace {

bool is_sentinel(double v) { return v == kNullSentinel; }

std::size_t uniform_count(double t_start, double t_end, double dt) {
    // tolerant floor so t_end lands on the grid when the span is an exact multiple
    return static_cast<std::size_t>(std::floor((t_end - t_start) / dt + 1e-9)) + 1;
}

} // namespace

std::optional<std::size_t> AttributeVolume::trace_index(int il, int xl) const {
    auto ii = std::lower_bound(inlines.begin(), inlines.end(), il);
    auto xi = std::lower_bound(xlines.begin(), xlines.end(), xl);
    if (ii == inlines.end() || *ii != il || xi == xlines.end() || *xi != xl) return std::nullopt;
    return (static_cast<std::size_t>(ii - inlines.begin()) * xlines.size() +
            static_cast<std::size_t>(xi - xlines.begin()));
}

std::vector<RawWellLog> load_well_logs(const std::string& path) {
    csv::Reader rd(path, "well_id,md_m,sand_fraction");
    std::vector<RawWellLog> logs;
    std::unordered_map<std::string, std::size_t> index;
    csv::Row row;
    while (rd.next(row)) {
        const std::string& id = row.fields[0];
        double md = csv::parse_double(row, 1, path);
        double sf = csv::parse_double(row, 2, path);
        auto [it, inserted] = index.try_emplace(id, logs.size());
        if (inserted) logs.push_back(RawWellLog{id, {}});
        RawWellLog& log = logs[it->second];
        if (!log.samples.empty() && !(md > log.samples.back().md))
            throw DataError("ordering error in " + path + " line " + std::to_string(row.line_no) +
                            ": md not strictly increasing for well " + id);
        log.samples.push_back({md, is_sentinel(sf) ? std::nan("") : sf});
    }
    if (logs.empty()) throw DataError("no well log rows in " + path);
    return logs;
}

std::vector<Checkshot> load_checkshots(const std::string& path) {
    csv::Reader rd(path, "well_id,md_m,twt_ms");
    std::vector<Checkshot> out;
    std::unordered_map<std::string, std::size_t> index;
    csv::Row row;
    while (rd.next(row)) {
        const std::string& id = row.fields[0];
        double md = csv::parse_double(row, 1, path);
        double twt = csv::parse_double(row, 2, path);
        auto [it, inserted] = index.try_emplace(id, out.size());
        if (inserted) out.push_back(Checkshot{id, {}, {}});
        Checkshot& cs = out[it->second];
        if (!cs.md.empty() && (!(md > cs.md.back()) || !(twt > cs.twt.back())))
            throw DataError("ordering error in " + path + " line " + std::to_string(row.line_no) +
                            ": checkshot columns must be strictly increasing for well " + id);
        cs.md.push_back(md);
        cs.twt.push_back(twt);
    }
    for (const auto& cs : out)
        if (cs.md.size() < 2)
            throw DataError("checkshot for well " + cs.well_id + " needs >= 2 pairs in " + path);
    return out;
}

std::vector<WellLocation> load_locations(const std::string& path) {
    csv::Reader rd(path, "well_id,inline,xline");
    std::vector<WellLocation> out;
    csv::Row row;
    while (rd.next(row)) {
        WellLocation loc;
        loc.well_id = row.fields[0];
        loc.inline_no = static_cast<int>(csv::parse_long(row, 1, path));
        loc.xline_no = static_cast<int>(csv::parse_long(row, 2, path));
        out.push_back(loc);
    }
    return out;
}

std::vector<WellTops> load_tops(const std::string& path) {
    csv::Reader rd(path, "well_id,top_name,twt_ms");
    std::map<std::string, WellTops> acc;
    std::map<std::string, std::pair<bool, bool>> seen;
    csv::Row row;
    while (rd.next(row)) {
        const std::string& id = row.fields[0];
        const std::string& name = row.fields[1];
        double t = csv::parse_double(row, 2, path);
        auto& tops = acc[id];
        tops.well_id = id;
        if (name == "Top1") {
            tops.top1_t = t;
            seen[id].first = true;
        } else if (name == "Top2") {
            tops.top2_t = t;
            seen[id].second = true;
        } else {
            throw DataError("parse error in " + path + " line " + std::to_string(row.line_no) +
                            ": top_name must be Top1 or Top2, got '" + name + "'");
        }
    }
    std::vector<WellTops> out;
    for (auto& [id, tops] : acc) {
        if (!seen[id].first || !seen[id].second)
            throw DataError("well " + id + " is missing Top1 or Top2 in " + path);
        if (!(tops.top1_t < tops.top2_t))
            throw DataError("well " + id + " has top1_t >= top2_t in " + path);
        out.push_back(tops);
    }
    return out;
}

AttributeVolume load_attribute_volume(const std::string& path) {
    csv::Reader rd(path, "inline,xline,t_ms,impedance,inst_amp,inst_freq");
    struct RawRow {
        int il, xl;
        double t, a0, a1, a2;
    };
    std::vector<RawRow> rows;
    csv::Row row;
    while (rd.next(row)) {
        rows.push_back({static_cast<int>(csv::parse_long(row, 0, path)),
                        static_cast<int>(csv::parse_long(row, 1, path)),
                        csv::parse_double(row, 2, path), csv::parse_double(row, 3, path),
                        csv::parse_double(row, 4, path), csv::parse_double(row, 5, path)});
    }
    if (rows.empty()) throw DataError("no volume rows in " + path);

    AttributeVolume vol;
    {
        std::vector<int> ils, xls;
        std::vector<double> ts;
        for (const auto& r : rows) {
            ils.push_back(r.il);
            xls.push_back(r.xl);
        }
        std::sort(ils.begin(), ils.end());
        ils.erase(std::unique(ils.begin(), ils.end()), ils.end());
        std::sort(xls.begin(), xls.end());
        xls.erase(std::unique(xls.begin(), xls.end()), xls.end());
        for (const auto& r : rows)
            if (r.il == ils.front() && r.xl == xls.front()) ts.push_back(r.t);
        std::sort(ts.begin(), ts.end());
        if (ts.size() < 2) throw DataError("volume in " + path + " has fewer than 2 time samples");
        vol.inlines = std::move(ils);
        vol.xlines = std::move(xls);
        vol.t0 = ts.front();
        vol.dt = ts[1] - ts[0];
        vol.nt = ts.size();
        if (!(vol.dt > 0)) throw DataError("volume in " + path + " has non-positive dt");
        for (std::size_t k = 0; k < ts.size(); ++k)
            if (std::fabs(ts[k] - vol.time_at(k)) > 1e-6)
                throw DataError("volume in " + path + " has a non-uniform time grid");
    }

    const std::size_t total = vol.n_traces() * vol.nt;
    if (rows.size() != total)
        throw DataError("volume in " + path + " is not a complete regular grid: expected " +
                        std::to_string(total) + " rows, got " + std::to_string(rows.size()));
    vol.impedance.assign(total, std::nan(""));
    vol.inst_amp.assign(total, std::nan(""));
    vol.inst_freq.assign(total, std::nan(""));
    for (const auto& r : rows) {
        auto ti = vol.trace_index(r.il, r.xl);
        double kf = (r.t - vol.t0) / vol.dt;
        auto k = static_cast<std::ptrdiff_t>(std::llround(kf));
        if (!ti || k < 0 || k >= static_cast<std::ptrdiff_t>(vol.nt) ||
            std::fabs(vol.time_at(static_cast<std::size_t>(k)) - r.t) > 1e-6)
            throw DataError("volume in " + path + " has a row off the regular grid");
        std::size_t idx = *ti * vol.nt + static_cast<std::size_t>(k);
        if (!std::isnan(vol.impedance[idx]))
            throw DataError("volume in " + path + " has a duplicate grid cell");
        vol.impedance[idx] = r.a0;
        vol.inst_amp[idx] = r.a1;
        vol.inst_freq[idx] = r.a2;
    }
    return vol;
}

RawWellLog drop_missing(const RawWellLog& log) {
    RawWellLog out;
    out.well_id = log.well_id;
    for (const auto& s : log.samples)
        if (!std::isnan(s.sand_fraction)) out.samples.push_back(s);
    if (out.samples.size() < 4)
        throw DataError("insufficient-data: well " + log.well_id + " has " +
                        std::to_string(out.samples.size()) + " non-null samples, need >= 4");
    return out;
}

TimeSeries depth_to_time(const RawWellLog& log, const Checkshot& cs) {
    TimeSeries out;
    out.t.reserve(log.samples.size());
    out.v.reserve(log.samples.size());
    for (const auto& s : log.samples) {
        if (s.md < cs.md.front() || s.md > cs.md.back())
            throw DataError("extrapolation: md " + std::to_string(s.md) + " of well " +
                            log.well_id + " outside checkshot range [" +
                            std::to_string(cs.md.front()) + ", " + std::to_string(cs.md.back()) +
                            "]");
        auto it = std::upper_bound(cs.md.begin(), cs.md.end(), s.md);
        std::size_t i = (it == cs.md.begin()) ? 0 : static_cast<std::size_t>(it - cs.md.begin()) - 1;
        i = std::min(i, cs.md.size() - 2);
        double w = (s.md - cs.md[i]) / (cs.md[i + 1] - cs.md[i]);
        out.t.push_back(cs.twt[i] + w * (cs.twt[i + 1] - cs.twt[i]));
        out.v.push_back(s.sand_fraction);
    }
    for (std::size_t i = 1; i < out.t.size(); ++i)
        if (!(out.t[i] > out.t[i - 1]))
            throw DataError("depth_to_time: twt not strictly increasing for well " + log.well_id);
    return out;
}

std::vector<double> resample_uniform(std::span<const double> t, std::span<const double> v,
                                     double t_start, double t_end, double dt) {
    if (t.size() < 4)
        throw DataError("insufficient-data: resample needs >= 4 points, got " +
                        std::to_string(t.size()));
    if (!(dt > 0)) throw DataError("resample: dt must be positive");
    const double tol = 1e-9 * std::max(1.0, std::fabs(t.back()));
    if (t_start < t.front() - tol || t_end > t.back() + tol)
        throw DataError("extrapolation: requested range [" + std::to_string(t_start) + ", " +
                        std::to_string(t_end) + "] exceeds input range [" +
                        std::to_string(t.front()) + ", " + std::to_string(t.back()) + "]");
    CubicSpline sp(t, v);
    const std::size_t n = uniform_count(t_start, t_end, dt);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = sp.eval(std::min(t_start + static_cast<double>(k) * dt, t.back()));
    return out;
}

std::array<TimeSeries, 3> extract_trace(const AttributeVolume& vol, const WellLocation& loc) {
    auto ti = vol.trace_index(loc.inline_no, loc.xline_no);
    if (!ti)
        throw DataError("missing-trace: location (" + std::to_string(loc.inline_no) + ", " +
                        std::to_string(loc.xline_no) + ") for well " + loc.well_id +
                        " is not on the volume grid");
    std::array<TimeSeries, 3> out;
    const std::vector<double>* src[3] = {&vol.impedance, &vol.inst_amp, &vol.inst_freq};
    for (int a = 0; a < 3; ++a) {
        out[a].t.resize(vol.nt);
        out[a].v.resize(vol.nt);
        for (std::size_t k = 0; k < vol.nt; ++k) {
            out[a].t[k] = vol.time_at(k);
            out[a].v[k] = (*src[a])[*ti * vol.nt + k];
        }
    }
    return out;
}

WellLog integrate(const std::string& well_id, const TimeSeries& log,
                  const std::array<TimeSeries, 3>& traces, double dt_out) {
    double t_start = log.t.front();
    double t_end = log.t.back();
    for (const auto& tr : traces) {
        t_start = std::max(t_start, tr.t.front());
        t_end = std::min(t_end, tr.t.back());
    }
    if (!(t_end - t_start >= 1.0))
        throw DataError("no-overlap: common window of well " + well_id + " is " +
                        std::to_string(t_end - t_start) + " ms, need >= 1 ms");

    WellLog out;
    out.well_id = well_id;
    const std::size_t n = uniform_count(t_start, t_end, dt_out);
    out.t.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.t[k] = t_start + static_cast<double>(k) * dt_out;

    out.impedance = resample_uniform(traces[0].t, traces[0].v, t_start, t_end, dt_out);
    out.inst_amp = resample_uniform(traces[1].t, traces[1].v, t_start, t_end, dt_out);
    out.inst_freq = resample_uniform(traces[2].t, traces[2].v, t_start, t_end, dt_out);
    out.sand_fraction = resample_uniform(log.t, log.v, t_start, t_end, dt_out);
    for (double& y : out.sand_fraction) y = std::clamp(y, 0.0, 1.0);
    return out;
}

void write_integrated(const std::string& path, const std::vector<WellLog>& wells) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << "well_id,t_ms,impedance,inst_amp,inst_freq,sand_fraction\n";
    for (const auto& w : wells)
        for (std::size_t k = 0; k < w.t.size(); ++k)
            out << w.well_id << ',' << csv::format_double(w.t[k]) << ','
                << csv::format_double(w.impedance[k]) << ',' << csv::format_double(w.inst_amp[k])
                << ',' << csv::format_double(w.inst_freq[k]) << ','
                << csv::format_double(w.sand_fraction[k]) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

std::vector<WellLog> load_integrated(const std::string& path) {
    csv::Reader rd(path, "well_id,t_ms,impedance,inst_amp,inst_freq,sand_fraction");
    std::vector<WellLog> wells;
    std::unordered_map<std::string, std::size_t> index;
    csv::Row row;
    while (rd.next(row)) {
        const std::string& id = row.fields[0];
        auto [it, inserted] = index.try_emplace(id, wells.size());
        if (inserted) wells.push_back(WellLog{id, {}, {}, {}, {}, {}});
        WellLog& w = wells[it->second];
        w.t.push_back(csv::parse_double(row, 1, path));
        w.impedance.push_back(csv::parse_double(row, 2, path));
        w.inst_amp.push_back(csv::parse_double(row, 3, path));
        w.inst_freq.push_back(csv::parse_double(row, 4, path));
        w.sand_fraction.push_back(csv::parse_double(row, 5, path));
    }
    if (wells.empty()) throw DataError("no integrated rows in " + path);
    for (const auto& w : wells)
        for (std::size_t k = 1; k < w.t.size(); ++k)
            if (std::fabs((w.t[k] - w.t[k - 1]) - kDtOut) > 1e-9)
                throw DataError("integrated well " + w.well_id + " in " + path +
                                " is not on a uniform 0.10 ms grid");
    return wells;
}

} // namespace sandcast::ingest
