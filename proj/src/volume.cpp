#include "sandcast/volume.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sandcast/csv.hpp"
#include "sandcast/errors.hpp"
#include "sandcast/parallel.hpp"

namespace sandcast::volume {

namespace {

constexpr double kNull = -999.25;

std::size_t grid_index(const std::vector<int>& inlines, const std::vector<int>& xlines, int il,
                       int xl, const std::string& what) {
    auto ii = std::lower_bound(inlines.begin(), inlines.end(), il);
    auto xi = std::lower_bound(xlines.begin(), xlines.end(), xl);
    if (ii == inlines.end() || *ii != il || xi == xlines.end() || *xi != xl)
        throw DataError(what + ": (" + std::to_string(il) + ", " + std::to_string(xl) +
                        ") not on the grid");
    return static_cast<std::size_t>(ii - inlines.begin()) * xlines.size() +
           static_cast<std::size_t>(xi - xlines.begin());
}

} // namespace

HorizonGrid load_horizons(const std::string& path) {
    csv::Reader rd(path, "inline,xline,top1_t_ms,top2_t_ms");
    struct RawRow {
        int il, xl;
        double t1, t2;
    };
    std::vector<RawRow> rows;
    csv::Row row;
    while (rd.next(row)) {
        rows.push_back({static_cast<int>(csv::parse_long(row, 0, path)),
                        static_cast<int>(csv::parse_long(row, 1, path)),
                        csv::parse_double(row, 2, path), csv::parse_double(row, 3, path)});
    }
    if (rows.empty()) throw DataError("no horizon rows in " + path);
    HorizonGrid hz;
    for (const auto& r : rows) {
        hz.inlines.push_back(r.il);
        hz.xlines.push_back(r.xl);
    }
    std::sort(hz.inlines.begin(), hz.inlines.end());
    hz.inlines.erase(std::unique(hz.inlines.begin(), hz.inlines.end()), hz.inlines.end());
    std::sort(hz.xlines.begin(), hz.xlines.end());
    hz.xlines.erase(std::unique(hz.xlines.begin(), hz.xlines.end()), hz.xlines.end());
    const std::size_t total = hz.inlines.size() * hz.xlines.size();
    if (rows.size() != total)
        throw DataError("horizon grid in " + path + " is not complete: expected " +
                        std::to_string(total) + " rows, got " + std::to_string(rows.size()));
    hz.top1.assign(total, std::nan(""));
    hz.top2.assign(total, std::nan(""));
    for (const auto& r : rows) {
        std::size_t idx = grid_index(hz.inlines, hz.xlines, r.il, r.xl, "horizon");
        hz.top1[idx] = r.t1 == kNull ? std::nan("") : r.t1;
        hz.top2[idx] = r.t2 == kNull ? std::nan("") : r.t2;
    }
    return hz;
}

void write_horizons(const std::string& path, const HorizonGrid& hz) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << "inline,xline,top1_t_ms,top2_t_ms\n";
    for (std::size_t i = 0; i < hz.inlines.size(); ++i)
        for (std::size_t x = 0; x < hz.xlines.size(); ++x) {
            const std::size_t idx = i * hz.xlines.size() + x;
            const double t1 = std::isnan(hz.top1[idx]) ? kNull : hz.top1[idx];
            const double t2 = std::isnan(hz.top2[idx]) ? kNull : hz.top2[idx];
            out << hz.inlines[i] << ',' << hz.xlines[x] << ',' << csv::format_double(t1) << ','
                << csv::format_double(t2) << '\n';
        }
    if (!out) throw DataError("write failed: " + path);
}

SandFractionVolume load_sand_volume(const std::string& path) {
    csv::Reader rd(path, "inline,xline,t_ms,sand_fraction");
    struct RawRow {
        int il, xl;
        double t, v;
    };
    std::vector<RawRow> rows;
    csv::Row row;
    while (rd.next(row)) {
        rows.push_back({static_cast<int>(csv::parse_long(row, 0, path)),
                        static_cast<int>(csv::parse_long(row, 1, path)),
                        csv::parse_double(row, 2, path), csv::parse_double(row, 3, path)});
    }
    if (rows.empty()) throw DataError("no volume rows in " + path);
    SandFractionVolume vol;
    {
        std::vector<double> ts;
        for (const auto& r : rows) {
            vol.inlines.push_back(r.il);
            vol.xlines.push_back(r.xl);
        }
        std::sort(vol.inlines.begin(), vol.inlines.end());
        vol.inlines.erase(std::unique(vol.inlines.begin(), vol.inlines.end()), vol.inlines.end());
        std::sort(vol.xlines.begin(), vol.xlines.end());
        vol.xlines.erase(std::unique(vol.xlines.begin(), vol.xlines.end()), vol.xlines.end());
        for (const auto& r : rows)
            if (r.il == vol.inlines.front() && r.xl == vol.xlines.front()) ts.push_back(r.t);
        std::sort(ts.begin(), ts.end());
        if (ts.size() < 2) throw DataError("volume in " + path + " has fewer than 2 time samples");
        vol.t0 = ts.front();
        vol.dt = ts[1] - ts[0];
        vol.nt = ts.size();
    }
    const std::size_t total = vol.n_traces() * vol.nt;
    if (rows.size() != total)
        throw DataError("volume in " + path + " is not a complete regular grid");
    vol.values.assign(total, std::nan(""));
    for (const auto& r : rows) {
        const std::size_t ti = grid_index(vol.inlines, vol.xlines, r.il, r.xl, "volume");
        const auto k = static_cast<std::ptrdiff_t>(std::llround((r.t - vol.t0) / vol.dt));
        if (k < 0 || k >= static_cast<std::ptrdiff_t>(vol.nt) ||
            std::fabs(vol.time_at(static_cast<std::size_t>(k)) - r.t) > 1e-6)
            throw DataError("volume in " + path + " has a row off the regular time grid");
        vol.values[ti * vol.nt + static_cast<std::size_t>(k)] = r.v;
    }
    return vol;
}

void write_sand_volume(const std::string& path, const SandFractionVolume& vol) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << "inline,xline,t_ms,sand_fraction\n";
    for (std::size_t i = 0; i < vol.inlines.size(); ++i)
        for (std::size_t x = 0; x < vol.xlines.size(); ++x) {
            const std::size_t ti = i * vol.xlines.size() + x;
            for (std::size_t k = 0; k < vol.nt; ++k) {
                const double v = vol.values[ti * vol.nt + k];
                out << vol.inlines[i] << ',' << vol.xlines[x] << ','
                    << csv::format_double(vol.time_at(k)) << ',';
                if (std::isnan(v))
                    out << "nan";
                else
                    out << csv::format_double(v);
                out << '\n';
            }
        }
    if (!out) throw DataError("write failed: " + path);
}

SandFractionVolume predict_volume(const mann::MannModel& model,
                                  const ingest::AttributeVolume& vol, const HorizonGrid& hz,
                                  int threads) {
    if (hz.inlines != vol.inlines || hz.xlines != vol.xlines)
        throw DataError("geometry: horizon grid does not match the attribute volume grid");

    SandFractionVolume out;
    out.inlines = vol.inlines;
    out.xlines = vol.xlines;
    out.t0 = vol.t0;
    out.dt = vol.dt;
    out.nt = vol.nt;
    out.values.assign(vol.n_traces() * vol.nt, std::nan(""));

    parallel_for(vol.n_traces(), threads, [&](std::size_t ti) {
        const double top1 = hz.top1[ti];
        const double top2 = hz.top2[ti];
        if (std::isnan(top1) || std::isnan(top2)) return; // unpicked: stays NaN
        for (std::size_t k = 0; k < vol.nt; ++k) {
            const double t = vol.time_at(k);
            const int z = t < top1 ? 0 : (t < top2 ? 1 : 2);
            const mann::ZoneModel& zm = model.zones[z];
            const std::size_t idx = ti * vol.nt + k;
            const auto x = preprocess::apply_zscore(
                zm.zstats, {vol.impedance[idx], vol.inst_amp[idx], vol.inst_freq[idx]});
            const double y = preprocess::invert_minmax(zm.mstats, nn::forward(zm.mlp, x));
            out.values[idx] = std::clamp(y, 0.0, 1.0);
        }
    });
    return out;
}

std::vector<double> moving_average_filter(const std::vector<double>& grid, std::size_t rows,
                                          std::size_t cols, int w) {
    if (w < 1 || w % 2 == 0)
        throw DataError("invalid-window: size must be odd and positive, got " + std::to_string(w));
    if (grid.size() != rows * cols) throw DataError("filter: grid size mismatch");
    const std::ptrdiff_t half = w / 2;
    const auto nr = static_cast<std::ptrdiff_t>(rows);
    const auto nc = static_cast<std::ptrdiff_t>(cols);
    std::vector<double> out(grid.size());
    for (std::ptrdiff_t j = 0; j < nr; ++j) {
        for (std::ptrdiff_t k = 0; k < nc; ++k) {
            double sum = 0.0;
            std::size_t cnt = 0;
            for (std::ptrdiff_t r = std::max<std::ptrdiff_t>(0, j - half);
                 r <= std::min(nr - 1, j + half); ++r) {
                for (std::ptrdiff_t c = std::max<std::ptrdiff_t>(0, k - half);
                     c <= std::min(nc - 1, k + half); ++c) {
                    const double v = grid[static_cast<std::size_t>(r * nc + c)];
                    if (!std::isnan(v)) {
                        sum += v;
                        ++cnt;
                    }
                }
            }
            out[static_cast<std::size_t>(j * nc + k)] =
                cnt ? sum / static_cast<double>(cnt) : std::nan("");
        }
    }
    return out;
}

SandFractionVolume filter_volume(const SandFractionVolume& vol, int w, int threads) {
    if (w < 1 || w % 2 == 0)
        throw DataError("invalid-window: size must be odd and positive, got " + std::to_string(w));
    SandFractionVolume out = vol;
    const std::size_t nx = vol.xlines.size();
    parallel_for(vol.inlines.size(), threads, [&](std::size_t i) {
        const std::size_t base = i * nx * vol.nt;
        std::vector<double> section(vol.values.begin() + static_cast<std::ptrdiff_t>(base),
                                    vol.values.begin() + static_cast<std::ptrdiff_t>(base + nx * vol.nt));
        auto filtered = moving_average_filter(section, nx, vol.nt, w);
        std::copy(filtered.begin(), filtered.end(),
                  out.values.begin() + static_cast<std::ptrdiff_t>(base));
    });
    return out;
}

Section extract_section(const SandFractionVolume& vol, int inline_no) {
    auto it = std::lower_bound(vol.inlines.begin(), vol.inlines.end(), inline_no);
    if (it == vol.inlines.end() || *it != inline_no)
        throw DataError("missing-inline: " + std::to_string(inline_no) + " not in volume");
    const auto i = static_cast<std::size_t>(it - vol.inlines.begin());
    Section s;
    s.inline_no = inline_no;
    s.xlines = vol.xlines;
    s.times.resize(vol.nt);
    for (std::size_t k = 0; k < vol.nt; ++k) s.times[k] = vol.time_at(k);
    const std::size_t base = i * vol.xlines.size() * vol.nt;
    s.values.assign(vol.values.begin() + static_cast<std::ptrdiff_t>(base),
                    vol.values.begin() +
                        static_cast<std::ptrdiff_t>(base + vol.xlines.size() * vol.nt));
    return s;
}

void write_section(const Section& s, const std::string& path, SectionFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    const std::size_t nt = s.times.size();
    if (format == SectionFormat::csv) {
        out << "xline";
        for (double t : s.times) out << ",t_" << csv::format_double(t);
        out << '\n';
        for (std::size_t x = 0; x < s.xlines.size(); ++x) {
            out << s.xlines[x];
            for (std::size_t k = 0; k < nt; ++k) {
                const double v = s.values[x * nt + k];
                out << ',';
                if (std::isnan(v))
                    out << "nan";
                else
                    out << csv::format_double(v);
            }
            out << '\n';
        }
    } else {
        // P2, one image row per xline, time along the row; [0,1] -> [0,255], NaN -> 0
        out << "P2\n" << nt << ' ' << s.xlines.size() << "\n255\n";
        std::size_t n_nan = 0;
        for (std::size_t x = 0; x < s.xlines.size(); ++x) {
            for (std::size_t k = 0; k < nt; ++k) {
                const double v = s.values[x * nt + k];
                int g = 0;
                if (std::isnan(v))
                    ++n_nan;
                else
                    g = static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
                out << g << (k + 1 == nt ? '\n' : ' ');
            }
        }
        std::ofstream meta(path + ".meta.txt", std::ios::binary);
        if (!meta) throw DataError("cannot write file: " + path + ".meta.txt");
        meta << "inline: " << s.inline_no << '\n'
             << "rows: xlines (" << s.xlines.size() << "), cols: time samples (" << nt << ")\n"
             << "mapping: gray = round(clamp(value, 0, 1) * 255); NaN -> 0\n";
        if (n_nan == s.values.size())
            meta << "note: section is entirely NaN (degenerate range, all-zero image)\n";
        if (!meta) throw DataError("write failed: " + path + ".meta.txt");
    }
    if (!out) throw DataError("write failed: " + path);
}

Section read_section_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty section file: " + path);
    Section s;
    {
        std::size_t pos = line.find(',');
        if (line.substr(0, pos) != "xline") throw DataError("bad section header in " + path);
        while (pos != std::string::npos) {
            std::size_t next = line.find(',', pos + 1);
            std::string tok = line.substr(pos + 1, next == std::string::npos ? std::string::npos
                                                                             : next - pos - 1);
            if (tok.rfind("t_", 0) != 0) throw DataError("bad section header in " + path);
            s.times.push_back(std::stod(tok.substr(2)));
            pos = next;
        }
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t pos = line.find(',');
        s.xlines.push_back(std::stoi(line.substr(0, pos)));
        std::size_t count = 0;
        while (pos != std::string::npos) {
            std::size_t next = line.find(',', pos + 1);
            std::string tok = line.substr(pos + 1, next == std::string::npos ? std::string::npos
                                                                             : next - pos - 1);
            s.values.push_back(tok == "nan" ? std::nan("") : std::stod(tok));
            ++count;
            pos = next;
        }
        if (count != s.times.size())
            throw DataError("section row length mismatch in " + path);
    }
    return s;
}

double section_roughness(const Section& s) {
    const std::size_t nt = s.times.size();
    double acc = 0.0;
    std::size_t n = 0;
    for (std::size_t x = 0; x < s.xlines.size(); ++x) {
        for (std::size_t k = 1; k + 1 < nt; ++k) {
            const double a = s.values[x * nt + k - 1];
            const double b = s.values[x * nt + k];
            const double c = s.values[x * nt + k + 1];
            if (std::isnan(a) || std::isnan(b) || std::isnan(c)) continue;
            acc += std::fabs(a - 2.0 * b + c);
            ++n;
        }
    }
    return n ? acc / static_cast<double>(n) : 0.0;
}

} // namespace sandcast::volume
