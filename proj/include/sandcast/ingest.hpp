#ifndef SANDCAST_INGEST_HPP
#define SANDCAST_INGEST_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sandcast::ingest {

constexpr double kNullSentinel = -999.25; // industry LAS convention
constexpr double kDtOut = 0.10;           // ms, integrated sampling interval

struct RawSample {
    double md;            // measured depth, m
    double sand_fraction; // in [0,1], or NaN where the file carried the sentinel
};

struct RawWellLog {
    std::string well_id;
    std::vector<RawSample> samples; // md strictly increasing
};

struct Checkshot {
    std::string well_id;
    std::vector<double> md;  // m, strictly increasing
    std::vector<double> twt; // ms, strictly increasing
};

struct WellLocation {
    std::string well_id;
    int inline_no = 0;
    int xline_no = 0;
};

struct WellTops {
    std::string well_id;
    double top1_t = 0.0; // ms
    double top2_t = 0.0; // ms
};

/// Regular (inline, xline, t) grid of the three predictor attributes.
struct AttributeVolume {
    std::vector<int> inlines; // sorted unique
    std::vector<int> xlines;  // sorted unique
    double t0 = 0.0;          // ms
    double dt = 2.0;          // ms
    std::size_t nt = 0;
    // trace-major storage: value(i_idx, x_idx, k) = data[(i_idx*nx + x_idx)*nt + k]
    std::vector<double> impedance;
    std::vector<double> inst_amp;
    std::vector<double> inst_freq;

    std::size_t n_traces() const { return inlines.size() * xlines.size(); }
    std::optional<std::size_t> trace_index(int il, int xl) const;
    double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
};

/// Integrated, time-domain well: five equal-length series on a uniform
/// 0.10 ms grid with no null sentinels left.
struct WellLog {
    std::string well_id;
    std::vector<double> t; // ms
    std::vector<double> impedance;
    std::vector<double> inst_amp;
    std::vector<double> inst_freq;
    std::vector<double> sand_fraction; // in [0,1]
};

struct TimeSeries {
    std::vector<double> t;
    std::vector<double> v;
};

// --- file loaders (formats given in the README; sentinel -999.25 = missing) ---
std::vector<RawWellLog> load_well_logs(const std::string& path);
std::vector<Checkshot> load_checkshots(const std::string& path);
std::vector<WellLocation> load_locations(const std::string& path);
std::vector<WellTops> load_tops(const std::string& path);
AttributeVolume load_attribute_volume(const std::string& path);

// --- pipeline operations ---
RawWellLog drop_missing(const RawWellLog& log);

/// Depth -> two-way time by piecewise-linear interpolation of the checkshot.
/// Extrapolation outside the checkshot md range is an error.
TimeSeries depth_to_time(const RawWellLog& log, const Checkshot& cs);

/// Values at t_start + k*dt for all k with t_start + k*dt <= t_end, via
/// not-a-knot cubic spline through the input points.
std::vector<double> resample_uniform(std::span<const double> t, std::span<const double> v,
                                     double t_start, double t_end, double dt);

std::array<TimeSeries, 3> extract_trace(const AttributeVolume& vol, const WellLocation& loc);

/// Common time window = [max(starts), min(ends)]; everything resampled to
/// 0.10 ms on that window; sand fraction clamped to [0,1] (spline overshoot).
WellLog integrate(const std::string& well_id, const TimeSeries& log,
                  const std::array<TimeSeries, 3>& traces, double dt_out = kDtOut);

// integrated-well CSV (well_id,t_ms,impedance,inst_amp,inst_freq,sand_fraction)
void write_integrated(const std::string& path, const std::vector<WellLog>& wells);
std::vector<WellLog> load_integrated(const std::string& path);

} // namespace sandcast::ingest

#endif
