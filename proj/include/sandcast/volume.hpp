#ifndef SANDCAST_VOLUME_HPP
#define SANDCAST_VOLUME_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "sandcast/ingest.hpp"
#include "sandcast/mann.hpp"

namespace sandcast::volume {

/// Per-trace Top1/Top2 picks; NaN where unpicked.
struct HorizonGrid {
    std::vector<int> inlines;
    std::vector<int> xlines;
    std::vector<double> top1; // inlines.size()*xlines.size(), NaN = unpicked
    std::vector<double> top2;
};

/// Same grid geometry as the source AttributeVolume; values in [0,1] or NaN.
struct SandFractionVolume {
    std::vector<int> inlines;
    std::vector<int> xlines;
    double t0 = 0.0;
    double dt = 2.0;
    std::size_t nt = 0;
    std::vector<double> values; // trace-major, like AttributeVolume

    std::size_t n_traces() const { return inlines.size() * xlines.size(); }
    double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
};

/// 2D slice at one inline: value(x_idx, k) = values[x_idx*nt + k].
struct Section {
    int inline_no = 0;
    std::vector<int> xlines;
    std::vector<double> times;
    std::vector<double> values;
};

HorizonGrid load_horizons(const std::string& path);
void write_horizons(const std::string& path, const HorizonGrid& hz);

SandFractionVolume load_sand_volume(const std::string& path);
void write_sand_volume(const std::string& path, const SandFractionVolume& vol);

/// Zone-routed prediction on the volume's native time grid (no upsampling).
/// Traces with unpicked horizons come back as all-NaN. Results are
/// independent of `threads`.
SandFractionVolume predict_volume(const mann::MannModel& model,
                                  const ingest::AttributeVolume& vol, const HorizonGrid& hz,
                                  int threads = 1);

/// NaN-aware moving average: out(j,k) = mean of the non-NaN input values in
/// the w x w window centered at (j,k), cropped at the edges; NaN iff the
/// whole window is NaN. Never reads its own output (non-progressive);
/// accumulation is row-major within the window.
std::vector<double> moving_average_filter(const std::vector<double>& grid, std::size_t rows,
                                          std::size_t cols, int w);

/// Applies moving_average_filter independently to each inline section
/// (window over xline x time).
SandFractionVolume filter_volume(const SandFractionVolume& vol, int w, int threads = 1);

Section extract_section(const SandFractionVolume& vol, int inline_no);

enum class SectionFormat { csv, pgm };
void write_section(const Section& s, const std::string& path, SectionFormat format);
Section read_section_csv(const std::string& path);

/// Mean absolute second difference along time, averaged over a section's
/// fully-finite triples. The post-filter smoothing check keys on this.
double section_roughness(const Section& s);

} // namespace sandcast::volume

#endif
