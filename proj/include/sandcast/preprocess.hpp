#ifndef SANDCAST_PREPROCESS_HPP
#define SANDCAST_PREPROCESS_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sandcast/ingest.hpp"

namespace sandcast::preprocess {

enum class Zone { Z1 = 0, Z2 = 1, Z3 = 2 };

constexpr std::array<const char*, 3> kZoneNames = {"Z1", "Z2", "Z3"};

struct ZScoreStats {
    std::array<double, 3> mean{};
    std::array<double, 3> std{}; // population, divisor n; must be > 0
};

struct MinMaxStats {
    double y_min = 0.0;
    double y_max = 1.0;
    double a = 0.2;
    double b = 0.8;
};

struct Pattern {
    std::array<double, 3> x{}; // normalized (impedance, inst_amp, inst_freq)
    double y = 0.0;            // normalized target
    std::string well_id;
    double t = 0.0; // ms
    Zone zone = Zone::Z1;
};

/// Sample index ranges: Z1 = [0, i1), Z2 = [i1, i2), Z3 = [i2, n).
struct ZoneRanges {
    std::size_t i1 = 0;
    std::size_t i2 = 0;
    std::size_t n = 0;
};

struct ZonedDataset {
    struct ZoneData {
        std::vector<Pattern> train;
        std::vector<Pattern> test;
        ZScoreStats zstats;  // fitted on this zone's training patterns only
        MinMaxStats mstats;
    };
    std::array<ZoneData, 3> zones;
    std::string blind_well_id;
};

/// Left-closed zonation: Z1 = {t < top1}, Z2 = {top1 <= t < top2}, Z3 = {t >= top2}.
ZoneRanges segment_zones(const ingest::WellLog& log, const ingest::WellTops& tops);

ZScoreStats fit_zscore(std::span<const std::array<double, 3>> rows);
std::array<double, 3> apply_zscore(const ZScoreStats& s, const std::array<double, 3>& x);

MinMaxStats fit_minmax(std::span<const double> targets);
double apply_minmax(const MinMaxStats& s, double y);
double invert_minmax(const MinMaxStats& s, double y_norm); // exact algebraic inverse, no clamp

/// Leave-one-well-out partition: training = all non-blind wells, test = the
/// blind well; per-zone normalizers fitted on that zone's training patterns
/// only and applied to both sides.
ZonedDataset partition_lowo(const std::vector<ingest::WellLog>& wells,
                            const std::vector<ingest::WellTops>& tops,
                            const std::string& blind_id);

const ingest::WellTops& tops_for(const std::vector<ingest::WellTops>& tops,
                                 const std::string& well_id);

} // namespace sandcast::preprocess

#endif
