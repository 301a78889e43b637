#ifndef SANDCAST_MANN_HPP
#define SANDCAST_MANN_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sandcast/nn.hpp"
#include "sandcast/preprocess.hpp"

namespace sandcast::mann {

constexpr const char* kFormatMann = "sandcast-mann-v1";
constexpr const char* kFormatSingle = "sandcast-ann-v1";

struct ZoneModel {
    nn::MlpModel mlp;
    preprocess::ZScoreStats zstats;
    preprocess::MinMaxStats mstats;
    nn::TrainTrace trace;
};

struct MannModel {
    std::array<ZoneModel, 3> zones; // Z1, Z2, Z3
    std::string blind_well_id;
    std::uint64_t seed = 0;
    std::string created; // deterministic: SOURCE_DATE_EPOCH when set, else empty

    int total_hidden() const {
        return zones[0].mlp.hidden + zones[1].mlp.hidden + zones[2].mlp.hidden;
    }
    double total_train_time() const {
        return zones[0].trace.wall_time_s + zones[1].trace.wall_time_s +
               zones[2].trace.wall_time_s;
    }
};

/// Single monolithic network over the full depth range (the paper's baseline).
struct SingleModel {
    nn::MlpModel mlp;
    preprocess::ZScoreStats zstats; // fitted on the pooled training set
    preprocess::MinMaxStats mstats;
    nn::TrainTrace trace;
    std::string blind_well_id;
    std::uint64_t seed = 0;
};

/// Hidden sizing: fixed per-zone values, or automatic selection over candidates.
struct HiddenSpec {
    std::optional<std::array<int, 3>> fixed; // per zone; nullopt = auto
    std::vector<int> candidates = {2, 4, 6, 8, 12, 16};
};

/// Trains the three zone networks independently; zone i uses seed + i (i = 1..3).
MannModel train_mann(const preprocess::ZonedDataset& zoned, const nn::TrainConfig& cfg,
                     const HiddenSpec& hidden = {});

/// Routes every sample of the blind well to its zone's network and
/// concatenates in time order; outputs are denormalized and clamped to [0,1].
std::vector<double> predict_well(const MannModel& model, const ingest::WellLog& blind,
                                 const ingest::WellTops& tops);

/// One network on the pooled training patterns of all three zones, with
/// normalizers fitted on the pooled raw data. `hidden` < 1 selects automatically.
SingleModel train_single_ann(const std::vector<ingest::WellLog>& wells,
                             const std::vector<ingest::WellTops>& tops,
                             const std::string& blind_id, const nn::TrainConfig& cfg,
                             int hidden, const std::vector<int>& candidates = {2, 4, 6, 8, 12, 16});

std::vector<double> predict_well_single(const SingleModel& model, const ingest::WellLog& blind);

struct ReportRow {
    std::string scope; // Z1, Z2, Z3, average, weighted_average, single_ann
    double cc = 0.0;
    double rmse = 0.0;
    double aem = 0.0;
    std::size_t n = 0;
    double time_s = 0.0;
};

struct BlindReport {
    std::vector<ReportRow> rows;
    const ReportRow& row(const std::string& scope) const;
};

/// Per-zone metrics on the blind well, their unweighted and pattern-count
/// weighted means, and the single-ANN metrics over the full range. All
/// metrics are computed on raw (denormalized) sand-fraction values.
BlindReport compare(const MannModel& model, const SingleModel& single,
                    const ingest::WellLog& blind, const ingest::WellTops& tops);

void write_report_csv(const std::string& path, const BlindReport& report);

void save_model(const MannModel& model, const std::string& path);
MannModel load_model(const std::string& path);
void save_single(const SingleModel& model, const std::string& path);
SingleModel load_single(const std::string& path);

} // namespace sandcast::mann

#endif
