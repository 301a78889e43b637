#ifndef SANDCAST_PIPELINE_HPP
#define SANDCAST_PIPELINE_HPP

#include <string>
#include <vector>

#include "sandcast/ingest.hpp"
#include "sandcast/mann.hpp"
#include "sandcast/synth.hpp"
#include "sandcast/volume.hpp"

namespace sandcast::pipeline {

/// Raw per-well inputs plus the attribute volume, as loaded from a data dir.
struct RawData {
    std::vector<ingest::RawWellLog> logs;
    std::vector<ingest::Checkshot> checkshots;
    std::vector<ingest::WellLocation> locations;
    ingest::AttributeVolume volume;
};

RawData load_data_dir(const std::string& dir);

/// Full integration per well: drop missing, depth->time, trace extraction,
/// fusion on the common window at dt_out.
std::vector<ingest::WellLog> integrate_wells(const RawData& raw,
                                             double dt_out = ingest::kDtOut);

std::vector<ingest::WellLog> integrate_field(const synth::SynthField& field,
                                             double dt_out = ingest::kDtOut);

/// data dir -> wells_integrated.csv; returns the integrated wells.
std::vector<ingest::WellLog> ingest_run(const std::string& data_dir,
                                        const std::string& out_csv,
                                        double dt_out = ingest::kDtOut);

struct TrainingInputs {
    std::vector<ingest::WellLog> wells;
    std::vector<ingest::WellTops> tops;
};

/// Reads wells_integrated.csv + tops.csv from the data dir.
TrainingInputs load_training_inputs(const std::string& data_dir);

mann::MannModel train_run(const TrainingInputs& in, const std::string& blind_id,
                          const nn::TrainConfig& cfg, const mann::HiddenSpec& hidden);

mann::BlindReport blind_test_run(const TrainingInputs& in, const mann::MannModel& model,
                                 const mann::SingleModel& single);

} // namespace sandcast::pipeline

#endif
