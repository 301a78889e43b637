#include "sandcast/pipeline.hpp"

#include <filesystem>

#include "sandcast/errors.hpp"
#include "sandcast/preprocess.hpp"

namespace sandcast::pipeline {

namespace fs = std::filesystem;

namespace {

std::string join(const std::string& dir, const char* name) {
    return (fs::path(dir) / name).string();
}

template <typename T>
const T& find_by_well(const std::vector<T>& items, const std::string& well_id,
                      const char* what) {
    for (const auto& it : items)
        if (it.well_id == well_id) return it;
    throw DataError(std::string("no ") + what + " entry for well " + well_id);
}

} // namespace

RawData load_data_dir(const std::string& dir) {
    RawData raw;
    raw.logs = ingest::load_well_logs(join(dir, "wells.csv"));
    raw.checkshots = ingest::load_checkshots(join(dir, "checkshots.csv"));
    raw.locations = ingest::load_locations(join(dir, "locations.csv"));
    raw.volume = ingest::load_attribute_volume(join(dir, "volume.csv"));
    return raw;
}

std::vector<ingest::WellLog> integrate_wells(const RawData& raw, double dt_out) {
    std::vector<ingest::WellLog> out;
    out.reserve(raw.logs.size());
    for (const auto& log : raw.logs) {
        const auto& cs = find_by_well(raw.checkshots, log.well_id, "checkshot");
        const auto& loc = find_by_well(raw.locations, log.well_id, "location");
        const auto clean = ingest::drop_missing(log);
        const auto in_time = ingest::depth_to_time(clean, cs);
        const auto traces = ingest::extract_trace(raw.volume, loc);
        out.push_back(ingest::integrate(log.well_id, in_time, traces, dt_out));
    }
    return out;
}

std::vector<ingest::WellLog> integrate_field(const synth::SynthField& field, double dt_out) {
    RawData raw;
    raw.logs = field.logs;
    raw.checkshots = field.checkshots;
    raw.locations = field.locations;
    raw.volume = field.volume;
    return integrate_wells(raw, dt_out);
}

std::vector<ingest::WellLog> ingest_run(const std::string& data_dir, const std::string& out_csv,
                                        double dt_out) {
    auto wells = integrate_wells(load_data_dir(data_dir), dt_out);
    ingest::write_integrated(out_csv, wells);
    return wells;
}

TrainingInputs load_training_inputs(const std::string& data_dir) {
    const std::string integrated = join(data_dir, "wells_integrated.csv");
    if (!fs::exists(integrated))
        throw DataError("missing " + integrated + " — run `sandcast ingest` first");
    TrainingInputs in;
    in.wells = ingest::load_integrated(integrated);
    in.tops = ingest::load_tops(join(data_dir, "tops.csv"));
    return in;
}

mann::MannModel train_run(const TrainingInputs& in, const std::string& blind_id,
                          const nn::TrainConfig& cfg, const mann::HiddenSpec& hidden) {
    auto zoned = preprocess::partition_lowo(in.wells, in.tops, blind_id);
    return mann::train_mann(zoned, cfg, hidden);
}

mann::BlindReport blind_test_run(const TrainingInputs& in, const mann::MannModel& model,
                                 const mann::SingleModel& single) {
    const auto& blind = find_by_well(in.wells, model.blind_well_id, "integrated well");
    const auto& tops = preprocess::tops_for(in.tops, model.blind_well_id);
    return mann::compare(model, single, blind, tops);
}

} // namespace sandcast::pipeline
