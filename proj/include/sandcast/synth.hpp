#ifndef SANDCAST_SYNTH_HPP
#define SANDCAST_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sandcast/ingest.hpp"
#include "sandcast/volume.hpp"

namespace sandcast::synth {

struct SynthConfig {
    std::uint64_t seed = 42;
    int n_wells = 8;
    int n_inlines = 40;
    int n_xlines = 40;
    std::size_t nt = 300;
    double t0 = 800.0; // ms
    double dt = 2.0;   // ms
    double noise_sigma = 0.02;
    int n_harmonics = 8;
    double top1_frac = 0.30; // horizon bases as fractions of the time span
    double top2_frac = 0.65;
    double min_well_spacing = 5.0; // grid cells, Euclidean
};

/// Everything the pipeline ingests, plus the ground truth it is judged
/// against. Well data are exactly consistent with the volume at the well
/// locations; the Gaussian noise lives in the ground truth itself, so logs
/// and volume agree for any noise_sigma.
struct SynthField {
    ingest::AttributeVolume volume;
    volume::HorizonGrid horizons;
    volume::SandFractionVolume ground_truth;
    std::vector<ingest::RawWellLog> logs;
    std::vector<ingest::Checkshot> checkshots;
    std::vector<ingest::WellLocation> locations;
    std::vector<ingest::WellTops> tops;
};

/// Pure function of the config: same config, bit-identical field.
SynthField generate(const SynthConfig& cfg);

/// Writes wells.csv, checkshots.csv, locations.csv, tops.csv, volume.csv,
/// horizons.csv and ground_truth.csv into `dir` (created if needed).
void export_field(const SynthField& field, const std::string& dir);

} // namespace sandcast::synth

#endif
