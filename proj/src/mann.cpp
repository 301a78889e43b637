#include "sandcast/mann.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "sandcast/csv.hpp"
#include "sandcast/errors.hpp"
#include "sandcast/metrics.hpp"

namespace sandcast::mann {

using json = nlohmann::ordered_json;

namespace {

std::vector<nn::TrainSample> to_samples(const std::vector<preprocess::Pattern>& patterns) {
    std::vector<nn::TrainSample> out;
    out.reserve(patterns.size());
    for (const auto& p : patterns) out.push_back({p.x, p.y});
    return out;
}

std::string deterministic_created() {
    // volatile wall-clock timestamps would break byte-identical model files;
    // honor SOURCE_DATE_EPOCH when provided, else leave the field empty
    const char* sde = std::getenv("SOURCE_DATE_EPOCH");
    if (!sde || !*sde) return "";
    char* end = nullptr;
    const long long epoch = std::strtoll(sde, &end, 10);
    if (end == sde) return "";
    std::time_t t = static_cast<std::time_t>(epoch);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ZoneModel train_zone(const preprocess::ZonedDataset::ZoneData& zd, const nn::TrainConfig& cfg,
                     std::optional<int> fixed_hidden, const std::vector<int>& candidates) {
    auto samples = to_samples(zd.train);
    ZoneModel zm;
    zm.zstats = zd.zstats;
    zm.mstats = zd.mstats;
    if (fixed_hidden) {
        auto [model, trace] = nn::train_scg(nn::init_weights(*fixed_hidden, cfg.seed), samples, cfg);
        zm.mlp = std::move(model);
        zm.trace = std::move(trace);
    } else {
        auto sel = nn::select_hidden_trained(samples, candidates, cfg);
        zm.mlp = std::move(sel.model);
        zm.trace = std::move(sel.trace);
    }
    return zm;
}

double denorm_clamped(const preprocess::MinMaxStats& ms, double y_norm) {
    return std::clamp(preprocess::invert_minmax(ms, y_norm), 0.0, 1.0);
}

json trace_to_json(const nn::TrainTrace& tr) {
    return json{{"epochs", tr.epochs_run},
                {"stop_reason", nn::stop_reason_name(tr.stop_reason)},
                {"final_rmse", tr.rmse_history.empty() ? tr.best_rmse : tr.rmse_history.back()},
                {"best_rmse", tr.best_rmse},
                {"best_epoch", tr.best_epoch}};
}

nn::TrainTrace trace_from_json(const json& j) {
    nn::TrainTrace tr;
    tr.epochs_run = j.at("epochs").get<int>();
    tr.stop_reason = nn::stop_reason_from_name(j.at("stop_reason").get<std::string>());
    tr.best_rmse = j.at("best_rmse").get<double>();
    tr.best_epoch = j.at("best_epoch").get<int>();
    return tr;
}

json mlp_to_json(const nn::MlpModel& m) {
    return json{{"H", m.hidden}, {"W1", m.w1}, {"b1", m.b1}, {"W2", m.w2}, {"b2", m.b2}};
}

nn::MlpModel mlp_from_json(const json& j) {
    nn::MlpModel m;
    m.hidden = j.at("H").get<int>();
    m.w1 = j.at("W1").get<std::vector<double>>();
    m.b1 = j.at("b1").get<std::vector<double>>();
    m.w2 = j.at("W2").get<std::vector<double>>();
    m.b2 = j.at("b2").get<double>();
    const auto h = static_cast<std::size_t>(m.hidden);
    if (m.hidden < 1 || m.w1.size() != 3 * h || m.b1.size() != h || m.w2.size() != h)
        throw DataError("malformed-model: network dimensions are inconsistent");
    return m;
}

json zscore_to_json(const preprocess::ZScoreStats& s) {
    return json{{"mean", s.mean}, {"std", s.std}};
}

preprocess::ZScoreStats zscore_from_json(const json& j) {
    preprocess::ZScoreStats s;
    auto mean = j.at("mean").get<std::vector<double>>();
    auto std_ = j.at("std").get<std::vector<double>>();
    if (mean.size() != 3 || std_.size() != 3)
        throw DataError("malformed-model: zscore stats must have 3 components");
    std::copy(mean.begin(), mean.end(), s.mean.begin());
    std::copy(std_.begin(), std_.end(), s.std.begin());
    return s;
}

json minmax_to_json(const preprocess::MinMaxStats& s) {
    return json{{"y_min", s.y_min}, {"y_max", s.y_max}, {"a", s.a}, {"b", s.b}};
}

preprocess::MinMaxStats minmax_from_json(const json& j) {
    preprocess::MinMaxStats s;
    s.y_min = j.at("y_min").get<double>();
    s.y_max = j.at("y_max").get<double>();
    s.a = j.at("a").get<double>();
    s.b = j.at("b").get<double>();
    return s;
}

json parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError("malformed-model: " + path + ": " + e.what());
    }
    return j;
}

void dump_file(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

} // namespace

MannModel train_mann(const preprocess::ZonedDataset& zoned, const nn::TrainConfig& cfg,
                     const HiddenSpec& hidden) {
    MannModel model;
    model.blind_well_id = zoned.blind_well_id;
    model.seed = cfg.seed;
    model.created = deterministic_created();
    for (int z = 0; z < 3; ++z) {
        if (zoned.zones[z].train.empty())
            throw DataError(std::string("empty-zone: no training patterns in ") +
                            preprocess::kZoneNames[z]);
        nn::TrainConfig zone_cfg = cfg;
        zone_cfg.seed = cfg.seed + static_cast<std::uint64_t>(z) + 1;
        std::optional<int> fixed;
        if (hidden.fixed) fixed = (*hidden.fixed)[z];
        model.zones[z] = train_zone(zoned.zones[z], zone_cfg, fixed, hidden.candidates);
    }
    return model;
}

std::vector<double> predict_well(const MannModel& model, const ingest::WellLog& blind,
                                 const ingest::WellTops& tops) {
    preprocess::ZoneRanges r = preprocess::segment_zones(blind, tops);
    std::vector<double> out(blind.t.size());
    for (std::size_t k = 0; k < blind.t.size(); ++k) {
        const int z = k < r.i1 ? 0 : (k < r.i2 ? 1 : 2);
        const ZoneModel& zm = model.zones[z];
        const auto x = preprocess::apply_zscore(
            zm.zstats, {blind.impedance[k], blind.inst_amp[k], blind.inst_freq[k]});
        out[k] = denorm_clamped(zm.mstats, nn::forward(zm.mlp, x));
    }
    return out;
}

SingleModel train_single_ann(const std::vector<ingest::WellLog>& wells,
                             const std::vector<ingest::WellTops>& tops,
                             const std::string& blind_id, const nn::TrainConfig& cfg,
                             int hidden, const std::vector<int>& candidates) {
    bool blind_found = false;
    for (const auto& w : wells) blind_found |= (w.well_id == blind_id);
    if (!blind_found) throw DataError("unknown-well: blind well " + blind_id + " not in dataset");

    std::vector<std::array<double, 3>> xs;
    std::vector<double> ys;
    for (const auto& w : wells) {
        if (w.well_id == blind_id) continue;
        preprocess::segment_zones(w, preprocess::tops_for(tops, w.well_id)); // same preconditions
        for (std::size_t k = 0; k < w.t.size(); ++k) {
            xs.push_back({w.impedance[k], w.inst_amp[k], w.inst_freq[k]});
            ys.push_back(w.sand_fraction[k]);
        }
    }
    if (xs.empty()) throw DataError("empty training set for single ANN");

    SingleModel sm;
    sm.blind_well_id = blind_id;
    sm.seed = cfg.seed;
    sm.zstats = preprocess::fit_zscore(xs);
    sm.mstats = preprocess::fit_minmax(ys);

    std::vector<nn::TrainSample> samples(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        samples[i] = {preprocess::apply_zscore(sm.zstats, xs[i]),
                      preprocess::apply_minmax(sm.mstats, ys[i])};

    if (hidden >= 1) {
        auto [model, trace] = nn::train_scg(nn::init_weights(hidden, cfg.seed), samples, cfg);
        sm.mlp = std::move(model);
        sm.trace = std::move(trace);
    } else {
        auto sel = nn::select_hidden_trained(samples, candidates, cfg);
        sm.mlp = std::move(sel.model);
        sm.trace = std::move(sel.trace);
    }
    return sm;
}

std::vector<double> predict_well_single(const SingleModel& model, const ingest::WellLog& blind) {
    std::vector<double> out(blind.t.size());
    for (std::size_t k = 0; k < blind.t.size(); ++k) {
        const auto x = preprocess::apply_zscore(
            model.zstats, {blind.impedance[k], blind.inst_amp[k], blind.inst_freq[k]});
        out[k] = denorm_clamped(model.mstats, nn::forward(model.mlp, x));
    }
    return out;
}

const ReportRow& BlindReport::row(const std::string& scope) const {
    for (const auto& r : rows)
        if (r.scope == scope) return r;
    throw DataError("report has no scope '" + scope + "'");
}

BlindReport compare(const MannModel& model, const SingleModel& single,
                    const ingest::WellLog& blind, const ingest::WellTops& tops) {
    if (model.blind_well_id != single.blind_well_id || model.blind_well_id != blind.well_id)
        throw DataError("inconsistent-comparison: blind well mismatch (" + model.blind_well_id +
                        " vs " + single.blind_well_id + " vs " + blind.well_id + ")");

    const auto pred_mann = predict_well(model, blind, tops);
    const auto pred_single = predict_well_single(single, blind);
    const preprocess::ZoneRanges r = preprocess::segment_zones(blind, tops);
    const std::array<std::pair<std::size_t, std::size_t>, 3> ranges = {
        std::pair{std::size_t{0}, r.i1}, {r.i1, r.i2}, {r.i2, r.n}};

    BlindReport rep;
    double cc_sum = 0, rmse_sum = 0, aem_sum = 0;
    double cc_w = 0, rmse_w = 0, aem_w = 0;
    for (int z = 0; z < 3; ++z) {
        auto [lo, hi] = ranges[z];
        std::span<const double> target(blind.sand_fraction.data() + lo, hi - lo);
        std::span<const double> pred(pred_mann.data() + lo, hi - lo);
        ReportRow row;
        row.scope = preprocess::kZoneNames[z];
        row.cc = metrics::cc(target, pred);
        row.rmse = metrics::rmse(target, pred);
        row.aem = metrics::aem(target, pred);
        row.n = hi - lo;
        row.time_s = model.zones[z].trace.wall_time_s;
        cc_sum += row.cc;
        rmse_sum += row.rmse;
        aem_sum += row.aem;
        const double w = static_cast<double>(row.n);
        cc_w += w * row.cc;
        rmse_w += w * row.rmse;
        aem_w += w * row.aem;
        rep.rows.push_back(row);
    }
    const std::size_t n_total = r.n;
    const double total_time = model.total_train_time();
    rep.rows.push_back({"average", cc_sum / 3.0, rmse_sum / 3.0, aem_sum / 3.0, n_total,
                        total_time});
    const double wn = static_cast<double>(n_total);
    rep.rows.push_back({"weighted_average", cc_w / wn, rmse_w / wn, aem_w / wn, n_total,
                        total_time});
    rep.rows.push_back({"single_ann", metrics::cc(blind.sand_fraction, pred_single),
                        metrics::rmse(blind.sand_fraction, pred_single),
                        metrics::aem(blind.sand_fraction, pred_single), n_total,
                        single.trace.wall_time_s});
    return rep;
}

void write_report_csv(const std::string& path, const BlindReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << "scope,cc,rmse,aem,n,time_s\n";
    for (const auto& r : report.rows)
        out << r.scope << ',' << csv::format_double(r.cc) << ',' << csv::format_double(r.rmse)
            << ',' << csv::format_double(r.aem) << ',' << r.n << ','
            << csv::format_double(r.time_s) << '\n';
    if (!out) throw DataError("write failed: " + path);
}

void save_model(const MannModel& model, const std::string& path) {
    json j;
    j["format"] = kFormatMann;
    j["blind_well"] = model.blind_well_id;
    j["seed"] = model.seed;
    j["created"] = model.created;
    j["normalization"] = "per-zone";
    j["zones"] = json::array();
    for (int z = 0; z < 3; ++z) {
        const ZoneModel& zm = model.zones[z];
        json jz;
        jz["zone"] = preprocess::kZoneNames[z];
        jz.update(mlp_to_json(zm.mlp));
        jz["zscore"] = zscore_to_json(zm.zstats);
        jz["minmax"] = minmax_to_json(zm.mstats);
        jz["trace"] = trace_to_json(zm.trace);
        j["zones"].push_back(jz);
    }
    dump_file(j, path);
}

MannModel load_model(const std::string& path) {
    json j = parse_file(path);
    try {
        if (j.at("format").get<std::string>() != kFormatMann)
            throw DataError("version mismatch in " + path + ": expected " +
                            std::string(kFormatMann));
        MannModel m;
        m.blind_well_id = j.at("blind_well").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.created = j.value("created", "");
        const auto& zones = j.at("zones");
        if (!zones.is_array() || zones.size() != 3)
            throw DataError("malformed-model: " + path + " must contain exactly 3 zones");
        for (int z = 0; z < 3; ++z) {
            const auto& jz = zones[static_cast<std::size_t>(z)];
            if (jz.at("zone").get<std::string>() != preprocess::kZoneNames[z])
                throw DataError("malformed-model: " + path + " zone order must be Z1,Z2,Z3");
            ZoneModel zm;
            zm.mlp = mlp_from_json(jz);
            zm.zstats = zscore_from_json(jz.at("zscore"));
            zm.mstats = minmax_from_json(jz.at("minmax"));
            zm.trace = trace_from_json(jz.at("trace"));
            m.zones[z] = std::move(zm);
        }
        return m;
    } catch (const json::exception& e) {
        throw DataError("malformed-model: " + path + ": " + e.what());
    }
}

void save_single(const SingleModel& model, const std::string& path) {
    json j;
    j["format"] = kFormatSingle;
    j["blind_well"] = model.blind_well_id;
    j["seed"] = model.seed;
    j["created"] = deterministic_created();
    j["network"] = mlp_to_json(model.mlp);
    j["zscore"] = zscore_to_json(model.zstats);
    j["minmax"] = minmax_to_json(model.mstats);
    j["trace"] = trace_to_json(model.trace);
    dump_file(j, path);
}

SingleModel load_single(const std::string& path) {
    json j = parse_file(path);
    try {
        if (j.at("format").get<std::string>() != kFormatSingle)
            throw DataError("version mismatch in " + path + ": expected " +
                            std::string(kFormatSingle));
        SingleModel m;
        m.blind_well_id = j.at("blind_well").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.mlp = mlp_from_json(j.at("network"));
        m.zstats = zscore_from_json(j.at("zscore"));
        m.mstats = minmax_from_json(j.at("minmax"));
        m.trace = trace_from_json(j.at("trace"));
        return m;
    } catch (const json::exception& e) {
        throw DataError("malformed-model: " + path + ": " + e.what());
    }
}

} // namespace sandcast::mann
