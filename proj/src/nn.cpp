#include "sandcast/nn.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "sandcast/errors.hpp"
#include "sandcast/rng.hpp"

namespace sandcast::nn {

namespace {

inline double logsig(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// flat parameter vector layout: [w1 (H*3) | b1 (H) | w2 (H) | b2]
std::vector<double> pack(const MlpModel& m) {
    std::vector<double> p;
    p.reserve(static_cast<std::size_t>(m.n_params()));
    p.insert(p.end(), m.w1.begin(), m.w1.end());
    p.insert(p.end(), m.b1.begin(), m.b1.end());
    p.insert(p.end(), m.w2.begin(), m.w2.end());
    p.push_back(m.b2);
    return p;
}

MlpModel unpack(int hidden, std::span<const double> p) {
    MlpModel m;
    m.hidden = hidden;
    const std::size_t h = static_cast<std::size_t>(hidden);
    m.w1.assign(p.begin(), p.begin() + 3 * h);
    m.b1.assign(p.begin() + 3 * h, p.begin() + 4 * h);
    m.w2.assign(p.begin() + 4 * h, p.begin() + 5 * h);
    m.b2 = p[5 * h];
    return m;
}

// Shared evaluation core on the flat vector; writes the gradient into `grad`
// when non-null. Returns E = (1/2N) sum (f - y)^2.
double eval_flat(int hidden, std::span<const double> p, std::span<const TrainSample> batch,
                 std::vector<double>* grad, std::vector<double>& act) {
    const std::size_t h = static_cast<std::size_t>(hidden);
    const double* w1 = p.data();
    const double* b1 = p.data() + 3 * h;
    const double* w2 = p.data() + 4 * h;
    const double b2 = p[5 * h];
    if (grad) std::fill(grad->begin(), grad->end(), 0.0);
    if (act.size() < h) act.resize(h);

    const double inv_n = 1.0 / static_cast<double>(batch.size());
    double e = 0.0;
    for (const auto& s : batch) {
        for (std::size_t j = 0; j < h; ++j) {
            const double* row = w1 + 3 * j;
            act[j] = std::tanh(row[0] * s.x[0] + row[1] * s.x[1] + row[2] * s.x[2] + b1[j]);
        }
        double u = b2;
        for (std::size_t j = 0; j < h; ++j) u += w2[j] * act[j];
        const double yhat = logsig(u);
        const double r = yhat - s.y;
        e += r * r;
        if (grad) {
            const double g = inv_n * r * yhat * (1.0 - yhat); // dE/du for this pattern
            double* gw1 = grad->data();
            double* gb1 = grad->data() + 3 * h;
            double* gw2 = grad->data() + 4 * h;
            for (std::size_t j = 0; j < h; ++j) {
                const double dz = g * w2[j] * (1.0 - act[j] * act[j]);
                gw1[3 * j + 0] += dz * s.x[0];
                gw1[3 * j + 1] += dz * s.x[1];
                gw1[3 * j + 2] += dz * s.x[2];
                gb1[j] += dz;
                gw2[j] += g * act[j];
            }
            (*grad)[5 * h] += g;
        }
    }
    return 0.5 * inv_n * e;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

MlpModel init_weights(int hidden, std::uint64_t seed) {
    if (hidden < 1) throw DataError("invalid-config: hidden unit count must be >= 1, got " +
                                    std::to_string(hidden));
    UniformRng rng(seed);
    MlpModel m;
    m.hidden = hidden;
    const double lim1 = 1.0 / std::sqrt(3.0);
    const double lim2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    m.w1.resize(3 * static_cast<std::size_t>(hidden));
    m.b1.resize(static_cast<std::size_t>(hidden));
    m.w2.resize(static_cast<std::size_t>(hidden));
    for (auto& w : m.w1) w = rng.uniform(-lim1, lim1);
    for (auto& b : m.b1) b = rng.uniform(-lim1, lim1);
    for (auto& w : m.w2) w = rng.uniform(-lim2, lim2);
    m.b2 = rng.uniform(-lim2, lim2);
    return m;
}

double forward(const MlpModel& m, const std::array<double, 3>& x) {
    double u = m.b2;
    for (std::size_t j = 0; j < static_cast<std::size_t>(m.hidden); ++j) {
        const double* row = m.w1.data() + 3 * j;
        u += m.w2[j] * std::tanh(row[0] * x[0] + row[1] * x[1] + row[2] * x[2] + m.b1[j]);
    }
    return logsig(u);
}

std::vector<double> gradient(const MlpModel& m, std::span<const TrainSample> batch) {
    if (batch.empty()) throw DataError("invalid-input: gradient of an empty batch");
    std::vector<double> p = pack(m);
    std::vector<double> g(p.size());
    std::vector<double> act;
    eval_flat(m.hidden, p, batch, &g, act);
    return g;
}

double batch_rmse(const MlpModel& m, std::span<const TrainSample> batch) {
    if (batch.empty()) throw DataError("invalid-input: rmse of an empty batch");
    std::vector<double> p = pack(m);
    std::vector<double> act;
    return std::sqrt(2.0 * eval_flat(m.hidden, p, batch, nullptr, act));
}

bool check_capacity(int hidden, std::size_t n_train) {
    return 15ull * static_cast<unsigned long long>(5 * hidden + 1) <= n_train;
}

std::pair<MlpModel, TrainTrace> train_scg(const MlpModel& init,
                                          std::span<const TrainSample> patterns,
                                          const TrainConfig& cfg) {
    if (cfg.max_epoch < 1)
        throw DataError("invalid-config: max_epoch must be >= 1, got " +
                        std::to_string(cfg.max_epoch));
    if (cfg.err_min < 0) throw DataError("invalid-config: err_min must be >= 0");
    if (patterns.empty()) throw DataError("invalid-input: empty training set");
    if (!check_capacity(init.hidden, patterns.size()))
        throw DataError("capacity: 15*(5H+1) = " + std::to_string(15 * (5 * init.hidden + 1)) +
                        " exceeds n_train = " + std::to_string(patterns.size()) +
                        " for H = " + std::to_string(init.hidden));

    const auto t_begin = std::chrono::steady_clock::now();
    const int hidden = init.hidden;
    const std::size_t np = static_cast<std::size_t>(init.n_params());

    std::vector<double> theta = pack(init);
    std::vector<double> act, g(np), g_trial(np), p_dir(np), r(np), trial(np);

    double e_cur = eval_flat(hidden, theta, patterns, &g, act);
    if (!std::isfinite(e_cur)) throw NumericError("numeric-failure: non-finite loss at epoch 0");
    for (std::size_t i = 0; i < np; ++i) {
        r[i] = -g[i];
        p_dir[i] = r[i];
    }

    TrainTrace trace;
    trace.best_rmse = std::sqrt(2.0 * e_cur);
    trace.best_epoch = 0;
    std::vector<double> best_theta = theta;

    double lambda = cfg.scg_lambda0;
    double lambda_bar = 0.0;
    double delta_raw = 0.0;
    double p_sq = dot(p_dir, p_dir);
    bool success = true;

    trace.rmse_history.reserve(static_cast<std::size_t>(cfg.max_epoch));
    for (int epoch = 1; epoch <= cfg.max_epoch; ++epoch) {
        // degenerate direction: stationary point, nothing to move along
        if (p_sq < 1e-300) {
            const double rmse = std::sqrt(2.0 * e_cur);
            trace.rmse_history.push_back(rmse);
            trace.epochs_run = epoch;
            if (rmse <= cfg.err_min) {
                trace.stop_reason = StopReason::err_min_reached;
                break;
            }
            trace.stop_reason = StopReason::max_epoch;
            continue;
        }

        if (success) {
            // second-order information along p via forward difference
            const double sigma_k = cfg.scg_sigma / std::sqrt(p_sq);
            for (std::size_t i = 0; i < np; ++i) trial[i] = theta[i] + sigma_k * p_dir[i];
            eval_flat(hidden, trial, patterns, &g_trial, act);
            delta_raw = 0.0;
            for (std::size_t i = 0; i < np; ++i)
                delta_raw += p_dir[i] * (g_trial[i] - g[i]) / sigma_k;
        }

        double delta = delta_raw + (lambda - lambda_bar) * p_sq;
        if (delta <= 0.0) { // make the scaled Hessian positive definite
            lambda_bar = 2.0 * (lambda - delta / p_sq);
            delta = -delta + lambda * p_sq;
            lambda = lambda_bar;
        }

        const double mu = dot(p_dir, r);
        const double alpha = mu / delta;
        for (std::size_t i = 0; i < np; ++i) trial[i] = theta[i] + alpha * p_dir[i];
        // gradient computed alongside E; only consumed if the step is accepted
        const double e_new = eval_flat(hidden, trial, patterns, &g_trial, act);
        if (!std::isfinite(e_new))
            throw NumericError("numeric-failure: non-finite loss at epoch " +
                               std::to_string(epoch));
        const double big_delta = 2.0 * delta * (e_cur - e_new) / (mu * mu);

        if (big_delta > 0.0) { // accept
            theta.swap(trial);
            e_cur = e_new;
            double rr_new = 0.0, rr_cross = 0.0;
            for (std::size_t i = 0; i < np; ++i) {
                rr_new += g_trial[i] * g_trial[i];
                rr_cross += g_trial[i] * r[i]; // r_new . r_old with r_new = -g_trial
            }
            lambda_bar = 0.0;
            success = true;
            if (epoch % static_cast<int>(np) == 0) {
                for (std::size_t i = 0; i < np; ++i) p_dir[i] = -g_trial[i];
            } else {
                const double beta = (rr_new + rr_cross) / mu; // (|r_new|^2 - r_new.r_old)/mu
                for (std::size_t i = 0; i < np; ++i) p_dir[i] = -g_trial[i] + beta * p_dir[i];
            }
            for (std::size_t i = 0; i < np; ++i) {
                r[i] = -g_trial[i];
                g[i] = g_trial[i];
            }
            p_sq = dot(p_dir, p_dir);
            if (big_delta >= 0.75) lambda *= 0.25;
        } else {
            lambda_bar = lambda;
            success = false;
        }
        if (big_delta < 0.25) lambda += delta * (1.0 - big_delta) / p_sq;

        const double rmse = std::sqrt(2.0 * e_cur);
        trace.rmse_history.push_back(rmse);
        trace.epochs_run = epoch;
        if (rmse < trace.best_rmse) {
            trace.best_rmse = rmse;
            trace.best_epoch = epoch;
            best_theta = theta;
        }
        if (rmse <= cfg.err_min) {
            trace.stop_reason = StopReason::err_min_reached;
            break;
        }
        trace.stop_reason = StopReason::max_epoch;
    }

    trace.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return {unpack(hidden, best_theta), trace};
}

int select_hidden(std::span<const TrainSample> patterns, std::span<const int> candidates,
                  const TrainConfig& cfg) {
    return select_hidden_trained(patterns, candidates, cfg).hidden;
}

Selection select_hidden_trained(std::span<const TrainSample> patterns,
                                std::span<const int> candidates, const TrainConfig& cfg) {
    if (candidates.empty()) throw DataError("invalid-config: no hidden-size candidates");
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (!(candidates[i] > candidates[i - 1]))
            throw DataError("invalid-config: candidates must be sorted ascending");

    struct Entry {
        int hidden;
        MlpModel model;
        TrainTrace trace;
    };
    std::vector<Entry> evaluated;
    for (int h : candidates) {
        if (!check_capacity(h, patterns.size())) continue;
        auto [model, trace] = train_scg(init_weights(h, cfg.seed), patterns, cfg);
        evaluated.push_back({h, std::move(model), std::move(trace)});
    }
    if (evaluated.empty())
        throw DataError("no-feasible-size: every candidate fails the capacity guard for n = " +
                        std::to_string(patterns.size()));
    double best = evaluated.front().trace.best_rmse;
    for (const auto& e : evaluated) best = std::min(best, e.trace.best_rmse);
    for (auto& e : evaluated)
        if (e.trace.best_rmse <= best * 1.01)
            return {e.hidden, std::move(e.model), std::move(e.trace)};
    return {evaluated.back().hidden, std::move(evaluated.back().model),
            std::move(evaluated.back().trace)}; // unreachable: best itself passes
}

const char* stop_reason_name(StopReason r) {
    return r == StopReason::err_min_reached ? "err_min_reached" : "max_epoch";
}

StopReason stop_reason_from_name(const std::string& s) {
    if (s == "err_min_reached") return StopReason::err_min_reached;
    if (s == "max_epoch") return StopReason::max_epoch;
    throw DataError("malformed-model: unknown stop_reason '" + s + "'");
}

} // namespace sandcast::nn
