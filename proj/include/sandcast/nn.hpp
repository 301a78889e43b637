#ifndef SANDCAST_NN_HPP
#define SANDCAST_NN_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sandcast::nn {

/// 3 -> H -> 1 feedforward network, tanh hidden units, log-sigmoid output.
/// Operates on normalized data; 5H + 1 trainable parameters.
struct MlpModel {
    int hidden = 0;
    std::vector<double> w1; // H x 3, row-major
    std::vector<double> b1; // H
    std::vector<double> w2; // H
    double b2 = 0.0;

    int n_params() const { return 5 * hidden + 1; }
};

struct TrainConfig {
    int max_epoch = 1000;
    double err_min = 1e-4;    // RMSE threshold, normalized target units
    std::uint64_t seed = 0;
    double scg_sigma = 5.0e-5;   // finite-difference scale for Hessian-vector products
    double scg_lambda0 = 5.0e-7; // initial Levenberg-Marquardt damping
};

enum class StopReason { err_min_reached, max_epoch };

struct TrainTrace {
    std::vector<double> rmse_history; // one entry per epoch, non-increasing
    int epochs_run = 0;
    StopReason stop_reason = StopReason::max_epoch;
    double wall_time_s = 0.0;
    double best_rmse = 0.0;
    int best_epoch = 0; // 0 = initial weights
};

struct TrainSample {
    std::array<double, 3> x;
    double y;
};

MlpModel init_weights(int hidden, std::uint64_t seed);

double forward(const MlpModel& m, const std::array<double, 3>& x);

/// Analytic gradient of E = (1/2N) * sum((forward(x) - y)^2), laid out as
/// [w1 row-major | b1 | w2 | b2] (same packing as the SCG parameter vector).
std::vector<double> gradient(const MlpModel& m, std::span<const TrainSample> batch);

double batch_rmse(const MlpModel& m, std::span<const TrainSample> batch);

/// pass iff 15 * (5H + 1) <= n_train
bool check_capacity(int hidden, std::size_t n_train);

/// Full-batch scaled conjugate gradient (Moller): forward-difference
/// Hessian-vector products, LM damping, steps accepted only when the
/// comparison parameter is positive, direction restart every 5H+1 iterations.
/// Returns the best-RMSE iterate observed (including the initial weights).
std::pair<MlpModel, TrainTrace> train_scg(const MlpModel& init,
                                          std::span<const TrainSample> patterns,
                                          const TrainConfig& cfg);

/// Trains each candidate (ascending, same seed), drops capacity failures and
/// returns the smallest H whose training RMSE is within 1% of the best.
int select_hidden(std::span<const TrainSample> patterns, std::span<const int> candidates,
                  const TrainConfig& cfg);

/// Same selection, but also hands back the winning trained network.
struct Selection {
    int hidden;
    MlpModel model;
    TrainTrace trace;
};
Selection select_hidden_trained(std::span<const TrainSample> patterns,
                                std::span<const int> candidates, const TrainConfig& cfg);

const char* stop_reason_name(StopReason r);
StopReason stop_reason_from_name(const std::string& s);

} // namespace sandcast::nn

#endif
