#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "toposynth/consensus.hpp"
#include "toposynth/simulator.hpp"

namespace toposynth {

/// Per-silo quadratic objective f_i(w) = ||w - c_i||^2 with unit importance.
struct QuadraticTask {
    int dim = 1;
    std::vector<std::vector<double>> targets; // c_i, one per silo

    void validate(int silo_count) const {
        if (dim < 1) throw validation_error("QuadraticTask: dimension must be >= 1");
        if (static_cast<int>(targets.size()) != silo_count)
            throw validation_error("QuadraticTask: target count mismatch");
        for (const auto& c : targets) {
            if (static_cast<int>(c.size()) != dim)
                throw validation_error("QuadraticTask: target dimension mismatch");
            for (double x : c)
                if (!std::isfinite(x))
                    throw validation_error("QuadraticTask: non-finite target");
        }
    }

    static QuadraticTask random(int silo_count, int dim, std::uint64_t seed,
                                double spread = 1.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> dist(0.0, spread);
        QuadraticTask t;
        t.dim = dim;
        t.targets.assign(silo_count, std::vector<double>(dim, 0.0));
        for (auto& c : t.targets)
            for (double& x : c) x = dist(rng);
        return t;
    }
};

struct TrainOptions {
    int local_steps = 1; // 0 means averaging only
    int rounds = 100;
    double alpha0 = 0.1;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    bool gradients_enabled = true;
    /// Initial iterates; empty means every silo starts at the origin.
    std::vector<std::vector<double>> init;
};

/// Inverse-square-root decay over communication rounds.
inline double learning_rate(double alpha0, int round) {
    return alpha0 / std::sqrt(1.0 + round / 100.0);
}

/// Per-round metrics, index 0 is the pre-training state.
struct TrainResult {
    std::vector<double> global_loss;        // sum_i ||w_bar - c_i||^2
    std::vector<double> consensus_residual; // max_i ||w_i - w_bar||
    std::vector<std::vector<double>> final_weights;
};

namespace detail {

inline void train_metrics(const QuadraticTask& task,
                          const std::vector<std::vector<double>>& w, TrainResult& out) {
    const int n = static_cast<int>(w.size());
    std::vector<double> mean(task.dim, 0.0);
    for (const auto& wi : w)
        for (int d = 0; d < task.dim; ++d) mean[d] += wi[d] / n;
    double loss = 0.0;
    for (int i = 0; i < n; ++i)
        for (int d = 0; d < task.dim; ++d) {
            double diff = mean[d] - task.targets[i][d];
            loss += diff * diff;
        }
    double res = 0.0;
    for (const auto& wi : w) {
        double sq = 0.0;
        for (int d = 0; d < task.dim; ++d) {
            double diff = wi[d] - mean[d];
            sq += diff * diff;
        }
        res = std::max(res, std::sqrt(sq));
    }
    out.global_loss.push_back(loss);
    out.consensus_residual.push_back(res);
}

} // namespace detail

/// Decentralized periodic-averaging SGD: each round runs the configured
/// number of local gradient steps per silo, then one gossip averaging pass
/// with the given consensus matrix. Deterministic given the seed.
inline TrainResult dpasgd_run(const QuadraticTask& task, const Overlay& overlay,
                              const ConsensusMatrix& A, const TrainOptions& opt) {
    const int n = overlay.silo_count;
    task.validate(n);
    if (A.n != n) throw validation_error("dpasgd_run: consensus matrix size mismatch");
    if (opt.local_steps < 0 || opt.rounds < 0 || opt.alpha0 <= 0.0)
        throw validation_error("dpasgd_run: bad options");

    std::vector<std::vector<double>> w =
        opt.init.empty() ? std::vector<std::vector<double>>(
                               n, std::vector<double>(task.dim, 0.0))
                         : opt.init;
    if (static_cast<int>(w.size()) != n)
        throw validation_error("dpasgd_run: init size mismatch");

    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> noise(0.0, opt.noise_sigma);

    TrainResult out;
    detail::train_metrics(task, w, out);
    std::vector<std::vector<double>> next(n, std::vector<double>(task.dim, 0.0));
    for (int k = 0; k < opt.rounds; ++k) {
        double alpha = learning_rate(opt.alpha0, k);
        if (opt.gradients_enabled) {
            for (int i = 0; i < n; ++i)
                for (int step = 0; step < opt.local_steps; ++step)
                    for (int d = 0; d < task.dim; ++d) {
                        double g = 2.0 * (w[i][d] - task.targets[i][d]);
                        if (opt.noise_sigma > 0.0) g += noise(rng);
                        w[i][d] -= alpha * g;
                    }
        }
        for (int i = 0; i < n; ++i)
            for (int d = 0; d < task.dim; ++d) {
                double acc = 0.0;
                for (int j = 0; j < n; ++j) acc += A.a[i][j] * w[j][d];
                next[i][d] = acc;
            }
        std::swap(w, next);
        detail::train_metrics(task, w, out);
    }
    out.final_weights = std::move(w);
    return out;
}

struct TimedLossPoint {
    int round = 0;
    double time_ms = 0.0;
    double global_loss = 0.0;
    double consensus_residual = 0.0;
};

/// Joins per-round losses with the simulator's completion times: round k is
/// charged the time at which its slowest silo finishes.
inline std::vector<TimedLossPoint> loss_vs_time(const TrainResult& r,
                                                const SimulationTrace& tr) {
    if (r.global_loss.size() != tr.times_ms.size())
        throw validation_error("loss_vs_time: round count mismatch");
    std::vector<TimedLossPoint> out;
    for (std::size_t k = 0; k < r.global_loss.size(); ++k) {
        double t = *std::max_element(tr.times_ms[k].begin(), tr.times_ms[k].end());
        out.push_back({static_cast<int>(k), t, r.global_loss[k], r.consensus_residual[k]});
    }
    return out;
}

} // namespace toposynth
