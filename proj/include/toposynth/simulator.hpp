#pragma once

#include <algorithm>
#include <vector>

#include "toposynth/cycle_time.hpp"
#include "toposynth/overlay.hpp"

namespace toposynth {

/// Round-completion times of every silo, t[k][i] for rounds 0..K.
struct SimulationTrace {
    std::vector<std::vector<double>> times_ms;
    int rounds = 0;

    double makespan_ms() const {
        return *std::max_element(times_ms.back().begin(), times_ms.back().end());
    }
};

/// Max-plus recursion for round completion: a silo finishes round k+1 once its
/// own update and every in-neighbour's round-k model have arrived.
inline SimulationTrace simulate(const Overlay& o, int rounds) {
    if (rounds < 0) throw validation_error("simulate: negative round count");
    const int n = o.silo_count;
    SimulationTrace tr;
    tr.rounds = rounds;
    tr.times_ms.assign(rounds + 1, std::vector<double>(n, 0.0));
    for (int k = 0; k < rounds; ++k) {
        const auto& cur = tr.times_ms[k];
        auto& nxt = tr.times_ms[k + 1];
        for (int i = 0; i < n; ++i) nxt[i] = cur[i] + o.self_loop_ms[i];
        for (const Arc& a : o.arcs)
            nxt[a.dst] = std::max(nxt[a.dst], cur[a.src] + a.weight_ms);
    }
    return tr;
}

/// Rounds completed per unit time at the slowest silo: K / max_i t_i(K).
inline double empirical_throughput(const SimulationTrace& tr) {
    if (tr.rounds < 1) throw validation_error("empirical_throughput: need >= 1 round");
    return tr.rounds / tr.makespan_ms();
}

/// Largest deviation |t_i(k) - tau * k| over all silos and rounds. Bounded by
/// a constant independent of k once the recursion enters its periodic regime.
inline double max_linear_deviation(const SimulationTrace& tr, double tau_ms) {
    double dev = 0.0;
    for (int k = 0; k <= tr.rounds; ++k)
        for (double t : tr.times_ms[k]) dev = std::max(dev, std::abs(t - tau_ms * k));
    return dev;
}

} // namespace toposynth
