#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "toposynth/circuits.hpp"
#include "toposynth/graph.hpp"

namespace toposynth {

enum class CycleTimeMethod { karp, brute_force, tree_shortcut };

/// Cycle time of an overlay: the maximum circuit mean delay, together with
/// one circuit achieving it.
struct CycleTimeReport {
    double tau_ms = 0.0;
    Circuit critical_circuit;
    CycleTimeMethod method = CycleTimeMethod::karp;
};

namespace detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Karp's maximum mean value only; assumes g strongly connected.
inline double karp_tau(const Digraph& g) {
    const int n = g.node_count();
    if (n == 1) {
        // Only possible circuit is the self-loop.
        for (const Arc& a : g.arcs())
            if (a.src == a.dst) return a.weight_ms;
        throw validation_error("cycle_time: single node without self-loop has no circuit");
    }
    // D[k][v] = max weight of a k-arc walk from node 0 to v.
    std::vector<std::vector<double>> D(n + 1, std::vector<double>(n, kNegInf));
    D[0][0] = 0.0;
    for (int k = 0; k < n; ++k)
        for (const Arc& a : g.arcs())
            if (D[k][a.src] != kNegInf)
                D[k + 1][a.dst] = std::max(D[k + 1][a.dst], D[k][a.src] + a.weight_ms);

    double tau = kNegInf;
    for (int v = 0; v < n; ++v) {
        if (D[n][v] == kNegInf) continue;
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k)
            if (D[k][v] != kNegInf)
                best = std::min(best, (D[n][v] - D[k][v]) / (n - k));
        tau = std::max(tau, best);
    }
    return tau;
}

/// Deterministic critical-circuit extraction: compute max-walk potentials in
/// the graph reweighted by w - tau (no positive-mean circuit remains), keep
/// the tight arcs, trim dead ends, and walk the smallest-id tight successor
/// until a node repeats.
inline Circuit critical_circuit_for(const Digraph& g, double tau) {
    const int n = g.node_count();
    double scale = 1.0;
    for (const Arc& a : g.arcs()) scale = std::max(scale, std::abs(a.weight_ms));
    const double eps = 1e-7 * scale;

    std::vector<double> h(n, 0.0);
    for (int sweep = 0; sweep < 2 * n + 2; ++sweep) {
        bool changed = false;
        for (const Arc& a : g.arcs()) {
            double cand = h[a.src] + a.weight_ms - tau;
            if (cand > h[a.dst] + 1e-12 * scale) {
                h[a.dst] = cand;
                changed = true;
            }
        }
        if (!changed) break;
    }

    std::vector<char> alive(n, 1);
    auto tight = [&](const Arc& a) {
        return alive[a.src] && alive[a.dst] &&
               h[a.src] + a.weight_ms - tau >= h[a.dst] - eps;
    };
    // Trim nodes with no tight out- or in-arc; critical circuits survive.
    for (bool changed = true; changed;) {
        changed = false;
        for (int v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            bool has_out = false, has_in = false;
            for (const Arc& a : g.arcs()) {
                if (!tight(a)) continue;
                if (a.src == v) has_out = true;
                if (a.dst == v) has_in = true;
            }
            if (!has_out || !has_in) {
                alive[v] = 0;
                changed = true;
            }
        }
    }

    int start = -1;
    for (int v = 0; v < n && start < 0; ++v)
        if (alive[v]) start = v;
    if (start < 0) throw error("cycle_time: critical circuit extraction failed");

    std::vector<int> next(n, -1);
    for (int v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        for (const Arc& a : g.arcs())
            if (a.src == v && tight(a) && (next[v] < 0 || a.dst < next[v]))
                next[v] = a.dst;
    }

    std::vector<int> order(n, -1);
    std::vector<int> walk;
    int v = start;
    while (order[v] < 0) {
        order[v] = static_cast<int>(walk.size());
        walk.push_back(v);
        v = next[v];
    }
    std::vector<int> nodes(walk.begin() + order[v], walk.end());
    nodes.push_back(v);
    Circuit c = make_circuit(g, std::move(nodes));
    c.canonicalize();
    return c;
}

} // namespace detail

/// Maximum circuit mean of a strongly connected digraph via Karp's dynamic
/// program. Self-loops are first-class length-1 circuits.
inline CycleTimeReport cycle_time(const Digraph& g) {
    if (!is_strongly_connected(g))
        throw validation_error("cycle_time: graph is not strongly connected");
    CycleTimeReport r;
    r.method = CycleTimeMethod::karp;
    r.tau_ms = detail::karp_tau(g);
    r.critical_circuit = detail::critical_circuit_for(g, r.tau_ms);
    return r;
}

/// Oracle realization of the same maximum: enumerate elementary circuits and
/// maximize the mean. Ties broken by the lexicographically smallest canonical
/// node sequence.
inline CycleTimeReport cycle_time_bruteforce(const Digraph& g,
                                             const OracleLimits& lim = OracleLimits::from_env()) {
    if (!is_strongly_connected(g))
        throw validation_error("cycle_time_bruteforce: graph is not strongly connected");
    auto circuits = elementary_circuits(g, lim);
    if (circuits.empty())
        throw validation_error("cycle_time_bruteforce: graph has no circuit");
    CycleTimeReport r;
    r.method = CycleTimeMethod::brute_force;
    bool first = true;
    for (Circuit& c : circuits) {
        c.canonicalize();
        const double mean = c.mean_ms();
        if (first || mean > r.tau_ms + kWeightTol) {
            r.tau_ms = mean;
            r.critical_circuit = c;
        } else if (mean > r.tau_ms - kWeightTol && c.nodes < r.critical_circuit.nodes) {
            r.critical_circuit = c;
        }
        first = false;
    }
    return r;
}

/// Shortcut for trees: the cycle time is the largest edge weight (a 2-circuit
/// traverses the edge back and forth) or the largest self-loop.
inline CycleTimeReport tree_cycle_time(const UGraph& t,
                                       const std::vector<double>& self_loops_ms) {
    if (!t.is_tree())
        throw validation_error("tree_cycle_time: input is not a tree");
    if (!self_loops_ms.empty() &&
        static_cast<int>(self_loops_ms.size()) != t.node_count())
        throw validation_error("tree_cycle_time: self-loop vector size mismatch");

    CycleTimeReport r;
    r.method = CycleTimeMethod::tree_shortcut;
    const Edge* best_edge = nullptr;
    for (const Edge& e : t.edges())
        if (!best_edge || e.weight_ms > best_edge->weight_ms) best_edge = &e;
    int best_loop = -1;
    for (std::size_t i = 0; i < self_loops_ms.size(); ++i)
        if (best_loop < 0 || self_loops_ms[i] > self_loops_ms[best_loop])
            best_loop = static_cast<int>(i);

    double edge_tau = best_edge ? best_edge->weight_ms : detail::kNegInf;
    double loop_tau = best_loop >= 0 ? self_loops_ms[best_loop] : detail::kNegInf;
    if (best_edge == nullptr && best_loop < 0)
        throw validation_error("tree_cycle_time: no circuit (empty tree without self-loops)");

    if (edge_tau >= loop_tau) {
        r.tau_ms = edge_tau;
        r.critical_circuit.nodes = {best_edge->u, best_edge->v, best_edge->u};
        r.critical_circuit.total_weight_ms = 2.0 * best_edge->weight_ms;
    } else {
        r.tau_ms = loop_tau;
        r.critical_circuit.nodes = {best_loop, best_loop};
        r.critical_circuit.total_weight_ms = loop_tau;
    }
    return r;
}

} // namespace toposynth
