#pragma once

#include <utility>
#include <vector>

#include "toposynth/delay_model.hpp"
#include "toposynth/graph.hpp"

namespace toposynth {

/// Chosen strongly connected subgraph with realized per-arc delays and
/// per-node self-loop delays.
struct Overlay {
    int silo_count = 0;
    bool undirected = false;
    std::vector<Arc> arcs;            // realized d_o(i,j), no self-loops here
    std::vector<double> self_loop_ms; // s * T_c(i)

    /// Digraph carrying the realized delays, self-loops included.
    Digraph delay_graph() const {
        Digraph g(silo_count);
        for (const Arc& a : arcs) g.add_arc(a.src, a.dst, a.weight_ms);
        for (int v = 0; v < silo_count; ++v)
            if (self_loop_ms[v] > 0.0) g.add_arc(v, v, self_loop_ms[v]);
        return g;
    }

    std::vector<int> out_degrees() const {
        std::vector<int> d(silo_count, 0);
        for (const Arc& a : arcs) ++d[a.src];
        return d;
    }

    std::vector<int> in_degrees() const {
        std::vector<int> d(silo_count, 0);
        for (const Arc& a : arcs) ++d[a.dst];
        return d;
    }
};

/// Builds an overlay from a directed arc set, computing each arc's realized
/// delay from the overlay's own in/out-degrees.
inline Overlay make_overlay(const ConnectivityGraph& cg,
                            const std::vector<std::pair<int, int>>& arc_pairs,
                            bool undirected) {
    Overlay o;
    o.silo_count = cg.silo_count;
    o.undirected = undirected;
    o.self_loop_ms.resize(cg.silo_count);
    for (int v = 0; v < cg.silo_count; ++v) o.self_loop_ms[v] = cg.self_loop_ms(v);

    std::vector<int> out_deg(cg.silo_count, 0), in_deg(cg.silo_count, 0);
    for (auto [i, j] : arc_pairs) {
        if (i == j) throw validation_error("make_overlay: self-loops are implicit");
        ++out_deg[i];
        ++in_deg[j];
    }
    for (auto [i, j] : arc_pairs)
        o.arcs.push_back({i, j, overlay_arc_delay(cg, out_deg[i], in_deg[j], i, j)});

    if (undirected) {
        for (auto [i, j] : arc_pairs) {
            bool mirrored = false;
            for (auto [p, q] : arc_pairs)
                if (p == j && q == i) {
                    mirrored = true;
                    break;
                }
            if (!mirrored)
                throw validation_error("make_overlay: undirected overlay missing arc (" +
                                       std::to_string(j) + "," + std::to_string(i) + ")");
        }
    }
    if (!is_strongly_connected(o.delay_graph()))
        throw validation_error("make_overlay: overlay is not strongly connected");
    return o;
}

/// Undirected overlay from a spanning tree (both directions of every edge).
inline Overlay make_tree_overlay(const ConnectivityGraph& cg, const UGraph& tree) {
    std::vector<std::pair<int, int>> arcs;
    for (const Edge& e : tree.edges()) {
        arcs.emplace_back(e.u, e.v);
        arcs.emplace_back(e.v, e.u);
    }
    return make_overlay(cg, arcs, /*undirected=*/true);
}

} // namespace toposynth
