#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "toposynth/circuits.hpp"
#include "toposynth/cycle_time.hpp"
#include "toposynth/delay_model.hpp"
#include "toposynth/matching.hpp"
#include "toposynth/overlay.hpp"
#include "toposynth/tree_algos.hpp"

namespace toposynth {

enum class Builder { star, mst, ring, delta_mbst, brute_force };

inline const char* builder_name(Builder b) {
    switch (b) {
        case Builder::star: return "star";
        case Builder::mst: return "mst";
        case Builder::ring: return "ring";
        case Builder::delta_mbst: return "dmbst";
        case Builder::brute_force: return "brute_force";
    }
    return "?";
}

struct BuilderResult {
    Overlay overlay;
    CycleTimeReport report;
    Builder builder = Builder::star;
    std::set<std::string> guarantee_flags;
};

namespace detail {

inline CycleTimeReport evaluate(const Overlay& o) { return cycle_time(o.delay_graph()); }

/// Complete undirected graph over the silos with the given symmetric weight.
template <typename WeightFn>
UGraph complete_graph(int n, WeightFn&& w) {
    UGraph g(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j, w(i, j));
    return g;
}

inline std::vector<std::pair<int, int>> ring_arcs(const std::vector<int>& tour) {
    std::vector<std::pair<int, int>> arcs;
    const int n = static_cast<int>(tour.size());
    for (int k = 0; k < n; ++k) arcs.emplace_back(tour[k], tour[(k + 1) % n]);
    return arcs;
}

} // namespace detail

/// Undirected star; the hub is chosen to minimize the resulting cycle time
/// (all hubs evaluated, smallest id on ties).
inline BuilderResult build_star(const ConnectivityGraph& cg) {
    const int n = cg.silo_count;
    if (n < 2) throw validation_error("build_star: need at least 2 silos");
    BuilderResult best;
    bool first = true;
    for (int hub = 0; hub < n; ++hub) {
        std::vector<std::pair<int, int>> arcs;
        for (int v = 0; v < n; ++v) {
            if (v == hub) continue;
            arcs.emplace_back(hub, v);
            arcs.emplace_back(v, hub);
        }
        Overlay o = make_overlay(cg, arcs, /*undirected=*/true);
        CycleTimeReport r = detail::evaluate(o);
        if (first || r.tau_ms < best.report.tau_ms - kWeightTol) {
            best.overlay = std::move(o);
            best.report = std::move(r);
            first = false;
        }
    }
    best.builder = Builder::star;
    return best;
}

/// Minimum spanning tree on the symmetrized unit-degree delays; the report
/// uses the tree's realized degrees. Exact MCT among undirected overlays in
/// the edge-capacitated regime.
inline BuilderResult build_mst_overlay(const ConnectivityGraph& cg) {
    const int n = cg.silo_count;
    UGraph weights = detail::complete_graph(n, [&](int i, int j) {
        return (overlay_arc_delay(cg, 1, 1, i, j) + overlay_arc_delay(cg, 1, 1, j, i)) / 2.0;
    });
    UGraph tree = prim_mst(weights);
    BuilderResult res;
    res.builder = Builder::mst;
    res.overlay = make_tree_overlay(cg, tree);
    res.report = detail::evaluate(res.overlay);
    return res;
}

/// Christofides tour on a complete symmetric weight matrix; returns the node
/// order. Deterministic: MST ties, matching and Euler shortcut all resolve by
/// smallest id.
inline std::vector<int> christofides_tour(const std::vector<std::vector<double>>& w,
                                          bool* matching_exact = nullptr) {
    const int n = static_cast<int>(w.size());
    if (n < 3) throw validation_error("christofides_tour: need at least 3 nodes");
    UGraph g = detail::complete_graph(n, [&](int i, int j) { return w[i][j]; });
    UGraph tree = prim_mst(g);

    std::vector<int> odd;
    for (int v = 0; v < n; ++v)
        if (tree.degree(v) % 2 != 0) odd.push_back(v);

    Multigraph multi;
    multi.node_count = n;
    for (const Edge& e : tree.edges()) multi.edges.emplace_back(e.u, e.v);

    if (!odd.empty()) {
        const int k = static_cast<int>(odd.size());
        UGraph sub(k);
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b) sub.add_edge(a, b, w[odd[a]][odd[b]]);
        MatchingResult m = min_weight_perfect_matching(sub);
        if (matching_exact) *matching_exact = !m.guarantee_void;
        for (const Edge& e : m.edges) multi.edges.emplace_back(odd[e.u], odd[e.v]);
    } else if (matching_exact) {
        *matching_exact = true;
    }

    std::vector<int> walk = eulerian_circuit(multi);
    std::vector<int> tour;
    std::vector<char> seen(n, 0);
    for (int v : walk)
        if (!seen[v]) {
            seen[v] = 1;
            tour.push_back(v);
        }
    return tour;
}

/// Directed Hamiltonian ring via Christofides on the connectivity weights
/// (edge-capacitated delays when the regime allows, otherwise the
/// access-aware unit-degree delays). Triangle-inequality or symmetry
/// violations set the non-euclidean-input flag rather than aborting.
inline BuilderResult build_ring_christofides(const ConnectivityGraph& cg) {
    const int n = cg.silo_count;
    if (n < 3) throw validation_error("build_ring_christofides: need at least 3 silos");

    const bool edge_cap = is_edge_capacitated(cg);
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            d[i][j] = edge_cap ? edge_capacitated_weight(cg, i, j)
                               : overlay_arc_delay(cg, 1, 1, i, j);
        }

    BuilderResult res;
    res.builder = Builder::ring;
    constexpr double kRelTol = 1e-6;
    for (int i = 0; i < n && res.guarantee_flags.empty(); ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (std::abs(d[i][j] - d[j][i]) > kRelTol * std::max(d[i][j], d[j][i])) {
                res.guarantee_flags.insert("non-euclidean-input");
                break;
            }
            bool violated = false;
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                if (d[i][j] > d[i][k] + d[k][j] + kRelTol * d[i][j]) {
                    violated = true;
                    break;
                }
            }
            if (violated) {
                res.guarantee_flags.insert("non-euclidean-input");
                break;
            }
        }

    std::vector<std::vector<double>> sym(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) sym[i][j] = (d[i][j] + d[j][i]) / 2.0;

    bool matching_exact = true;
    std::vector<int> tour = christofides_tour(sym, &matching_exact);
    if (!matching_exact) res.guarantee_flags.insert("matching-guarantee-void");

    res.overlay = make_overlay(cg, detail::ring_arcs(tour), /*undirected=*/false);
    res.report = detail::evaluate(res.overlay);
    return res;
}

/// Bounded-degree tree search: the Hamiltonian path taken from the cube of
/// the MST, plus one delta-Prim tree per degree bound from 3 to N, all
/// weighted by the symmetric access-aware edge weight; the candidate with
/// the smallest realized cycle time wins (first candidate on ties).
inline BuilderResult build_delta_mbst(const ConnectivityGraph& cg) {
    const int n = cg.silo_count;
    if (n < 2) throw validation_error("build_delta_mbst: need at least 2 silos");
    UGraph weights = detail::complete_graph(
        n, [&](int i, int j) { return node_capacitated_weight(cg, i, j); });

    std::vector<UGraph> candidates;
    {
        UGraph tree = prim_mst(weights);
        std::vector<int> path = cube_hamiltonian_path(tree);
        UGraph path_tree(n);
        for (std::size_t k = 0; k + 1 < path.size(); ++k)
            path_tree.add_edge(path[k], path[k + 1],
                               weights.edge_weight(path[k], path[k + 1]));
        candidates.push_back(std::move(path_tree));
    }
    for (int delta = 3; delta <= n; ++delta)
        candidates.push_back(delta_prim(weights, delta));

    BuilderResult best;
    bool first = true;
    for (const UGraph& t : candidates) {
        Overlay o = make_tree_overlay(cg, t);
        CycleTimeReport r = detail::evaluate(o);
        if (first || r.tau_ms < best.report.tau_ms - kWeightTol) {
            best.overlay = std::move(o);
            best.report = std::move(r);
            first = false;
        }
    }
    best.builder = Builder::delta_mbst;
    return best;
}

namespace detail {

/// Exhaustive directed search over all arc subsets of the complete pair set,
/// with per-subset realized-degree delays. Raw-array hot path; subsets are
/// pre-filtered by in/out coverage and strong connectivity before the cycle
/// time is computed.
inline BuilderResult brute_force_directed(const ConnectivityGraph& cg) {
    const int n = cg.silo_count;
    struct RawArc {
        int src, dst;
    };
    std::vector<RawArc> arcs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) arcs.push_back({i, j});
    const int m = static_cast<int>(arcs.size());
    if (m > 30) throw limit_exceeded("brute_force_mct: directed instance too large");

    // Base (degree-independent) delay parts and capacity terms, per arc.
    std::vector<double> base(m), inv_up(n), inv_dn(n), inv_bw(m);
    for (int a = 0; a < m; ++a) {
        base[a] = cg.local_steps * cg.silos[arcs[a].src].compute_ms +
                  cg.latency_ms[arcs[a].src][arcs[a].dst];
        inv_bw[a] = 1.0 / (cg.avail_bw_mbps[arcs[a].src][arcs[a].dst] * kMbpsToBitsPerMs);
    }
    for (int v = 0; v < n; ++v) {
        inv_up[v] = 1.0 / (cg.silos[v].up_mbps * kMbpsToBitsPerMs);
        inv_dn[v] = 1.0 / (cg.silos[v].down_mbps * kMbpsToBitsPerMs);
    }
    std::vector<double> self_loop(n);
    for (int v = 0; v < n; ++v) self_loop[v] = cg.self_loop_ms(v);

    const std::uint32_t full_nodes = (1u << n) - 1;
    double best_tau = std::numeric_limits<double>::infinity();
    std::uint32_t best_subset = 0;

    std::vector<std::uint32_t> out_mask(n), in_mask(n);
    std::vector<int> out_deg(n), in_deg(n);
    std::vector<double> D((n + 1) * n);

    for (std::uint32_t subset = 1; subset < (1u << m); ++subset) {
        std::fill(out_mask.begin(), out_mask.end(), 0u);
        std::fill(in_mask.begin(), in_mask.end(), 0u);
        std::fill(out_deg.begin(), out_deg.end(), 0);
        std::fill(in_deg.begin(), in_deg.end(), 0);
        for (std::uint32_t bits = subset; bits; bits &= bits - 1) {
            int a = __builtin_ctz(bits);
            out_mask[arcs[a].src] |= 1u << arcs[a].dst;
            in_mask[arcs[a].dst] |= 1u << arcs[a].src;
            ++out_deg[arcs[a].src];
            ++in_deg[arcs[a].dst];
        }
        bool covered = true;
        for (int v = 0; v < n && covered; ++v)
            covered = out_mask[v] != 0 && in_mask[v] != 0;
        if (!covered) continue;

        auto reach = [&](const std::vector<std::uint32_t>& nbr) {
            std::uint32_t r = 1u;
            for (int it = 0; it < n; ++it) {
                std::uint32_t prev = r;
                for (std::uint32_t bits = r; bits; bits &= bits - 1)
                    r |= nbr[__builtin_ctz(bits)];
                if (r == prev) break;
            }
            return r;
        };
        if (reach(out_mask) != full_nodes || reach(in_mask) != full_nodes) continue;

        // Karp on the subset with realized-degree delays plus self-loops.
        const double kNegInf = -std::numeric_limits<double>::infinity();
        std::fill(D.begin(), D.end(), kNegInf);
        D[0] = 0.0; // D[k*n + v], source node 0
        for (int k = 0; k < n; ++k) {
            double* cur = &D[k * n];
            double* nxt = &D[(k + 1) * n];
            for (std::uint32_t bits = subset; bits; bits &= bits - 1) {
                int a = __builtin_ctz(bits);
                if (cur[arcs[a].src] == kNegInf) continue;
                double w = base[a] +
                           cg.model_bits * std::max({inv_up[arcs[a].src] * out_deg[arcs[a].src],
                                                     inv_dn[arcs[a].dst] * in_deg[arcs[a].dst],
                                                     inv_bw[a]});
                nxt[arcs[a].dst] = std::max(nxt[arcs[a].dst], cur[arcs[a].src] + w);
            }
            for (int v = 0; v < n; ++v)
                if (cur[v] != kNegInf && self_loop[v] > 0.0)
                    nxt[v] = std::max(nxt[v], cur[v] + self_loop[v]);
        }
        double tau = kNegInf;
        for (int v = 0; v < n; ++v) {
            if (D[n * n + v] == kNegInf) continue;
            double mn = std::numeric_limits<double>::infinity();
            for (int k = 0; k < n; ++k)
                if (D[k * n + v] != kNegInf)
                    mn = std::min(mn, (D[n * n + v] - D[k * n + v]) / (n - k));
            tau = std::max(tau, mn);
        }
        for (int v = 0; v < n; ++v) tau = std::max(tau, self_loop[v]);
        if (tau < best_tau - kWeightTol) {
            best_tau = tau;
            best_subset = subset;
        }
    }

    std::vector<std::pair<int, int>> chosen;
    for (std::uint32_t bits = best_subset; bits; bits &= bits - 1) {
        int a = __builtin_ctz(bits);
        chosen.emplace_back(arcs[a].src, arcs[a].dst);
    }
    BuilderResult res;
    res.builder = Builder::brute_force;
    res.overlay = make_overlay(cg, chosen, /*undirected=*/false);
    res.report = detail::evaluate(res.overlay);
    return res;
}

inline BuilderResult brute_force_undirected(const ConnectivityGraph& cg) {
    const int n = cg.silo_count;
    UGraph shape = complete_graph(n, [](int, int) { return 0.0; });

    BuilderResult best;
    bool first = true;
    auto consider = [&](const std::vector<std::pair<int, int>>& edges) {
        std::vector<std::pair<int, int>> arcs;
        for (auto [u, v] : edges) {
            arcs.emplace_back(u, v);
            arcs.emplace_back(v, u);
        }
        Overlay o = make_overlay(cg, arcs, /*undirected=*/true);
        CycleTimeReport r = evaluate(o);
        if (first || r.tau_ms < best.report.tau_ms - kWeightTol) {
            best.overlay = std::move(o);
            best.report = std::move(r);
            first = false;
        }
    };

    for_each_spanning_tree(shape, [&](const UGraph& t) {
        std::vector<std::pair<int, int>> edges;
        for (const Edge& e : t.edges()) edges.emplace_back(e.u, e.v);
        consider(edges);
    });

    // In the node-capacitated regime denser subgraphs are never better
    // (extra edges add circuits and raise every incident delay), but small
    // instances are cheap enough to check outright.
    if (!is_edge_capacitated(cg) && n <= 5) {
        std::vector<std::pair<int, int>> all_edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) all_edges.emplace_back(i, j);
        const int m = static_cast<int>(all_edges.size());
        for (std::uint32_t subset = 1; subset < (1u << m); ++subset) {
            if (__builtin_popcount(subset) < n - 1) continue;
            std::vector<std::pair<int, int>> edges;
            for (std::uint32_t bits = subset; bits; bits &= bits - 1)
                edges.push_back(all_edges[__builtin_ctz(bits)]);
            UGraph g(n);
            for (auto [u, v] : edges) g.add_edge(u, v, 0.0);
            if (!g.is_connected()) continue;
            consider(edges);
        }
    }
    best.builder = Builder::brute_force;
    return best;
}

} // namespace detail

enum class MctMode { directed, undirected };

/// Exhaustive minimal-cycle-time oracle for small instances; delays are
/// recomputed per candidate with that candidate's own degrees.
inline BuilderResult brute_force_mct(const ConnectivityGraph& cg, MctMode mode,
                                     const OracleLimits& lim = OracleLimits::from_env()) {
    const int n = cg.silo_count;
    if (mode == MctMode::directed) {
        if (n > lim.directed_mct_nodes)
            throw limit_exceeded("brute_force_mct: directed mode limited to " +
                                 std::to_string(lim.directed_mct_nodes) + " silos");
        return detail::brute_force_directed(cg);
    }
    if (n > lim.undirected_mct_nodes)
        throw limit_exceeded("brute_force_mct: undirected mode limited to " +
                             std::to_string(lim.undirected_mct_nodes) + " silos");
    return detail::brute_force_undirected(cg);
}

} // namespace toposynth
