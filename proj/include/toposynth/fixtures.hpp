#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "toposynth/delay_model.hpp"
#include "toposynth/graph.hpp"

namespace toposynth {
namespace fixtures {

/// 3-node example: the directed ring 0->1->2->0 with delays 1, 3, 4 has cycle
/// time 8/3, beating the best undirected overlay (the path 0-1-2, cycle
/// time 3).
inline Digraph three_node_ring() {
    Digraph g(3);
    g.add_arc(0, 1, 1.0);
    g.add_arc(1, 2, 3.0);
    g.add_arc(2, 0, 4.0);
    return g;
}

inline Digraph three_node_path_undirected() {
    UGraph u(3);
    u.add_edge(0, 1, 1.0);
    u.add_edge(1, 2, 3.0);
    return symmetrize(u);
}

/// (n+1)-node directed ring 0->1->...->n->0 whose arc delays are n-1 ones,
/// then n, then 2n-1; its cycle time is (4n-2)/(n+1) while the best
/// undirected overlay on the same delays has cycle time n.
inline Digraph family_ring(int n) {
    if (n < 2) throw validation_error("family_ring: n must be >= 2");
    Digraph g(n + 1);
    for (int i = 0; i + 1 < n; ++i) g.add_arc(i, i + 1, 1.0);
    g.add_arc(n - 1, n, static_cast<double>(n));
    g.add_arc(n, 0, 2.0 * n - 1.0);
    return g;
}

/// Ring-gap gadget on 2N nodes: delay 0 between any two core nodes (ids
/// 0..N-1), delay 1 on every arc touching a periphery node (ids N..2N-1).
/// The delays form a (degenerate) metric.
inline Digraph ring_gap_delays(int big_n) {
    if (big_n < 2) throw validation_error("ring_gap_delays: N must be >= 2");
    Digraph g(2 * big_n);
    for (int i = 0; i < 2 * big_n; ++i)
        for (int j = 0; j < 2 * big_n; ++j) {
            if (i == j) continue;
            g.add_arc(i, j, (i < big_n && j < big_n) ? 0.0 : 1.0);
        }
    return g;
}

/// The gadget's optimal overlay: the core path 0->1->...->N-1 plus, for each
/// periphery node K, the pair (N-1 -> K, K -> 0). Every elementary circuit is
/// one core pass plus one periphery hop, mean delay 2/(N+1).
inline Digraph ring_gap_optimal_overlay(int big_n) {
    if (big_n < 2) throw validation_error("ring_gap_optimal_overlay: N must be >= 2");
    Digraph g(2 * big_n);
    for (int i = 0; i + 1 < big_n; ++i) g.add_arc(i, i + 1, 0.0);
    for (int k = big_n; k < 2 * big_n; ++k) {
        g.add_arc(big_n - 1, k, 1.0);
        g.add_arc(k, 0, 1.0);
    }
    return g;
}

/// Homogeneous slow-access instance: zero latency and compute, identical
/// symmetric access capacity, effectively unbounded core. Every overlay arc
/// then costs max(out-degree, in-degree) * model_bits / access rate.
inline ConnectivityGraph homogeneous_access(int n, double model_bits,
                                            double access_mbps) {
    ConnectivityGraph cg;
    cg.silo_count = n;
    cg.model_bits = model_bits;
    cg.local_steps = 1;
    cg.silos.assign(n, {access_mbps, access_mbps, 0.0});
    cg.latency_ms.assign(n, std::vector<double>(n, 0.0));
    cg.avail_bw_mbps.assign(n, std::vector<double>(n, 1e15));
    return cg;
}

/// Random geographic layout shared by the two capacity regimes below.
inline std::vector<GeoPoint> random_points(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> lat(-60.0, 60.0), lon(-180.0, 180.0);
    std::vector<GeoPoint> pts(n);
    for (auto& p : pts) p = {lat(rng), lon(rng)};
    return pts;
}

/// Edge-capacitated instance: generous access capacities, tight core
/// bandwidth, distance-derived latencies. Satisfies
/// min(up, down)/N >= avail for every pair, so arc delays are
/// degree-independent.
inline ConnectivityGraph random_edge_capacitated(int n, std::uint64_t seed,
                                                 double model_bits = 1e5) {
    std::mt19937_64 rng(seed);
    auto pts = random_points(n, rng);
    std::uniform_real_distribution<double> avail(10.0, 100.0);
    std::uniform_real_distribution<double> compute(0.0, 5.0);

    ConnectivityGraph cg;
    cg.silo_count = n;
    cg.model_bits = model_bits;
    cg.local_steps = 1;
    cg.silos.resize(n);
    for (auto& s : cg.silos) s = {n * 1000.0, n * 1000.0, compute(rng)};
    cg.latency_ms.assign(n, std::vector<double>(n, 0.0));
    cg.avail_bw_mbps.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double lat = link_latency(geodesic_distance(pts[i], pts[j]));
            double bw = avail(rng);
            cg.latency_ms[i][j] = cg.latency_ms[j][i] = lat;
            cg.avail_bw_mbps[i][j] = cg.avail_bw_mbps[j][i] = bw;
        }
    return cg;
}

/// Node-capacitated instance: uplinks in [50, 100] Mbps dominate, downlinks
/// and core are sized so the uplink is always the transmission bottleneck.
inline ConnectivityGraph random_node_capacitated(int n, std::uint64_t seed,
                                                 double model_bits = 1e5) {
    std::mt19937_64 rng(seed);
    auto pts = random_points(n, rng);
    std::uniform_real_distribution<double> up(50.0, 100.0);
    std::uniform_real_distribution<double> compute(0.0, 5.0);

    ConnectivityGraph cg;
    cg.silo_count = n;
    cg.model_bits = model_bits;
    cg.local_steps = 1;
    cg.silos.resize(n);
    for (auto& s : cg.silos) s = {up(rng), n * 100.0, compute(rng)};
    cg.latency_ms.assign(n, std::vector<double>(n, 0.0));
    cg.avail_bw_mbps.assign(n, std::vector<double>(n, 1000.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double lat = link_latency(geodesic_distance(pts[i], pts[j]));
            cg.latency_ms[i][j] = cg.latency_ms[j][i] = lat;
        }
    for (int i = 0; i < n; ++i) cg.avail_bw_mbps[i][i] = 0.0;
    return cg;
}

/// Random strong digraph with positive delays: a random Hamiltonian circuit
/// guarantees strong connectivity, then extra arcs are sprinkled in.
inline Digraph random_strong_digraph(int n, std::uint64_t seed,
                                     double extra_arc_prob = 0.3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> w(0.1, 10.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);

    Digraph g(n);
    for (int i = 0; i < n; ++i) g.add_arc(perm[i], perm[(i + 1) % n], w(rng));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || g.has_arc(i, j)) continue;
            if (coin(rng) < extra_arc_prob) g.add_arc(i, j, w(rng));
        }
    return g;
}

/// Eleven geo-distributed silos in a cloud-region layout, each with a
/// co-located router; the routers form a full mesh of core links.
inline Underlay geo_mesh_underlay(double access_mbps = 100.0,
                                  double core_mbps = 1000.0,
                                  double compute_ms = 50.0) {
    struct City {
        const char* name;
        double lat, lon;
    };
    static constexpr City cities[] = {
        {"virginia", 38.8, -77.3},   {"california", 37.4, -122.1},
        {"oregon", 45.5, -122.7},    {"ireland", 53.3, -6.3},
        {"frankfurt", 50.1, 8.7},    {"tokyo", 35.7, 139.7},
        {"seoul", 37.6, 127.0},      {"singapore", 1.35, 103.8},
        {"sydney", -33.9, 151.2},    {"mumbai", 19.1, 72.9},
        {"saopaulo", -23.5, -46.6},
    };
    const int n = static_cast<int>(std::size(cities));
    Underlay u;
    u.name = "geo-mesh-11";
    for (int i = 0; i < n; ++i) {
        UnderlayNode router;
        router.id = i;
        router.kind = NodeKind::router;
        router.pos = {cities[i].lat, cities[i].lon};
        u.nodes.push_back(router);
    }
    for (int i = 0; i < n; ++i) {
        UnderlayNode silo;
        silo.id = n + i;
        silo.kind = NodeKind::silo;
        silo.pos = {cities[i].lat, cities[i].lon};
        silo.up_mbps = access_mbps;
        silo.down_mbps = access_mbps;
        silo.compute_ms = compute_ms;
        u.nodes.push_back(silo);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            u.links.push_back({i, j, core_mbps, -1.0});
    return u;
}

} // namespace fixtures
} // namespace toposynth
