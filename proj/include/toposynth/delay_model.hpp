#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "toposynth/errors.hpp"
#include "toposynth/graph.hpp"

namespace toposynth {

inline constexpr double kEarthRadiusKm = 6371.0;
/// Mbps -> bits per millisecond.
inline constexpr double kMbpsToBitsPerMs = 1000.0;

/// Empirical fibre latency: 0.0085 ms per kilometre plus a 4 ms floor.
inline double link_latency(double distance_km) {
    if (distance_km < 0.0)
        throw validation_error("link_latency: negative distance");
    return 0.0085 * distance_km + 4.0;
}

struct GeoPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
};

/// Great-circle distance (haversine), Earth radius 6371 km.
inline double geodesic_distance(const GeoPoint& a, const GeoPoint& b) {
    if (std::abs(a.lat_deg) > 90.0 || std::abs(b.lat_deg) > 90.0 ||
        std::abs(a.lon_deg) > 360.0 || std::abs(b.lon_deg) > 360.0)
        throw validation_error("geodesic_distance: invalid coordinates");
    const double deg = std::numbers::pi / 180.0;
    double phi1 = a.lat_deg * deg, phi2 = b.lat_deg * deg;
    double dphi = (b.lat_deg - a.lat_deg) * deg;
    double dlam = (b.lon_deg - a.lon_deg) * deg;
    double s = std::sin(dphi / 2.0), t = std::sin(dlam / 2.0);
    double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
    h = std::clamp(h, 0.0, 1.0);
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

enum class NodeKind { silo, router };

struct UnderlayNode {
    int id = 0;
    NodeKind kind = NodeKind::router;
    GeoPoint pos;
    // Silo-only parameters.
    double up_mbps = 0.0;
    double down_mbps = 0.0;
    double compute_ms = 0.0;
};

struct CoreLink {
    int u = 0;
    int v = 0;
    double capacity_mbps = 0.0;
    /// Negative means "derive from geodesic distance".
    double latency_ms = -1.0;
};

/// Physical network: silos attach to the core through a single implicit
/// access link; links connect core nodes (routers).
struct Underlay {
    std::string name;
    std::vector<UnderlayNode> nodes;
    std::vector<CoreLink> links;

    std::vector<int> silo_ids() const {
        std::vector<int> out;
        for (const auto& nd : nodes)
            if (nd.kind == NodeKind::silo) out.push_back(nd.id);
        return out;
    }

    const UnderlayNode& node(int id) const {
        for (const auto& nd : nodes)
            if (nd.id == id) return nd;
        throw validation_error("Underlay: unknown node id " + std::to_string(id));
    }

    void validate() const {
        std::vector<int> seen;
        for (const auto& nd : nodes) {
            if (std::find(seen.begin(), seen.end(), nd.id) != seen.end())
                throw validation_error("Underlay: duplicate node id " + std::to_string(nd.id));
            seen.push_back(nd.id);
            if (nd.kind == NodeKind::silo) {
                if (nd.up_mbps <= 0.0 || nd.down_mbps <= 0.0)
                    throw validation_error("Underlay: silo " + std::to_string(nd.id) +
                                           " needs positive up/down capacities");
                if (nd.compute_ms < 0.0)
                    throw validation_error("Underlay: silo " + std::to_string(nd.id) +
                                           " has negative compute time");
            }
        }
        for (const auto& l : links) {
            const UnderlayNode& a = node(l.u);
            const UnderlayNode& b = node(l.v);
            if (a.kind == NodeKind::silo || b.kind == NodeKind::silo)
                throw validation_error("Underlay: link (" + std::to_string(l.u) + "," +
                                       std::to_string(l.v) +
                                       ") touches a silo; silo access links are implicit");
            if (l.capacity_mbps <= 0.0)
                throw validation_error("Underlay: link (" + std::to_string(l.u) + "," +
                                       std::to_string(l.v) + ") needs positive capacity");
        }
        if (silo_ids().size() < 2)
            throw validation_error("Underlay: need at least 2 silos");
    }
};

struct SiloParams {
    double up_mbps = 0.0;
    double down_mbps = 0.0;
    double compute_ms = 0.0;
};

/// Per-pair measurable quantities: end-to-end latency and core available
/// bandwidth, plus the silo access parameters and the run globals M and s.
struct ConnectivityGraph {
    int silo_count = 0;
    std::vector<SiloParams> silos;
    std::vector<std::vector<double>> latency_ms;   // l(i,j), 0 on the diagonal
    std::vector<std::vector<double>> avail_bw_mbps; // A(i',j')
    double model_bits = 1.0;  // M
    int local_steps = 1;      // s

    double self_loop_ms(int i) const { return local_steps * silos[i].compute_ms; }
};

enum class BwModel { fair_share, min_cap };

struct ConnectivityOptions {
    BwModel bw_model = BwModel::fair_share;
    /// Latency contributed by each silo access link; the default is the 4 ms
    /// intercept of the latency formula at distance zero.
    double access_latency_ms = 4.0;
    double model_bits = 1.0;
    int local_steps = 1;
};

/// Per-arc overlay delay: compute + latency + transmission with the
/// access links shared across the overlay's in/out-neighbours.
inline double overlay_arc_delay(const ConnectivityGraph& cg, int out_deg_i, int in_deg_j,
                                int i, int j) {
    if (out_deg_i < 1 || in_deg_j < 1)
        throw validation_error("overlay_arc_delay: degrees must be >= 1");
    double rate_mbps = std::min({cg.silos[i].up_mbps / out_deg_i,
                                 cg.silos[j].down_mbps / in_deg_j,
                                 cg.avail_bw_mbps[i][j]});
    return cg.local_steps * cg.silos[i].compute_ms + cg.latency_ms[i][j] +
           cg.model_bits / (rate_mbps * kMbpsToBitsPerMs);
}

/// Degree-independent delay used in the edge-capacitated regime.
inline double edge_capacitated_weight(const ConnectivityGraph& cg, int i, int j) {
    return cg.local_steps * cg.silos[i].compute_ms + cg.latency_ms[i][j] +
           cg.model_bits / (cg.avail_bw_mbps[i][j] * kMbpsToBitsPerMs);
}

/// Symmetric per-edge weight used by the bounded-degree tree construction.
inline double node_capacitated_weight(const ConnectivityGraph& cg, int i, int j) {
    double up_i = cg.silos[i].up_mbps * kMbpsToBitsPerMs;
    double up_j = cg.silos[j].up_mbps * kMbpsToBitsPerMs;
    return (cg.local_steps * (cg.silos[i].compute_ms + cg.silos[j].compute_ms) +
            cg.latency_ms[i][j] + cg.latency_ms[j][i] + cg.model_bits / up_i +
            cg.model_bits / up_j) /
           2.0;
}

/// True when access capacities are large enough that the transmission rate is
/// always limited by the core path, for every degree combination up to N.
inline bool is_edge_capacitated(const ConnectivityGraph& cg) {
    const int n = cg.silo_count;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double cap = std::min(cg.silos[i].up_mbps, cg.silos[j].down_mbps);
            if (cap / n < cg.avail_bw_mbps[i][j] - kWeightTol) return false;
        }
    return true;
}

namespace detail {

struct RoutedPath {
    std::vector<int> link_indices;
    double latency_ms = 0.0;
};

} // namespace detail

/// Derives the connectivity graph from the underlay: latency-shortest-path
/// routing between the silos' attachment routers (deterministic lexicographic
/// tie-break), path latency plus both access intercepts, and available
/// bandwidth as the min over path links of capacity divided by the link's
/// route share count (fair-share model) or the plain min capacity (min-cap).
inline ConnectivityGraph build_connectivity(const Underlay& u,
                                            const ConnectivityOptions& opt = {}) {
    u.validate();
    const auto silo_ids = u.silo_ids();
    const int n = static_cast<int>(silo_ids.size());

    // Core graph over routers only.
    std::vector<int> router_ids;
    for (const auto& nd : u.nodes)
        if (nd.kind == NodeKind::router) router_ids.push_back(nd.id);
    std::sort(router_ids.begin(), router_ids.end());
    auto router_index = [&](int id) {
        auto it = std::lower_bound(router_ids.begin(), router_ids.end(), id);
        if (it == router_ids.end() || *it != id)
            throw validation_error("build_connectivity: link references unknown router " +
                                   std::to_string(id));
        return static_cast<int>(it - router_ids.begin());
    };
    const int r = static_cast<int>(router_ids.size());
    struct LinkRef {
        int other;
        int index;
        double latency;
    };
    std::vector<std::vector<LinkRef>> radj(r);
    std::vector<double> link_latency_ms(u.links.size());
    for (std::size_t li = 0; li < u.links.size(); ++li) {
        const CoreLink& l = u.links[li];
        double lat = l.latency_ms >= 0.0
                         ? l.latency_ms
                         : link_latency(geodesic_distance(u.node(l.u).pos, u.node(l.v).pos));
        link_latency_ms[li] = lat;
        int a = router_index(l.u), b = router_index(l.v);
        radj[a].push_back({b, static_cast<int>(li), lat});
        radj[b].push_back({a, static_cast<int>(li), lat});
    }

    // Each silo attaches to its nearest router (smallest id on ties); if the
    // underlay has no routers, silos are their own co-located attachment
    // points and all core paths are empty.
    std::vector<int> attach(n, -1);
    if (r > 0) {
        for (int i = 0; i < n; ++i) {
            const UnderlayNode& s = u.node(silo_ids[i]);
            double best = std::numeric_limits<double>::infinity();
            for (int ri = 0; ri < r; ++ri) {
                double d = geodesic_distance(s.pos, u.node(router_ids[ri]).pos);
                if (d < best - 1e-12) {
                    best = d;
                    attach[i] = ri;
                }
            }
        }
    }

    // Dijkstra per source router with lexicographic path tie-breaking via
    // (distance, predecessor-path) comparison on equal distances.
    auto shortest_paths = [&](int src) {
        std::vector<double> dist(r, std::numeric_limits<double>::infinity());
        std::vector<int> pred_node(r, -1), pred_link(r, -1);
        std::vector<char> done(r, 0);
        dist[src] = 0.0;
        for (int iter = 0; iter < r; ++iter) {
            int v = -1;
            for (int w = 0; w < r; ++w)
                if (!done[w] && (v < 0 || dist[w] < dist[v])) v = w;
            if (v < 0 || dist[v] == std::numeric_limits<double>::infinity()) break;
            done[v] = 1;
            for (const LinkRef& lr : radj[v]) {
                double nd = dist[v] + lr.latency;
                if (nd < dist[lr.other] - 1e-12 ||
                    (nd < dist[lr.other] + 1e-12 && v < pred_node[lr.other])) {
                    dist[lr.other] = std::min(nd, dist[lr.other]);
                    pred_node[lr.other] = v;
                    pred_link[lr.other] = lr.index;
                }
            }
        }
        return std::make_tuple(dist, pred_node, pred_link);
    };

    std::vector<std::vector<detail::RoutedPath>> paths(r);
    for (int src = 0; src < r; ++src) {
        auto [dist, pred_node, pred_link] = shortest_paths(src);
        paths[src].resize(r);
        for (int dst = 0; dst < r; ++dst) {
            if (dist[dst] == std::numeric_limits<double>::infinity())
                throw validation_error("build_connectivity: underlay core is disconnected");
            detail::RoutedPath p;
            p.latency_ms = dist[dst];
            for (int v = dst; v != src; v = pred_node[v])
                p.link_indices.push_back(pred_link[v]);
            std::reverse(p.link_indices.begin(), p.link_indices.end());
            paths[src][dst] = std::move(p);
        }
    }

    // Fair-share: a link's capacity is split across the silo pairs routed
    // over it.
    std::vector<int> share(u.links.size(), 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (attach[i] < 0 || attach[j] < 0) continue;
            for (int li : paths[attach[i]][attach[j]].link_indices) ++share[li];
        }

    ConnectivityGraph cg;
    cg.silo_count = n;
    cg.model_bits = opt.model_bits;
    cg.local_steps = opt.local_steps;
    cg.silos.resize(n);
    cg.latency_ms.assign(n, std::vector<double>(n, 0.0));
    cg.avail_bw_mbps.assign(n, std::vector<double>(n, 0.0));
    constexpr double kUnboundedMbps = 1e15;
    for (int i = 0; i < n; ++i) {
        const UnderlayNode& s = u.node(silo_ids[i]);
        cg.silos[i] = {s.up_mbps, s.down_mbps, s.compute_ms};
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double core_lat = 0.0;
            double bw = kUnboundedMbps;
            if (attach[i] >= 0 && attach[j] >= 0) {
                const auto& p = paths[attach[i]][attach[j]];
                core_lat = p.latency_ms;
                for (int li : p.link_indices) {
                    double cap = u.links[li].capacity_mbps;
                    if (opt.bw_model == BwModel::fair_share && share[li] > 0)
                        cap /= share[li];
                    bw = std::min(bw, cap);
                }
            }
            cg.latency_ms[i][j] = opt.access_latency_ms + core_lat + opt.access_latency_ms;
            cg.avail_bw_mbps[i][j] = bw;
        }
    }
    return cg;
}

} // namespace toposynth
