#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "toposynth/graph.hpp"

namespace toposynth {

/// Transient multigraph used between the matching and Euler-tour steps of the
/// ring construction; parallel edges allowed.
struct Multigraph {
    int node_count = 0;
    std::vector<std::pair<int, int>> edges;
};

/// Prim's minimum spanning tree. Deterministic: ties broken by (weight, u, v).
inline UGraph prim_mst(const UGraph& g) {
    const int n = g.node_count();
    if (!g.is_connected())
        throw validation_error("prim_mst: input graph is disconnected");
    UGraph tree(n);
    if (n <= 1) return tree;

    std::vector<char> in_tree(n, 0);
    in_tree[0] = 1;
    for (int step = 0; step < n - 1; ++step) {
        const Edge* best = nullptr;
        for (const Edge& e : g.edges()) {
            if (in_tree[e.u] == in_tree[e.v]) continue;
            if (!best || e.weight_ms < best->weight_ms - kWeightTol ||
                (e.weight_ms < best->weight_ms + kWeightTol &&
                 std::make_pair(e.u, e.v) < std::make_pair(best->u, best->v)))
                best = &e;
        }
        in_tree[best->u] = in_tree[best->v] = 1;
        tree.add_edge(best->u, best->v, best->weight_ms);
    }
    return tree;
}

/// Greedy degree-bounded spanning tree grown from node 0: repeatedly add the
/// smallest-weight edge leaving the tree whose tree endpoint still has
/// degree < delta. Completeness of g guarantees feasibility.
inline UGraph delta_prim(const UGraph& g, int delta) {
    const int n = g.node_count();
    if (delta < 2) throw validation_error("delta_prim: delta must be >= 2");
    UGraph tree(n);
    if (n <= 1) return tree;

    std::vector<char> in_tree(n, 0);
    std::vector<int> deg(n, 0);
    in_tree[0] = 1;
    for (int step = 0; step < n - 1; ++step) {
        const Edge* best = nullptr;
        int bu = -1, bv = -1;
        for (const Edge& e : g.edges()) {
            if (in_tree[e.u] == in_tree[e.v]) continue;
            int u = in_tree[e.u] ? e.u : e.v; // tree side
            int v = in_tree[e.u] ? e.v : e.u;
            if (deg[u] >= delta) continue;
            if (!best || e.weight_ms < best->weight_ms - kWeightTol ||
                (e.weight_ms < best->weight_ms + kWeightTol &&
                 std::make_pair(u, v) < std::make_pair(bu, bv))) {
                best = &e;
                bu = u;
                bv = v;
            }
        }
        if (!best)
            throw validation_error("delta_prim: no feasible edge (graph not complete enough)");
        in_tree[bv] = 1;
        ++deg[bu];
        ++deg[bv];
        tree.add_edge(bu, bv, best->weight_ms);
    }
    return tree;
}

/// Unweighted hop distances from src in an undirected graph.
inline std::vector<int> hop_distances(const UGraph& g, int src) {
    std::vector<int> dist(g.node_count(), -1);
    auto adj = g.adjacency();
    std::queue<int> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : adj[v])
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
    }
    return dist;
}

/// Cube of a connected graph: edge (u,v) present iff hop-distance(u,v) <= 3.
/// Edge weights are not meaningful in the cube and are set to 0.
inline UGraph graph_cube(const UGraph& t) {
    if (!t.is_connected())
        throw validation_error("graph_cube: input graph is disconnected");
    const int n = t.node_count();
    UGraph cube(n);
    for (int u = 0; u < n; ++u) {
        auto dist = hop_distances(t, u);
        for (int v = u + 1; v < n; ++v)
            if (dist[v] >= 1 && dist[v] <= 3) cube.add_edge(u, v, 0.0);
    }
    return cube;
}

/// Hamiltonian path in the cube of a tree: an ordering of all nodes whose
/// consecutive pairs are at tree-distance <= 3. The recursion emits the root,
/// then each child subtree reversed so it ends on the child itself; every
/// junction stays within distance 3 and the ordering ends on a neighbour of
/// the root.
inline std::vector<int> cube_hamiltonian_path(const UGraph& t) {
    if (t.node_count() >= 1 && !t.is_tree())
        throw validation_error("cube_hamiltonian_path: input is not a tree");
    const int n = t.node_count();
    if (n == 0) return {};
    auto adj = t.adjacency();

    std::function<std::vector<int>(int, int)> order = [&](int r, int parent) {
        std::vector<int> out{r};
        for (int c : adj[r]) {
            if (c == parent) continue;
            auto sub = order(c, r); // starts at c, ends at a neighbour of c
            std::reverse(sub.begin(), sub.end());
            out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
    };
    return order(0, -1);
}

/// Closed walk using every edge of the multigraph exactly once (Hierholzer).
/// Deterministic: starts at the smallest node with an edge, follows the
/// smallest-numbered unused edge.
inline std::vector<int> eulerian_circuit(const Multigraph& g) {
    const int n = g.node_count;
    const int m = static_cast<int>(g.edges.size());
    if (m == 0) return {};

    std::vector<std::vector<int>> incident(n); // edge indices
    std::vector<int> deg(n, 0);
    for (int i = 0; i < m; ++i) {
        auto [u, v] = g.edges[i];
        incident[u].push_back(i);
        incident[v].push_back(i);
        ++deg[u];
        ++deg[v];
    }
    for (int v = 0; v < n; ++v)
        if (deg[v] % 2 != 0)
            throw validation_error("eulerian_circuit: node " + std::to_string(v) +
                                   " has odd degree");
    // Connectivity over nodes with edges.
    {
        int start = -1;
        for (int v = 0; v < n && start < 0; ++v)
            if (deg[v] > 0) start = v;
        std::vector<char> seen(n, 0);
        std::vector<int> stack{start};
        seen[start] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int ei : incident[v]) {
                int w = g.edges[ei].first == v ? g.edges[ei].second : g.edges[ei].first;
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        for (int v = 0; v < n; ++v)
            if (deg[v] > 0 && !seen[v])
                throw validation_error("eulerian_circuit: edge set is disconnected");
    }

    int start = -1;
    for (int v = 0; v < n && start < 0; ++v)
        if (deg[v] > 0) start = v;

    std::vector<char> used(m, 0);
    std::vector<std::size_t> cursor(n, 0);
    std::vector<int> stack{start};
    std::vector<int> walk;
    while (!stack.empty()) {
        int v = stack.back();
        while (cursor[v] < incident[v].size() && used[incident[v][cursor[v]]])
            ++cursor[v];
        if (cursor[v] == incident[v].size()) {
            walk.push_back(v);
            stack.pop_back();
        } else {
            int ei = incident[v][cursor[v]];
            used[ei] = 1;
            stack.push_back(g.edges[ei].first == v ? g.edges[ei].second
                                                   : g.edges[ei].first);
        }
    }
    std::reverse(walk.begin(), walk.end());
    return walk;
}

/// Calls fn for every spanning tree of g. Enumerates (n-1)-subsets of the
/// edge list with a union-find acyclicity check; fine at oracle sizes.
inline void for_each_spanning_tree(const UGraph& g,
                                   const std::function<void(const UGraph&)>& fn) {
    const int n = g.node_count();
    const auto& edges = g.edges();
    const int m = static_cast<int>(edges.size());
    if (n <= 1) {
        fn(UGraph(n));
        return;
    }
    std::vector<int> pick;
    std::function<void(int)> rec = [&](int from) {
        if (static_cast<int>(pick.size()) == n - 1) {
            UGraph t(n);
            for (int i : pick) t.add_edge(edges[i].u, edges[i].v, edges[i].weight_ms);
            if (t.is_connected()) fn(t);
            return;
        }
        int need = n - 1 - static_cast<int>(pick.size());
        for (int i = from; i + need <= m; ++i) {
            pick.push_back(i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return;
}

/// Exact travelling-salesman tour on a complete symmetric weight matrix
/// (Held-Karp). Returns the tour weight; n <= ~15.
inline double exact_tsp_weight(const std::vector<std::vector<double>>& w) {
    const int n = static_cast<int>(w.size());
    if (n < 3) throw validation_error("exact_tsp_weight: need at least 3 nodes");
    const double inf = std::numeric_limits<double>::infinity();
    const int full = 1 << (n - 1); // subsets of nodes 1..n-1
    std::vector<std::vector<double>> dp(full, std::vector<double>(n - 1, inf));
    for (int v = 0; v < n - 1; ++v) dp[1 << v][v] = w[0][v + 1];
    for (int mask = 1; mask < full; ++mask)
        for (int v = 0; v < n - 1; ++v) {
            if (!(mask & (1 << v)) || dp[mask][v] == inf) continue;
            for (int u = 0; u < n - 1; ++u) {
                if (mask & (1 << u)) continue;
                int nm = mask | (1 << u);
                dp[nm][u] = std::min(dp[nm][u], dp[mask][v] + w[v + 1][u + 1]);
            }
        }
    double best = inf;
    for (int v = 0; v < n - 1; ++v)
        best = std::min(best, dp[full - 1][v] + w[v + 1][0]);
    return best;
}

/// Smallest mean over elementary circuits passing through node v, by a
/// subset dynamic program over elementary paths from v (n <= ~16). A valid
/// lower bound on the cycle time of any strong spanning subgraph, since each
/// node of such a subgraph lies on some elementary circuit.
inline double min_mean_circuit_through(const Digraph& g, int v) {
    const int n = g.node_count();
    if (n > 20) throw limit_exceeded("min_mean_circuit_through: too many nodes");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> w(n, std::vector<double>(n, inf));
    double self = inf;
    for (const Arc& a : g.arcs()) {
        if (a.src == a.dst) {
            if (a.src == v) self = a.weight_ms;
        } else {
            w[a.src][a.dst] = a.weight_ms;
        }
    }
    // dp[mask][u]: min weight elementary path v -> u visiting exactly mask
    // (mask over nodes != v).
    std::vector<int> others;
    for (int i = 0; i < n; ++i)
        if (i != v) others.push_back(i);
    const int k = static_cast<int>(others.size());
    std::vector<std::vector<double>> dp(1 << k, std::vector<double>(k, inf));
    for (int j = 0; j < k; ++j) dp[1 << j][j] = w[v][others[j]];

    double best = self; // length-1 circuit
    for (int mask = 1; mask < (1 << k); ++mask)
        for (int j = 0; j < k; ++j) {
            if (!(mask & (1 << j)) || dp[mask][j] == inf) continue;
            double close = dp[mask][j] + w[others[j]][v];
            if (close < inf) {
                int len = __builtin_popcount(static_cast<unsigned>(mask)) + 1;
                best = std::min(best, close / len);
            }
            for (int t = 0; t < k; ++t) {
                if (mask & (1 << t)) continue;
                double ext = dp[mask][j] + w[others[j]][others[t]];
                int nm = mask | (1 << t);
                if (ext < dp[nm][t]) dp[nm][t] = ext;
            }
        }
    return best;
}

} // namespace toposynth
