#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <utility>
#include <vector>

#include "toposynth/errors.hpp"

namespace toposynth {

/// Absolute tolerance used for delay comparisons throughout (milliseconds).
inline constexpr double kWeightTol = 1e-9;

struct Arc {
    int src;
    int dst;
    double weight_ms;
};

struct Edge {
    int u; // u < v
    int v;
    double weight_ms;
};

/// Weighted directed graph. Node ids are 0..node_count()-1, self-loops
/// allowed, parallel arcs not.
class Digraph {
public:
    Digraph() = default;
    explicit Digraph(int node_count) : n_(node_count) {
        if (node_count < 0) throw validation_error("Digraph: negative node count");
    }

    int node_count() const { return n_; }
    const std::vector<Arc>& arcs() const { return arcs_; }

    void add_arc(int src, int dst, double weight_ms) {
        check_node(src);
        check_node(dst);
        if (!std::isfinite(weight_ms) || weight_ms < 0.0)
            throw validation_error("Digraph: arc weight must be finite and >= 0");
        if (has_arc(src, dst))
            throw validation_error("Digraph: duplicate arc (" + std::to_string(src) +
                                   "," + std::to_string(dst) + ")");
        arcs_.push_back({src, dst, weight_ms});
    }

    bool has_arc(int src, int dst) const {
        for (const Arc& a : arcs_)
            if (a.src == src && a.dst == dst) return true;
        return false;
    }

    double arc_weight(int src, int dst) const {
        for (const Arc& a : arcs_)
            if (a.src == src && a.dst == dst) return a.weight_ms;
        throw validation_error("Digraph: no arc (" + std::to_string(src) + "," +
                               std::to_string(dst) + ")");
    }

    /// Successor lists (out-neighbours), self-loops excluded.
    std::vector<std::vector<int>> successors() const {
        std::vector<std::vector<int>> adj(n_);
        for (const Arc& a : arcs_)
            if (a.src != a.dst) adj[a.src].push_back(a.dst);
        for (auto& lst : adj) std::sort(lst.begin(), lst.end());
        return adj;
    }

    int out_degree(int v) const {
        int d = 0;
        for (const Arc& a : arcs_)
            if (a.src == v && a.dst != v) ++d;
        return d;
    }

    int in_degree(int v) const {
        int d = 0;
        for (const Arc& a : arcs_)
            if (a.dst == v && a.src != v) ++d;
        return d;
    }

private:
    void check_node(int v) const {
        if (v < 0 || v >= n_) throw validation_error("Digraph: node id out of range");
    }

    int n_ = 0;
    std::vector<Arc> arcs_;
};

/// Weighted undirected graph; each edge stored once with u < v.
class UGraph {
public:
    UGraph() = default;
    explicit UGraph(int node_count) : n_(node_count) {
        if (node_count < 0) throw validation_error("UGraph: negative node count");
    }

    int node_count() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }

    void add_edge(int u, int v, double weight_ms) {
        if (u == v) throw validation_error("UGraph: self-loop not allowed");
        if (u > v) std::swap(u, v);
        check_node(u);
        check_node(v);
        if (!std::isfinite(weight_ms) || weight_ms < 0.0)
            throw validation_error("UGraph: edge weight must be finite and >= 0");
        if (has_edge(u, v))
            throw validation_error("UGraph: duplicate edge (" + std::to_string(u) +
                                   "," + std::to_string(v) + ")");
        edges_.push_back({u, v, weight_ms});
    }

    bool has_edge(int u, int v) const {
        if (u > v) std::swap(u, v);
        for (const Edge& e : edges_)
            if (e.u == u && e.v == v) return true;
        return false;
    }

    double edge_weight(int u, int v) const {
        if (u > v) std::swap(u, v);
        for (const Edge& e : edges_)
            if (e.u == u && e.v == v) return e.weight_ms;
        throw validation_error("UGraph: no edge (" + std::to_string(u) + "," +
                               std::to_string(v) + ")");
    }

    double total_weight() const {
        double w = 0.0;
        for (const Edge& e : edges_) w += e.weight_ms;
        return w;
    }

    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(n_);
        for (const Edge& e : edges_) {
            adj[e.u].push_back(e.v);
            adj[e.v].push_back(e.u);
        }
        for (auto& lst : adj) std::sort(lst.begin(), lst.end());
        return adj;
    }

    int degree(int v) const {
        int d = 0;
        for (const Edge& e : edges_)
            if (e.u == v || e.v == v) ++d;
        return d;
    }

    bool is_connected() const {
        if (n_ == 0) return true;
        auto adj = adjacency();
        std::vector<char> seen(n_, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    }

    bool is_tree() const {
        return static_cast<int>(edges_.size()) == n_ - 1 && is_connected();
    }

private:
    void check_node(int v) const {
        if (v < 0 || v >= n_) throw validation_error("UGraph: node id out of range");
    }

    int n_ = 0;
    std::vector<Edge> edges_;
};

/// Closed walk in a host digraph; nodes.front() == nodes.back().
struct Circuit {
    std::vector<int> nodes;
    double total_weight_ms = 0.0;

    int length() const { return static_cast<int>(nodes.size()) - 1; }
    double mean_ms() const { return total_weight_ms / length(); }

    /// Rotates so the smallest node id comes first; keeps direction.
    void canonicalize() {
        if (nodes.size() < 2) return;
        nodes.pop_back();
        auto it = std::min_element(nodes.begin(), nodes.end());
        std::rotate(nodes.begin(), it, nodes.end());
        nodes.push_back(nodes.front());
    }
};

/// Recomputes a circuit's weight from the arcs of g and validates that every
/// consecutive pair is an arc.
inline Circuit make_circuit(const Digraph& g, std::vector<int> nodes) {
    if (nodes.size() < 2 || nodes.front() != nodes.back())
        throw validation_error("Circuit: node sequence must be closed");
    Circuit c;
    c.nodes = std::move(nodes);
    for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i)
        c.total_weight_ms += g.arc_weight(c.nodes[i], c.nodes[i + 1]);
    return c;
}

/// True iff every ordered node pair is joined by a directed path
/// (self-loops ignored).
inline bool is_strongly_connected(const Digraph& g) {
    const int n = g.node_count();
    if (n <= 1) return true;
    auto adj = g.successors();
    std::vector<std::vector<int>> radj(n);
    for (const Arc& a : g.arcs())
        if (a.src != a.dst) radj[a.dst].push_back(a.src);

    auto reaches_all = [n](const std::vector<std::vector<int>>& nbr) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : nbr[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++count;
                    stack.push_back(w);
                }
        }
        return count == n;
    };
    return reaches_all(adj) && reaches_all(radj);
}

/// Symmetrizes an undirected graph into a digraph with the same weight in
/// both directions plus optional per-node self-loops.
inline Digraph symmetrize(const UGraph& g, const std::vector<double>& self_loops_ms = {}) {
    Digraph d(g.node_count());
    for (const Edge& e : g.edges()) {
        d.add_arc(e.u, e.v, e.weight_ms);
        d.add_arc(e.v, e.u, e.weight_ms);
    }
    if (!self_loops_ms.empty()) {
        if (static_cast<int>(self_loops_ms.size()) != g.node_count())
            throw validation_error("symmetrize: self-loop vector size mismatch");
        for (int v = 0; v < g.node_count(); ++v)
            if (self_loops_ms[v] > 0.0) d.add_arc(v, v, self_loops_ms[v]);
    }
    return d;
}

} // namespace toposynth
