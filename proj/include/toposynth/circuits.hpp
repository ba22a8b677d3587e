#pragma once

#include <cstdlib>
#include <list>
#include <string>
#include <vector>

#include "toposynth/graph.hpp"

namespace toposynth {

/// Size caps for the exact enumeration oracles. The environment variable
/// TOPOSYNTH_ORACLE_LIMIT overrides every cap at once (the caller opts into
/// the longer runtimes).
struct OracleLimits {
    int circuit_nodes = 12;
    int directed_mct_nodes = 5;
    int undirected_mct_nodes = 7;

    static OracleLimits from_env() {
        OracleLimits lim;
        if (const char* s = std::getenv("TOPOSYNTH_ORACLE_LIMIT")) {
            int v = std::atoi(s);
            if (v > 0) {
                lim.circuit_nodes = v;
                lim.directed_mct_nodes = v;
                lim.undirected_mct_nodes = v;
            }
        }
        return lim;
    }
};

namespace detail {

// Johnson-style enumeration of elementary circuits. Circuits are emitted
// with their smallest node id first.
class CircuitSearch {
public:
    CircuitSearch(const Digraph& g, std::vector<Circuit>& out)
        : g_(g), out_(out), n_(g.node_count()), adj_(g.successors()),
          blocked_(n_, false), block_lists_(n_) {}

    void run() {
        for (const Arc& a : g_.arcs())
            if (a.src == a.dst)
                out_.push_back(make_circuit(g_, {a.src, a.src}));
        for (start_ = 0; start_ < n_; ++start_) {
            std::fill(blocked_.begin(), blocked_.end(), false);
            for (auto& lst : block_lists_) lst.clear();
            stack_.clear();
            dfs(start_);
        }
    }

private:
    bool dfs(int v) {
        bool found = false;
        stack_.push_back(v);
        blocked_[v] = true;
        for (int w : adj_[v]) {
            if (w < start_) continue; // circuits with min node start_ only
            if (w == start_) {
                auto nodes = stack_;
                nodes.push_back(start_);
                out_.push_back(make_circuit(g_, std::move(nodes)));
                found = true;
            } else if (!blocked_[w]) {
                if (dfs(w)) found = true;
            }
        }
        if (found) {
            unblock(v);
        } else {
            for (int w : adj_[v])
                if (w >= start_) block_lists_[w].push_back(v);
        }
        stack_.pop_back();
        return found;
    }

    void unblock(int v) {
        blocked_[v] = false;
        for (int w : block_lists_[v])
            if (blocked_[w]) unblock(w);
        block_lists_[v].clear();
    }

    const Digraph& g_;
    std::vector<Circuit>& out_;
    int n_;
    int start_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<char> blocked_;
    std::vector<std::vector<int>> block_lists_;
    std::vector<int> stack_;
};

} // namespace detail

/// All elementary circuits of g, each reported once with its smallest node
/// first. Self-loops count as length-1 circuits.
inline std::vector<Circuit> elementary_circuits(const Digraph& g,
                                                const OracleLimits& lim = OracleLimits::from_env()) {
    if (g.node_count() > lim.circuit_nodes)
        throw limit_exceeded("elementary_circuits: node count " +
                             std::to_string(g.node_count()) + " above oracle limit " +
                             std::to_string(lim.circuit_nodes));
    std::vector<Circuit> out;
    detail::CircuitSearch(g, out).run();
    return out;
}

} // namespace toposynth
