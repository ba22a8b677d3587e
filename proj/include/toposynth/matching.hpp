#pragma once

#include <algorithm>
#include <cmath>
#include <list>
#include <vector>

#include "toposynth/graph.hpp"

namespace toposynth {

struct MatchingResult {
    std::vector<Edge> edges;
    double total_weight_ms = 0.0;
    /// Set when the greedy fallback was used instead of the exact algorithm;
    /// downstream approximation guarantees no longer hold.
    bool guarantee_void = false;
};

namespace detail {

/// Exact minimum-weight perfect matching on a complete graph via Edmonds'
/// blossom algorithm with primal-dual updates (alternating-forest variant,
/// floating-point duals with epsilon comparisons).
class BlossomMatcher {
public:
    explicit BlossomMatcher(std::vector<std::vector<double>> cost)
        : cost_(std::move(cost)), n_(static_cast<int>(cost_.size())) {
        slack_.resize(static_cast<std::size_t>(n_) * n_);
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v) slack_[edge_index(u, v)] = cost_[u][v];
    }

    std::vector<int> solve() {
        init();
        // Shift so all reduced costs start non-negative.
        double min_edge = 0.0;
        for (double s : slack_) min_edge = std::min(min_edge, s);
        for (double& s : slack_) s -= min_edge;

        bool perfect = false;
        while (!perfect) {
            heuristic_matching();
            perfect = grow();
            update_duals();
            reset();
        }
        for (int i = 0; i < 2 * n_; ++i)
            if (active_[i] && mate_[i] != -1 && outer_[i] == i)
                expand(i, /*expand_blocked=*/true);

        std::vector<int> mate(n_);
        for (int u = 0; u < n_; ++u) mate[u] = mate_[u];
        return mate;
    }

private:
    static constexpr double kEps = 1e-12;
    static constexpr int kUnlabeled = 0, kOdd = 1, kEven = 2;

    static bool greater(double a, double b) { return a - b > kEps; }

    int edge_index(int u, int v) const {
        if (u > v) std::swap(u, v);
        return u * n_ - (u + 1) * (u + 2) / 2 + v;
    }
    bool edge_blocked(int u, int v) const { return greater(slack_[edge_index(u, v)], 0.0); }

    void init() {
        free_.clear();
        for (int i = n_; i < 2 * n_; ++i) free_.push_back(i);
        outer_.assign(2 * n_, 0);
        tip_.assign(2 * n_, 0);
        active_.assign(2 * n_, false);
        type_.assign(2 * n_, 0);
        forest_.assign(2 * n_, -1);
        root_.assign(2 * n_, 0);
        blocked_.assign(2 * n_, false);
        dual_.assign(2 * n_, 0.0);
        mate_.assign(2 * n_, -1);
        visited_.assign(2 * n_, false);
        deep_.assign(2 * n_, {});
        shallow_.assign(2 * n_, {});
        for (int i = 0; i < 2 * n_; ++i) {
            outer_[i] = i;
            root_[i] = i;
            tip_[i] = i;
            if (i < n_) {
                active_[i] = true;
                deep_[i].push_back(i);
            }
        }
    }

    // Greedy warm start: match each exposed vertex to an exposed neighbour of
    // minimum tight degree.
    void heuristic_matching() {
        std::vector<int> degree(n_, 0);
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v)
                if (!edge_blocked(u, v)) {
                    ++degree[u];
                    ++degree[v];
                }
        for (int u = 0; u < n_; ++u) {
            if (mate_[outer_[u]] != -1) continue;
            int pick = -1;
            for (int v = 0; v < n_; ++v) {
                if (u == v || edge_blocked(u, v) || outer_[u] == outer_[v] ||
                    mate_[outer_[v]] != -1)
                    continue;
                if (pick == -1 || degree[v] < degree[pick]) pick = v;
            }
            if (pick != -1) {
                mate_[outer_[u]] = pick;
                mate_[outer_[pick]] = u;
            }
        }
    }

    // Grows the alternating forest from all exposed outer vertices; returns
    // true once the matching is perfect.
    bool grow() {
        reset();
        while (!forest_list_.empty()) {
            int w = outer_[forest_list_.back()];
            forest_list_.pop_back();
            bool restart = false;
            for (int u : deep_[w]) {
                for (int v = 0; v < n_; ++v) {
                    if (u == v || edge_blocked(u, v)) continue;
                    if (type_[outer_[v]] == kOdd) continue;
                    if (type_[outer_[v]] != kEven) {
                        int vm = mate_[outer_[v]];
                        forest_[outer_[v]] = u;
                        type_[outer_[v]] = kOdd;
                        root_[outer_[v]] = root_[outer_[u]];
                        forest_[outer_[vm]] = v;
                        type_[outer_[vm]] = kEven;
                        root_[outer_[vm]] = root_[outer_[u]];
                        if (!visited_[outer_[vm]]) {
                            forest_list_.push_back(vm);
                            visited_[outer_[vm]] = true;
                        }
                    } else if (root_[outer_[v]] != root_[outer_[u]]) {
                        augment(u, v);
                        reset();
                        restart = true;
                        break;
                    } else if (outer_[u] != outer_[v]) {
                        int b = contract_blossom(u, v);
                        forest_list_.push_back(b);
                        visited_[b] = true;
                        restart = true;
                        break;
                    }
                }
                if (restart) break;
            }
        }
        for (int i = 0; i < n_; ++i)
            if (mate_[outer_[i]] == -1) return false;
        return true;
    }

    void destroy_blossom(int t) {
        if (t < n_ || (blocked_[t] && greater(dual_[t], 0.0))) return;
        for (int s : shallow_[t]) {
            outer_[s] = s;
            for (int j : deep_[s]) outer_[j] = s;
            destroy_blossom(s);
        }
        active_[t] = false;
        blocked_[t] = false;
        free_.push_back(t);
        mate_[t] = -1;
    }

    void expand(int u, bool expand_blocked = false) {
        int v = outer_[mate_[u]];
        int index = static_cast<int>(slack_.size());
        int p = -1, q = -1;
        // Minimum-index tight edge between the two sides so both blossoms
        // agree on the mate edge.
        for (int di : deep_[u])
            for (int dj : deep_[v])
                if (!edge_blocked(di, dj) && edge_index(di, dj) < index) {
                    index = edge_index(di, dj);
                    p = di;
                    q = dj;
                }
        mate_[u] = q;
        mate_[v] = p;
        if (u < n_ || (blocked_[u] && !expand_blocked)) return;

        // Rotate the odd circuit so the tip (containing p) comes first.
        bool found = false;
        for (auto it = shallow_[u].begin(); it != shallow_[u].end() && !found;) {
            int si = *it;
            for (int j : deep_[si])
                if (j == p) {
                    found = true;
                    break;
                }
            ++it;
            if (!found) {
                shallow_[u].push_back(shallow_[u].front());
                shallow_[u].pop_front();
            }
        }
        auto it = shallow_[u].begin();
        mate_[*it] = mate_[u];
        ++it;
        while (it != shallow_[u].end()) {
            auto next = std::next(it);
            mate_[*it] = *next;
            mate_[*next] = *it;
            it = std::next(next);
        }
        for (int s : shallow_[u]) {
            outer_[s] = s;
            for (int j : deep_[s]) outer_[j] = s;
        }
        active_[u] = false;
        free_.push_back(u);
        for (int s : shallow_[u]) expand(s, expand_blocked);
    }

    void augment(int u, int v) {
        int p = outer_[u];
        int q = outer_[v];
        int outv = q;
        int fp = forest_[p];
        mate_[p] = q;
        mate_[q] = p;
        expand(p);
        expand(q);
        while (fp != -1) {
            q = outer_[forest_[p]];
            p = outer_[forest_[q]];
            fp = forest_[p];
            mate_[p] = q;
            mate_[q] = p;
            expand(p);
            expand(q);
        }
        p = outv;
        fp = forest_[p];
        while (fp != -1) {
            q = outer_[forest_[p]];
            p = outer_[forest_[q]];
            fp = forest_[p];
            mate_[p] = q;
            mate_[q] = p;
            expand(p);
            expand(q);
        }
    }

    void reset() {
        for (int i = 0; i < 2 * n_; ++i) {
            forest_[i] = -1;
            root_[i] = i;
            if (i >= n_ && active_[i] && outer_[i] == i) destroy_blossom(i);
        }
        visited_.assign(2 * n_, false);
        forest_list_.clear();
        for (int i = 0; i < n_; ++i) {
            if (mate_[outer_[i]] == -1) {
                type_[outer_[i]] = kEven;
                if (!visited_[outer_[i]]) forest_list_.push_back(i);
                visited_[outer_[i]] = true;
            } else {
                type_[outer_[i]] = kUnlabeled;
            }
        }
    }

    int contract_blossom(int u, int v) {
        int t = free_.back();
        free_.pop_back();

        std::vector<bool> in_path(2 * n_, false);
        int u_ = u;
        while (u_ != -1) {
            in_path[outer_[u_]] = true;
            u_ = forest_[outer_[u_]];
        }
        int v_ = outer_[v];
        while (!in_path[v_]) v_ = outer_[forest_[v_]];
        tip_[t] = v_;

        std::list<int> circuit;
        u_ = outer_[u];
        circuit.push_front(u_);
        while (u_ != tip_[t]) {
            u_ = outer_[forest_[u_]];
            circuit.push_front(u_);
        }
        shallow_[t].clear();
        deep_[t].clear();
        for (int x : circuit) shallow_[t].push_back(x);
        v_ = outer_[v];
        while (v_ != tip_[t]) {
            shallow_[t].push_back(v_);
            v_ = outer_[forest_[v_]];
        }
        for (int s : shallow_[t]) {
            outer_[s] = t;
            for (int j : deep_[s]) {
                deep_[t].push_back(j);
                outer_[j] = t;
            }
        }
        forest_[t] = forest_[tip_[t]];
        type_[t] = kEven;
        root_[t] = root_[tip_[t]];
        active_[t] = true;
        outer_[t] = t;
        mate_[t] = mate_[tip_[t]];
        return t;
    }

    void update_duals() {
        double e1 = 0, e2 = 0, e3 = 0;
        bool init1 = false, init2 = false, init3 = false;
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v) {
                double s = slack_[edge_index(u, v)];
                int tu = type_[outer_[u]], tv = type_[outer_[v]];
                if ((tu == kEven && tv == kUnlabeled) ||
                    (tv == kEven && tu == kUnlabeled)) {
                    if (!init1 || greater(e1, s)) {
                        e1 = s;
                        init1 = true;
                    }
                } else if (outer_[u] != outer_[v] && tu == kEven && tv == kEven) {
                    if (!init2 || greater(e2, s)) {
                        e2 = s;
                        init2 = true;
                    }
                }
            }
        for (int i = n_; i < 2 * n_; ++i)
            if (active_[i] && i == outer_[i] && type_[outer_[i]] == kOdd &&
                (!init3 || greater(e3, dual_[i]))) {
                e3 = dual_[i];
                init3 = true;
            }
        double e = 0;
        if (init1)
            e = e1;
        else if (init2)
            e = e2;
        else if (init3)
            e = e3;
        if (init2 && greater(e, e2 / 2.0)) e = e2 / 2.0;
        if (init3 && greater(e, e3)) e = e3;

        for (int i = 0; i < 2 * n_; ++i) {
            if (i != outer_[i]) continue;
            if (active_[i] && type_[outer_[i]] == kEven)
                dual_[i] += e;
            else if (active_[i] && type_[outer_[i]] == kOdd)
                dual_[i] -= e;
        }
        for (int u = 0; u < n_; ++u)
            for (int v = u + 1; v < n_; ++v) {
                if (outer_[u] == outer_[v]) continue;
                int tu = type_[outer_[u]], tv = type_[outer_[v]];
                double& s = slack_[edge_index(u, v)];
                if (tu == kEven && tv == kEven)
                    s -= 2.0 * e;
                else if (tu == kOdd && tv == kOdd)
                    s += 2.0 * e;
                else if ((tv == kUnlabeled && tu == kEven) ||
                         (tu == kUnlabeled && tv == kEven))
                    s -= e;
                else if ((tv == kUnlabeled && tu == kOdd) ||
                         (tu == kUnlabeled && tv == kOdd))
                    s += e;
            }
        for (int i = n_; i < 2 * n_; ++i) {
            if (greater(dual_[i], 0.0)) {
                blocked_[i] = true;
            } else if (active_[i] && blocked_[i]) {
                if (mate_[i] == -1)
                    destroy_blossom(i);
                else {
                    blocked_[i] = false;
                    expand(i);
                }
            }
        }
    }

    std::vector<std::vector<double>> cost_;
    int n_;
    std::vector<double> slack_;
    std::vector<std::vector<int>> deep_;
    std::vector<std::list<int>> shallow_;
    std::vector<int> free_, outer_, tip_, type_, forest_, root_, mate_, forest_list_;
    std::vector<bool> active_, blocked_, visited_;
    std::vector<double> dual_;
};

} // namespace detail

/// Number of nodes up to which the exact blossom algorithm is used; above,
/// a greedy matching is returned with guarantee_void set.
inline constexpr int kExactMatchingLimit = 64;

/// Minimum-weight perfect matching on a complete graph with an even number
/// of nodes.
inline MatchingResult min_weight_perfect_matching(const UGraph& g) {
    const int n = g.node_count();
    if (n % 2 != 0)
        throw validation_error("min_weight_perfect_matching: odd node count");
    MatchingResult result;
    if (n == 0) return result;
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (!g.has_edge(u, v))
                throw validation_error("min_weight_perfect_matching: graph is not complete");
            cost[u][v] = cost[v][u] = g.edge_weight(u, v);
        }

    std::vector<int> mate(n, -1);
    if (n <= kExactMatchingLimit) {
        mate = detail::BlossomMatcher(cost).solve();
    } else {
        // Greedy fallback: repeatedly take the globally cheapest edge
        // between unmatched nodes.
        result.guarantee_void = true;
        for (int round = 0; round < n / 2; ++round) {
            int bu = -1, bv = -1;
            for (int u = 0; u < n; ++u) {
                if (mate[u] != -1) continue;
                for (int v = u + 1; v < n; ++v) {
                    if (mate[v] != -1) continue;
                    if (bu < 0 || cost[u][v] < cost[bu][bv]) {
                        bu = u;
                        bv = v;
                    }
                }
            }
            mate[bu] = bv;
            mate[bv] = bu;
        }
    }
    for (int u = 0; u < n; ++u)
        if (u < mate[u]) {
            result.edges.push_back({u, mate[u], cost[u][mate[u]]});
            result.total_weight_ms += cost[u][mate[u]];
        }
    return result;
}

} // namespace toposynth
