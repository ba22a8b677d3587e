// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion states its tolerance inline.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "toposynth/toposynth.hpp"

using namespace toposynth;

namespace {

int g_failures = 0;

void report(int number, const std::string& what, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number,
                what.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

// ---- criterion 1: exact cycle times on the closed-form examples ------------

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    Overlay ring = load_overlay(std::string(FIXTURE_DIR) + "/ring_3node_overlay.json");
    double tau_ring = cycle_time(ring.delay_graph()).tau_ms;
    ok = ok && std::abs(tau_ring - 8.0 / 3.0) <= 1e-9;

    double tau_mst = cycle_time(fixtures::three_node_path_undirected()).tau_ms;
    ok = ok && std::abs(tau_mst - 3.0) <= 1e-9;

    for (int n : {3, 5, 10}) {
        double tau = cycle_time(fixtures::family_ring(n)).tau_ms;
        ok = ok && std::abs(tau - (4.0 * n - 2.0) / (n + 1.0)) <= 1e-9;
    }
    double secs = elapsed_s(t0);
    ok = ok && secs < 1.0;
    detail = "ring tau=" + fmt(tau_ring) + ", mst tau=" + fmt(tau_mst) + ", " +
             fmt(secs) + " s";
    report(1, "closed-form example cycle times exact to 1e-9", ok, detail);
}

// ---- criterion 2: homogeneous slow-access ring and star closed forms -------

void criterion_2() {
    const double M = 1e6, C = 100.0;
    bool ok = true;
    std::string detail;
    for (int leaves : {3, 5, 8}) {
        int n = leaves + 1;
        ConnectivityGraph cg = fixtures::homogeneous_access(n, M, C);
        BuilderResult ring = build_ring_christofides(cg);
        BuilderResult star = build_star(cg);
        double unit = M / (C * kMbpsToBitsPerMs); // M/C in milliseconds
        ok = ok && std::abs(ring.report.tau_ms - unit) <= 1e-9;
        ok = ok && std::abs(star.report.tau_ms - leaves * unit) <= 1e-9;
        // Enumeration oracle agreement on both overlays.
        double ring_bf = cycle_time_bruteforce(ring.overlay.delay_graph()).tau_ms;
        double star_bf = cycle_time_bruteforce(star.overlay.delay_graph()).tau_ms;
        ok = ok && std::abs(ring_bf - ring.report.tau_ms) <= 1e-9;
        ok = ok && std::abs(star_bf - star.report.tau_ms) <= 1e-9;
        if (leaves == 8)
            detail = "n=9: ring tau=" + fmt(ring.report.tau_ms) +
                     " (M/C), star tau=" + fmt(star.report.tau_ms) + " (N*M/C, N=" +
                     std::to_string(leaves) + " leaves)";
    }
    report(2, "homogeneous access: ring tau = M/C, star tau = N*M/C", ok, detail);
}

// ---- criterion 3: karp vs enumeration on random strong digraphs ------------

void criterion_3() {
    auto t0 = std::chrono::steady_clock::now();
    int checked = 0;
    bool ok = true;
    for (int trial = 0; trial < 500; ++trial) {
        int n = 2 + trial % 9; // up to 10 nodes
        Digraph g = fixtures::random_strong_digraph(n, 30000 + trial);
        double fast = cycle_time(g).tau_ms;
        double slow = cycle_time_bruteforce(g).tau_ms;
        if (std::abs(fast - slow) > 1e-9) {
            ok = false;
            break;
        }
        ++checked;
    }
    double secs = elapsed_s(t0);
    ok = ok && secs < 30.0;
    report(3, "cycle_time == enumeration oracle on 500 random strong digraphs", ok,
           std::to_string(checked) + " graphs, " + fmt(secs) + " s");
}

// ---- criterion 4: mst equals the spanning-tree brute-force minimum ---------

void criterion_4() {
    auto t0 = std::chrono::steady_clock::now();
    int checked = 0;
    bool ok = true;
    for (int trial = 0; trial < 200 && ok; ++trial) {
        int n = 4 + trial % 4; // 4..7 silos
        ConnectivityGraph cg = fixtures::random_edge_capacitated(n, 40000 + trial);
        double mst = build_mst_overlay(cg).report.tau_ms;
        double oracle = brute_force_mct(cg, MctMode::undirected).report.tau_ms;
        ok = std::abs(mst - oracle) <= 1e-9;
        ++checked;
    }
    report(4, "mst builder optimal on 200 random edge-capacitated instances", ok,
           std::to_string(checked) + " instances, " + fmt(elapsed_s(t0)) + " s");
}

// ---- criterion 5: approximation bounds hold empirically --------------------

void criterion_5() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string failed;

    // Ring within 2N of the directed optimum (edge-capacitated, symmetric).
    for (int trial = 0; trial < 100 && ok; ++trial) {
        int n = 4 + trial % 2;
        ConnectivityGraph cg = fixtures::random_edge_capacitated(n, 50000 + trial);
        for (auto& s : cg.silos) s.compute_ms = 1.0;
        double ring = build_ring_christofides(cg).report.tau_ms;
        double opt = brute_force_mct(cg, MctMode::directed).report.tau_ms;
        if (ring > 2.0 * n * opt + 1e-9) {
            ok = false;
            failed = "ring bound at trial " + std::to_string(trial);
        }
    }

    // Bounded-degree tree within 6x of the undirected optimum under the
    // uplink-dominated capacity condition.
    for (int trial = 0; trial < 100 && ok; ++trial) {
        int n = 5 + trial % 3; // 5..7 silos
        ConnectivityGraph cg = fixtures::random_node_capacitated(n, 51000 + trial);
        double dmbst = build_delta_mbst(cg).report.tau_ms;
        double opt = brute_force_mct(cg, MctMode::undirected).report.tau_ms;
        if (dmbst > 6.0 * opt + 1e-9) {
            ok = false;
            failed = "dmbst bound at trial " + std::to_string(trial);
        }
    }

    // Christofides within 1.5x of the exact tour on Euclidean points.
    std::mt19937_64 rng(52000);
    std::uniform_real_distribution<double> coord(0.0, 100.0);
    for (int trial = 0; trial < 100 && ok; ++trial) {
        int n = 4 + trial % 6; // up to 9 nodes
        std::vector<std::pair<double, double>> pts(n);
        for (auto& p : pts) p = {coord(rng), coord(rng)};
        std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                w[i][j] = std::hypot(pts[i].first - pts[j].first,
                                     pts[i].second - pts[j].second);
        std::vector<int> tour = christofides_tour(w);
        double len = w[tour.back()][tour.front()];
        for (int i = 0; i + 1 < n; ++i) len += w[tour[i]][tour[i + 1]];
        if (len > 1.5 * exact_tsp_weight(w) + 1e-9) {
            ok = false;
            failed = "christofides bound at trial " + std::to_string(trial);
        }
    }
    report(5, "2N ring / 6x dmbst / 1.5x christofides bounds, 100 instances each",
           ok, ok ? fmt(elapsed_s(t0)) + " s" : failed);
}

// ---- criterion 6: ring gap gadget ------------------------------------------

void criterion_6() {
    bool ok = true;
    std::string detail;
    for (int N : {3, 4, 5}) {
        double target = 2.0 / (N + 1);
        // Lower bound: any strong spanning overlay contains an elementary
        // circuit through periphery node 2N-1, so the cheapest such circuit
        // bounds every overlay's cycle time from below.
        Digraph full = fixtures::ring_gap_delays(N);
        double lower = min_mean_circuit_through(full, 2 * N - 1);
        // Upper bound: the constructed overlay achieves it.
        double upper = cycle_time(fixtures::ring_gap_optimal_overlay(N)).tau_ms;
        ok = ok && std::abs(lower - target) <= 1e-9;
        ok = ok && std::abs(upper - target) <= 1e-9;

        // Every Hamiltonian ring is at least (N+1)/4 times slower: exhaust
        // all cyclic orders of the 2N nodes.
        const int m = 2 * N;
        std::vector<int> perm;
        for (int v = 1; v < m; ++v) perm.push_back(v);
        double worst_ratio = std::numeric_limits<double>::infinity();
        do {
            double tot = full.arc_weight(perm.back(), 0);
            int prev = 0;
            for (int v : perm) {
                tot += full.arc_weight(prev, v);
                prev = v;
            }
            worst_ratio = std::min(worst_ratio, (tot / m) / target);
        } while (std::next_permutation(perm.begin(), perm.end()));
        ok = ok && worst_ratio >= (N + 1) / 4.0 - 1e-9;
        if (N == 5)
            detail = "N=5: tau_opt=" + fmt(upper) + ", min ring ratio=" +
                     fmt(worst_ratio) + " >= " + fmt((N + 1) / 4.0);
    }
    report(6, "gadget optimum 2/(N+1) and Hamiltonian rings (N+1)/4 slower", ok,
           detail);
}

// ---- criterion 7: simulator agrees with the cycle time ---------------------

void criterion_7() {
    bool ok = true;
    std::string failed;
    for (int trial = 0; trial < 50 && ok; ++trial) {
        int n = 5 + trial % 26; // up to 30 nodes
        Digraph g = fixtures::random_strong_digraph(n, 70000 + trial, 0.2);
        Overlay o;
        o.silo_count = n;
        o.self_loop_ms.assign(n, 0.0);
        for (const Arc& a : g.arcs()) o.arcs.push_back(a);
        double tau = cycle_time(g).tau_ms;
        const int K = 1000;
        SimulationTrace tr = simulate(o, K);
        double rel = std::abs(K / tr.makespan_ms() - 1.0 / tau) * tau;
        if (rel > 0.01) {
            ok = false;
            failed = "throughput error " + fmt(rel) + " at trial " + std::to_string(trial);
            break;
        }
        // Deviation |t_i(k) - tau k| must not grow linearly on [K/2, K]:
        // a least-squares slope over that window, relative to tau, near zero.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (int k = K / 2; k <= K; ++k) {
            double dev = 0.0;
            for (double t : tr.times_ms[k]) dev = std::max(dev, std::abs(t - tau * k));
            sx += k;
            sy += dev;
            sxx += double(k) * k;
            sxy += double(k) * dev;
            ++cnt;
        }
        double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
        if (std::abs(slope) > 1e-3 * tau) {
            ok = false;
            failed = "deviation slope " + fmt(slope) + " at trial " + std::to_string(trial);
        }
    }
    report(7, "empirical throughput within 1% of 1/tau, bounded deviation", ok,
           failed);
}

// ---- criterion 8: consensus matrices and convergence -----------------------

void criterion_8() {
    bool ok = true;
    std::string failed;
    std::mt19937_64 rng(80000);
    for (int trial = 0; trial < 100 && ok; ++trial) {
        int n = 2 + trial % 19; // up to 20 silos
        ConnectivityGraph cg = fixtures::homogeneous_access(n, 1e6, 100.0);
        std::vector<std::pair<int, int>> arcs;
        for (int v = 1; v < n; ++v) {
            int p = static_cast<int>(rng() % v);
            arcs.emplace_back(p, v);
            arcs.emplace_back(v, p);
        }
        // Half the trials get extra edges beyond the tree.
        if (trial % 2 == 1 && n >= 3)
            for (int v = 0; v + 2 < n; v += 3) {
                bool present = false;
                for (auto [a, b] : arcs)
                    present = present || (a == v && b == v + 2);
                if (!present) {
                    arcs.emplace_back(v, v + 2);
                    arcs.emplace_back(v + 2, v);
                }
            }
        Overlay o = make_overlay(cg, arcs, true);
        ConsensusMatrix A = local_degree_matrix(o);
        try {
            A.validate(1e-12);
        } catch (const validation_error& e) {
            ok = false;
            failed = e.what();
            break;
        }
        if (trial % 10 == 0) {
            // Noiseless training with a shared optimum must reach consensus.
            QuadraticTask task;
            task.dim = 4;
            task.targets.assign(n, {0.3, -1.2, 2.0, 0.0});
            TrainOptions opt;
            opt.rounds = 2000;
            opt.noise_sigma = 0.0;
            TrainResult r = dpasgd_run(task, o, A, opt);
            if (r.consensus_residual.back() >= 1e-6) {
                ok = false;
                failed = "residual " + fmt(r.consensus_residual.back()) + " at n=" +
                         std::to_string(n);
            }
        }
    }
    report(8, "doubly stochastic to 1e-12; sigma=0 residual < 1e-6 in 2000 rounds",
           ok, failed);
}

// ---- criteria 9 and 10: end-to-end through the command line ----------------

std::string out_dir() {
    const char* t = std::getenv("TMPDIR");
    return t ? std::string(t) : std::string("/tmp");
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(CLI_PATH) + " " + args + " 2>/dev/null";
    return std::system(cmd.c_str());
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
            line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) row.push_back(field);
        rows.push_back(row);
    }
    return rows;
}

void criterion_9() {
    bool ok = true;
    std::string detail;
    std::string slow_csv = out_dir() + "/toposynth_cmp_slow.csv";
    std::string fast_csv = out_dir() + "/toposynth_cmp_fast.csv";
    std::string fixtures_dir = FIXTURE_DIR;
    ok = ok && run_cli("compare --underlay " + fixtures_dir +
                       "/geo_mesh_11.json --model-bits 1e9 --out " + slow_csv) == 0;
    ok = ok && run_cli("compare --underlay " + fixtures_dir +
                       "/geo_mesh_11_fast.json --model-bits 1e9 --out " + fast_csv) == 0;
    if (ok) {
        auto parse_taus = [](const std::string& path) {
            std::map<std::string, double> taus;
            for (const auto& row : read_csv(path))
                if (row.size() >= 2 && row[0] != "builder")
                    taus[row[0]] = std::stod(row[1]);
            return taus;
        };
        auto slow = parse_taus(slow_csv);
        auto fast = parse_taus(fast_csv);
        ok = ok && slow.size() == 4 && fast.size() == 4;
        if (ok) {
            ok = ok && slow["ring"] < slow["dmbst"];
            ok = ok && slow["dmbst"] <= slow["mst"] + 1e-9;
            ok = ok && slow["mst"] < slow["star"];
            double speed_slow = slow["star"] / slow["ring"];
            double speed_fast = fast["star"] / fast["ring"];
            ok = ok && speed_slow > speed_fast;
            detail = "slow access: ring " + fmt(slow["ring"]) + " < dmbst " +
                     fmt(slow["dmbst"]) + " <= mst " + fmt(slow["mst"]) + " < star " +
                     fmt(slow["star"]) + "; ring-vs-star speedup " + fmt(speed_fast) +
                     " -> " + fmt(speed_slow);
        }
    }
    report(9, "compare: ring < dmbst <= mst < star; speedup grows on slow access",
           ok, detail);
}

void criterion_10() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    std::string fixtures_dir = FIXTURE_DIR;
    std::string ring_csv = out_dir() + "/toposynth_train_ring.csv";
    std::string star_csv = out_dir() + "/toposynth_train_star.csv";
    std::string common = " --underlay " + fixtures_dir +
                         "/geo_mesh_11.json --model-bits 1e9 --rounds 200 --seed 7 "
                         "--out ";
    ok = ok && run_cli("train-toy --overlay ring" + common + ring_csv) == 0;
    ok = ok && run_cli("train-toy --overlay star" + common + star_csv) == 0;
    if (ok) {
        auto series = [](const std::string& path) {
            std::vector<std::pair<double, double>> pts; // (time_ms, loss)
            for (const auto& row : read_csv(path))
                if (row.size() >= 3 && row[0] != "round")
                    pts.emplace_back(std::stod(row[1]), std::stod(row[2]));
            return pts;
        };
        auto ring = series(ring_csv);
        auto star = series(star_csv);
        ok = ok && ring.size() == 201 && star.size() == 201;
        if (ok) {
            // Threshold halfway down star's own loss range; both runs share
            // the task and seed, so both curves start at the same loss.
            double threshold = 0.5 * (star.front().second + star.back().second);
            auto first_time = [&](const std::vector<std::pair<double, double>>& pts) {
                for (const auto& [t, loss] : pts)
                    if (loss <= threshold) return t;
                return std::numeric_limits<double>::infinity();
            };
            double t_ring = first_time(ring);
            double t_star = first_time(star);
            ok = t_ring < t_star;
            detail = "loss threshold " + fmt(threshold) + " reached at " + fmt(t_ring) +
                     " ms (ring) vs " + fmt(t_star) + " ms (star)";
        }
    }
    double secs = elapsed_s(t0);
    ok = ok && secs < 60.0;
    report(10, "train-toy: ring reaches the loss threshold before star", ok,
           detail + (detail.empty() ? "" : ", ") + fmt(secs) + " s");
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures == 0)
        std::printf("all 10 acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
