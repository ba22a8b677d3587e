#include <doctest.h>

#include "toposynth/builders.hpp"
#include "toposynth/fixtures.hpp"
#include "toposynth/simulator.hpp"

using namespace toposynth;

TEST_CASE("round times are monotone and start at zero") {
    ConnectivityGraph cg = fixtures::random_node_capacitated(6, 71);
    Overlay o = build_mst_overlay(cg).overlay;
    SimulationTrace tr = simulate(o, 50);
    REQUIRE(tr.times_ms.size() == 51);
    for (int i = 0; i < 6; ++i) {
        CHECK(tr.times_ms[0][i] == 0.0);
        for (int k = 0; k < 50; ++k) CHECK(tr.times_ms[k + 1][i] >= tr.times_ms[k][i]);
    }
}

TEST_CASE("two-silo exchange alternates at the slower delay") {
    ConnectivityGraph cg = fixtures::homogeneous_access(2, 1e6, 100.0);
    cg.latency_ms[0][1] = 5.0;
    cg.latency_ms[1][0] = 15.0;
    Overlay o = make_overlay(cg, {{0, 1}, {1, 0}}, true);
    SimulationTrace tr = simulate(o, 10);
    double d01 = o.arcs[0].weight_ms, d10 = o.arcs[1].weight_ms;
    double tau = (d01 + d10) / 2.0;
    // After the transient, both silos advance by the circuit mean per round
    // pair; round 10 cannot run ahead of the linear rate.
    CHECK(tr.times_ms[10][0] >= 10 * tau - (d01 + d10));
    CHECK(tr.times_ms[10][0] <= 10 * tau + (d01 + d10));
}

TEST_CASE("empirical throughput converges to one over tau") {
    for (int trial = 0; trial < 20; ++trial) {
        Digraph g = fixtures::random_strong_digraph(8, 1400 + trial);
        Overlay o;
        o.silo_count = 8;
        o.self_loop_ms.assign(8, 0.0);
        for (const Arc& a : g.arcs()) o.arcs.push_back(a);
        double tau = cycle_time(g).tau_ms;
        SimulationTrace tr = simulate(o, 1000);
        CHECK(std::abs(empirical_throughput(tr) - 1.0 / tau) * tau <= 0.01);
    }
}

TEST_CASE("deviation from the linear rate stays bounded") {
    Digraph g = fixtures::random_strong_digraph(10, 99);
    Overlay o;
    o.silo_count = 10;
    o.self_loop_ms.assign(10, 0.0);
    for (const Arc& a : g.arcs()) o.arcs.push_back(a);
    double tau = cycle_time(g).tau_ms;
    SimulationTrace half = simulate(o, 500);
    SimulationTrace full = simulate(o, 1000);
    double dev_half = max_linear_deviation(half, tau);
    double dev_full = max_linear_deviation(full, tau);
    // Doubling the horizon must not double the deviation (no linear growth).
    CHECK(dev_full <= dev_half * 1.2 + 1e-6);
}

TEST_CASE("self-loops gate progress of fast nodes") {
    ConnectivityGraph cg = fixtures::homogeneous_access(2, 1e6, 1000.0);
    cg.silos[0].compute_ms = 50.0;
    Overlay o = make_overlay(cg, {{0, 1}, {1, 0}}, true);
    SimulationTrace tr = simulate(o, 5);
    CHECK(tr.times_ms[1][0] >= 50.0);
}

TEST_CASE("simulate validates the round count") {
    Overlay o;
    o.silo_count = 1;
    o.self_loop_ms = {1.0};
    CHECK_THROWS_AS(simulate(o, -1), validation_error);
    CHECK_THROWS_AS(empirical_throughput(simulate(o, 0)), validation_error);
}
