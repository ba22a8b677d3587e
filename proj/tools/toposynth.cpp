#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "toposynth/toposynth.hpp"

namespace {

using namespace toposynth;

struct RunConfig {
    std::string underlay_path;
    std::string format = "json";
    double model_bits = 1e6;
    int local_steps = 1;
    std::string overlay = "ring";
    std::string bw_model = "fair-share";
    int rounds = 100;
    std::uint64_t seed = 0;
    std::string out;
    double access_mbps = 100.0; // graphml import defaults
    double compute_ms = 0.0;
    double core_mbps = 1000.0;
};

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--underlay", cfg.underlay_path, "Underlay file path")->required();
    cmd->add_option("--format", cfg.format, "Underlay format: json or graphml")
        ->check(CLI::IsMember({"json", "graphml"}));
    cmd->add_option("--model-bits", cfg.model_bits, "Model size in bits")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--local-steps", cfg.local_steps, "Local gradient steps per round")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--bw-model", cfg.bw_model,
                    "Core bandwidth sharing model: fair-share or min-cap")
        ->check(CLI::IsMember({"fair-share", "min-cap"}));
    cmd->add_option("--seed", cfg.seed, "Random seed");
    cmd->add_option("--out", cfg.out, "Output file path");
    cmd->add_option("--access-mbps", cfg.access_mbps,
                    "Access capacity for GraphML-imported silos");
    cmd->add_option("--compute-ms", cfg.compute_ms,
                    "Compute time for GraphML-imported silos");
    cmd->add_option("--core-mbps", cfg.core_mbps,
                    "Capacity for GraphML links without a speed attribute");
}

ConnectivityGraph connectivity_from(const RunConfig& cfg) {
    GraphmlDefaults gd;
    gd.up_mbps = cfg.access_mbps;
    gd.down_mbps = cfg.access_mbps;
    gd.compute_ms = cfg.compute_ms;
    gd.capacity_mbps = cfg.core_mbps;
    Underlay u = load_underlay(cfg.underlay_path, cfg.format, gd);
    ConnectivityOptions opt;
    opt.bw_model = cfg.bw_model == "min-cap" ? BwModel::min_cap : BwModel::fair_share;
    opt.model_bits = cfg.model_bits;
    opt.local_steps = cfg.local_steps;
    return build_connectivity(u, opt);
}

BuilderResult run_builder(const ConnectivityGraph& cg, const std::string& name) {
    if (name == "star") return build_star(cg);
    if (name == "mst") return build_mst_overlay(cg);
    if (name == "ring") return build_ring_christofides(cg);
    if (name == "dmbst") return build_delta_mbst(cg);
    throw validation_error("unknown overlay builder \"" + name + "\"");
}

std::string circuit_string(const Circuit& c) {
    std::string s;
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
        if (i) s += "->";
        s += std::to_string(c.nodes[i]);
    }
    return s;
}

/// Overlay files carry a top-level "arcs" array; underlays carry "nodes".
bool looks_like_overlay(const std::string& path) {
    try {
        auto doc = nlohmann::json::parse(detail::read_file(path));
        return doc.is_object() && doc.contains("arcs");
    } catch (const std::exception&) {
        return false;
    }
}

void emit(const RunConfig& cfg, const std::string& content) {
    if (cfg.out.empty())
        std::cout << content;
    else
        detail::write_file(cfg.out, content);
}

/// Bidirectional version of a builder's overlay, as required by the
/// consensus step of toy training.
Overlay undirected_variant(const ConnectivityGraph& cg, const Overlay& o) {
    if (o.undirected) return o;
    std::vector<std::pair<int, int>> arcs;
    for (const Arc& a : o.arcs) {
        arcs.emplace_back(a.src, a.dst);
        arcs.emplace_back(a.dst, a.src);
    }
    return make_overlay(cg, arcs, /*undirected=*/true);
}

int cmd_build(const RunConfig& cfg) {
    ConnectivityGraph cg = connectivity_from(cfg);
    BuilderResult r = run_builder(cg, cfg.overlay);
    emit(cfg, overlay_to_json(r.overlay, cfg.overlay));
    std::cerr << "built " << cfg.overlay << " overlay: tau = " << r.report.tau_ms
              << " ms\n";
    return 0;
}

int cmd_cycle_time(const RunConfig& cfg) {
    CycleTimeReport rep;
    if (looks_like_overlay(cfg.underlay_path)) {
        Overlay o = load_overlay(cfg.underlay_path);
        rep = cycle_time(o.delay_graph());
    } else {
        ConnectivityGraph cg = connectivity_from(cfg);
        rep = run_builder(cg, cfg.overlay).report;
    }
    std::printf("tau_ms %.9f\n", rep.tau_ms);
    std::printf("throughput_rounds_per_ms %.9f\n", 1.0 / rep.tau_ms);
    std::printf("critical_circuit %s\n", circuit_string(rep.critical_circuit).c_str());
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    Overlay o;
    if (looks_like_overlay(cfg.underlay_path)) {
        o = load_overlay(cfg.underlay_path);
    } else {
        ConnectivityGraph cg = connectivity_from(cfg);
        o = run_builder(cg, cfg.overlay).overlay;
    }
    SimulationTrace tr = simulate(o, cfg.rounds);
    emit(cfg, trace_to_csv(tr));
    std::cerr << "simulated " << cfg.rounds
              << " rounds, empirical throughput = " << empirical_throughput(tr)
              << " rounds/ms\n";
    return 0;
}

int cmd_compare(const RunConfig& cfg) {
    ConnectivityGraph cg = connectivity_from(cfg);
    const std::vector<std::string> names = {"star", "mst", "ring", "dmbst"};
    std::vector<BuilderResult> results;
    for (const auto& name : names) results.push_back(run_builder(cg, name));
    const double tau_star = results[0].report.tau_ms;

    std::string csv = "builder,tau_ms,speedup_vs_star,critical_circuit\r\n";
    nlohmann::json doc;
    doc["underlay"] = cfg.underlay_path;
    doc["silos"] = cg.silo_count;
    doc["rows"] = nlohmann::json::array();
    for (std::size_t i = 0; i < names.size(); ++i) {
        const CycleTimeReport& rep = results[i].report;
        std::string circ = circuit_string(rep.critical_circuit);
        csv += names[i] + "," + format_ms(rep.tau_ms) + "," +
               format_ms(tau_star / rep.tau_ms) + "," + csv_field(circ) + "\r\n";
        doc["rows"].push_back({{"builder", names[i]},
                               {"tau_ms", rep.tau_ms},
                               {"speedup_vs_star", tau_star / rep.tau_ms},
                               {"critical_circuit", circ}});
    }
    if (cfg.out.empty()) {
        std::cout << csv;
    } else {
        detail::write_file(cfg.out, csv);
        std::string json_path = cfg.out;
        if (json_path.size() > 4 && json_path.substr(json_path.size() - 4) == ".csv")
            json_path.resize(json_path.size() - 4);
        detail::write_file(json_path + ".json", doc.dump(2) + "\n");
    }
    return 0;
}

int cmd_train_toy(const RunConfig& cfg) {
    ConnectivityGraph cg = connectivity_from(cfg);
    BuilderResult r = run_builder(cg, cfg.overlay);
    Overlay o = undirected_variant(cg, r.overlay);

    QuadraticTask task = QuadraticTask::random(cg.silo_count, 10, cfg.seed);
    ConsensusMatrix A = local_degree_matrix(o);
    A.validate();
    TrainOptions opt;
    opt.local_steps = cfg.local_steps;
    opt.rounds = cfg.rounds;
    opt.seed = cfg.seed;
    TrainResult res = dpasgd_run(task, o, A, opt);
    SimulationTrace tr = simulate(o, cfg.rounds);
    emit(cfg, loss_series_to_csv(loss_vs_time(res, tr)));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Overlay topology design and round-time analysis for "
                 "cross-silo federated learning"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* build = app.add_subcommand("build", "Build an overlay and write it as JSON");
    auto* cycle = app.add_subcommand("cycle-time",
                                     "Report cycle time and critical circuit");
    auto* sim = app.add_subcommand("simulate", "Write a round-completion trace CSV");
    auto* cmp = app.add_subcommand("compare", "Compare all builders on one underlay");
    auto* train = app.add_subcommand("train-toy",
                                     "Toy decentralized training, loss-vs-time CSV");
    for (CLI::App* c : {build, cycle, sim, cmp, train}) add_common_options(c, cfg);
    for (CLI::App* c : {build, cycle, sim, train})
        c->add_option("--overlay", cfg.overlay, "Builder: star, mst, ring or dmbst")
            ->check(CLI::IsMember({"star", "mst", "ring", "dmbst"}));
    for (CLI::App* c : {sim, train})
        c->add_option("--rounds", cfg.rounds, "Number of rounds")
            ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return cmd_build(cfg);
        if (cycle->parsed()) return cmd_cycle_time(cfg);
        if (sim->parsed()) return cmd_simulate(cfg);
        if (cmp->parsed()) return cmd_compare(cfg);
        if (train->parsed()) return cmd_train_toy(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
