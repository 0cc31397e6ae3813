// Command-line front end: single runs, Monte-Carlo sweeps, exact oracle
// queries and feasibility checks over serialized traces.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "md2d/md2d.hpp"

namespace {

struct CommonOverrides {
    std::string config_path;
    std::optional<std::vector<std::string>> schemes;
    std::optional<std::vector<int>> users;
    std::optional<std::vector<double>> power_dbm;
    std::optional<std::vector<double>> demand_bits;
    std::optional<std::string> mode;
    std::optional<double> r_th;
    std::optional<double> theta_th;
    std::optional<int> runs;
    std::optional<int> jobs;
    std::vector<std::string> sets;  ///< raw key=value overrides
};

void add_override_flags(CLI::App* cmd, CommonOverrides& ov, bool sweep_style) {
    if (!sweep_style)
        cmd->add_option("--config", ov.config_path, "configuration file (key = value lines)");
    cmd->add_option("--scheme,--schemes", ov.schemes,
                    "schemes to run (MD2D, MC, D2D, FDMAC)")
        ->delimiter(',');
    cmd->add_option("--users", ov.users, "number of users (list for sweeps)")->delimiter(',');
    cmd->add_option("--power-dbm", ov.power_dbm, "transmission power in dBm")->delimiter(',');
    cmd->add_option("--demand-bits", ov.demand_bits, "multicast data size in bits")->delimiter(',');
    cmd->add_option("--mode", ov.mode, "LOS or NLOS");
    cmd->add_option("--r-th", ov.r_th, "partition radius threshold in meters");
    cmd->add_option("--theta-th", ov.theta_th, "partition angle threshold in degrees");
    cmd->add_option("--set", ov.sets, "override any config field, e.g. --set channel.k0_scale=1e-6");
    if (sweep_style) {
        cmd->add_option("--runs", ov.runs, "runs per sweep point");
        cmd->add_option("--jobs", ov.jobs, "worker threads (0 = hardware concurrency)");
    }
}

md2d::ExperimentConfig build_config(const CommonOverrides& ov) {
    md2d::ExperimentConfig config;
    if (!ov.config_path.empty()) config = md2d::load_config_file(ov.config_path);
    if (ov.schemes) {
        config.schemes.clear();
        for (const auto& s : *ov.schemes) config.schemes.push_back(md2d::scheme_from_string(s));
    }
    if (ov.users) config.num_users_sweep = *ov.users;
    if (ov.power_dbm) config.tx_power_dbm_sweep = *ov.power_dbm;
    if (ov.demand_bits) config.demand_bits_sweep = *ov.demand_bits;
    if (ov.mode) {
        if (*ov.mode == "LOS") config.mode = md2d::PropagationMode::Los;
        else if (*ov.mode == "NLOS") config.mode = md2d::PropagationMode::Nlos;
        else throw md2d::ConfigError("mode: expected LOS or NLOS, got '" + *ov.mode + "'");
    }
    if (ov.r_th) config.r_th_m = *ov.r_th;
    if (ov.theta_th) config.theta_th_deg = *ov.theta_th;
    if (ov.runs) config.runs_per_point = *ov.runs;
    if (ov.jobs) config.workers = *ov.jobs;
    for (const std::string& kv : ov.sets) {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw md2d::ConfigError("--set expects key=value, got '" + kv + "'");
        md2d::apply_config_entry(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    md2d::validate_config(config);
    return config;
}

int cmd_run(const CommonOverrides& ov, std::uint64_t seed, const std::string& trace_path) {
    md2d::ExperimentConfig config = build_config(ov);
    if (config.num_users_sweep.size() != 1 || config.tx_power_dbm_sweep.size() != 1 ||
        config.demand_bits_sweep.size() != 1) {
        std::cerr << "run: expects exactly one value for --users, --power-dbm and --demand-bits\n";
        return 2;
    }
    if (!trace_path.empty() && config.schemes.size() != 1) {
        std::cerr << "run: --trace requires exactly one --scheme\n";
        return 2;
    }

    md2d::SweepPoint point{config.num_users_sweep[0], config.tx_power_dbm_sweep[0],
                           config.demand_bits_sweep[0]};
    md2d::Codebook codebook = md2d::make_codebook(config);
    md2d::RunRecord record = md2d::run_point(config, codebook, point, seed);

    std::printf("users=%d power=%g dBm demand=%g bits mode=%s r_th=%g theta_th=%g seed=%llu\n",
                point.num_users, point.tx_power_dbm, point.demand_bits,
                md2d::mode_name(config.mode), config.r_th_m, config.theta_th_deg,
                static_cast<unsigned long long>(seed));
    std::printf("%-6s %12s %16s %14s %16s\n", "scheme", "slots", "NT [b/s]", "EC [J]",
                "EE [b/s/J]");
    for (const md2d::SchemeOutcome& o : record.outcomes) {
        if (o.ok) {
            std::printf("%-6s %12lld %16.6e %14.6e %16.6e\n", md2d::to_string(o.scheme).c_str(),
                        static_cast<long long>(o.slots), o.metrics.network_throughput_bps,
                        o.metrics.energy_consumption_j, o.metrics.energy_efficiency_bpj);
        } else {
            std::printf("%-6s infeasible: %s\n", md2d::to_string(o.scheme).c_str(), o.error.c_str());
        }
    }

    if (!trace_path.empty()) {
        md2d::Topology topology = md2d::generate_topology(point.num_users, config.area_side_m,
                                                          md2d::derive_seed(seed, 0));
        md2d::ChannelModel model =
            md2d::make_channel_model(config, config.mode, md2d::derive_seed(seed, 1));
        std::vector<md2d::NodeId> group = topology.all_users();
        md2d::SchemeResult result = md2d::run_scheme(
            config.schemes[0], topology, group, codebook, model, point.tx_power_dbm, config.r_th_m,
            config.theta_th_deg, point.demand_bits, config.slot_duration_s);
        std::ofstream out(trace_path);
        if (!out) {
            std::cerr << "run: cannot write trace file " << trace_path << "\n";
            return 2;
        }
        md2d::write_trace(out, topology, result.partition, result.schedule);
        std::printf("trace written to %s\n", trace_path.c_str());
    }
    return 0;
}

int cmd_sweep(const CommonOverrides& ov, std::uint64_t seed, const std::string& out_dir) {
    md2d::ExperimentConfig config = build_config(ov);
    config.master_seed = seed;
    md2d::SweepOutput output = md2d::sweep(config, out_dir);
    std::size_t rows = 0;
    for (const auto& r : output.records) rows += r.outcomes.size();
    std::printf("sweep complete: %zu runs, %zu raw rows\n", output.records.size(), rows);
    std::printf("raw:       %s\naggregate: %s\n", output.raw_csv_path.c_str(),
                output.aggregate_csv_path.c_str());
    return 0;
}

int cmd_oracle(const CommonOverrides& ov, const std::string& topology_path, std::size_t max_group,
               std::uint64_t shadow_seed) {
    md2d::ExperimentConfig config = build_config(ov);
    std::ifstream in(topology_path);
    if (!in) {
        std::cerr << "oracle: cannot open topology file " << topology_path << "\n";
        return 2;
    }
    md2d::Topology topology = md2d::read_topology(in);
    md2d::Codebook codebook = md2d::make_codebook(config);
    md2d::ChannelModel model = md2d::make_channel_model(config, config.mode, shadow_seed);
    std::vector<md2d::NodeId> group = topology.all_users();

    md2d::OracleSolution solution = md2d::exhaustive_optimum(
        topology, group, codebook, model, config.tx_power_dbm_sweep[0],
        config.demand_bits_sweep[0], config.slot_duration_s, max_group);
    std::printf("optimum objective: %lld slots (%llu candidates explored)\n",
                static_cast<long long>(solution.objective),
                static_cast<unsigned long long>(solution.explored));
    for (const md2d::Phase& p : solution.best_schedule.phases) {
        const md2d::Subset& sub =
            solution.best_partition.subsets[static_cast<std::size_t>(p.target_subset_id)];
        std::printf("  phase %d: node %d -> subset %d {", p.phase_index, p.tx_node,
                    p.target_subset_id);
        for (std::size_t i = 0; i < sub.members.size(); ++i)
            std::printf("%s%d", i ? "," : "", sub.members[i]);
        std::printf("} beam (%d,%d) rate %.6e b/s slots %lld\n", p.tx_beam.level_index,
                    p.tx_beam.beam_index, p.rate_bps, static_cast<long long>(p.slots));
    }
    return 0;
}

int cmd_check(const CommonOverrides& ov, const std::string& trace_path,
              std::uint64_t shadow_seed) {
    md2d::ExperimentConfig config = build_config(ov);
    std::ifstream in(trace_path);
    if (!in) {
        std::cerr << "check: cannot open trace file " << trace_path << "\n";
        return 2;
    }
    md2d::Codebook codebook = md2d::make_codebook(config);
    md2d::TraceFile trace = md2d::read_trace(in, codebook);
    md2d::ChannelModel model = md2d::make_channel_model(config, config.mode, shadow_seed);
    std::vector<md2d::NodeId> group = trace.topology.all_users();

    md2d::FeasibilityReport report =
        md2d::check_feasibility(trace.schedule, trace.partition, group, trace.topology, codebook,
                                model, config.tx_power_dbm_sweep[0]);
    std::printf("%s", report.summary().c_str());
    if (!report.all_pass()) {
        const md2d::ConstraintResult* v = report.first_violation();
        std::fprintf(stderr, "check: constraint %s violated:%s\n", v->constraint.c_str(),
                     v->violations.c_str());
        return 1;
    }
    std::printf("all constraints satisfied\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mmWave small-cell multicast scheduling simulator"};
    app.require_subcommand(1);

    CommonOverrides run_ov, sweep_ov, oracle_ov, check_ov;
    std::uint64_t run_seed = 0, sweep_seed = 0;
    std::string trace_out, sweep_out = "out";
    std::string oracle_topology, check_trace;
    std::size_t oracle_max_group = 5;
    std::uint64_t oracle_shadow_seed = 0, check_shadow_seed = 0;

    CLI::App* run = app.add_subcommand("run", "run every scheme on one seeded instance");
    add_override_flags(run, run_ov, false);
    run->add_option("--seed", run_seed, "run seed")->required();
    run->add_option("--trace", trace_out, "write a schedule trace (single scheme only)");

    CLI::App* sw = app.add_subcommand("sweep", "Monte-Carlo sweep, raw + aggregate CSV");
    sw->add_option("config", sweep_ov.config_path, "configuration file");
    add_override_flags(sw, sweep_ov, true);
    sw->add_option("--seed", sweep_seed, "master seed")->required();
    sw->add_option("--out", sweep_out, "output directory");

    CLI::App* orc = app.add_subcommand("oracle", "exhaustive optimum of a serialized topology");
    orc->add_option("topology", oracle_topology, "topology file")->required();
    add_override_flags(orc, oracle_ov, false);
    orc->add_option("--max-group-size", oracle_max_group, "explosion guard");
    orc->add_option("--shadow-seed", oracle_shadow_seed, "shadowing seed under NLOS");

    CLI::App* chk = app.add_subcommand("check", "feasibility-check a serialized schedule trace");
    chk->add_option("trace", check_trace, "trace file")->required();
    add_override_flags(chk, check_ov, false);
    chk->add_option("--shadow-seed", check_shadow_seed, "shadowing seed under NLOS");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_ov, run_seed, trace_out);
        if (sw->parsed()) return cmd_sweep(sweep_ov, sweep_seed, sweep_out);
        if (orc->parsed())
            return cmd_oracle(oracle_ov, oracle_topology, oracle_max_group, oracle_shadow_seed);
        if (chk->parsed()) return cmd_check(check_ov, check_trace, check_shadow_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
