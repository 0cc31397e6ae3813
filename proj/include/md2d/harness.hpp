#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>
#include <vector>

#include "md2d/baselines.hpp"
#include "md2d/config.hpp"
#include "md2d/metrics.hpp"
#include "md2d/trace.hpp"

namespace md2d {

struct SweepPoint {
    int num_users = 0;
    double tx_power_dbm = 0.0;
    double demand_bits = 0.0;
};

struct SchemeOutcome {
    Scheme scheme = Scheme::Md2d;
    bool ok = false;
    std::string error;
    std::int64_t slots = 0;
    MetricsReport metrics;
};

/// One Monte-Carlo run: a config point plus seed, with every requested
/// scheme evaluated on the same topology and the same frozen shadowing.
/// Reproducible bit-for-bit from (config, seed).
struct RunRecord {
    SweepPoint point;
    std::uint64_t seed = 0;
    std::vector<SchemeOutcome> outcomes;
    double wall_seconds = 0.0;
};

inline RunRecord run_point(const ExperimentConfig& config, const Codebook& codebook,
                           const SweepPoint& point, std::uint64_t run_seed) {
    auto start = std::chrono::steady_clock::now();
    RunRecord record;
    record.point = point;
    record.seed = run_seed;

    Topology topology =
        generate_topology(point.num_users, config.area_side_m, derive_seed(run_seed, 0));
    ChannelModel model = make_channel_model(config, config.mode, derive_seed(run_seed, 1));
    std::vector<NodeId> group = topology.all_users();

    for (Scheme scheme : config.schemes) {
        SchemeOutcome outcome;
        outcome.scheme = scheme;
        try {
            SchemeResult result =
                run_scheme(scheme, topology, group, codebook, model, point.tx_power_dbm,
                           config.r_th_m, config.theta_th_deg, point.demand_bits,
                           config.slot_duration_s);
            outcome.slots = total_slots(result.schedule);
            outcome.metrics = compute_metrics(result.schedule, static_cast<int>(group.size()),
                                              point.tx_power_dbm);
            outcome.ok = true;
        } catch (const InfeasibleScheduleError& e) {
            outcome.ok = false;
            outcome.error = e.what();
        }
        record.outcomes.push_back(std::move(outcome));
    }
    record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

inline RunRecord run_point(const ExperimentConfig& config, const SweepPoint& point,
                           std::uint64_t run_seed) {
    return run_point(config, make_codebook(config), point, run_seed);
}

/// Sweep cross product in canonical order: users, then power, then demand.
inline std::vector<SweepPoint> sweep_points(const ExperimentConfig& config) {
    std::vector<SweepPoint> points;
    for (int u : config.num_users_sweep)
        for (double p : config.tx_power_dbm_sweep)
            for (double d : config.demand_bits_sweep) points.push_back({u, p, d});
    return points;
}

/// Execute the full sweep. Runs are independent tasks spread over a worker
/// pool; each result lands in a preassigned slot, so the record order (and
/// any CSV derived from it) is identical no matter how many workers ran.
inline std::vector<RunRecord> sweep_records(const ExperimentConfig& config) {
    validate_config(config);
    const Codebook codebook = make_codebook(config);
    const std::vector<SweepPoint> points = sweep_points(config);

    struct Task {
        SweepPoint point;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    tasks.reserve(points.size() * static_cast<std::size_t>(config.runs_per_point));
    for (const SweepPoint& point : points)
        for (int run = 0; run < config.runs_per_point; ++run)
            tasks.push_back({point, derive_seed(config.master_seed, static_cast<std::uint64_t>(run))});

    std::vector<RunRecord> records(tasks.size());
    unsigned workers = config.workers > 0 ? static_cast<unsigned>(config.workers)
                                          : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks.size()));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                records[i] = run_point(config, codebook, tasks[i].point, tasks[i].seed);
            } catch (const std::exception& e) {
                // a failed run keeps its slot so the sweep still completes
                RunRecord& r = records[i];
                r.point = tasks[i].point;
                r.seed = tasks[i].seed;
                for (Scheme scheme : config.schemes) {
                    SchemeOutcome o;
                    o.scheme = scheme;
                    o.ok = false;
                    o.error = e.what();
                    r.outcomes.push_back(std::move(o));
                }
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

inline const char* mode_name(PropagationMode mode) {
    return mode == PropagationMode::Los ? "LOS" : "NLOS";
}

/// One CSV row per (run, scheme). Infeasible schemes keep their row with
/// nan metrics so the run count stays re-derivable.
inline void write_raw_csv(std::ostream& out, const ExperimentConfig& config,
                          std::span<const RunRecord> records) {
    out << "scheme,seed,num_users,tx_power_dbm,demand_bits,mode,r_th_m,theta_th_deg,slots,"
           "nt_bps,ec_j,ee_bpj\n";
    for (const RunRecord& r : records) {
        for (const SchemeOutcome& o : r.outcomes) {
            out << to_string(o.scheme) << "," << r.seed << "," << r.point.num_users << ","
                << format_double(r.point.tx_power_dbm) << "," << format_double(r.point.demand_bits)
                << "," << mode_name(config.mode) << "," << format_double(config.r_th_m) << ","
                << format_double(config.theta_th_deg) << ",";
            if (o.ok) {
                out << o.slots << "," << format_double(o.metrics.network_throughput_bps) << ","
                    << format_double(o.metrics.energy_consumption_j) << ","
                    << format_double(o.metrics.energy_efficiency_bpj) << "\n";
            } else {
                out << "0,nan,nan,nan\n";
            }
        }
    }
}

struct AggregateRow {
    Scheme scheme = Scheme::Md2d;
    SweepPoint point;
    int runs = 0;  ///< feasible runs that entered the averages
    double nt_mean = 0.0, nt_stderr = 0.0;
    double ec_mean = 0.0, ec_stderr = 0.0;
    double ee_mean = 0.0, ee_stderr = 0.0;
    double slots_mean = 0.0;
};

namespace detail {

inline std::pair<double, double> mean_stderr(std::span<const double> xs) {
    if (xs.empty()) return {std::nan(""), std::nan("")};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return {mean, sd / std::sqrt(static_cast<double>(xs.size()))};
}

}  // namespace detail

/// Per (point, scheme) means and standard errors over the feasible runs.
inline std::vector<AggregateRow> aggregate_records(const ExperimentConfig& config,
                                                   std::span<const RunRecord> records) {
    std::vector<AggregateRow> rows;
    for (const SweepPoint& point : sweep_points(config)) {
        for (Scheme scheme : config.schemes) {
            std::vector<double> nt, ec, ee, slots;
            for (const RunRecord& r : records) {
                if (r.point.num_users != point.num_users ||
                    r.point.tx_power_dbm != point.tx_power_dbm ||
                    r.point.demand_bits != point.demand_bits)
                    continue;
                for (const SchemeOutcome& o : r.outcomes) {
                    if (o.scheme != scheme || !o.ok) continue;
                    nt.push_back(o.metrics.network_throughput_bps);
                    ec.push_back(o.metrics.energy_consumption_j);
                    ee.push_back(o.metrics.energy_efficiency_bpj);
                    slots.push_back(static_cast<double>(o.slots));
                }
            }
            AggregateRow row;
            row.scheme = scheme;
            row.point = point;
            row.runs = static_cast<int>(nt.size());
            std::tie(row.nt_mean, row.nt_stderr) = detail::mean_stderr(nt);
            std::tie(row.ec_mean, row.ec_stderr) = detail::mean_stderr(ec);
            std::tie(row.ee_mean, row.ee_stderr) = detail::mean_stderr(ee);
            row.slots_mean = detail::mean_stderr(slots).first;
            rows.push_back(row);
        }
    }
    return rows;
}

inline void write_aggregate_csv(std::ostream& out, const ExperimentConfig& config,
                                std::span<const AggregateRow> rows) {
    out << "scheme,num_users,tx_power_dbm,demand_bits,mode,r_th_m,theta_th_deg,runs,"
           "nt_mean,nt_stderr,ec_mean,ec_stderr,ee_mean,ee_stderr,slots_mean\n";
    for (const AggregateRow& r : rows) {
        out << to_string(r.scheme) << "," << r.point.num_users << ","
            << format_double(r.point.tx_power_dbm) << "," << format_double(r.point.demand_bits)
            << "," << mode_name(config.mode) << "," << format_double(config.r_th_m) << ","
            << format_double(config.theta_th_deg) << "," << r.runs << ","
            << format_double(r.nt_mean) << "," << format_double(r.nt_stderr) << ","
            << format_double(r.ec_mean) << "," << format_double(r.ec_stderr) << ","
            << format_double(r.ee_mean) << "," << format_double(r.ee_stderr) << ","
            << format_double(r.slots_mean) << "\n";
    }
}

struct SweepOutput {
    std::vector<RunRecord> records;
    std::filesystem::path raw_csv_path;
    std::filesystem::path aggregate_csv_path;
};

/// Run the sweep and write raw.csv plus aggregate.csv under out_dir.
inline SweepOutput sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    SweepOutput output;
    output.records = sweep_records(config);
    std::filesystem::create_directories(out_dir);

    output.raw_csv_path = out_dir / "raw.csv";
    std::ofstream raw(output.raw_csv_path);
    if (!raw) throw std::runtime_error("cannot write " + output.raw_csv_path.string());
    write_raw_csv(raw, config, output.records);

    output.aggregate_csv_path = out_dir / "aggregate.csv";
    std::ofstream agg(output.aggregate_csv_path);
    if (!agg) throw std::runtime_error("cannot write " + output.aggregate_csv_path.string());
    std::vector<AggregateRow> rows = aggregate_records(config, output.records);
    write_aggregate_csv(agg, config, rows);
    return output;
}

}  // namespace md2d
