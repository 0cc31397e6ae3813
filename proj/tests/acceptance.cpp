// Acceptance suite: one self-contained criterion per entry, each printing a
// single PASS/FAIL line. Run with no arguments for the full suite or with
// --criterion N to run one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "md2d/md2d.hpp"

using namespace md2d;

namespace {

using Clock = std::chrono::steady_clock;

struct CriterionResult {
    bool pass = false;
    std::string detail;
};

double nt_of(const std::vector<AggregateRow>& rows, Scheme scheme, int users) {
    for (const AggregateRow& r : rows)
        if (r.scheme == scheme && r.point.num_users == users) return r.nt_mean;
    throw std::runtime_error("aggregate row not found");
}

double ec_of(const std::vector<AggregateRow>& rows, Scheme scheme, int users) {
    for (const AggregateRow& r : rows)
        if (r.scheme == scheme && r.point.num_users == users) return r.ec_mean;
    throw std::runtime_error("aggregate row not found");
}

double ee_of(const std::vector<AggregateRow>& rows, Scheme scheme, int users) {
    for (const AggregateRow& r : rows)
        if (r.scheme == scheme && r.point.num_users == users) return r.ee_mean;
    throw std::runtime_error("aggregate row not found");
}

const std::vector<Scheme> kAllSchemes{Scheme::Md2d, Scheme::Mc, Scheme::D2d, Scheme::Fdmac};
const std::vector<int> kUserSweep{5, 10, 15, 20, 25, 30};

ExperimentConfig default_sweep_config(std::uint64_t seed) {
    ExperimentConfig c;
    c.master_seed = seed;
    c.workers = 0;
    return c;
}

std::vector<AggregateRow> default_sweep(std::uint64_t seed, PropagationMode mode,
                                        std::vector<double> demands = {1e9}) {
    ExperimentConfig c = default_sweep_config(seed);
    c.mode = mode;
    c.demand_bits_sweep = std::move(demands);
    return aggregate_records(c, sweep_records(c));
}

// ---------------------------------------------------------------- criterion 1
CriterionResult feasibility_suite() {
    auto start = Clock::now();
    const int instances = 1040;
    int violations = 0;
    std::string first_failure;

    ExperimentConfig base;
    Codebook cb = make_codebook(base);
    for (int i = 0; i < instances; ++i) {
        int users = 5 + i % 26;
        PropagationMode mode = i % 2 == 0 ? PropagationMode::Los : PropagationMode::Nlos;
        std::uint64_t seed = derive_seed(20250, static_cast<std::uint64_t>(i));
        Topology t = generate_topology(users, 20.0, derive_seed(seed, 0));
        ChannelModel m = make_channel_model(base, mode, derive_seed(seed, 1));
        std::vector<NodeId> group = t.all_users();
        for (Scheme scheme : kAllSchemes) {
            SchemeResult r = run_scheme(scheme, t, group, cb, m, 30.0, 6.0, 10.0, 1e9, 18e-6);
            FeasibilityReport report =
                check_feasibility(r.schedule, r.partition, group, t, cb, m, 30.0);
            if (!report.all_pass()) {
                ++violations;
                if (first_failure.empty())
                    first_failure = to_string(scheme) + " instance " + std::to_string(i) + ": " +
                                    report.first_violation()->constraint;
            }
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::ostringstream oss;
    oss << instances << " instances x 4 schemes, " << violations << " violations in " << secs
        << " s";
    if (!first_failure.empty()) oss << " (first: " << first_failure << ")";
    return {violations == 0 && secs < 300.0, oss.str()};
}

// ---------------------------------------------------------------- criterion 2
CriterionResult oracle_dominance() {
    auto start = Clock::now();
    const int instances = 200;
    int dominance_failures = 0;
    int checker_failures = 0;
    std::vector<double> ratios;

    ExperimentConfig base;
    Codebook cb = make_codebook(base);
    ChannelModel m = make_channel_model(base, PropagationMode::Los, 0);
    for (int i = 0; i < instances; ++i) {
        std::uint64_t seed = derive_seed(40250, static_cast<std::uint64_t>(i));
        Topology t = generate_topology(4, 20.0, derive_seed(seed, 0));
        std::vector<NodeId> group = t.all_users();

        OracleSolution oracle = exhaustive_optimum(t, group, cb, m, 30.0, 1e9, 18e-6);
        SchemeResult md2d = md2d_schedule(t, group, cb, m, 30.0, 6.0, 10.0, 1e9, 18e-6);
        std::int64_t heuristic = total_slots(md2d.schedule);

        if (oracle.objective > heuristic) ++dominance_failures;
        ratios.push_back(static_cast<double>(heuristic) / static_cast<double>(oracle.objective));

        FeasibilityReport report = check_feasibility(oracle.best_schedule, oracle.best_partition,
                                                     group, t, cb, m, 30.0);
        if (!report.all_pass()) ++checker_failures;
    }
    std::sort(ratios.begin(), ratios.end());
    double median = (ratios[ratios.size() / 2] + ratios[(ratios.size() - 1) / 2]) / 2.0;
    double secs = std::chrono::duration<double>(Clock::now() - start).count();

    std::ostringstream oss;
    oss << instances << " instances, dominance failures " << dominance_failures
        << ", checker failures " << checker_failures << ", median MD2D/oracle " << median << " in "
        << secs << " s";
    return {dominance_failures == 0 && checker_failures == 0 && median <= 1.5 && secs < 600.0,
            oss.str()};
}

// ---------------------------------------------------------------- criterion 3
CriterionResult scheme_ordering() {
    auto rows = default_sweep(1, PropagationMode::Los);
    bool pass = true;
    std::ostringstream oss;
    for (int users : kUserSweep) {
        double md2d = nt_of(rows, Scheme::Md2d, users);
        double best_other = 0.0;
        for (Scheme s : {Scheme::Mc, Scheme::D2d, Scheme::Fdmac})
            best_other = std::max(best_other, nt_of(rows, s, users));
        bool ok = md2d >= best_other;
        pass = pass && ok;
        oss << "|U|=" << users << " MD2D/" << "best-other " << md2d / best_other
            << (ok ? " " : " <-- FAIL ");
    }
    return {pass, oss.str()};
}

// ---------------------------------------------------------------- criterion 4
CriterionResult gain_at_thirty_users() {
    auto rows = default_sweep(1, PropagationMode::Los);
    double md2d = nt_of(rows, Scheme::Md2d, 30);
    double second = 0.0;
    for (Scheme s : {Scheme::Mc, Scheme::D2d, Scheme::Fdmac})
        second = std::max(second, nt_of(rows, s, 30));
    double gain = md2d / second - 1.0;
    std::ostringstream oss;
    oss << "|U|=30 MD2D over second-best: " << gain * 100.0 << "% (band [10%, 45%])";
    return {gain >= 0.10 && gain <= 0.45, oss.str()};
}

// ---------------------------------------------------------------- criterion 5
CriterionResult gain_at_five_users() {
    auto rows = default_sweep(1, PropagationMode::Los);
    double md2d = nt_of(rows, Scheme::Md2d, 5);
    double second = 0.0;
    for (Scheme s : {Scheme::Mc, Scheme::D2d, Scheme::Fdmac})
        second = std::max(second, nt_of(rows, s, 5));
    double gain = md2d / second - 1.0;
    std::ostringstream oss;
    oss << "|U|=5 MD2D over second-best: " << gain * 100.0 << "% (band [2%, 25%])";
    return {gain >= 0.02 && gain <= 0.25, oss.str()};
}

// ---------------------------------------------------------------- criterion 6
CriterionResult fdmac_flatness() {
    auto rows = default_sweep(1, PropagationMode::Los);
    double at5 = nt_of(rows, Scheme::Fdmac, 5);
    double at30 = nt_of(rows, Scheme::Fdmac, 30);
    double variation = std::fabs(at30 / at5 - 1.0);
    std::ostringstream oss;
    oss << "FDMAC NT varies " << variation * 100.0 << "% between |U|=5 and |U|=30 (< 10%)";
    return {variation < 0.10, oss.str()};
}

// ---------------------------------------------------------------- criterion 7
CriterionResult demand_invariance() {
    ExperimentConfig c = default_sweep_config(1);
    c.num_users_sweep = {9};
    c.demand_bits_sweep = {1e9, 1e10};
    auto rows = aggregate_records(c, sweep_records(c));

    bool pass = true;
    std::ostringstream oss;
    for (Scheme s : kAllSchemes) {
        double nt1 = 0.0, nt10 = 0.0;
        for (const AggregateRow& r : rows) {
            if (r.scheme != s) continue;
            if (r.point.demand_bits == 1e9) nt1 = r.nt_mean;
            if (r.point.demand_bits == 1e10) nt10 = r.nt_mean;
        }
        double rel = std::fabs(nt10 / nt1 - 1.0);
        bool ok = rel < 0.02;
        pass = pass && ok;
        oss << to_string(s) << " " << rel * 100.0 << "%" << (ok ? "  " : " <-- FAIL  ");
    }
    oss << "(< 2% each)";
    return {pass, oss.str()};
}

// ---------------------------------------------------------------- criterion 8
CriterionResult threshold_surface() {
    const std::vector<double> r_grid{1, 2, 3, 4, 5, 6, 7, 8, 9};
    const std::vector<double> theta_grid{1, 5, 10, 15};

    double best_nt = -1.0, best_r = 0.0, best_theta = 0.0;
    for (double theta : theta_grid) {
        for (double r : r_grid) {
            ExperimentConfig c = default_sweep_config(1);
            c.schemes = {Scheme::Md2d};
            c.num_users_sweep = {9};
            c.r_th_m = r;
            c.theta_th_deg = theta;
            auto rows = aggregate_records(c, sweep_records(c));
            double nt = nt_of(rows, Scheme::Md2d, 9);
            if (nt > best_nt) {
                best_nt = nt;
                best_r = r;
                best_theta = theta;
            }
        }
    }
    bool pass = (best_theta == 5.0 || best_theta == 10.0) && best_r >= 4.0 && best_r <= 8.0;
    std::ostringstream oss;
    oss << "argmax at r_th=" << best_r << " m, theta_th=" << best_theta
        << " deg (expected theta in {5,10}, r in [4,8])";
    return {pass, oss.str()};
}

// ---------------------------------------------------------------- criterion 9
CriterionResult nlos_degradation() {
    auto los = default_sweep(1, PropagationMode::Los);
    auto nlos = default_sweep(1, PropagationMode::Nlos);
    bool pass = true;
    std::string failure;
    for (Scheme s : kAllSchemes) {
        for (int users : kUserSweep) {
            bool nt_ok = nt_of(nlos, s, users) < nt_of(los, s, users);
            bool ec_ok = ec_of(nlos, s, users) > ec_of(los, s, users);
            if (!(nt_ok && ec_ok)) {
                pass = false;
                if (failure.empty())
                    failure = to_string(s) + " |U|=" + std::to_string(users) +
                              (nt_ok ? " EC" : " NT");
            }
        }
    }
    std::ostringstream oss;
    oss << "NT lower and EC higher under NLOS for all schemes and sizes";
    if (!failure.empty()) oss << " (first failure: " << failure << ")";
    return {pass, oss.str()};
}

// --------------------------------------------------------------- criterion 10
CriterionResult energy_efficiency_dominance() {
    auto rows = default_sweep(1, PropagationMode::Los);
    bool pass = true;
    std::string failure;
    for (int users : kUserSweep) {
        double md2d = ee_of(rows, Scheme::Md2d, users);
        for (Scheme s : {Scheme::Mc, Scheme::D2d, Scheme::Fdmac}) {
            if (md2d < ee_of(rows, s, users)) {
                pass = false;
                if (failure.empty())
                    failure = to_string(s) + " |U|=" + std::to_string(users);
            }
        }
    }
    double ratio = ee_of(rows, Scheme::Md2d, 30) / ee_of(rows, Scheme::Mc, 30);
    std::ostringstream oss;
    oss << "EE(MD2D)/EE(MC) at |U|=30: " << ratio << " (>= 1.3)";
    if (!failure.empty()) oss << ", dominance broken at " << failure;
    return {pass && ratio >= 1.3, oss.str()};
}

// --------------------------------------------------------------- criterion 11
CriterionResult metric_identities() {
    ExperimentConfig base;
    Codebook cb = make_codebook(base);
    int checked = 0;
    int identity_failures = 0, timing_failures = 0;
    for (PropagationMode mode : {PropagationMode::Los, PropagationMode::Nlos}) {
        for (int users : {5, 10, 20, 30}) {
            for (int run = 0; run < 25; ++run) {
                std::uint64_t seed = derive_seed(110250, static_cast<std::uint64_t>(run) * 64 +
                                                             static_cast<std::uint64_t>(users));
                Topology t = generate_topology(users, 20.0, derive_seed(seed, 0));
                ChannelModel m = make_channel_model(base, mode, derive_seed(seed, 1));
                std::vector<NodeId> group = t.all_users();
                for (Scheme scheme : kAllSchemes) {
                    SchemeResult r =
                        run_scheme(scheme, t, group, cb, m, 30.0, 6.0, 10.0, 1e9, 18e-6);
                    MetricsReport report = compute_metrics(r.schedule, users, 30.0);
                    ++checked;
                    double lhs = report.energy_efficiency_bpj * report.energy_consumption_j;
                    if (std::fabs(lhs - report.network_throughput_bps) >
                        1e-12 * report.network_throughput_bps)
                        ++identity_failures;
                    double exact = 0.0, quantized = 0.0;
                    for (const Phase& p : r.schedule.phases) {
                        exact += r.schedule.demand_bits / p.rate_bps;
                        quantized += static_cast<double>(p.slots) * r.schedule.slot_duration_s;
                    }
                    if (exact > quantized) ++timing_failures;
                }
            }
        }
    }
    std::ostringstream oss;
    oss << checked << " runs: EE*EC=NT failures " << identity_failures
        << ", timing-base failures " << timing_failures;
    return {identity_failures == 0 && timing_failures == 0, oss.str()};
}

// --------------------------------------------------------------- criterion 12
CriterionResult complexity_slope() {
    ExperimentConfig base;
    Codebook cb = make_codebook(base);
    ChannelModel m = make_channel_model(base, PropagationMode::Los, 0);

    const std::vector<int> sizes{10, 20, 40, 80, 160};
    std::vector<double> log_n, log_t;
    std::ostringstream oss;
    std::size_t sink = 0;
    for (int n : sizes) {
        // average the partition time over enough repetitions to swamp noise
        double total = 0.0;
        int reps = 0;
        std::uint64_t seed = 120250;
        while (total < 0.25 || reps < 5) {
            Topology t = generate_topology(n, 20.0, derive_seed(seed, static_cast<std::uint64_t>(reps)));
            std::vector<NodeId> group = t.all_users();
            auto start = Clock::now();
            PartitionResult part = partition_and_plan(t, group, cb, m, 30.0, 6.0, 10.0, true);
            total += std::chrono::duration<double>(Clock::now() - start).count();
            ++reps;
            sink += part.subsets.size();  // observe the result across iterations
        }
        double per_call = total / reps;
        log_n.push_back(std::log(static_cast<double>(n)));
        log_t.push_back(std::log(per_call));
        oss << "n=" << n << " " << per_call * 1e3 << " ms (" << reps << " reps)  ";
    }

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        mx += log_n[i];
        my += log_t[i];
    }
    mx /= static_cast<double>(log_n.size());
    my /= static_cast<double>(log_n.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
        sxy += (log_n[i] - mx) * (log_t[i] - my);
        sxx += (log_n[i] - mx) * (log_n[i] - mx);
    }
    double slope = sxy / sxx;
    oss << "log-log slope " << slope << " (<= 3.3, " << sink << " subsets built)";
    return {slope <= 3.3, oss.str()};
}

// --------------------------------------------------------------- criterion 13
CriterionResult determinism() {
    ExperimentConfig c;
    c.num_users_sweep = {5, 9};
    c.runs_per_point = 5;
    c.master_seed = 77;

    std::filesystem::path base =
        std::filesystem::temp_directory_path() / "md2d_acceptance_determinism";
    std::filesystem::remove_all(base);

    auto csv_bytes = [&](const std::filesystem::path& dir, int workers) {
        ExperimentConfig run = c;
        run.workers = workers;
        SweepOutput out = sweep(run, dir);
        std::ifstream in(out.raw_csv_path, std::ios::binary);
        std::ostringstream oss;
        oss << in.rdbuf();
        return oss.str();
    };
    std::string serial_a = csv_bytes(base / "a", 1);
    std::string serial_b = csv_bytes(base / "b", 1);
    std::string parallel = csv_bytes(base / "c", 4);
    std::filesystem::remove_all(base);

    bool pass = !serial_a.empty() && serial_a == serial_b && serial_a == parallel;
    std::ostringstream oss;
    oss << "raw CSV byte-identical across repeats and worker counts ("
        << serial_a.size() << " bytes)";
    return {pass, oss.str()};
}

struct Criterion {
    int id;
    const char* name;
    std::function<CriterionResult()> run;
};

const std::vector<Criterion> kCriteria{
    {1, "feasibility-suite", feasibility_suite},
    {2, "oracle-dominance", oracle_dominance},
    {3, "scheme-ordering", scheme_ordering},
    {4, "throughput-gain-30-users", gain_at_thirty_users},
    {5, "throughput-gain-5-users", gain_at_five_users},
    {6, "fdmac-flatness", fdmac_flatness},
    {7, "demand-invariance", demand_invariance},
    {8, "threshold-surface", threshold_surface},
    {9, "nlos-degradation", nlos_degradation},
    {10, "energy-efficiency-dominance", energy_efficiency_dominance},
    {11, "metric-identities", metric_identities},
    {12, "complexity-slope", complexity_slope},
    {13, "determinism", determinism},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            selected.push_back(std::atoi(argv[++i]));
        } else if (std::strcmp(argv[i], "--list") == 0) {
            for (const Criterion& c : kCriteria) std::printf("%2d %s\n", c.id, c.name);
            return 0;
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion N]... [--list]\n");
            return 2;
        }
    }

    int failures = 0;
    for (const Criterion& c : kCriteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), c.id) == selected.end())
            continue;
        auto start = Clock::now();
        CriterionResult result;
        try {
            result = c.run();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(Clock::now() - start).count();
        std::printf("%s criterion %2d (%s): %s [%.1f s]\n", result.pass ? "PASS" : "FAIL", c.id,
                    c.name, result.detail.c_str(), secs);
        std::fflush(stdout);
        if (!result.pass) ++failures;
    }
    return failures;
}
