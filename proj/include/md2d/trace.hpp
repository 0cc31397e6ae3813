#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "md2d/partition.hpp"
#include "md2d/schedule.hpp"
#include "md2d/topology.hpp"

namespace md2d {

class TraceError : public std::runtime_error {
  public:
    explicit TraceError(const std::string& what) : std::runtime_error(what) {}
};

/// Shortest decimal form that round-trips a double exactly.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Plain-text topology record: seed, area, AP point, user points.
inline void write_topology(std::ostream& out, const Topology& topo) {
    out << "topology v1\n";
    out << "seed " << topo.seed << "\n";
    out << "area " << format_double(topo.area_side_m) << "\n";
    out << "ap " << format_double(topo.ap_position.x) << " " << format_double(topo.ap_position.y)
        << "\n";
    out << "users " << topo.num_users() << "\n";
    for (const Point2D& p : topo.user_positions)
        out << format_double(p.x) << " " << format_double(p.y) << "\n";
}

namespace detail {

inline void expect_token(std::istream& in, const std::string& want) {
    std::string got;
    if (!(in >> got) || got != want)
        throw TraceError("expected '" + want + "', got '" + got + "'");
}

template <typename T>
T read_value(std::istream& in, const std::string& what) {
    T v;
    if (!(in >> v)) throw TraceError("malformed " + what);
    return v;
}

}  // namespace detail

inline Topology read_topology(std::istream& in) {
    using detail::expect_token;
    using detail::read_value;
    expect_token(in, "topology");
    expect_token(in, "v1");
    Topology topo;
    expect_token(in, "seed");
    topo.seed = read_value<std::uint64_t>(in, "seed");
    expect_token(in, "area");
    topo.area_side_m = read_value<double>(in, "area");
    expect_token(in, "ap");
    topo.ap_position.x = read_value<double>(in, "ap x");
    topo.ap_position.y = read_value<double>(in, "ap y");
    expect_token(in, "users");
    int n = read_value<int>(in, "user count");
    if (n < 0) throw TraceError("negative user count");
    topo.user_positions.resize(static_cast<std::size_t>(n));
    for (auto& p : topo.user_positions) {
        p.x = read_value<double>(in, "user x");
        p.y = read_value<double>(in, "user y");
    }
    return topo;
}

/// Combined debugging trace: topology, partition and schedule in one
/// self-contained file, consumed by the `check` CLI subcommand and tests.
struct TraceFile {
    Topology topology;
    PartitionResult partition;
    Schedule schedule;
};

inline void write_trace(std::ostream& out, const Topology& topo, const PartitionResult& partition,
                        const Schedule& schedule) {
    out << "trace v1\n";
    write_topology(out, topo);
    out << "partition r_th " << format_double(partition.r_th_m) << " theta_th "
        << format_double(partition.theta_th_deg) << " d2d " << (partition.d2d_enabled ? 1 : 0)
        << "\n";
    out << "subsets " << partition.num_user_subsets() << "\n";
    for (std::size_t i = 1; i < partition.subsets.size(); ++i) {
        const Subset& s = partition.subsets[i];
        out << "subset " << s.subset_id << " serving " << s.serving_subset_id << " tx "
            << s.transmit_node << " beam " << s.tx_beam.level_index << " " << s.tx_beam.beam_index
            << " rate " << format_double(s.subset_rate_bps) << " members " << s.members.size();
        for (NodeId m : s.members) out << " " << m;
        out << "\n";
    }
    out << "schedule demand " << format_double(schedule.demand_bits) << " slot "
        << format_double(schedule.slot_duration_s) << "\n";
    out << "phases " << schedule.phases.size() << "\n";
    for (const Phase& p : schedule.phases) {
        out << "phase " << p.phase_index << " target " << p.target_subset_id << " tx " << p.tx_node
            << " beam " << p.tx_beam.level_index << " " << p.tx_beam.beam_index << " rate "
            << format_double(p.rate_bps) << " slots " << p.slots << "\n";
    }
}

/// Resolve a (level, index) pair against the codebook. Out-of-range indexes
/// yield a sentinel beam carrying just those indexes, which the constraint
/// checker then flags as a non-member.
inline Beam resolve_beam(const Codebook& codebook, int level, int index) {
    if (level >= 0 && level < static_cast<int>(codebook.levels.size())) {
        const auto& beams = codebook.levels[static_cast<std::size_t>(level)].beams;
        if (index >= 0 && index < static_cast<int>(beams.size()))
            return beams[static_cast<std::size_t>(index)];
    }
    Beam sentinel;
    sentinel.level_index = level;
    sentinel.beam_index = index;
    return sentinel;
}

inline TraceFile read_trace(std::istream& in, const Codebook& codebook) {
    using detail::expect_token;
    using detail::read_value;
    expect_token(in, "trace");
    expect_token(in, "v1");
    TraceFile t;
    t.topology = read_topology(in);

    expect_token(in, "partition");
    expect_token(in, "r_th");
    t.partition.r_th_m = read_value<double>(in, "r_th");
    expect_token(in, "theta_th");
    t.partition.theta_th_deg = read_value<double>(in, "theta_th");
    expect_token(in, "d2d");
    t.partition.d2d_enabled = read_value<int>(in, "d2d flag") != 0;

    Subset ap;
    ap.subset_id = 0;
    ap.members = {kApNode};
    t.partition.subsets.push_back(std::move(ap));

    expect_token(in, "subsets");
    int num_subsets = read_value<int>(in, "subset count");
    for (int i = 0; i < num_subsets; ++i) {
        Subset s;
        expect_token(in, "subset");
        s.subset_id = read_value<int>(in, "subset id");
        expect_token(in, "serving");
        s.serving_subset_id = read_value<int>(in, "serving id");
        expect_token(in, "tx");
        s.transmit_node = read_value<NodeId>(in, "tx node");
        expect_token(in, "beam");
        int level = read_value<int>(in, "beam level");
        int index = read_value<int>(in, "beam index");
        s.tx_beam = resolve_beam(codebook, level, index);
        expect_token(in, "rate");
        s.subset_rate_bps = read_value<double>(in, "rate");
        expect_token(in, "members");
        int count = read_value<int>(in, "member count");
        for (int m = 0; m < count; ++m) s.members.push_back(read_value<NodeId>(in, "member id"));
        t.partition.subsets.push_back(std::move(s));
    }

    expect_token(in, "schedule");
    expect_token(in, "demand");
    t.schedule.demand_bits = read_value<double>(in, "demand");
    expect_token(in, "slot");
    t.schedule.slot_duration_s = read_value<double>(in, "slot duration");
    expect_token(in, "phases");
    int num_phases = read_value<int>(in, "phase count");
    for (int i = 0; i < num_phases; ++i) {
        Phase p;
        expect_token(in, "phase");
        p.phase_index = read_value<int>(in, "phase index");
        expect_token(in, "target");
        p.target_subset_id = read_value<int>(in, "target subset");
        expect_token(in, "tx");
        p.tx_node = read_value<NodeId>(in, "tx node");
        expect_token(in, "beam");
        int level = read_value<int>(in, "beam level");
        int index = read_value<int>(in, "beam index");
        p.tx_beam = resolve_beam(codebook, level, index);
        expect_token(in, "rate");
        p.rate_bps = read_value<double>(in, "rate");
        expect_token(in, "slots");
        p.slots = read_value<std::int64_t>(in, "slots");
        t.schedule.phases.push_back(p);
    }
    return t;
}

}  // namespace md2d
