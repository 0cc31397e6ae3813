#pragma once

#include <string>

#include "md2d/partition.hpp"
#include "md2d/schedule.hpp"

namespace md2d {

enum class Scheme { Md2d, Mc, D2d, Fdmac };

inline std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::Md2d: return "MD2D";
        case Scheme::Mc: return "MC";
        case Scheme::D2d: return "D2D";
        case Scheme::Fdmac: return "FDMAC";
    }
    return "?";
}

inline Scheme scheme_from_string(const std::string& name) {
    if (name == "MD2D") return Scheme::Md2d;
    if (name == "MC") return Scheme::Mc;
    if (name == "D2D") return Scheme::D2d;
    if (name == "FDMAC") return Scheme::Fdmac;
    throw std::invalid_argument("unknown scheme: " + name);
}

/// A scheme's full output: the partition it implies plus the schedule built
/// from it. Baselines that have no native partition (FDMAC, D2D) expose
/// their singleton subsets here so the feasibility checker can run on them.
struct SchemeResult {
    PartitionResult partition;
    Schedule schedule;
};

namespace detail {

/// Best finest-level beam from tx toward a single target by rate; ties to
/// the lower beam index.
inline std::pair<Beam, double> best_finest_beam(const Topology& topology, NodeId tx, NodeId target,
                                                const Codebook& codebook, const ChannelModel& model,
                                                double tx_power_dbm) {
    const Beam* best = nullptr;
    double best_rate = -1.0;
    for (const Beam& b : codebook.finest_level().beams) {
        double r = link_rate(topology, tx, b, target, codebook, model, tx_power_dbm);
        if (best == nullptr || r > best_rate || (r == best_rate && b.beam_index < best->beam_index)) {
            best = &b;
            best_rate = r;
        }
    }
    return {*best, best_rate};
}

}  // namespace detail

/// MD2D: user partition and path planning with D2D enabled, then phase
/// scheduling in allocation order.
inline SchemeResult md2d_schedule(const Topology& topology, std::span<const NodeId> group,
                                  const Codebook& codebook, const ChannelModel& model,
                                  double tx_power_dbm, double r_th_m, double theta_th_deg,
                                  double demand_bits, double slot_duration_s) {
    SchemeResult out;
    out.partition = partition_and_plan(topology, group, codebook, model, tx_power_dbm, r_th_m,
                                       theta_th_deg, /*d2d_enabled=*/true);
    out.schedule = build_schedule(out.partition, demand_bits, slot_duration_s, topology, codebook,
                                  model, tx_power_dbm);
    return out;
}

/// MC: same partitioning machinery with D2D disabled, so the AP serves
/// every subset with its best codebook beam.
inline SchemeResult mc_schedule(const Topology& topology, std::span<const NodeId> group,
                                const Codebook& codebook, const ChannelModel& model,
                                double tx_power_dbm, double r_th_m, double theta_th_deg,
                                double demand_bits, double slot_duration_s) {
    SchemeResult out;
    out.partition = partition_and_plan(topology, group, codebook, model, tx_power_dbm, r_th_m,
                                       theta_th_deg, /*d2d_enabled=*/false);
    out.schedule = build_schedule(out.partition, demand_bits, slot_duration_s, topology, codebook,
                                  model, tx_power_dbm);
    return out;
}

/// FDMAC: the AP serves the users one by one in ascending node id, always
/// through the best finest-level beam.
inline SchemeResult fdmac_schedule(const Topology& topology, std::span<const NodeId> group,
                                   const Codebook& codebook, const ChannelModel& model,
                                   double tx_power_dbm, double demand_bits,
                                   double slot_duration_s) {
    if (group.empty()) throw std::invalid_argument("fdmac_schedule: empty group");
    std::vector<NodeId> users(group.begin(), group.end());
    std::sort(users.begin(), users.end());

    SchemeResult out;
    out.partition.r_th_m = 0.0;
    out.partition.theta_th_deg = 0.0;
    out.partition.d2d_enabled = false;
    Subset ap;
    ap.subset_id = 0;
    ap.members = {kApNode};
    out.partition.subsets.push_back(std::move(ap));

    for (NodeId u : users) {
        auto [beam, rate] = detail::best_finest_beam(topology, kApNode, u, codebook, model,
                                                     tx_power_dbm);
        Subset sub;
        sub.subset_id = static_cast<int>(out.partition.subsets.size());
        sub.members = {u};
        sub.serving_subset_id = 0;
        sub.transmit_node = kApNode;
        sub.tx_beam = beam;
        sub.subset_rate_bps = rate;
        out.partition.subsets.push_back(std::move(sub));
    }
    out.schedule = build_schedule(out.partition, demand_bits, slot_duration_s, topology, codebook,
                                  model, tx_power_dbm);
    return out;
}

/// D2D-only baseline: finest beams, one user per phase. Greedy chain: among
/// all (holder, unserved) pairs, where holders are the AP plus users already
/// served, serve the pair with the highest finest-beam rate next. Ties go to
/// the lower holder id, then lower user id. The greedy max-rate rule is an
/// interpretation of the one-sentence scheme definition and is isolated here
/// for easy substitution.
inline SchemeResult d2d_schedule(const Topology& topology, std::span<const NodeId> group,
                                 const Codebook& codebook, const ChannelModel& model,
                                 double tx_power_dbm, double demand_bits, double slot_duration_s) {
    if (group.empty()) throw std::invalid_argument("d2d_schedule: empty group");
    std::vector<NodeId> unserved(group.begin(), group.end());
    std::sort(unserved.begin(), unserved.end());
    unserved.erase(std::unique(unserved.begin(), unserved.end()), unserved.end());

    SchemeResult out;
    out.partition.r_th_m = 0.0;
    out.partition.theta_th_deg = 0.0;
    out.partition.d2d_enabled = true;
    Subset ap;
    ap.subset_id = 0;
    ap.members = {kApNode};
    out.partition.subsets.push_back(std::move(ap));

    std::vector<NodeId> holders{kApNode};
    std::vector<int> holder_subset{0};  // subset id each holder belongs to

    while (!unserved.empty()) {
        bool found = false;
        double best_rate = -1.0;
        NodeId best_holder = kApNode, best_user = -1;
        int best_holder_subset = 0;
        Beam best_beam;
        for (std::size_t h = 0; h < holders.size(); ++h) {
            for (NodeId u : unserved) {
                if (distance(topology.position_of(holders[h]), topology.position_of(u)) == 0.0)
                    continue;
                auto [beam, r] = detail::best_finest_beam(topology, holders[h], u, codebook, model,
                                                          tx_power_dbm);
                bool better = r > best_rate ||
                              (r == best_rate &&
                               (holders[h] < best_holder ||
                                (holders[h] == best_holder && u < best_user)));
                if (!found || better) {
                    found = true;
                    best_rate = r;
                    best_holder = holders[h];
                    best_user = u;
                    best_holder_subset = holder_subset[h];
                    best_beam = beam;
                }
            }
        }
        if (!found || !(best_rate > 0.0))
            throw InfeasibleScheduleError("d2d_schedule: no serviceable (holder, user) pair");

        Subset sub;
        sub.subset_id = static_cast<int>(out.partition.subsets.size());
        sub.members = {best_user};
        sub.serving_subset_id = best_holder_subset;
        sub.transmit_node = best_holder;
        sub.tx_beam = best_beam;
        sub.subset_rate_bps = best_rate;
        holders.push_back(best_user);
        holder_subset.push_back(sub.subset_id);
        out.partition.subsets.push_back(std::move(sub));
        std::erase(unserved, best_user);
    }
    out.schedule = build_schedule(out.partition, demand_bits, slot_duration_s, topology, codebook,
                                  model, tx_power_dbm);
    return out;
}

/// Dispatch a scheme by enum. FDMAC and D2D ignore the partition thresholds.
inline SchemeResult run_scheme(Scheme scheme, const Topology& topology,
                               std::span<const NodeId> group, const Codebook& codebook,
                               const ChannelModel& model, double tx_power_dbm, double r_th_m,
                               double theta_th_deg, double demand_bits, double slot_duration_s) {
    switch (scheme) {
        case Scheme::Md2d:
            return md2d_schedule(topology, group, codebook, model, tx_power_dbm, r_th_m,
                                 theta_th_deg, demand_bits, slot_duration_s);
        case Scheme::Mc:
            return mc_schedule(topology, group, codebook, model, tx_power_dbm, r_th_m,
                               theta_th_deg, demand_bits, slot_duration_s);
        case Scheme::D2d:
            return d2d_schedule(topology, group, codebook, model, tx_power_dbm, demand_bits,
                                slot_duration_s);
        case Scheme::Fdmac:
            return fdmac_schedule(topology, group, codebook, model, tx_power_dbm, demand_bits,
                                  slot_duration_s);
    }
    throw std::invalid_argument("run_scheme: unknown scheme");
}

}  // namespace md2d
