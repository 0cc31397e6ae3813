#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "md2d/errors.hpp"
#include "md2d/partition.hpp"

namespace md2d {

/// One multicast transmission phase: delta slots of tx_node -> subset at
/// rate rate_bps through tx_beam.
struct Phase {
    int phase_index = 0;  ///< 1-based position in the frame
    NodeId tx_node = kApNode;
    int target_subset_id = 0;
    Beam tx_beam;
    double rate_bps = 0.0;
    std::int64_t slots = 0;
};

struct Schedule {
    std::vector<Phase> phases;
    double demand_bits = 0.0;
    double slot_duration_s = 0.0;
};

/// ceil(D / (R * delta)): the minimum whole number of slots that moves D
/// bits at rate R.
inline std::int64_t slots_needed(double demand_bits, double rate_bps, double slot_duration_s) {
    return static_cast<std::int64_t>(std::ceil(demand_bits / (rate_bps * slot_duration_s)));
}

/// Multicast scheduling: one phase per real subset, in allocation order,
/// which already satisfies the D2D precedence constraint. Rates are
/// recomputed live from the partition's transmitter and beam, never read
/// from a cache.
inline Schedule build_schedule(const PartitionResult& partition, double demand_bits,
                               double slot_duration_s, const Topology& topology,
                               const Codebook& codebook, const ChannelModel& model,
                               double tx_power_dbm) {
    if (!(demand_bits > 0.0)) throw std::invalid_argument("build_schedule: demand must be > 0");
    if (!(slot_duration_s > 0.0))
        throw std::invalid_argument("build_schedule: slot duration must be > 0");

    Schedule schedule;
    schedule.demand_bits = demand_bits;
    schedule.slot_duration_s = slot_duration_s;
    for (std::size_t i = 1; i < partition.subsets.size(); ++i) {
        const Subset& sub = partition.subsets[i];
        double min_rate = std::numeric_limits<double>::infinity();
        for (NodeId m : sub.members) {
            min_rate = std::min(min_rate, link_rate(topology, sub.transmit_node, sub.tx_beam, m,
                                                    codebook, model, tx_power_dbm));
        }
        if (!(min_rate > 0.0)) {
            std::ostringstream oss;
            oss << "build_schedule: subset " << sub.subset_id << " has zero rate";
            throw InfeasibleScheduleError(oss.str());
        }
        Phase phase;
        phase.phase_index = static_cast<int>(schedule.phases.size()) + 1;
        phase.tx_node = sub.transmit_node;
        phase.target_subset_id = sub.subset_id;
        phase.tx_beam = sub.tx_beam;
        phase.rate_bps = min_rate;
        phase.slots = slots_needed(demand_bits, min_rate, slot_duration_s);
        schedule.phases.push_back(phase);
    }
    return schedule;
}

/// Total frame length in slots, the optimization objective.
inline std::int64_t total_slots(const Schedule& schedule) {
    std::int64_t sum = 0;
    for (const Phase& p : schedule.phases) sum += p.slots;
    return sum;
}

struct ConstraintResult {
    std::string constraint;   ///< short id, e.g. "cover", "demand", "precedence"
    std::string description;
    bool pass = true;
    std::string violations;
};

struct FeasibilityReport {
    std::vector<ConstraintResult> results;

    bool all_pass() const {
        for (const auto& r : results)
            if (!r.pass) return false;
        return true;
    }

    const ConstraintResult* first_violation() const {
        for (const auto& r : results)
            if (!r.pass) return &r;
        return nullptr;
    }

    std::string summary() const {
        std::ostringstream oss;
        for (const auto& r : results) {
            oss << (r.pass ? "pass " : "FAIL ") << r.constraint << " " << r.description;
            if (!r.pass) oss << " [" << r.violations << "]";
            oss << "\n";
        }
        return oss.str();
    }
};

/// Independent feasibility check of a schedule against its partition and
/// the raw geometry. Every rate is recomputed from node positions and beam
/// parameters; nothing cached in the inputs is trusted. Violations are
/// report entries, not exceptions.
inline FeasibilityReport check_feasibility(const Schedule& schedule,
                                           const PartitionResult& partition,
                                           std::span<const NodeId> group,
                                           const Topology& topology, const Codebook& codebook,
                                           const ChannelModel& model, double tx_power_dbm) {
    FeasibilityReport report;
    auto add = [&report](const std::string& id, const std::string& desc, bool pass,
                         const std::string& viol) {
        report.results.push_back({id, desc, pass, viol});
    };
    std::ostringstream viol;

    const int num_subsets = partition.num_user_subsets();

    // the subsets cover the group exactly, pairwise disjoint
    {
        std::map<NodeId, int> seen;
        viol.str("");
        bool ok = true;
        for (std::size_t i = 1; i < partition.subsets.size(); ++i) {
            for (NodeId m : partition.subsets[i].members) seen[m]++;
        }
        for (NodeId g : group) {
            auto it = seen.find(g);
            if (it == seen.end()) {
                ok = false;
                viol << " missing node " << g << ";";
            } else if (it->second != 1) {
                ok = false;
                viol << " node " << g << " in " << it->second << " subsets;";
            }
        }
        for (const auto& [node, count] : seen) {
            if (std::find(group.begin(), group.end(), node) == group.end()) {
                ok = false;
                viol << " node " << node << " outside group;";
            }
        }
        add("cover", "subsets partition the multicast group", ok, viol.str());
    }

    // 1 <= S <= |U|, no empty subset
    {
        viol.str("");
        bool ok = num_subsets >= 1 && num_subsets <= static_cast<int>(group.size());
        if (!ok) viol << " S=" << num_subsets << " outside [1, " << group.size() << "];";
        for (std::size_t i = 1; i < partition.subsets.size(); ++i) {
            if (partition.subsets[i].members.empty()) {
                ok = false;
                viol << " subset " << partition.subsets[i].subset_id << " empty;";
            }
        }
        add("subset-count", "subset count within bounds", ok, viol.str());
    }

    // each phase targets exactly one existing subset
    {
        viol.str("");
        bool ok = true;
        for (const Phase& p : schedule.phases) {
            if (p.target_subset_id < 1 || p.target_subset_id > num_subsets) {
                ok = false;
                viol << " phase " << p.phase_index << " targets unknown subset "
                     << p.target_subset_id << ";";
            }
        }
        add("assignment", "phase targets are valid subset indicators", ok, viol.str());
    }

    // every subset scheduled exactly once
    {
        viol.str("");
        bool ok = true;
        std::map<int, int> times;
        for (const Phase& p : schedule.phases) times[p.target_subset_id]++;
        for (int t = 1; t <= num_subsets; ++t) {
            int n = times.count(t) ? times[t] : 0;
            if (n != 1) {
                ok = false;
                viol << " subset " << t << " scheduled " << n << " times;";
            }
        }
        add("scheduled-once", "each subset scheduled exactly once", ok, viol.str());
    }

    // Recompute per-phase rates from raw geometry. Shared by the min-rate
    // and demand checks.
    std::vector<double> true_rates(schedule.phases.size(), 0.0);
    {
        viol.str("");
        bool ok = true;
        for (std::size_t k = 0; k < schedule.phases.size(); ++k) {
            const Phase& p = schedule.phases[k];
            if (p.target_subset_id < 1 || p.target_subset_id > num_subsets) continue;
            const Subset& sub = partition.subsets[static_cast<std::size_t>(p.target_subset_id)];
            double min_rate = std::numeric_limits<double>::infinity();
            bool valid = true;
            for (NodeId m : sub.members) {
                if (m == p.tx_node ||
                    distance(topology.position_of(m), topology.position_of(p.tx_node)) == 0.0) {
                    valid = false;
                    break;
                }
                min_rate = std::min(min_rate, link_rate(topology, p.tx_node, p.tx_beam, m,
                                                        codebook, model, tx_power_dbm));
            }
            if (!valid) {
                ok = false;
                viol << " phase " << p.phase_index << " has a degenerate link;";
                continue;
            }
            true_rates[k] = min_rate;
            double rel = std::fabs(min_rate - p.rate_bps) /
                         std::max({std::fabs(min_rate), std::fabs(p.rate_bps), 1.0});
            if (rel > 1e-9) {
                ok = false;
                viol << " phase " << p.phase_index << " rate " << p.rate_bps
                     << " != recomputed " << min_rate << ";";
            }
        }
        add("min-rate", "phase rate equals min member rate", ok, viol.str());
    }

    // every transmit beam is a codebook entry
    {
        viol.str("");
        bool ok = true;
        for (const Phase& p : schedule.phases) {
            const Beam& b = p.tx_beam;
            bool member = false;
            if (b.level_index >= 0 && b.level_index < static_cast<int>(codebook.levels.size())) {
                const auto& beams = codebook.levels[static_cast<std::size_t>(b.level_index)].beams;
                if (b.beam_index >= 0 && b.beam_index < static_cast<int>(beams.size()))
                    member = beams[static_cast<std::size_t>(b.beam_index)] == b;
            }
            if (!member) {
                ok = false;
                viol << " phase " << p.phase_index << " beam not in codebook;";
            }
        }
        add("beam-membership", "beams drawn from the codebook", ok, viol.str());
    }

    // the schedule meets the demand for every subset
    {
        viol.str("");
        bool ok = true;
        for (std::size_t k = 0; k < schedule.phases.size(); ++k) {
            const Phase& p = schedule.phases[k];
            double delivered = true_rates[k] * static_cast<double>(p.slots) *
                               schedule.slot_duration_s;
            if (delivered < schedule.demand_bits * (1.0 - 1e-12)) {
                ok = false;
                viol << " phase " << p.phase_index << " delivers " << delivered << " < demand;";
            }
        }
        add("demand", "demand met in every phase", ok, viol.str());
    }

    // D2D precedence: a non-AP transmitter must belong to a subset
    // whose own phase comes earlier
    {
        viol.str("");
        bool ok = true;
        for (std::size_t k = 0; k < schedule.phases.size(); ++k) {
            const Phase& p = schedule.phases[k];
            if (p.tx_node == kApNode) continue;
            bool served_before = false;
            for (std::size_t j = 0; j < k && !served_before; ++j) {
                int tid = schedule.phases[j].target_subset_id;
                if (tid < 1 || tid > num_subsets) continue;
                const auto& members = partition.subsets[static_cast<std::size_t>(tid)].members;
                served_before =
                    std::find(members.begin(), members.end(), p.tx_node) != members.end();
            }
            if (!served_before) {
                ok = false;
                viol << " phase " << p.phase_index << " transmitter " << p.tx_node
                     << " not served earlier;";
            }
        }
        add("precedence", "transmitters hold the data before serving", ok, viol.str());
    }

    return report;
}

}  // namespace md2d
