#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>

#include "md2d/baselines.hpp"
#include "md2d/schedule.hpp"

namespace md2d {

/// Visit every set partition of `elements` exactly once, in
/// restricted-growth-string order. Guarded at 12 elements (Bell numbers
/// explode past that).
inline void visit_set_partitions(std::span<const NodeId> elements,
                                 const std::function<void(const std::vector<std::vector<NodeId>>&)>& fn) {
    const std::size_t n = elements.size();
    if (n == 0) throw std::invalid_argument("visit_set_partitions: empty element set");
    if (n > 12) throw std::invalid_argument("visit_set_partitions: more than 12 elements refused");

    std::vector<int> assign(n, 0);
    std::vector<std::vector<NodeId>> blocks;
    auto emit = [&] {
        int num_blocks = *std::max_element(assign.begin(), assign.end()) + 1;
        blocks.assign(static_cast<std::size_t>(num_blocks), {});
        for (std::size_t i = 0; i < n; ++i)
            blocks[static_cast<std::size_t>(assign[i])].push_back(elements[i]);
        fn(blocks);
    };
    // odometer over restricted growth strings: a[0] = 0, a[i] <= max(a[:i]) + 1
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int max_so_far) {
        if (i == n) {
            emit();
            return;
        }
        for (int v = 0; v <= max_so_far + 1; ++v) {
            assign[i] = v;
            rec(i + 1, std::max(max_so_far, v));
        }
    };
    rec(0, -1);
}

/// Materialized variant of visit_set_partitions for small element sets.
inline std::vector<std::vector<std::vector<NodeId>>> enumerate_set_partitions(
    std::span<const NodeId> elements) {
    std::vector<std::vector<std::vector<NodeId>>> all;
    visit_set_partitions(elements, [&](const std::vector<std::vector<NodeId>>& p) { all.push_back(p); });
    return all;
}

struct OracleSolution {
    PartitionResult best_partition;
    Schedule best_schedule;
    std::int64_t objective = 0;
    std::uint64_t explored = 0;  ///< complete candidate solutions evaluated
};

/// Exact optimum of the multicast scheduling problem on a tiny instance,
/// by brute force: every set partition of the group, every phase order,
/// every precedence-respecting transmitter assignment, and every codebook
/// beam per phase. Receive beams stay pinned to the finest level, the same
/// restriction the heuristic works under. Ties resolve to the first
/// candidate in enumeration order, i.e. the lexicographically smallest
/// (growth string, phase order, transmitter vector) encoding.
inline OracleSolution exhaustive_optimum(const Topology& topology, std::span<const NodeId> group,
                                         const Codebook& codebook, const ChannelModel& model,
                                         double tx_power_dbm, double demand_bits,
                                         double slot_duration_s, std::size_t max_group_size = 5) {
    if (group.empty()) throw std::invalid_argument("exhaustive_optimum: empty group");
    if (group.size() > max_group_size)
        throw std::invalid_argument("exhaustive_optimum: group larger than the explosion guard");
    if (!(demand_bits > 0.0) || !(slot_duration_s > 0.0))
        throw std::invalid_argument("exhaustive_optimum: demand and slot duration must be > 0");

    std::vector<NodeId> members(group.begin(), group.end());
    std::sort(members.begin(), members.end());

    struct PhaseChoice {
        Beam beam;
        double rate = 0.0;
        std::int64_t slots = 0;
    };
    struct Best {
        bool set = false;
        std::int64_t objective = 0;
        std::vector<std::vector<NodeId>> blocks;
        std::vector<std::size_t> order;
        std::vector<NodeId> tx;
        std::vector<PhaseChoice> choices;
    } best;
    std::uint64_t explored = 0;

    visit_set_partitions(members, [&](const std::vector<std::vector<NodeId>>& blocks) {
        const std::size_t m = blocks.size();

        // Best beam per (transmitter, block): exhaustive max-min over the
        // whole codebook; nullopt when some link is degenerate or dead.
        std::map<std::pair<NodeId, std::size_t>, std::optional<PhaseChoice>> memo;
        auto phase_choice = [&](NodeId tx, std::size_t block) -> const std::optional<PhaseChoice>& {
            auto key = std::make_pair(tx, block);
            auto it = memo.find(key);
            if (it != memo.end()) return it->second;
            std::optional<PhaseChoice> result;
            bool degenerate = false;
            for (NodeId t : blocks[block]) {
                if (tx == t || distance(topology.position_of(tx), topology.position_of(t)) == 0.0) {
                    degenerate = true;
                    break;
                }
            }
            if (!degenerate) {
                const Beam* best_beam = nullptr;
                double best_rate = -1.0;
                for (const auto& level : codebook.levels) {
                    for (const Beam& b : level.beams) {
                        double r = std::numeric_limits<double>::infinity();
                        for (NodeId t : blocks[block])
                            r = std::min(r, link_rate(topology, tx, b, t, codebook, model,
                                                      tx_power_dbm));
                        if (best_beam == nullptr || r > best_rate ||
                            (r == best_rate &&
                             (b.theta_3db_deg < best_beam->theta_3db_deg ||
                              (b.theta_3db_deg == best_beam->theta_3db_deg &&
                               b.beam_index < best_beam->beam_index)))) {
                            best_beam = &b;
                            best_rate = r;
                        }
                    }
                }
                if (best_beam != nullptr && best_rate > 0.0)
                    result = PhaseChoice{*best_beam, best_rate,
                                         slots_needed(demand_bits, best_rate, slot_duration_s)};
            }
            return memo.emplace(key, result).first->second;
        };

        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::vector<NodeId> tx_assign(m);
        std::vector<PhaseChoice> choices(m);

        do {
            // enumerate transmitters phase by phase: AP or any member of an
            // earlier-scheduled block, ascending node id
            std::function<void(std::size_t, std::int64_t)> assign = [&](std::size_t k,
                                                                        std::int64_t acc) {
                if (k == m) {
                    ++explored;
                    if (!best.set || acc < best.objective) {
                        best.set = true;
                        best.objective = acc;
                        best.blocks = blocks;
                        best.order = order;
                        best.tx = tx_assign;
                        best.choices = choices;
                    }
                    return;
                }
                std::vector<NodeId> candidates{kApNode};
                for (std::size_t j = 0; j < k; ++j)
                    for (NodeId u : blocks[order[j]]) candidates.push_back(u);
                std::sort(candidates.begin(), candidates.end());
                for (NodeId tx : candidates) {
                    const auto& choice = phase_choice(tx, order[k]);
                    if (!choice) continue;
                    tx_assign[k] = tx;
                    choices[k] = *choice;
                    assign(k + 1, acc + choice->slots);
                }
            };
            assign(0, 0);
        } while (std::next_permutation(order.begin(), order.end()));
    });

    if (!best.set)
        throw InfeasibleScheduleError("exhaustive_optimum: no feasible candidate solution");

    // Rebuild the winning candidate as a partition + schedule, subsets
    // re-indexed in phase order so precedence reads structurally.
    OracleSolution solution;
    solution.objective = best.objective;
    solution.explored = explored;
    solution.best_partition.r_th_m = 0.0;
    solution.best_partition.theta_th_deg = 0.0;
    solution.best_partition.d2d_enabled = true;
    Subset ap;
    ap.subset_id = 0;
    ap.members = {kApNode};
    solution.best_partition.subsets.push_back(std::move(ap));

    auto subset_of = [&](NodeId node) -> int {
        if (node == kApNode) return 0;
        for (std::size_t k = 0; k < best.order.size(); ++k) {
            const auto& block = best.blocks[best.order[k]];
            if (std::find(block.begin(), block.end(), node) != block.end())
                return static_cast<int>(k) + 1;
        }
        return -1;
    };

    solution.best_schedule.demand_bits = demand_bits;
    solution.best_schedule.slot_duration_s = slot_duration_s;
    for (std::size_t k = 0; k < best.order.size(); ++k) {
        Subset sub;
        sub.subset_id = static_cast<int>(k) + 1;
        sub.members = best.blocks[best.order[k]];
        std::sort(sub.members.begin(), sub.members.end());
        sub.serving_subset_id = subset_of(best.tx[k]);
        sub.transmit_node = best.tx[k];
        sub.tx_beam = best.choices[k].beam;
        sub.subset_rate_bps = best.choices[k].rate;
        solution.best_partition.subsets.push_back(sub);

        Phase phase;
        phase.phase_index = static_cast<int>(k) + 1;
        phase.tx_node = best.tx[k];
        phase.target_subset_id = static_cast<int>(k) + 1;
        phase.tx_beam = best.choices[k].beam;
        phase.rate_bps = best.choices[k].rate;
        phase.slots = best.choices[k].slots;
        solution.best_schedule.phases.push_back(phase);
    }
    return solution;
}

}  // namespace md2d
