#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "md2d/antenna.hpp"
#include "md2d/channel.hpp"
#include "md2d/errors.hpp"
#include "md2d/topology.hpp"

namespace md2d {

/// One allocated multicast subset. Subset 0 is the AP pseudo-subset
/// (members = {AP}, serving_subset_id = -1); real subsets carry the
/// transmitter, beam and max-min rate chosen for them, plus the multicast
/// path serving_subset_id -> subset_id.
struct Subset {
    int subset_id = 0;
    std::vector<NodeId> members;
    int serving_subset_id = -1;
    NodeId transmit_node = kApNode;
    Beam tx_beam;
    double subset_rate_bps = 0.0;
};

struct PartitionResult {
    std::vector<Subset> subsets;  ///< allocation order, subsets[0] = AP pseudo-subset
    double r_th_m = 0.0;
    double theta_th_deg = 0.0;
    bool d2d_enabled = true;

    /// Number of real (non-AP) subsets.
    int num_user_subsets() const { return static_cast<int>(subsets.size()) - 1; }
};

struct NearestPick {
    int subset_id = -1;
    NodeId node_id = -1;
    double radius_m = std::numeric_limits<double>::infinity();
};

namespace detail {

/// Globally nearest (subset, user) pair over an explicit candidate-subset
/// list with precomputed centers. Ties by lower subset id, then node id.
inline NearestPick nearest_over(std::span<const Subset> candidates,
                                std::span<const Point2D> centers,
                                std::span<const NodeId> unallocated, const Topology& topology) {
    NearestPick pick;
    for (std::size_t s = 0; s < candidates.size(); ++s) {
        for (NodeId u : unallocated) {
            double r = distance(centers[s], topology.position_of(u));
            if (r < pick.radius_m ||
                (r == pick.radius_m && (candidates[s].subset_id < pick.subset_id ||
                                        (candidates[s].subset_id == pick.subset_id && u < pick.node_id)))) {
                pick = {candidates[s].subset_id, u, r};
            }
        }
    }
    return pick;
}

}  // namespace detail

/// For each allocated subset, the minimum center-to-user distance over the
/// unallocated pool; returns the globally minimizing (subset, user) pair.
inline NearestPick nearest_unallocated(const PartitionResult& state,
                                       std::span<const NodeId> unallocated,
                                       const Topology& topology) {
    if (unallocated.empty()) throw std::invalid_argument("nearest_unallocated: empty pool");
    std::vector<Point2D> centers;
    centers.reserve(state.subsets.size());
    for (const Subset& s : state.subsets) centers.push_back(subset_center(topology, s.members));
    return detail::nearest_over(state.subsets, centers, unallocated, topology);
}

/// Grow a subset around the reference frame (center of the chosen U_s,
/// anchor radius r^s). Scans the unallocated users in ascending radius
/// (ties by node id) and admits user j iff |r_j - r^s| <= r_th and the
/// covering arc of the admitted angles including theta_j stays <= theta_th.
/// The anchor passes both tests automatically (|r - r| = 0, singleton span
/// 0), so the first admission is the anchor itself.
inline std::vector<NodeId> grow_subset(const Point2D& reference_center, double anchor_radius_m,
                                       std::span<const NodeId> unallocated,
                                       const Topology& topology, double r_th_m,
                                       double theta_th_deg) {
    struct Candidate {
        NodeId node;
        double radius;
        double angle;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(unallocated.size());
    for (NodeId u : unallocated) {
        PolarCoordinate pc = polar_relative(reference_center, topology.position_of(u));
        candidates.push_back({u, pc.radius_m, pc.angle_deg});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        return a.radius != b.radius ? a.radius < b.radius : a.node < b.node;
    });

    std::vector<NodeId> admitted;
    std::vector<double> angles;
    for (const Candidate& c : candidates) {
        if (std::fabs(c.radius - anchor_radius_m) > r_th_m) continue;
        angles.push_back(c.angle);
        if (circular_span(angles) <= theta_th_deg) {
            admitted.push_back(c.node);
        } else {
            angles.pop_back();
        }
    }
    return admitted;
}

struct TransmitterSelection {
    NodeId node = kApNode;
    Beam beam;
    double rate_bps = 0.0;
};

/// Max-min transmitter and beam choice: for every candidate in the source
/// subset and every beam of the codebook, score min-over-targets link rate;
/// keep the best. Ties go to the narrower beamwidth, then lower beam index,
/// then lower node id. Candidates co-located with any target are skipped.
inline TransmitterSelection select_transmitter_and_beam(std::span<const NodeId> target_members,
                                                        std::span<const NodeId> source_members,
                                                        const Topology& topology,
                                                        const Codebook& codebook,
                                                        const ChannelModel& model,
                                                        double tx_power_dbm) {
    if (target_members.empty() || source_members.empty())
        throw std::invalid_argument("select_transmitter_and_beam: empty member set");

    std::vector<NodeId> sources(source_members.begin(), source_members.end());
    std::sort(sources.begin(), sources.end());

    bool found = false;
    NodeId best_node = kApNode;
    const Beam* best_beam = nullptr;
    double best_rate = -std::numeric_limits<double>::infinity();

    for (NodeId cand : sources) {
        bool invalid_pair = false;
        for (NodeId t : target_members) {
            if (cand == t || distance(topology.position_of(cand), topology.position_of(t)) == 0.0) {
                invalid_pair = true;
                break;
            }
        }
        if (invalid_pair) continue;

        for (const CodebookLevel& level : codebook.levels) {
            for (const Beam& beam : level.beams) {
                double min_rate = std::numeric_limits<double>::infinity();
                for (NodeId t : target_members) {
                    min_rate = std::min(min_rate, link_rate(topology, cand, beam, t, codebook,
                                                            model, tx_power_dbm));
                }
                bool better = false;
                if (min_rate > best_rate) {
                    better = true;
                } else if (min_rate == best_rate && best_beam != nullptr) {
                    if (beam.theta_3db_deg < best_beam->theta_3db_deg) better = true;
                    else if (beam.theta_3db_deg == best_beam->theta_3db_deg) {
                        if (beam.beam_index < best_beam->beam_index) better = true;
                        else if (beam.beam_index == best_beam->beam_index && cand < best_node)
                            better = true;
                    }
                }
                if (better) {
                    found = true;
                    best_node = cand;
                    best_beam = &beam;
                    best_rate = min_rate;
                }
            }
        }
    }
    if (!found)
        throw InfeasibleScheduleError(
            "select_transmitter_and_beam: no candidate transmitter with valid geometry");

    // Canonical rate: recompute through the same path callers use, so the
    // stored value is bit-identical to any later recomputation.
    double exact = std::numeric_limits<double>::infinity();
    for (NodeId t : target_members) {
        exact = std::min(exact,
                         link_rate(topology, best_node, *best_beam, t, codebook, model, tx_power_dbm));
    }
    return {best_node, *best_beam, exact};
}

/// User partition and multicast path planning. Iteratively: pick the
/// allocated subset with the globally nearest unallocated user, grow the
/// new subset within the radius band and angle span around that reference
/// frame, then pick the transmitter and beam from the serving subset by
/// max-min rate. With d2d_enabled = false only the AP pseudo-subset may
/// serve, which pins every transmitter to the AP.
inline PartitionResult partition_and_plan(const Topology& topology, std::span<const NodeId> group,
                                          const Codebook& codebook, const ChannelModel& model,
                                          double tx_power_dbm, double r_th_m, double theta_th_deg,
                                          bool d2d_enabled) {
    if (group.empty()) throw std::invalid_argument("partition_and_plan: empty group");
    if (r_th_m < 0.0 || theta_th_deg < 0.0)
        throw std::invalid_argument("partition_and_plan: thresholds must be >= 0");

    std::vector<NodeId> unallocated(group.begin(), group.end());
    std::sort(unallocated.begin(), unallocated.end());
    unallocated.erase(std::unique(unallocated.begin(), unallocated.end()), unallocated.end());
    for (NodeId u : unallocated) topology.position_of(u);  // validates ids

    PartitionResult result;
    result.r_th_m = r_th_m;
    result.theta_th_deg = theta_th_deg;
    result.d2d_enabled = d2d_enabled;

    Subset ap;
    ap.subset_id = 0;
    ap.members = {kApNode};
    ap.serving_subset_id = -1;
    result.subsets.push_back(std::move(ap));

    std::vector<Point2D> centers{topology.ap_position};

    while (!unallocated.empty()) {
        std::span<const Subset> refs(result.subsets);
        std::span<const Point2D> ref_centers(centers);
        if (!d2d_enabled) {
            refs = refs.first(1);
            ref_centers = ref_centers.first(1);
        }
        NearestPick pick = detail::nearest_over(refs, ref_centers, unallocated, topology);

        const Point2D& frame = centers[static_cast<std::size_t>(pick.subset_id)];
        std::vector<NodeId> admitted =
            grow_subset(frame, pick.radius_m, unallocated, topology, r_th_m, theta_th_deg);

        std::erase_if(unallocated, [&](NodeId u) {
            return std::find(admitted.begin(), admitted.end(), u) != admitted.end();
        });

        const Subset& serving = result.subsets[static_cast<std::size_t>(pick.subset_id)];
        TransmitterSelection sel = select_transmitter_and_beam(
            admitted, serving.members, topology, codebook, model, tx_power_dbm);

        Subset sub;
        sub.subset_id = static_cast<int>(result.subsets.size());
        sub.members = std::move(admitted);
        sub.serving_subset_id = pick.subset_id;
        sub.transmit_node = sel.node;
        sub.tx_beam = sel.beam;
        sub.subset_rate_bps = sel.rate_bps;
        centers.push_back(subset_center(topology, sub.members));
        result.subsets.push_back(std::move(sub));
    }
    return result;
}

}  // namespace md2d
