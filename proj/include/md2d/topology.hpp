#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "md2d/rng.hpp"

namespace md2d {

using NodeId = int;

inline constexpr NodeId kApNode = 0;

struct Point2D {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2D&, const Point2D&) = default;
};

inline double distance(const Point2D& a, const Point2D& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Radius plus angle in degrees, normalized to [0, 360).
struct PolarCoordinate {
    double radius_m = 0.0;
    double angle_deg = 0.0;
};

/// Normalize an angle in degrees into [0, 360).
inline double wrap_angle_deg(double deg) {
    double a = std::fmod(deg, 360.0);
    if (a < 0.0) a += 360.0;   // may round up to exactly 360 for tiny negatives
    if (a >= 360.0) a = 0.0;
    return a + 0.0;  // flush -0.0
}

/// Small-cell geometry: the AP sits at the center of a square area and
/// user node ids 1..n index user_positions. Node 0 is the AP.
struct Topology {
    double area_side_m = 0.0;
    Point2D ap_position;
    std::vector<Point2D> user_positions;
    std::uint64_t seed = 0;

    int num_users() const { return static_cast<int>(user_positions.size()); }

    const Point2D& position_of(NodeId id) const {
        if (id == kApNode) return ap_position;
        if (id < 1 || id > num_users()) throw std::out_of_range("topology: unknown node id");
        return user_positions[static_cast<std::size_t>(id - 1)];
    }

    /// Node ids 1..n of every user, the full multicast group.
    std::vector<NodeId> all_users() const {
        std::vector<NodeId> ids(user_positions.size());
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<NodeId>(i + 1);
        return ids;
    }
};

/// Draw num_users points independently uniform over the square
/// [0, area_side_m]^2, AP at the center. The seed fully determines the
/// placement: draws come from mt19937_64 through uniform_double(), so the
/// same seed reproduces the same topology bit-for-bit.
inline Topology generate_topology(int num_users, double area_side_m, std::uint64_t seed) {
    if (num_users < 1) throw std::invalid_argument("generate_topology: num_users must be >= 1");
    if (!(area_side_m > 0.0)) throw std::invalid_argument("generate_topology: area_side_m must be > 0");

    Topology topo;
    topo.area_side_m = area_side_m;
    topo.ap_position = {area_side_m / 2.0, area_side_m / 2.0};
    topo.seed = seed;
    std::mt19937_64 rng(seed);
    topo.user_positions.reserve(static_cast<std::size_t>(num_users));
    for (int i = 0; i < num_users; ++i) {
        double x = uniform_double(rng) * area_side_m;
        double y = uniform_double(rng) * area_side_m;
        topo.user_positions.push_back({x, y});
    }
    return topo;
}

/// Polar coordinates of `node` relative to `center`. A node sitting exactly
/// on the center maps to (0, 0 deg) by convention.
inline PolarCoordinate polar_relative(const Point2D& center, const Point2D& node) {
    double dx = node.x - center.x;
    double dy = node.y - center.y;
    double r = std::hypot(dx, dy);
    if (r == 0.0) return {0.0, 0.0};
    return {r, wrap_angle_deg(std::atan2(dy, dx) * 57.295779513082320876798154814105)};
}

/// Arithmetic centroid of the member positions. The AP pseudo-subset {0}
/// yields ap_position.
inline Point2D subset_center(const Topology& topology, std::span<const NodeId> members) {
    if (members.empty()) throw std::invalid_argument("subset_center: empty member set");
    Point2D c;
    for (NodeId id : members) {
        const Point2D& p = topology.position_of(id);
        c.x += p.x;
        c.y += p.y;
    }
    c.x /= static_cast<double>(members.size());
    c.y /= static_cast<double>(members.size());
    return c;
}

/// Width of the smallest circular arc containing all angles: 360 minus the
/// largest gap between consecutive sorted angles. Handles the 0/360 seam,
/// unlike a naive max |a_i - a_j|. Singleton -> 0.
inline double circular_span(std::span<const double> angles_deg) {
    if (angles_deg.empty()) throw std::invalid_argument("circular_span: empty angle set");
    if (angles_deg.size() == 1) return 0.0;
    std::vector<double> sorted(angles_deg.begin(), angles_deg.end());
    std::sort(sorted.begin(), sorted.end());
    double max_gap = sorted.front() + 360.0 - sorted.back();
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        max_gap = std::max(max_gap, sorted[i] - sorted[i - 1]);
    }
    return 360.0 - max_gap;
}

}  // namespace md2d
