#pragma once

#include <stdexcept>

#include "md2d/channel.hpp"
#include "md2d/schedule.hpp"

namespace md2d {

/// The three evaluation metrics of one run. Note the two timing bases:
/// NT divides by the slot-quantized frame length, EC integrates the exact
/// transmission time D / R_k. The mismatch is intentional and preserved.
struct MetricsReport {
    double network_throughput_bps = 0.0;
    double energy_consumption_j = 0.0;
    double energy_efficiency_bpj = 0.0;
    int group_size = 0;
    double demand_bits = 0.0;
    double tx_power_w = 0.0;
};

/// NT = |U| D / (sum_k delta^k * Delta) in b/s.
inline double network_throughput(const Schedule& schedule, int group_size) {
    std::int64_t slots = total_slots(schedule);
    if (slots <= 0) throw std::invalid_argument("network_throughput: schedule has zero slots");
    return static_cast<double>(group_size) * schedule.demand_bits /
           (static_cast<double>(slots) * schedule.slot_duration_s);
}

/// EC = sum_k (D / R_k) P_t in joules, P_t in watts.
inline double energy_consumption(const Schedule& schedule, double tx_power_w) {
    double seconds = 0.0;
    for (const Phase& p : schedule.phases) {
        if (!(p.rate_bps > 0.0))
            throw std::invalid_argument("energy_consumption: zero-rate phase");
        seconds += schedule.demand_bits / p.rate_bps;
    }
    return seconds * tx_power_w;
}

/// EE = NT / EC in b/s/J.
inline double energy_efficiency(double network_throughput_bps, double energy_consumption_j) {
    if (!(energy_consumption_j > 0.0))
        throw std::invalid_argument("energy_efficiency: energy must be > 0");
    return network_throughput_bps / energy_consumption_j;
}

inline MetricsReport compute_metrics(const Schedule& schedule, int group_size,
                                     double tx_power_dbm) {
    MetricsReport r;
    r.group_size = group_size;
    r.demand_bits = schedule.demand_bits;
    r.tx_power_w = dbm_to_watts(tx_power_dbm);
    r.network_throughput_bps = network_throughput(schedule, group_size);
    r.energy_consumption_j = energy_consumption(schedule, r.tx_power_w);
    r.energy_efficiency_bpj = energy_efficiency(r.network_throughput_bps, r.energy_consumption_j);
    return r;
}

}  // namespace md2d
