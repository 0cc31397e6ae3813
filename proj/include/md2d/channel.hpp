#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "md2d/antenna.hpp"
#include "md2d/rng.hpp"
#include "md2d/topology.hpp"

namespace md2d {

enum class PropagationMode { Los, Nlos };

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

inline constexpr double kSpeedOfLightMps = 299792458.0;

/// Link-budget parameters. k0 is the unit-distance path factor,
/// (lambda / 4 pi)^2 by default. NLOS adds log-normal shadowing on top of a
/// larger path-loss exponent; the per-link dB draw is frozen by
/// (shadowing_seed, tx, rx) so one run sees one consistent channel.
struct ChannelModel {
    PropagationMode mode = PropagationMode::Los;
    double path_loss_exponent = 2.0;
    double carrier_wavelength_m = kSpeedOfLightMps / 60e9;
    double k0 = 0.0;  ///< set via make_* helpers; (lambda / 4 pi)^2 when 0-initialized there
    double noise_psd_dbm_per_mhz = -134.0;
    double bandwidth_mhz = 2160.0;
    double transceiver_efficiency = 0.5;
    double shadowing_sigma_db = 0.0;
    std::uint64_t shadowing_seed = 0;

    double noise_power_dbm() const {
        return noise_psd_dbm_per_mhz + 10.0 * std::log10(bandwidth_mhz);
    }
};

inline double free_space_k0(double wavelength_m, double scale = 1.0) {
    double a = wavelength_m / (4.0 * 3.1415926535897932384626433832795);
    return scale * a * a;
}

inline ChannelModel make_los_model() {
    ChannelModel m;
    m.mode = PropagationMode::Los;
    m.path_loss_exponent = 2.0;
    m.k0 = free_space_k0(m.carrier_wavelength_m);
    return m;
}

inline ChannelModel make_nlos_model(std::uint64_t shadowing_seed, double sigma_db = 5.8) {
    ChannelModel m;
    m.mode = PropagationMode::Nlos;
    m.path_loss_exponent = 3.01;
    m.k0 = free_space_k0(m.carrier_wavelength_m);
    m.shadowing_sigma_db = sigma_db;
    m.shadowing_seed = shadowing_seed;
    return m;
}

/// Shadowing perturbation in dB for the ordered link tx -> rx. Zero for LOS
/// or sigma = 0; otherwise a Gaussian draw fully determined by
/// (shadowing_seed, tx, rx), so repeated queries agree within a run.
inline double link_shadowing_db(const ChannelModel& model, NodeId tx, NodeId rx) {
    if (model.mode == PropagationMode::Los || model.shadowing_sigma_db == 0.0) return 0.0;
    std::uint64_t s = derive_seed(model.shadowing_seed,
                                  (static_cast<std::uint64_t>(static_cast<std::uint32_t>(tx)) << 32) |
                                      static_cast<std::uint64_t>(static_cast<std::uint32_t>(rx)));
    std::mt19937_64 rng(s);
    return model.shadowing_sigma_db * standard_normal(rng);
}

/// Received power in dBm over a link of length distance_m:
/// P_t + G_tx + G_rx + 10 log10(k0) - 10 tau log10(d) + shadowing.
/// The deterministic shadowing term is passed in explicitly (see
/// link_shadowing_db); omit it for the pure path-loss value.
inline double received_power(double tx_gain_db, double rx_gain_db, double distance_m,
                             double tx_power_dbm, const ChannelModel& model,
                             double shadowing_db = 0.0) {
    if (!(distance_m > 0.0))
        throw std::invalid_argument("received_power: distance must be > 0");
    return tx_power_dbm + tx_gain_db + rx_gain_db + 10.0 * std::log10(model.k0) -
           10.0 * model.path_loss_exponent * std::log10(distance_m) + shadowing_db;
}

/// Linear SNR of a received power against the model's thermal noise floor.
inline double snr(double rx_power_dbm, const ChannelModel& model) {
    return db_to_linear(rx_power_dbm - model.noise_power_dbm());
}

/// Shannon rate eta W log2(1 + SNR) in bits per second.
inline double rate(double snr_linear, const ChannelModel& model) {
    if (snr_linear < 0.0) throw std::invalid_argument("rate: snr must be >= 0");
    return model.transceiver_efficiency * model.bandwidth_mhz * 1e6 * std::log2(1.0 + snr_linear);
}

struct LinkBudget {
    double rx_power_dbm = 0.0;
    double snr_linear = 0.0;
    double rate_bps = 0.0;
};

/// Full link evaluation tx_node -> rx_node with a given transmit beam. The
/// receiver points back with its best finest-level beam; both gains are
/// taken at the actual angular offsets from the respective boresights.
inline LinkBudget link_budget(const Topology& topology, NodeId tx_node, const Beam& tx_beam,
                              NodeId rx_node, const Codebook& codebook, const ChannelModel& model,
                              double tx_power_dbm) {
    const Point2D& tp = topology.position_of(tx_node);
    const Point2D& rp = topology.position_of(rx_node);
    double d = distance(tp, rp);
    if (tx_node == rx_node || d == 0.0)
        throw std::invalid_argument("link_budget: coincident nodes");

    PolarCoordinate fwd = polar_relative(tp, rp);   // direction tx -> rx
    PolarCoordinate back = polar_relative(rp, tp);  // direction rx -> tx
    double tx_gain = gain_db(tx_beam, angular_distance_deg(tx_beam.boresight_deg, fwd.angle_deg));
    const Beam& rx_beam = best_receive_beam(codebook, back.angle_deg);
    double rx_gain = gain_db(rx_beam, angular_distance_deg(rx_beam.boresight_deg, back.angle_deg));

    LinkBudget lb;
    lb.rx_power_dbm = received_power(tx_gain, rx_gain, d, tx_power_dbm, model,
                                     link_shadowing_db(model, tx_node, rx_node));
    lb.snr_linear = snr(lb.rx_power_dbm, model);
    lb.rate_bps = rate(lb.snr_linear, model);
    return lb;
}

inline double link_rate(const Topology& topology, NodeId tx_node, const Beam& tx_beam,
                        NodeId rx_node, const Codebook& codebook, const ChannelModel& model,
                        double tx_power_dbm) {
    return link_budget(topology, tx_node, tx_beam, rx_node, codebook, model, tx_power_dbm).rate_bps;
}

}  // namespace md2d
