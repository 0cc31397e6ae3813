#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "md2d/antenna.hpp"
#include "md2d/baselines.hpp"
#include "md2d/channel.hpp"

namespace md2d {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ChannelConfig {
    double bandwidth_mhz = 2160.0;
    double noise_psd_dbm_per_mhz = -134.0;
    double transceiver_efficiency = 0.5;
    double path_loss_exponent_los = 2.0;
    double path_loss_exponent_nlos = 3.01;
    double carrier_frequency_ghz = 60.0;
    /// k0 = k0_scale * (lambda / 4 pi)^2. The proportionality constant of
    /// this link model is a free calibration; the default places link rates
    /// in the few-Gb/s range where the four schemes are meaningfully
    /// distinct. Override to move the operating SNR regime.
    double k0_scale = 1e-7;
    double shadowing_sigma_db = 5.8;
};

struct CodebookConfig {
    std::vector<double> beamwidths_deg{15.0, 30.0, 45.0, 60.0};
    GainModel gain;
};

/// Full experiment description. The defaults reproduce the reference
/// small-cell setup: 20 m x 20 m cell, W = 2160 MHz, N0 = -134 dBm/MHz,
/// tau = 2 (LOS), Delta = 18 us, eta = 0.5, P_t = 30 dBm, D = 1 Gb,
/// four-level 15/30/45/60 degree codebook, r_th = 6 m, theta_th = 10 deg,
/// 100 runs per sweep point.
struct ExperimentConfig {
    std::vector<Scheme> schemes{Scheme::Md2d, Scheme::Mc, Scheme::D2d, Scheme::Fdmac};
    std::vector<int> num_users_sweep{5, 10, 15, 20, 25, 30};
    std::vector<double> tx_power_dbm_sweep{30.0};
    std::vector<double> demand_bits_sweep{1e9};
    PropagationMode mode = PropagationMode::Los;
    double r_th_m = 6.0;
    double theta_th_deg = 10.0;
    int runs_per_point = 100;
    std::uint64_t master_seed = 1;
    double slot_duration_s = 18e-6;
    double area_side_m = 20.0;
    int workers = 0;  ///< 0 = hardware concurrency
    ChannelConfig channel;
    CodebookConfig codebook;
};

inline void validate_config(const ExperimentConfig& c) {
    if (c.schemes.empty()) throw ConfigError("schemes: empty scheme set");
    if (c.num_users_sweep.empty()) throw ConfigError("sweep.num_users: empty sweep");
    if (c.tx_power_dbm_sweep.empty()) throw ConfigError("sweep.tx_power_dbm: empty sweep");
    if (c.demand_bits_sweep.empty()) throw ConfigError("sweep.demand_bits: empty sweep");
    if (c.runs_per_point < 1) throw ConfigError("runs_per_point: must be >= 1");
    for (int u : c.num_users_sweep)
        if (u < 1) throw ConfigError("sweep.num_users: users must be >= 1");
    if (!(c.slot_duration_s > 0.0)) throw ConfigError("slot_duration_s: must be > 0");
    if (!(c.area_side_m > 0.0)) throw ConfigError("area_side_m: must be > 0");
    if (c.r_th_m < 0.0) throw ConfigError("partition.r_th_m: must be >= 0");
    if (c.theta_th_deg < 0.0) throw ConfigError("partition.theta_th_deg: must be >= 0");
    if (!(c.channel.bandwidth_mhz > 0.0)) throw ConfigError("channel.bandwidth_mhz: must be > 0");
    if (!(c.channel.transceiver_efficiency > 0.0) || !(c.channel.transceiver_efficiency < 1.0))
        throw ConfigError("channel.transceiver_efficiency: must lie in (0, 1)");
    if (!(c.channel.carrier_frequency_ghz > 0.0))
        throw ConfigError("channel.carrier_frequency_ghz: must be > 0");
    if (c.codebook.beamwidths_deg.empty()) throw ConfigError("codebook.beamwidths_deg: empty list");
}

inline ChannelModel make_channel_model(const ExperimentConfig& c, PropagationMode mode,
                                       std::uint64_t shadowing_seed) {
    ChannelModel m;
    m.mode = mode;
    m.path_loss_exponent = mode == PropagationMode::Los ? c.channel.path_loss_exponent_los
                                                        : c.channel.path_loss_exponent_nlos;
    m.carrier_wavelength_m = kSpeedOfLightMps / (c.channel.carrier_frequency_ghz * 1e9);
    m.k0 = free_space_k0(m.carrier_wavelength_m, c.channel.k0_scale);
    m.noise_psd_dbm_per_mhz = c.channel.noise_psd_dbm_per_mhz;
    m.bandwidth_mhz = c.channel.bandwidth_mhz;
    m.transceiver_efficiency = c.channel.transceiver_efficiency;
    m.shadowing_sigma_db = mode == PropagationMode::Nlos ? c.channel.shadowing_sigma_db : 0.0;
    m.shadowing_seed = shadowing_seed;
    return m;
}

inline Codebook make_codebook(const ExperimentConfig& c) {
    return build_codebook(c.codebook.beamwidths_deg, c.codebook.gain);
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream iss(value);
    while (std::getline(iss, item, ',')) {
        std::size_t b = item.find_first_not_of(" \t");
        std::size_t e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        parts.push_back(item.substr(b, e - b + 1));
    }
    return parts;
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + value + "'");
    }
}

inline std::int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: '" + value + "'");
    }
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an unsigned integer: '" + value + "'");
    }
}

}  // namespace detail

/// Apply one `key = value` pair onto a config. Unknown keys raise
/// ConfigError naming the key.
inline void apply_config_entry(ExperimentConfig& c, const std::string& key,
                               const std::string& value) {
    using detail::parse_double;
    using detail::parse_int;
    using detail::parse_uint;
    using detail::split_list;

    if (key == "schemes") {
        c.schemes.clear();
        for (const auto& s : split_list(value)) {
            try {
                c.schemes.push_back(scheme_from_string(s));
            } catch (const std::invalid_argument&) {
                throw ConfigError("schemes: unknown scheme '" + s + "'");
            }
        }
    } else if (key == "sweep.num_users") {
        c.num_users_sweep.clear();
        for (const auto& s : split_list(value))
            c.num_users_sweep.push_back(static_cast<int>(parse_int(key, s)));
    } else if (key == "sweep.tx_power_dbm") {
        c.tx_power_dbm_sweep.clear();
        for (const auto& s : split_list(value)) c.tx_power_dbm_sweep.push_back(parse_double(key, s));
    } else if (key == "sweep.demand_bits") {
        c.demand_bits_sweep.clear();
        for (const auto& s : split_list(value)) c.demand_bits_sweep.push_back(parse_double(key, s));
    } else if (key == "mode") {
        if (value == "LOS") c.mode = PropagationMode::Los;
        else if (value == "NLOS") c.mode = PropagationMode::Nlos;
        else throw ConfigError("mode: expected LOS or NLOS, got '" + value + "'");
    } else if (key == "partition.r_th_m") {
        c.r_th_m = parse_double(key, value);
    } else if (key == "partition.theta_th_deg") {
        c.theta_th_deg = parse_double(key, value);
    } else if (key == "runs_per_point") {
        c.runs_per_point = static_cast<int>(parse_int(key, value));
    } else if (key == "master_seed") {
        c.master_seed = parse_uint(key, value);
    } else if (key == "slot_duration_s") {
        c.slot_duration_s = parse_double(key, value);
    } else if (key == "area_side_m") {
        c.area_side_m = parse_double(key, value);
    } else if (key == "workers") {
        c.workers = static_cast<int>(parse_int(key, value));
    } else if (key == "channel.bandwidth_mhz") {
        c.channel.bandwidth_mhz = parse_double(key, value);
    } else if (key == "channel.noise_psd_dbm_per_mhz") {
        c.channel.noise_psd_dbm_per_mhz = parse_double(key, value);
    } else if (key == "channel.transceiver_efficiency") {
        c.channel.transceiver_efficiency = parse_double(key, value);
    } else if (key == "channel.path_loss_exponent_los") {
        c.channel.path_loss_exponent_los = parse_double(key, value);
    } else if (key == "channel.path_loss_exponent_nlos") {
        c.channel.path_loss_exponent_nlos = parse_double(key, value);
    } else if (key == "channel.carrier_frequency_ghz") {
        c.channel.carrier_frequency_ghz = parse_double(key, value);
    } else if (key == "channel.k0_scale") {
        c.channel.k0_scale = parse_double(key, value);
    } else if (key == "channel.shadowing_sigma_db") {
        c.channel.shadowing_sigma_db = parse_double(key, value);
    } else if (key == "codebook.beamwidths_deg") {
        c.codebook.beamwidths_deg.clear();
        for (const auto& s : split_list(value))
            c.codebook.beamwidths_deg.push_back(parse_double(key, s));
    } else if (key == "codebook.theta_ml_factor") {
        c.codebook.gain.theta_ml_factor = parse_double(key, value);
    } else if (key == "codebook.g0_numerator") {
        c.codebook.gain.g0_numerator = parse_double(key, value);
    } else if (key == "codebook.gsl_slope") {
        c.codebook.gain.gsl_slope = parse_double(key, value);
    } else if (key == "codebook.gsl_intercept") {
        c.codebook.gain.gsl_intercept = parse_double(key, value);
    } else {
        throw ConfigError("unknown configuration key: '" + key + "'");
    }
}

/// Parse `key = value` lines; '#' starts a comment, blank lines skipped.
inline ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        auto trim = [](std::string s) {
            std::size_t x = s.find_first_not_of(" \t\r");
            std::size_t y = s.find_last_not_of(" \t\r");
            return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        apply_config_entry(c, key, value);
    }
    return c;
}

inline ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

}  // namespace md2d
