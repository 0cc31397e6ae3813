#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "md2d/topology.hpp"

namespace md2d {

/// Closure constants for the Gaussian-main-lobe / flat-side-lobe reference
/// pattern. The defaults are the accepted parameterization of this pattern
/// family; all three are overridable from the experiment configuration so
/// absolute dB results can be recalibrated.
struct GainModel {
    double theta_ml_factor = 2.6;     ///< theta_ml = factor * theta_-3dB
    double g0_numerator = 1.6162;     ///< G0 = 20 log10(num / sin(theta_-3dB / 2))
    double gsl_slope = -0.4111;       ///< Gsl = slope * ln(theta_-3dB,deg) + intercept
    double gsl_intercept = -10.579;
};

/// One directional beam out of the multi-level codebook.
struct Beam {
    int level_index = 0;      ///< 0 = widest level
    int beam_index = 0;
    double boresight_deg = 0.0;
    double theta_3db_deg = 0.0;
    double theta_ml_deg = 0.0;
    double g0_db = 0.0;
    double gsl_db = 0.0;

    friend bool operator==(const Beam&, const Beam&) = default;
};

struct CodebookLevel {
    double half_power_beamwidth_deg = 0.0;
    std::vector<Beam> beams;
};

/// Multi-level beam codebook, levels ordered widest to narrowest.
struct Codebook {
    std::vector<CodebookLevel> levels;

    const CodebookLevel& finest_level() const {
        if (levels.empty()) throw std::invalid_argument("codebook: no levels");
        return levels.back();
    }

    std::size_t total_beams() const {
        std::size_t n = 0;
        for (const auto& lv : levels) n += lv.beams.size();
        return n;
    }
};

/// Absolute angular distance between two directions, folded into [0, 180].
inline double angular_distance_deg(double a_deg, double b_deg) {
    double d = std::fabs(wrap_angle_deg(a_deg) - wrap_angle_deg(b_deg));
    return d > 180.0 ? 360.0 - d : d;
}

inline double peak_gain_db(double theta_3db_deg, const GainModel& gm) {
    double half_rad = theta_3db_deg * 0.5 * 0.017453292519943295769236907684886;
    return 20.0 * std::log10(gm.g0_numerator / std::sin(half_rad));
}

inline double side_lobe_gain_db(double theta_3db_deg, const GainModel& gm) {
    return gm.gsl_slope * std::log(theta_3db_deg) + gm.gsl_intercept;
}

/// Build the L-level codebook. Each beamwidth contributes one level of
/// ceil(360 / theta) beams whose boresights tile [0, 360) with spacing
/// theta, so every direction is within theta/2 of some boresight. Levels
/// come out sorted widest to narrowest regardless of input order.
inline Codebook build_codebook(std::span<const double> beamwidths_deg,
                               const GainModel& gain_model = {}) {
    if (beamwidths_deg.empty()) throw std::invalid_argument("build_codebook: empty beamwidth list");
    std::vector<double> widths(beamwidths_deg.begin(), beamwidths_deg.end());
    for (double w : widths) {
        if (!(w > 0.0) || !(w < 180.0))
            throw std::invalid_argument("build_codebook: beamwidth must lie in (0, 180) degrees");
    }
    std::sort(widths.begin(), widths.end(), std::greater<double>());

    Codebook cb;
    cb.levels.reserve(widths.size());
    for (std::size_t l = 0; l < widths.size(); ++l) {
        double theta = widths[l];
        if (gain_model.theta_ml_factor * theta <= theta ||
            peak_gain_db(theta, gain_model) <= side_lobe_gain_db(theta, gain_model))
            throw std::invalid_argument(
                "build_codebook: gain closure must keep theta_ml above theta_3db and G0 above Gsl");
        CodebookLevel level;
        level.half_power_beamwidth_deg = theta;
        int count = static_cast<int>(std::ceil(360.0 / theta));
        level.beams.reserve(static_cast<std::size_t>(count));
        for (int t = 0; t < count; ++t) {
            Beam b;
            b.level_index = static_cast<int>(l);
            b.beam_index = t;
            b.boresight_deg = wrap_angle_deg(static_cast<double>(t) * theta);
            b.theta_3db_deg = theta;
            b.theta_ml_deg = gain_model.theta_ml_factor * theta;
            b.g0_db = peak_gain_db(theta, gain_model);
            b.gsl_db = side_lobe_gain_db(theta, gain_model);
            level.beams.push_back(b);
        }
        cb.levels.push_back(std::move(level));
    }
    return cb;
}

/// Directional gain at an angular offset from boresight (offset in
/// [0, 180]): Gaussian main lobe G0 - 3.01 (2 theta / theta_-3dB)^2 up to
/// theta_ml / 2, constant side-lobe floor beyond.
inline double gain_db(const Beam& beam, double offset_deg) {
    if (offset_deg < 0.5 * beam.theta_ml_deg) {
        double u = 2.0 * offset_deg / beam.theta_3db_deg;
        return beam.g0_db - 3.01 * u * u;
    }
    return beam.gsl_db;
}

/// The finest-level beam whose boresight is angularly closest to
/// direction_deg; exact ties go to the lower beam index.
inline const Beam& best_receive_beam(const Codebook& codebook, double direction_deg) {
    const CodebookLevel& finest = codebook.finest_level();
    const Beam* best = nullptr;
    double best_offset = 0.0;
    for (const Beam& b : finest.beams) {
        double off = angular_distance_deg(b.boresight_deg, direction_deg);
        if (best == nullptr || off < best_offset) {
            best = &b;
            best_offset = off;
        }
    }
    return *best;
}

}  // namespace md2d
