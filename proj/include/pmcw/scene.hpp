// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pmcw/codes.hpp"
#include "pmcw/phase_noise.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace pmcw {

inline constexpr double kSpeedOfLight = 299792458.0;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const;
    Vec2 unit() const;
};

/// Angle in degrees between two directions, in [0, 180].
double angle_between_deg(Vec2 a, Vec2 b);

/**
 * Antenna gain versus off-boresight angle, tabulated in dB and interpolated
 * linearly in dB over angle. Angles beyond the last point hold its gain.
 */
class AntennaPattern {
public:
    struct Point {
        double angle_deg;
        double gain_db;
    };

    /// Two-point pattern: g_boresight at 0 deg, g_90 at 90 deg.
    AntennaPattern(double g_boresight_db, double g_90_db);

    /// Measured pattern. Angles must start at 0, increase strictly, and the
    /// gains must be non-increasing.
    static AntennaPattern from_table(std::vector<Point> points);

    double gain_db(double off_boresight_deg) const;
    double boresight_db() const { return points_.front().gain_db; }

private:
    explicit AntennaPattern(std::vector<Point> points);
    std::vector<Point> points_;
};

struct RadarNode {
    std::size_t id = 1; ///< 1-based radar index m
    Vec2 position;
    Vec2 boresight{0.0, 1.0};
    double tx_power_dbm = 10.0;
    AntennaPattern antenna{10.0, -7.0};
    std::shared_ptr<const PhaseNoiseProcess> pll; ///< may be null when PN is disabled
};

struct Target {
    Vec2 position;
    Vec2 velocity;
    double rcs_dbsm = 0.0;
};

struct ThermalNoise {
    bool enabled = false;
    double floor_dbm = -90.0; ///< per-sample noise power
    std::uint64_t seed = 0;
};

struct Scenario {
    std::vector<RadarNode> nodes;
    std::vector<Target> targets;
    double carrier_hz = 79e9;
    double chip_s = 1e-9;
    std::size_t bursts = 256;
    CodeSequence code = generate_p3(504);
    bool pn_enabled = true;
    ModulationMode pn_mode = ModulationMode::Exact;
    ThermalNoise thermal;

    std::size_t code_length() const noexcept { return code.length(); }
    std::size_t radar_count() const noexcept { return nodes.size(); }
    double wavelength() const noexcept { return kSpeedOfLight / carrier_hz; }
    double burst_period() const noexcept { return static_cast<double>(code.length()) * chip_s; }
    double frame_duration() const noexcept { return burst_period() * static_cast<double>(bursts); }
    std::size_t frame_length() const noexcept { return code.length() * bursts; }

    const RadarNode& node(std::size_t id) const;
    /// Code shift applied to radar `id`'s transmission, L (m-1) / (2M).
    std::size_t code_shift(std::size_t id) const;

    /// Throws on broken invariants: 2M | L, N >= 1, f_c and T_c positive,
    /// node ids exactly 1..M.
    void check() const;
};

enum class PathKind { Mono, Bistatic, Los };

std::string_view to_string(PathKind kind) noexcept;

struct PropagationPath {
    PathKind kind = PathKind::Mono;
    std::size_t tx_id = 1;
    std::size_t rx_id = 1;
    double delay_s = 0.0;
    double doppler_hz = 0.0;
    double power_dbm = 0.0;
    double amplitude = 0.0; ///< received voltage, sqrt(mW): 10^(power_dbm / 20)
    double aod_deg = 0.0;   ///< off-boresight departure angle at the transmitter
    double aoa_deg = 0.0;   ///< off-boresight arrival angle at the receiver

    /// Whole-chip delay, floor(delay / chip).
    std::size_t delay_bins(double chip_s) const;
};

/**
 * @brief All paths arriving at radar `rx_id`.
 *
 * Order: per target, the mono path then one bistatic path per other radar
 * (ascending id); then one LOS path per other radar. Radars are static.
 */
std::vector<PropagationPath> enumerate_paths(const Scenario& scenario, std::size_t rx_id);

/// Two-way radar equation, Pt G^2 lambda^2 sigma / ((4 pi)^3 R^4), in dBm.
double mono_rx_power(double tx_power_dbm, double gain_db, double wavelength_m, double rcs_dbsm, double range_m);

/// Friis one-way link, Pt Gtx Grx lambda^2 / (4 pi R)^2, in dBm.
double los_rx_power(double tx_power_dbm, double gain_tx_db, double gain_rx_db, double wavelength_m,
                    double range_m);

/// Bistatic radar equation, Pt Gtx Grx lambda^2 sigma / ((4 pi)^3 R1^2 R2^2), in dBm.
double bistatic_rx_power(double tx_power_dbm, double gain_tx_db, double gain_rx_db, double wavelength_m,
                         double rcs_dbsm, double range_tx_m, double range_rx_m);

/// P_los / P_mono = 4 pi G90^2 Rmono^4 / (Gt^2 Rlos^2 sigma), in dB.
double los_to_mono_ratio(double g_90_db, double g_t_db, double range_mono_m, double range_los_m, double rcs_dbsm);

double db_to_amplitude(double db);
double amplitude_to_db(double amplitude);

} // namespace pmcw
