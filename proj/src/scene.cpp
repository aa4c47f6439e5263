// SPDX-License-Identifier: Apache-2.0
#include "pmcw/scene.hpp"

#include "pmcw/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pmcw {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

void require_range(double r, const char* name)
{
    if (!(r > 0.0))
        throw Error(ErrorCode::ZeroRange, fmt::format("{} must be positive, got {}", name, r));
}

double db(double linear) { return 10.0 * std::log10(linear); }

} // namespace

double Vec2::norm() const { return std::hypot(x, y); }

Vec2 Vec2::unit() const
{
    const double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{};
}

double angle_between_deg(Vec2 a, Vec2 b)
{
    const double cross = a.x * b.y - a.y * b.x;
    return std::abs(std::atan2(cross, a.dot(b))) * 180.0 / std::numbers::pi;
}

AntennaPattern::AntennaPattern(double g_boresight_db, double g_90_db)
    : AntennaPattern(std::vector<Point>{{0.0, g_boresight_db}, {90.0, g_90_db}})
{
}

AntennaPattern::AntennaPattern(std::vector<Point> points) : points_(std::move(points))
{
    if (points_.size() < 2 || points_.front().angle_deg != 0.0)
        throw Error(ErrorCode::BadNode, "antenna table must start at 0 deg and hold at least two points");
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (!(points_[i].angle_deg > points_[i - 1].angle_deg))
            throw Error(ErrorCode::BadNode, "antenna angles must increase strictly");
        if (points_[i].gain_db > points_[i - 1].gain_db)
            throw Error(ErrorCode::BadNode, "antenna gain must be non-increasing off boresight");
    }
}

AntennaPattern AntennaPattern::from_table(std::vector<Point> points) { return AntennaPattern(std::move(points)); }

double AntennaPattern::gain_db(double off_boresight_deg) const
{
    const double a = std::abs(off_boresight_deg);
    if (a >= points_.back().angle_deg)
        return points_.back().gain_db;
    auto hi = std::upper_bound(points_.begin(), points_.end(), a,
                               [](double v, const Point& p) { return v < p.angle_deg; });
    auto lo = hi - 1;
    const double w = (a - lo->angle_deg) / (hi->angle_deg - lo->angle_deg);
    return lo->gain_db + w * (hi->gain_db - lo->gain_db);
}

const RadarNode& Scenario::node(std::size_t id) const
{
    auto it = std::find_if(nodes.begin(), nodes.end(), [id](const RadarNode& n) { return n.id == id; });
    if (it == nodes.end())
        throw Error(ErrorCode::BadNode, fmt::format("no radar with id {}", id));
    return *it;
}

std::size_t Scenario::code_shift(std::size_t id) const
{
    return radar_code_shift(id, nodes.size(), code.length());
}

void Scenario::check() const
{
    if (nodes.empty())
        throw Error(ErrorCode::BadNode, "scenario has no radars");
    for (std::size_t m = 1; m <= nodes.size(); ++m)
        node(m);
    if (code.length() % (2 * nodes.size()) != 0)
        throw Error(ErrorCode::IndivisibleCode,
                    fmt::format("2M = {} does not divide L = {}", 2 * nodes.size(), code.length()));
    if (bursts < 1)
        throw Error(ErrorCode::ConfigError, "burst count must be at least 1");
    if (!(carrier_hz > 0.0) || !(chip_s > 0.0))
        throw Error(ErrorCode::ConfigError, "carrier frequency and chip duration must be positive");
}

std::string_view to_string(PathKind kind) noexcept
{
    switch (kind) {
    case PathKind::Mono: return "mono";
    case PathKind::Bistatic: return "bistatic";
    case PathKind::Los: return "los";
    }
    return "unknown";
}

std::size_t PropagationPath::delay_bins(double chip_s) const
{
    return static_cast<std::size_t>(std::floor(delay_s / chip_s));
}

std::vector<PropagationPath> enumerate_paths(const Scenario& scenario, std::size_t rx_id)
{
    const RadarNode& rx = scenario.node(rx_id);
    const double lambda = scenario.wavelength();
    std::vector<PropagationPath> paths;

    // Transmitters in path order: the receiver itself (mono) first, then the others by id.
    std::vector<const RadarNode*> transmitters{&rx};
    for (std::size_t m = 1; m <= scenario.nodes.size(); ++m) {
        if (m != rx_id)
            transmitters.push_back(&scenario.node(m));
    }

    for (const auto& target : scenario.targets) {
        const Vec2 rx_to_tgt = target.position - rx.position;
        const double r_rx = rx_to_tgt.norm();
        require_range(r_rx, "radar-target range");
        const double aoa = angle_between_deg(rx.boresight, rx_to_tgt);
        // Range rate of the target as seen from the receiver.
        const double v_rx = target.velocity.dot(rx_to_tgt.unit());

        for (const RadarNode* tx : transmitters) {
            const Vec2 tx_to_tgt = target.position - tx->position;
            const double r_tx = tx_to_tgt.norm();
            require_range(r_tx, "radar-target range");
            const double aod = angle_between_deg(tx->boresight, tx_to_tgt);
            const double v_tx = target.velocity.dot(tx_to_tgt.unit());

            PropagationPath path;
            path.tx_id = tx->id;
            path.rx_id = rx_id;
            path.aod_deg = aod;
            path.aoa_deg = aoa;
            path.delay_s = (r_tx + r_rx) / kSpeedOfLight;
            path.doppler_hz = (v_tx + v_rx) / lambda;
            if (tx->id == rx_id) {
                path.kind = PathKind::Mono;
                path.power_dbm = mono_rx_power(tx->tx_power_dbm, rx.antenna.gain_db(aoa), lambda, target.rcs_dbsm, r_rx);
            } else {
                path.kind = PathKind::Bistatic;
                path.power_dbm = bistatic_rx_power(tx->tx_power_dbm, tx->antenna.gain_db(aod), rx.antenna.gain_db(aoa),
                                                   lambda, target.rcs_dbsm, r_tx, r_rx);
            }
            path.amplitude = db_to_amplitude(path.power_dbm);
            paths.push_back(path);
        }
    }

    for (std::size_t i = 1; i < transmitters.size(); ++i) {
        const RadarNode& tx = *transmitters[i];
        const Vec2 tx_to_rx = rx.position - tx.position;
        const double r = tx_to_rx.norm();
        require_range(r, "radar separation");
        PropagationPath path;
        path.kind = PathKind::Los;
        path.tx_id = tx.id;
        path.rx_id = rx_id;
        path.aod_deg = angle_between_deg(tx.boresight, tx_to_rx);
        path.aoa_deg = angle_between_deg(rx.boresight, tx_to_rx * -1.0);
        path.delay_s = r / kSpeedOfLight;
        path.doppler_hz = 0.0;
        path.power_dbm = los_rx_power(tx.tx_power_dbm, tx.antenna.gain_db(path.aod_deg),
                                      rx.antenna.gain_db(path.aoa_deg), lambda, r);
        path.amplitude = db_to_amplitude(path.power_dbm);
        paths.push_back(path);
    }
    return paths;
}

double mono_rx_power(double tx_power_dbm, double gain_db, double wavelength_m, double rcs_dbsm, double range_m)
{
    require_range(range_m, "range");
    return tx_power_dbm + 2.0 * gain_db + 2.0 * db(wavelength_m) + rcs_dbsm - 3.0 * db(kFourPi) -
           4.0 * db(range_m);
}

double los_rx_power(double tx_power_dbm, double gain_tx_db, double gain_rx_db, double wavelength_m, double range_m)
{
    require_range(range_m, "LOS range");
    return tx_power_dbm + gain_tx_db + gain_rx_db + 2.0 * db(wavelength_m) - 2.0 * db(kFourPi * range_m);
}

double bistatic_rx_power(double tx_power_dbm, double gain_tx_db, double gain_rx_db, double wavelength_m,
                         double rcs_dbsm, double range_tx_m, double range_rx_m)
{
    require_range(range_tx_m, "transmitter-target range");
    require_range(range_rx_m, "target-receiver range");
    return tx_power_dbm + gain_tx_db + gain_rx_db + 2.0 * db(wavelength_m) + rcs_dbsm - 3.0 * db(kFourPi) -
           2.0 * db(range_tx_m) - 2.0 * db(range_rx_m);
}

double los_to_mono_ratio(double g_90_db, double g_t_db, double range_mono_m, double range_los_m, double rcs_dbsm)
{
    require_range(range_mono_m, "mono range");
    require_range(range_los_m, "LOS range");
    return db(kFourPi) + 2.0 * g_90_db + 4.0 * db(range_mono_m) - 2.0 * g_t_db - 2.0 * db(range_los_m) - rcs_dbsm;
}

double db_to_amplitude(double db_value) { return std::pow(10.0, db_value / 20.0); }

double amplitude_to_db(double amplitude) { return 20.0 * std::log10(amplitude); }

} // namespace pmcw
