// SPDX-License-Identifier: Apache-2.0
#include "pmcw/txrx.hpp"

#include "pmcw/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <future>
#include <numbers>
#include <random>

namespace pmcw {

namespace {

void check_pll_coverage(const Scenario& scenario, const RadarNode& node)
{
    if (!scenario.pn_enabled)
        return;
    if (!node.pll)
        throw Error(ErrorCode::PnDurationTooShort, fmt::format("radar {} has no phase-noise process", node.id));
    // 1 ppb slack absorbs rounding in 1 / (1 / T).
    if (node.pll->period() < scenario.frame_duration() * (1.0 - 1e-9))
        throw Error(ErrorCode::PnDurationTooShort,
                    fmt::format("radar {} phase noise spans {} s, frame needs {} s", node.id, node.pll->period(),
                                scenario.frame_duration()));
}

} // namespace

std::vector<cplx> tx_baseband(const CodeSequence& code, long long shift, std::size_t bursts)
{
    const auto shifted = circular_shift(code, shift);
    const std::size_t len = code.length();
    std::vector<cplx> out(len * bursts);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = shifted[i % len];
    return out;
}

std::vector<cplx> path_samples(const Scenario& scenario, const PropagationPath& path)
{
    const std::size_t len = scenario.code_length();
    const std::size_t total = scenario.frame_length();
    const double chip = scenario.chip_s;
    const auto shifted = circular_shift(scenario.code, static_cast<long long>(scenario.code_shift(path.tx_id)));
    const std::size_t delay = path.delay_bins(chip) % len;

    std::vector<double> pn_phase;
    if (scenario.pn_enabled) {
        const RadarNode& tx = scenario.node(path.tx_id);
        const RadarNode& rx = scenario.node(path.rx_id);
        check_pll_coverage(scenario, tx);
        check_pll_coverage(scenario, rx);
        pn_phase = tx.pll->evaluate_grid(-path.delay_s, chip, total);
        const auto rx_phase = rx.pll->evaluate_grid(0.0, chip, total);
        for (std::size_t i = 0; i < total; ++i)
            pn_phase[i] -= rx_phase[i];
    }

    const double doppler_step = -2.0 * std::numbers::pi * path.doppler_hz * chip;
    std::vector<cplx> out(total);
    for (std::size_t i = 0; i < total; ++i) {
        cplx v = path.amplitude * shifted[(i + len - delay) % len];
        if (path.doppler_hz != 0.0)
            v *= std::polar(1.0, doppler_step * static_cast<double>(i));
        if (scenario.pn_enabled)
            v *= modulation(pn_phase[i], scenario.pn_mode);
        out[i] = v;
    }
    return out;
}

BasebandFrame synthesize_rx(const Scenario& scenario, std::size_t rx_id, std::span<const PropagationPath> paths)
{
    scenario.check();
    BasebandFrame frame;
    frame.rx_id = rx_id;
    frame.bursts = scenario.bursts;
    frame.code_length = scenario.code_length();
    frame.chip_s = scenario.chip_s;
    frame.carrier_hz = scenario.carrier_hz;
    frame.samples.assign(scenario.frame_length(), cplx{});

    for (const auto& path : paths) {
        if (path.rx_id != rx_id)
            throw Error(ErrorCode::BadNode, fmt::format("path received by radar {}, frame is for {}", path.rx_id, rx_id));
    }

    // Paths are independent; evaluate them concurrently and sum in path order.
    std::vector<std::future<std::vector<cplx>>> pending;
    pending.reserve(paths.size());
    for (const auto& path : paths)
        pending.push_back(std::async(std::launch::async, [&scenario, &path] { return path_samples(scenario, path); }));
    for (auto& f : pending) {
        const auto contribution = f.get();
        for (std::size_t i = 0; i < contribution.size(); ++i)
            frame.samples[i] += contribution[i];
    }

    if (scenario.thermal.enabled) {
        std::mt19937_64 rng(scenario.thermal.seed ^ static_cast<std::uint64_t>(rx_id));
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double sigma = std::sqrt(std::pow(10.0, scenario.thermal.floor_dbm / 10.0) / 2.0);
        for (auto& s : frame.samples)
            s += cplx(sigma * gauss(rng), sigma * gauss(rng));
    }
    return frame;
}

BasebandFrame synthesize_rx(const Scenario& scenario, std::size_t rx_id)
{
    const auto paths = enumerate_paths(scenario, rx_id);
    return synthesize_rx(scenario, rx_id, paths);
}

} // namespace pmcw
