// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pmcw/codes.hpp"
#include "pmcw/scene.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pmcw {

/// Received baseband at one radar: N bursts of L chips, one sample per chip,
/// starting at the shared start-of-frame t = 0.
struct BasebandFrame {
    std::vector<cplx> samples;
    std::size_t rx_id = 1;
    std::size_t bursts = 0;
    std::size_t code_length = 0;
    double chip_s = 0.0;
    double carrier_hz = 0.0;

    double sample_rate() const { return 1.0 / chip_s; }
};

/// Sample i = shifted_chips[i mod L] with shifted = circular_shift(code, shift).
std::vector<cplx> tx_baseband(const CodeSequence& code, long long shift, std::size_t bursts);

/**
 * @brief Received frame at radar `rx_id` for the scenario's full path set.
 *
 * Each path contributes
 *   amp * tx[(i - d) mod L] * exp(-j 2 pi f_D t_i) * pn(phi_tx(t_i - tau) - phi_rx(t_i))
 * with t_i = i T_c, d = floor(tau / T_c), and pn() the scenario's modulation
 * mode. Periodic extension covers i < d (continuous transmission).
 * Throws PnDurationTooShort when a PLL period is shorter than the frame.
 */
BasebandFrame synthesize_rx(const Scenario& scenario, std::size_t rx_id);

/// Same, restricted to the given paths (all must have rx_id as receiver).
/// Thermal noise, when enabled in the scenario, is added once.
BasebandFrame synthesize_rx(const Scenario& scenario, std::size_t rx_id, std::span<const PropagationPath> paths);

/// Contribution of one path, without thermal noise.
std::vector<cplx> path_samples(const Scenario& scenario, const PropagationPath& path);

} // namespace pmcw
