// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pmcw/dsp.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pmcw {

/// Slow-time phase read off the LOS range bin, one value per burst, in (-pi, pi].
struct PnVector {
    std::vector<double> xi;
    std::size_t source_bin = 0;
    std::size_t rx_id = 0;
    std::size_t tx_id = 0;
};

/// Half-open range of range bins.
struct BinRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool contains(std::size_t p) const { return p >= begin && p < end; }
};

inline BinRange section_bins(const RangeSlowTimeMatrix& rst, std::size_t section)
{
    return {rst.section_begin(section), rst.section_end(section)};
}

/// Detection gate for the LOS search, dB below the strongest row of the matrix.
inline constexpr double kLosGateDb = -40.0;

struct LosDetection {
    std::size_t bin = 0;
    double level_db = 0.0; ///< mean row power relative to the strongest row
    bool detected = false; ///< level_db >= gate
};

/// Without a geometry hint, rows weaker than this (dB below the section's
/// strongest row) are not LOS candidates.
inline constexpr double kLosSectionDb = -20.0;

/// Half-width, in bins, of the window searched around a geometry hint.
inline constexpr std::size_t kLosSearchRadius = 2;

/**
 * @brief Finds the LOS return of a remote radar inside its range section.
 *
 * With `expected_bin` (known baseline), the strongest row within
 * kLosSearchRadius of it is taken. Without it, the LOS being the shortest
 * path between the radars, the earliest row within kLosSectionDb of the
 * section's strongest row is taken. Either way, detected is set when the
 * row clears `gate_db` relative to the strongest row of the whole matrix.
 * Throws EmptySection for an empty or out-of-range section, BadBin for a
 * hint outside the section.
 */
LosDetection locate_los_bin(const RangeSlowTimeMatrix& rst, BinRange section, double gate_db = kLosGateDb,
                            std::optional<std::size_t> expected_bin = std::nullopt);

/// xi[n] = arg R(los_bin, n). Throws BadBin.
PnVector extract_pn_vector(const RangeSlowTimeMatrix& rst, std::size_t los_bin);

/// out(p, n) = rst(p, n) exp(-j xi[n]) for p in `bins`; other rows copied
/// unchanged. Throws LengthMismatch if xi does not have one value per burst.
RangeSlowTimeMatrix apply_compensation(const RangeSlowTimeMatrix& rst, const PnVector& xi, BinRange bins);

struct Attenuation {
    double factor = 0.0; ///< 2 |sin(pi f tau)|, per spectral line
    bool effective = false; ///< f |tau| <= 1/6, i.e. factor <= 1
};

/// Residual factor on a bistatic line after LOS compensation, delay difference delta_tau.
Attenuation predicted_attenuation(double freq_hz, double delta_tau_s);

/// Range-correlation factor on a mono-static line with round-trip delay tau_m.
Attenuation mono_range_correlation_factor(double freq_hz, double tau_mono_s);

/// `n,xi_radians` rows with a header line.
std::string format_pn_vector_csv(const PnVector& pn);

/// `f_hz,factor_linear,effective` rows with a header line.
std::string format_attenuation_csv(std::span<const double> freqs_hz, double delta_tau_s);

} // namespace pmcw
