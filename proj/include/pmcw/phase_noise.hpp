// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmcw {

struct MaskPoint {
    double freq_hz;
    double level_dbc_hz;

    friend bool operator==(const MaskPoint&, const MaskPoint&) = default;
};

/**
 * @brief Phase-noise spectral mask, piecewise linear in dB over log-frequency.
 *
 * Levels are the one-sided phase PSD S_phi(f) in dBc/Hz. Outside the
 * tabulated span the nearest endpoint level applies.
 */
class PsdMask {
public:
    explicit PsdMask(std::vector<MaskPoint> points);

    double level_at(double freq_hz) const;
    std::span<const MaskPoint> points() const noexcept { return points_; }

    /// Artifact default PLL profile: -70 dBc/Hz @ 10 kHz, -80 @ 100 kHz,
    /// -85 @ 1 MHz, -110 @ 10 MHz, -120 @ 100 MHz.
    static PsdMask default_pll();

private:
    std::vector<MaskPoint> points_;
};

/// `<freq_hz> <level_dbc_hz>` per line, `#` comments.
PsdMask read_mask_file(const std::filesystem::path& path);
PsdMask parse_mask_text(std::string_view text);
std::string format_mask_text(std::span<const MaskPoint> points);

struct SpectralLine {
    double freq_hz;
    double amplitude_rad;
    double phase_rad;
};

/**
 * @brief One PLL's phase noise as a finite sum of cosines on the grid k * df.
 *
 * phi(t) = sum_k a_k cos(2 pi f_k t + theta_k). The process is periodic with
 * period 1 / df, and evaluation is exact at any real time.
 */
class PhaseNoiseProcess {
public:
    PhaseNoiseProcess() = default;
    PhaseNoiseProcess(std::vector<SpectralLine> lines, double delta_f_hz, std::size_t k_max,
                      std::uint64_t seed = 0, std::size_t pruned = 0);

    std::span<const SpectralLine> lines() const noexcept { return lines_; }
    double delta_f() const noexcept { return delta_f_; }
    double period() const noexcept { return delta_f_ > 0.0 ? 1.0 / delta_f_ : 0.0; }
    std::size_t k_max() const noexcept { return k_max_; }
    std::uint64_t seed() const noexcept { return seed_; }
    /// Number of grid lines dropped below the negligibility floor at synthesis.
    std::size_t pruned() const noexcept { return pruned_; }

    /// Exact trigonometric sum at each requested time.
    std::vector<double> evaluate(std::span<const double> times) const;
    double evaluate(double t) const;

    /// phi(t0 + i * dt) for i in [0, count). When the period is an integer
    /// multiple of dt the sum is carried out as one inverse DFT with the
    /// time offset folded into each line's phase; otherwise it falls back to
    /// the direct sum. Both routes are exact up to rounding.
    std::vector<double> evaluate_grid(double t0, double dt, std::size_t count) const;

    /// Process with every theta_k shifted by -2 pi f_k tau, i.e. phi(t - tau).
    PhaseNoiseProcess delayed(double tau) const;

    /// Mean-square phase, sum_k a_k^2 / 2.
    double variance() const noexcept;

private:
    std::vector<SpectralLine> lines_;
    double delta_f_ = 0.0;
    std::size_t k_max_ = 0;
    std::uint64_t seed_ = 0;
    std::size_t pruned_ = 0;
};

/// Lines with amplitude below this are dropped during synthesis.
inline constexpr double kPruneFloorRad = 1e-10;

/**
 * @brief Draws one phase-noise realization from a mask.
 *
 * df = 1 / duration, k_max = floor(f_max / df), a_k = sqrt(2 * 10^(mask(f_k)/10) * df),
 * theta_k uniform in [0, 2 pi) from a 64-bit Mersenne twister seeded with `seed`.
 * Throws BadDuration (duration <= 0) or BadBand (f_max <= df).
 */
PhaseNoiseProcess synthesize(const PsdMask& mask, double duration_s, double f_max_hz, std::uint64_t seed);

enum class ModulationMode { Exact, Linearized };

/// exp(j phi) in exact mode, 1 + j phi in linearized mode.
std::vector<std::complex<double>> modulation(std::span<const double> phi, ModulationMode mode = ModulationMode::Exact);
std::complex<double> modulation(double phi, ModulationMode mode = ModulationMode::Exact);

/// dB values below this are clamped (numerical zero).
inline constexpr double kFloorDb = -300.0;

/**
 * @brief Averaged-periodogram PSD estimate in the mask convention.
 *
 * Splits the samples into n_segments non-overlapping rectangular segments and
 * returns the one-sided S_phi(f) = 2 |X_k|^2 / (fs * seg_len), averaged, for
 * 0 < f < fs / 2. Throws TooFewSamples if samples < 2 * n_segments.
 */
std::vector<MaskPoint> estimate_psd(std::span<const double> samples, double sample_rate_hz, std::size_t n_segments);

} // namespace pmcw
