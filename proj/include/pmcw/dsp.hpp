// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pmcw/codes.hpp"
#include "pmcw/txrx.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace pmcw {

/// Dense row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx> data() noexcept { return data_; }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/**
 * Range / slow-time matrix R(p, n): rows are range bins 0 .. L/2 - 1 (the
 * ambiguous upper half of the periodic correlation is dropped), columns are
 * bursts. The rows split into M equal radar sections of L / (2M) bins.
 */
struct RangeSlowTimeMatrix {
    ComplexMatrix values;
    std::size_t sections = 1;
    double burst_period_s = 0.0;

    std::size_t range_bins() const { return values.rows(); }
    std::size_t bursts() const { return values.cols(); }
    std::size_t section_width() const { return values.rows() / sections; }
    /// First bin of section s (0-based); section s holds radar s + 1's signals.
    std::size_t section_begin(std::size_t s) const { return s * section_width(); }
    std::size_t section_end(std::size_t s) const { return (s + 1) * section_width(); }
};

enum class Window { None, Hann };

std::string_view to_string(Window w) noexcept;

/**
 * Range / Doppler map: length-N DFT of every range row, centre-shifted so
 * that column N/2 is zero Doppler. A received rotation exp(-j 2 pi f_D n T)
 * lands in the column labelled +f_D by doppler_hz().
 */
struct RangeDopplerMap {
    ComplexMatrix values;
    std::size_t sections = 1;
    double burst_period_s = 0.0;
    Window window = Window::None;

    std::size_t range_bins() const { return values.rows(); }
    std::size_t doppler_bins() const { return values.cols(); }
    std::size_t zero_doppler_bin() const { return values.cols() / 2; }
    double doppler_resolution_hz() const;
    double doppler_hz(std::size_t bin) const;
    /// Column whose label is nearest to `hz`, with wrap-around.
    std::size_t bin_of_doppler(double hz) const;
};

/**
 * @brief Per-burst periodic correlation against the unshifted reference.
 *
 * R(p, n) = sum_l frame[n L + (l + p) mod L] * conj(ref[l]) for p < L/2,
 * evaluated as IDFT(DFT(burst) * conj(DFT(ref))) / L.
 * Throws LengthMismatch unless the frame holds whole bursts of the reference length.
 */
RangeSlowTimeMatrix periodic_correlate(const BasebandFrame& frame, const CodeSequence& reference,
                                       std::size_t sections = 1);
RangeSlowTimeMatrix periodic_correlate(std::span<const cplx> samples, const CodeSequence& reference,
                                       std::size_t sections, double burst_period_s);

RangeDopplerMap doppler_dft(const RangeSlowTimeMatrix& rst, Window window = Window::None);

/// Exact inverse of doppler_dft. Throws WindowedMap for windowed maps.
RangeSlowTimeMatrix doppler_idft(const RangeDopplerMap& rdm);

struct Exclusion {
    std::size_t bin;
    std::size_t radius;
};

/// Median cell power over rows not within any exclusion, in dB relative to the
/// map peak power, clamped at -300 dB. Throws OverExcluded when fewer than a
/// quarter of the cells remain.
double noise_floor(const ComplexMatrix& map, std::span<const Exclusion> exclusions);
double noise_floor(const RangeDopplerMap& rdm, std::span<const Exclusion> exclusions);

/// Mean cell power along one range row, excluding the row's own peak Doppler
/// bin and its two neighbours, in dB relative to the map peak power.
double ridge_power(const RangeDopplerMap& rdm, std::size_t range_bin);

/// Largest off-peak cell power relative to the peak in burst n's range profile, dB.
double range_sidelobe_level(const RangeSlowTimeMatrix& rst, std::size_t burst);

/// One Doppler column as dB relative to the map peak power.
std::vector<double> range_profile_db(const RangeDopplerMap& rdm, std::size_t doppler_bin);

/// Largest |value|^2 over the matrix.
double peak_power(const ComplexMatrix& map);

double power_db(double power);

} // namespace pmcw
