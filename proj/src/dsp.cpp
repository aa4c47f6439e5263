// SPDX-License-Identifier: Apache-2.0
#include "pmcw/dsp.hpp"

#include "pmcw/error.hpp"
#include "pmcw/fft.hpp"
#include "pmcw/phase_noise.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pmcw {

std::string_view to_string(Window w) noexcept
{
    return w == Window::Hann ? "hann" : "none";
}

double power_db(double power)
{
    if (!(power > 0.0))
        return kFloorDb;
    return std::max(kFloorDb, 10.0 * std::log10(power));
}

double RangeDopplerMap::doppler_resolution_hz() const
{
    return 1.0 / (static_cast<double>(doppler_bins()) * burst_period_s);
}

double RangeDopplerMap::doppler_hz(std::size_t bin) const
{
    // Forward DFT puts exp(-j 2 pi f n T) at -f; the label flips the sign.
    const auto offset = static_cast<double>(bin) - static_cast<double>(zero_doppler_bin());
    return -offset * doppler_resolution_hz();
}

std::size_t RangeDopplerMap::bin_of_doppler(double hz) const
{
    const auto n = static_cast<long long>(doppler_bins());
    long long offset = std::llround(-hz / doppler_resolution_hz());
    long long bin = (static_cast<long long>(zero_doppler_bin()) + offset) % n;
    if (bin < 0)
        bin += n;
    return static_cast<std::size_t>(bin);
}

RangeSlowTimeMatrix periodic_correlate(std::span<const cplx> samples, const CodeSequence& reference,
                                       std::size_t sections, double burst_period_s)
{
    const std::size_t len = reference.length();
    if (len < 2 || samples.empty() || samples.size() % len != 0)
        throw Error(ErrorCode::LengthMismatch,
                    fmt::format("frame of {} samples is not a whole number of {}-chip bursts", samples.size(), len));
    if (sections == 0 || (len / 2) % sections != 0)
        throw Error(ErrorCode::IndivisibleCode, fmt::format("{} sections do not tile {} range bins", sections, len / 2));

    const std::size_t bursts = samples.size() / len;
    const std::size_t rows = len / 2;
    RangeSlowTimeMatrix rst{ComplexMatrix(rows, bursts), sections, burst_period_s};

    auto ref_spec = fft::forward(reference.chips());
    const double scale = 1.0 / static_cast<double>(len);
    for (auto& v : ref_spec)
        v = std::conj(v) * scale;

    std::vector<cplx> spec(len), corr(len);
    for (std::size_t n = 0; n < bursts; ++n) {
        fft::forward(samples.subspan(n * len, len), spec);
        for (std::size_t k = 0; k < len; ++k)
            spec[k] *= ref_spec[k];
        fft::backward(spec, corr);
        for (std::size_t p = 0; p < rows; ++p)
            rst.values(p, n) = corr[p];
    }
    return rst;
}

RangeSlowTimeMatrix periodic_correlate(const BasebandFrame& frame, const CodeSequence& reference, std::size_t sections)
{
    if (frame.code_length != 0 && frame.code_length != reference.length())
        throw Error(ErrorCode::LengthMismatch,
                    fmt::format("frame code length {} differs from reference {}", frame.code_length, reference.length()));
    return periodic_correlate(frame.samples, reference, sections,
                              static_cast<double>(reference.length()) * frame.chip_s);
}

RangeDopplerMap doppler_dft(const RangeSlowTimeMatrix& rst, Window window)
{
    const std::size_t rows = rst.values.rows();
    const std::size_t n = rst.values.cols();
    RangeDopplerMap rdm{ComplexMatrix(rows, n), rst.sections, rst.burst_period_s, window};

    std::vector<double> taper(n, 1.0);
    if (window == Window::Hann && n > 1) {
        for (std::size_t i = 0; i < n; ++i)
            taper[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    }

    std::vector<cplx> buf(n), spec(n);
    const std::size_t half = n / 2;
    for (std::size_t r = 0; r < rows; ++r) {
        const auto row = rst.values.row(r);
        for (std::size_t i = 0; i < n; ++i)
            buf[i] = row[i] * taper[i];
        fft::forward(buf, spec);
        auto out = rdm.values.row(r);
        for (std::size_t k = 0; k < n; ++k)
            out[(k + half) % n] = spec[k];
    }
    return rdm;
}

RangeSlowTimeMatrix doppler_idft(const RangeDopplerMap& rdm)
{
    if (rdm.window != Window::None)
        throw Error(ErrorCode::WindowedMap, "cannot invert a windowed Doppler map");
    const std::size_t rows = rdm.values.rows();
    const std::size_t n = rdm.values.cols();
    RangeSlowTimeMatrix rst{ComplexMatrix(rows, n), rdm.sections, rdm.burst_period_s};
    std::vector<cplx> spec(n), buf(n);
    const std::size_t half = n / 2;
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto row = rdm.values.row(r);
        for (std::size_t k = 0; k < n; ++k)
            spec[k] = row[(k + half) % n];
        fft::backward(spec, buf);
        auto out = rst.values.row(r);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = buf[i] * scale;
    }
    return rst;
}

double peak_power(const ComplexMatrix& map)
{
    double peak = 0.0;
    for (const auto& v : map.data())
        peak = std::max(peak, std::norm(v));
    return peak;
}

double noise_floor(const ComplexMatrix& map, std::span<const Exclusion> exclusions)
{
    std::vector<double> cells;
    cells.reserve(map.rows() * map.cols());
    for (std::size_t r = 0; r < map.rows(); ++r) {
        const bool excluded = std::any_of(exclusions.begin(), exclusions.end(), [r](const Exclusion& e) {
            const std::size_t lo = e.bin > e.radius ? e.bin - e.radius : 0;
            return r >= lo && r <= e.bin + e.radius;
        });
        if (excluded)
            continue;
        for (const auto& v : map.row(r))
            cells.push_back(std::norm(v));
    }
    const std::size_t total = map.rows() * map.cols();
    if (total == 0 || cells.size() * 4 < total)
        throw Error(ErrorCode::OverExcluded,
                    fmt::format("exclusions leave {} of {} cells, need a quarter", cells.size(), total));
    const double peak = peak_power(map);
    if (!(peak > 0.0))
        return kFloorDb;
    auto mid = cells.begin() + static_cast<std::ptrdiff_t>(cells.size() / 2);
    std::nth_element(cells.begin(), mid, cells.end());
    double median = *mid;
    if (cells.size() % 2 == 0) {
        const double lower = *std::max_element(cells.begin(), mid);
        median = 0.5 * (median + lower);
    }
    return power_db(median / peak);
}

double noise_floor(const RangeDopplerMap& rdm, std::span<const Exclusion> exclusions)
{
    return noise_floor(rdm.values, exclusions);
}

double ridge_power(const RangeDopplerMap& rdm, std::size_t range_bin)
{
    if (range_bin >= rdm.range_bins())
        throw Error(ErrorCode::BadBin, fmt::format("range bin {} outside 0..{}", range_bin, rdm.range_bins()));
    const auto row = rdm.values.row(range_bin);
    const std::size_t n = row.size();
    const auto peak_it = std::max_element(row.begin(), row.end(),
                                          [](const cplx& a, const cplx& b) { return std::norm(a) < std::norm(b); });
    const auto peak_bin = static_cast<std::size_t>(peak_it - row.begin());
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t d = 0; d < n; ++d) {
        const std::size_t dist = std::min((d + n - peak_bin) % n, (peak_bin + n - d) % n);
        if (dist <= 1)
            continue;
        sum += std::norm(row[d]);
        ++count;
    }
    const double peak = peak_power(rdm.values);
    if (count == 0 || !(peak > 0.0))
        return kFloorDb;
    return power_db(sum / static_cast<double>(count) / peak);
}

double range_sidelobe_level(const RangeSlowTimeMatrix& rst, std::size_t burst)
{
    if (burst >= rst.bursts())
        throw Error(ErrorCode::BadBin, fmt::format("burst {} outside 0..{}", burst, rst.bursts()));
    std::size_t peak_bin = 0;
    double peak = -1.0;
    for (std::size_t p = 0; p < rst.range_bins(); ++p) {
        const double v = std::norm(rst.values(p, burst));
        if (v > peak) {
            peak = v;
            peak_bin = p;
        }
    }
    double side = 0.0;
    for (std::size_t p = 0; p < rst.range_bins(); ++p) {
        if (p != peak_bin)
            side = std::max(side, std::norm(rst.values(p, burst)));
    }
    if (!(peak > 0.0))
        return kFloorDb;
    return power_db(side / peak);
}

std::vector<double> range_profile_db(const RangeDopplerMap& rdm, std::size_t doppler_bin)
{
    if (doppler_bin >= rdm.doppler_bins())
        throw Error(ErrorCode::BadBin, fmt::format("Doppler bin {} outside 0..{}", doppler_bin, rdm.doppler_bins()));
    const double peak = peak_power(rdm.values);
    std::vector<double> out(rdm.range_bins());
    for (std::size_t p = 0; p < out.size(); ++p)
        out[p] = peak > 0.0 ? power_db(std::norm(rdm.values(p, doppler_bin)) / peak) : kFloorDb;
    return out;
}

} // namespace pmcw
