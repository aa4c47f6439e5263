// SPDX-License-Identifier: Apache-2.0
#include "pmcw/compensation.hpp"

#include "pmcw/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <vector>

namespace pmcw {

namespace {

double mean_row_power(const RangeSlowTimeMatrix& rst, std::size_t p)
{
    double acc = 0.0;
    for (const auto& v : rst.values.row(p))
        acc += std::norm(v);
    return acc / static_cast<double>(rst.bursts());
}

Attenuation sine_factor(double freq_hz, double tau_s)
{
    const double product = std::abs(freq_hz * tau_s);
    return {2.0 * std::abs(std::sin(std::numbers::pi * freq_hz * tau_s)), product <= 1.0 / 6.0 + 1e-12};
}

} // namespace

LosDetection locate_los_bin(const RangeSlowTimeMatrix& rst, BinRange section, double gate_db,
                            std::optional<std::size_t> expected_bin)
{
    if (section.begin >= section.end || section.end > rst.range_bins() || rst.bursts() == 0)
        throw Error(ErrorCode::EmptySection,
                    fmt::format("section [{}, {}) is empty or outside {} bins", section.begin, section.end,
                                rst.range_bins()));
    if (expected_bin && !section.contains(*expected_bin))
        throw Error(ErrorCode::BadBin, fmt::format("expected LOS bin {} outside section [{}, {})", *expected_bin,
                                                   section.begin, section.end));

    std::vector<double> power(rst.range_bins());
    double strongest = 0.0;
    for (std::size_t p = 0; p < rst.range_bins(); ++p) {
        power[p] = mean_row_power(rst, p);
        strongest = std::max(strongest, power[p]);
    }
    auto detection = [&](std::size_t p) {
        const double level = strongest > 0.0 ? power_db(power[p] / strongest) : kFloorDb;
        return LosDetection{p, level, level >= gate_db};
    };

    auto first = section.begin;
    auto last = section.end;
    if (expected_bin) {
        first = std::max(section.begin, *expected_bin - std::min(*expected_bin, kLosSearchRadius));
        last = std::min(section.end, *expected_bin + kLosSearchRadius + 1);
    }
    std::size_t best = first;
    for (std::size_t p = first; p < last; ++p) {
        if (power[p] > power[best])
            best = p;
    }
    if (expected_bin || power[best] <= 0.0)
        return detection(best);

    const double threshold = power[best] * std::pow(10.0, kLosSectionDb / 10.0);
    for (std::size_t p = first; p < last; ++p) {
        if (power[p] >= threshold)
            return detection(p);
    }
    return detection(best);
}

PnVector extract_pn_vector(const RangeSlowTimeMatrix& rst, std::size_t los_bin)
{
    if (los_bin >= rst.range_bins())
        throw Error(ErrorCode::BadBin, fmt::format("range bin {} outside 0..{}", los_bin, rst.range_bins()));
    PnVector pn;
    pn.source_bin = los_bin;
    pn.xi.reserve(rst.bursts());
    for (const auto& v : rst.values.row(los_bin)) {
        double phase = std::arg(v);
        if (phase <= -std::numbers::pi)
            phase = std::numbers::pi;
        pn.xi.push_back(phase);
    }
    return pn;
}

RangeSlowTimeMatrix apply_compensation(const RangeSlowTimeMatrix& rst, const PnVector& xi, BinRange bins)
{
    if (xi.xi.size() != rst.bursts())
        throw Error(ErrorCode::LengthMismatch,
                    fmt::format("PN vector has {} values for {} bursts", xi.xi.size(), rst.bursts()));
    RangeSlowTimeMatrix out = rst;
    std::vector<cplx> rotation(xi.xi.size());
    for (std::size_t n = 0; n < rotation.size(); ++n)
        rotation[n] = std::polar(1.0, -xi.xi[n]);
    const std::size_t end = std::min(bins.end, rst.range_bins());
    for (std::size_t p = bins.begin; p < end; ++p) {
        auto row = out.values.row(p);
        for (std::size_t n = 0; n < row.size(); ++n)
            row[n] *= rotation[n];
    }
    return out;
}

Attenuation predicted_attenuation(double freq_hz, double delta_tau_s) { return sine_factor(freq_hz, delta_tau_s); }

Attenuation mono_range_correlation_factor(double freq_hz, double tau_mono_s) { return sine_factor(freq_hz, tau_mono_s); }

std::string format_pn_vector_csv(const PnVector& pn)
{
    std::string out = "n,xi_radians\n";
    for (std::size_t n = 0; n < pn.xi.size(); ++n)
        out += fmt::format("{},{:.17g}\n", n, pn.xi[n]);
    return out;
}

std::string format_attenuation_csv(std::span<const double> freqs_hz, double delta_tau_s)
{
    std::string out = "f_hz,factor_linear,effective\n";
    for (double f : freqs_hz) {
        const auto a = predicted_attenuation(f, delta_tau_s);
        out += fmt::format("{:.10g},{:.17g},{}\n", f, a.factor, a.effective ? 1 : 0);
    }
    return out;
}

} // namespace pmcw
