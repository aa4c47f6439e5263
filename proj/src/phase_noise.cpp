// SPDX-License-Identifier: Apache-2.0
#include "pmcw/phase_noise.hpp"

#include "pmcw/error.hpp"
#include "pmcw/fft.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace pmcw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_db(double power)
{
    if (!(power > 0.0))
        return kFloorDb;
    return std::max(kFloorDb, 10.0 * std::log10(power));
}

} // namespace

PsdMask::PsdMask(std::vector<MaskPoint> points) : points_(std::move(points))
{
    if (points_.size() < 2)
        throw Error(ErrorCode::BadMask, "mask needs at least two points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (!(p.freq_hz > 0.0) || !std::isfinite(p.freq_hz))
            throw Error(ErrorCode::BadMask, fmt::format("point {}: frequency must be positive", i));
        if (!std::isfinite(p.level_dbc_hz))
            throw Error(ErrorCode::BadMask, fmt::format("point {}: level must be finite", i));
        if (i > 0 && !(p.freq_hz > points_[i - 1].freq_hz))
            throw Error(ErrorCode::BadMask, fmt::format("point {}: frequencies must increase strictly", i));
    }
}

double PsdMask::level_at(double freq_hz) const
{
    if (freq_hz <= points_.front().freq_hz)
        return points_.front().level_dbc_hz;
    if (freq_hz >= points_.back().freq_hz)
        return points_.back().level_dbc_hz;
    auto upper = std::upper_bound(points_.begin(), points_.end(), freq_hz,
                                  [](double f, const MaskPoint& p) { return f < p.freq_hz; });
    const auto& hi = *upper;
    const auto& lo = *(upper - 1);
    const double w = std::log(freq_hz / lo.freq_hz) / std::log(hi.freq_hz / lo.freq_hz);
    return lo.level_dbc_hz + w * (hi.level_dbc_hz - lo.level_dbc_hz);
}

PsdMask PsdMask::default_pll()
{
    return PsdMask({{1e4, -70.0}, {1e5, -80.0}, {1e6, -85.0}, {1e7, -110.0}, {1e8, -120.0}});
}

PsdMask parse_mask_text(std::string_view text)
{
    std::vector<MaskPoint> points;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        std::istringstream fields{std::string(line)};
        MaskPoint p{};
        std::string extra;
        if (!(fields >> p.freq_hz >> p.level_dbc_hz) || (fields >> extra))
            throw Error(ErrorCode::BadMask, fmt::format("line {}: expected '<freq_hz> <level_dbc_hz>'", line_no));
        points.push_back(p);
    }
    return PsdMask(std::move(points));
}

PsdMask read_mask_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open mask file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_mask_text(buffer.str());
}

std::string format_mask_text(std::span<const MaskPoint> points)
{
    std::string out = "# freq_hz level_dbc_hz\n";
    for (const auto& p : points)
        out += fmt::format("{:.10g} {:.6f}\n", p.freq_hz, p.level_dbc_hz);
    return out;
}

PhaseNoiseProcess::PhaseNoiseProcess(std::vector<SpectralLine> lines, double delta_f_hz, std::size_t k_max,
                                     std::uint64_t seed, std::size_t pruned)
    : lines_(std::move(lines)), delta_f_(delta_f_hz), k_max_(k_max), seed_(seed), pruned_(pruned)
{
}

double PhaseNoiseProcess::evaluate(double t) const
{
    double acc = 0.0;
    for (const auto& line : lines_)
        acc += line.amplitude_rad * std::cos(kTwoPi * line.freq_hz * t + line.phase_rad);
    return acc;
}

std::vector<double> PhaseNoiseProcess::evaluate(std::span<const double> times) const
{
    std::vector<double> out(times.size());
    std::transform(times.begin(), times.end(), out.begin(), [this](double t) { return evaluate(t); });
    return out;
}

std::vector<double> PhaseNoiseProcess::evaluate_grid(double t0, double dt, std::size_t count) const
{
    std::vector<double> out(count, 0.0);
    if (count == 0 || lines_.empty())
        return out;

    const double ratio = (delta_f_ > 0.0 && dt > 0.0) ? 1.0 / (delta_f_ * dt) : 0.0;
    const double rounded = std::round(ratio);
    const bool commensurate = rounded >= 1.0 && std::abs(ratio - rounded) <= 1e-9 * rounded;
    const auto period_samples = static_cast<std::size_t>(rounded);
    const double fft_cost = commensurate ? rounded * std::log2(rounded + 1.0) : 0.0;
    const double direct_cost = static_cast<double>(count) * static_cast<double>(lines_.size());

    if (!commensurate || fft_cost > direct_cost) {
        for (std::size_t i = 0; i < count; ++i)
            out[i] = evaluate(t0 + static_cast<double>(i) * dt);
        return out;
    }

    std::vector<std::complex<double>> spectrum(period_samples);
    for (const auto& line : lines_) {
        const auto k = static_cast<std::size_t>(std::llround(line.freq_hz / delta_f_));
        spectrum[k % period_samples] += std::polar(line.amplitude_rad, line.phase_rad + kTwoPi * line.freq_hz * t0);
    }
    const auto series = fft::backward(spectrum);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = series[i % period_samples].real();
    return out;
}

PhaseNoiseProcess PhaseNoiseProcess::delayed(double tau) const
{
    auto lines = lines_;
    for (auto& line : lines)
        line.phase_rad -= kTwoPi * line.freq_hz * tau;
    return PhaseNoiseProcess(std::move(lines), delta_f_, k_max_, seed_, pruned_);
}

double PhaseNoiseProcess::variance() const noexcept
{
    double acc = 0.0;
    for (const auto& line : lines_)
        acc += 0.5 * line.amplitude_rad * line.amplitude_rad;
    return acc;
}

PhaseNoiseProcess synthesize(const PsdMask& mask, double duration_s, double f_max_hz, std::uint64_t seed)
{
    if (!(duration_s > 0.0) || !std::isfinite(duration_s))
        throw Error(ErrorCode::BadDuration, "duration must be positive");
    const double delta_f = 1.0 / duration_s;
    if (!(f_max_hz > delta_f) || !std::isfinite(f_max_hz))
        throw Error(ErrorCode::BadBand, fmt::format("f_max {} Hz must exceed df {} Hz", f_max_hz, delta_f));

    const auto k_max = static_cast<std::size_t>(std::floor(f_max_hz / delta_f + 1e-9));
    std::mt19937_64 rng(seed);
    std::vector<SpectralLine> lines;
    lines.reserve(k_max);
    std::size_t pruned = 0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double f = static_cast<double>(k) * delta_f;
        // Draw for every k, pruned or not, so the phase stream never depends on the mask.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double amplitude = std::sqrt(2.0 * std::pow(10.0, mask.level_at(f) / 10.0) * delta_f);
        if (amplitude < kPruneFloorRad) {
            ++pruned;
            continue;
        }
        lines.push_back({f, amplitude, kTwoPi * u});
    }
    return PhaseNoiseProcess(std::move(lines), delta_f, k_max, seed, pruned);
}

std::complex<double> modulation(double phi, ModulationMode mode)
{
    if (mode == ModulationMode::Linearized)
        return {1.0, phi};
    return std::polar(1.0, phi);
}

std::vector<std::complex<double>> modulation(std::span<const double> phi, ModulationMode mode)
{
    std::vector<std::complex<double>> out(phi.size());
    std::transform(phi.begin(), phi.end(), out.begin(), [mode](double p) { return modulation(p, mode); });
    return out;
}

std::vector<MaskPoint> estimate_psd(std::span<const double> samples, double sample_rate_hz, std::size_t n_segments)
{
    if (n_segments == 0 || samples.size() < 2 * n_segments)
        throw Error(ErrorCode::TooFewSamples,
                    fmt::format("{} samples cannot fill {} segments", samples.size(), n_segments));
    const std::size_t seg = samples.size() / n_segments;
    const std::size_t bins = (seg + 1) / 2; // k = 1 .. bins-1 lie strictly inside (0, fs/2)
    std::vector<double> acc(bins, 0.0);
    std::vector<std::complex<double>> buf(seg), spec(seg);
    for (std::size_t s = 0; s < n_segments; ++s) {
        for (std::size_t i = 0; i < seg; ++i)
            buf[i] = samples[s * seg + i];
        fft::forward(buf, spec);
        for (std::size_t k = 1; k < bins; ++k)
            acc[k] += std::norm(spec[k]);
    }
    const double scale = 2.0 / (sample_rate_hz * static_cast<double>(seg) * static_cast<double>(n_segments));
    std::vector<MaskPoint> out;
    out.reserve(bins > 0 ? bins - 1 : 0);
    for (std::size_t k = 1; k < bins; ++k)
        out.push_back({static_cast<double>(k) * sample_rate_hz / static_cast<double>(seg), to_db(acc[k] * scale)});
    return out;
}

} // namespace pmcw
