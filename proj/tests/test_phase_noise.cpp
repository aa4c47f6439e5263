// SPDX-License-Identifier: Apache-2.0
#include "pmcw/error.hpp"
#include "pmcw/phase_noise.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace pmcw;
using cplx = std::complex<double>;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFrame = 504.0 * 256.0 * 1e-9;

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no pmcw::Error thrown");
    return ErrorCode::ConfigError;
}

PhaseNoiseProcess one_line(double f, double a, double theta, double df)
{
    return PhaseNoiseProcess({{f, a, theta}}, df, static_cast<std::size_t>(std::llround(f / df)));
}

} // namespace

TEST_CASE("mask validation and interpolation")
{
    CHECK(code_of([] { PsdMask({{1e3, -80.0}}); }) == ErrorCode::BadMask);
    CHECK(code_of([] { PsdMask({{1e3, -80.0}, {1e3, -90.0}}); }) == ErrorCode::BadMask);
    CHECK(code_of([] { PsdMask({{1e4, -80.0}, {1e3, -90.0}}); }) == ErrorCode::BadMask);
    CHECK(code_of([] { PsdMask({{0.0, -80.0}, {1e3, -90.0}}); }) == ErrorCode::BadMask);
    CHECK(code_of([] { PsdMask({{1e3, NAN}, {1e4, -90.0}}); }) == ErrorCode::BadMask);

    const PsdMask m({{1e3, -80.0}, {1e5, -100.0}});
    CHECK_THAT(m.level_at(1e4), WithinAbs(-90.0, 1e-12)); // halfway in log-frequency
    CHECK(m.level_at(10.0) == -80.0);
    CHECK(m.level_at(1e9) == -100.0);
    CHECK(m.level_at(1e3) == -80.0);

    const auto d = PsdMask::default_pll();
    CHECK(d.level_at(1e4) == -70.0);
    CHECK(d.level_at(1e6) == -85.0);
    CHECK(d.level_at(1e8) == -120.0);
}

TEST_CASE("mask text format")
{
    const auto m = parse_mask_text("# header\n1e3 -80\n\n1e5  -100  # note\n");
    REQUIRE(m.points().size() == 2);
    CHECK(m.points()[1] == MaskPoint{1e5, -100.0});
    const auto again = parse_mask_text(format_mask_text(m.points()));
    CHECK(std::equal(again.points().begin(), again.points().end(), m.points().begin()));
    CHECK(code_of([] { parse_mask_text("1e3 -80 extra\n1e4 -90\n"); }) == ErrorCode::BadMask);
    CHECK(code_of([] { parse_mask_text("1e3\n"); }) == ErrorCode::BadMask);
    CHECK(code_of([] { read_mask_file("/nonexistent/mask.txt"); }) == ErrorCode::IoError);
}

TEST_CASE("synthesis grid and amplitudes")
{
    const PsdMask flat({{1e3, -80.0}, {1e9, -80.0}});
    const auto pn = synthesize(flat, kFrame, 100e6, 42);
    const double df = 1.0 / kFrame;
    CHECK_THAT(pn.delta_f(), WithinRel(df, 1e-12));
    CHECK(pn.k_max() == static_cast<std::size_t>(std::floor(100e6 / df + 1e-9)));
    CHECK(pn.lines().size() == pn.k_max());
    CHECK(pn.pruned() == 0);
    const double alpha = std::sqrt(2.0 * 1e-8 * df);
    for (std::size_t i = 0; i < pn.lines().size(); ++i) {
        const auto& line = pn.lines()[i];
        REQUIRE_THAT(line.freq_hz, WithinRel(static_cast<double>(i + 1) * df, 1e-12));
        REQUIRE_THAT(line.amplitude_rad, WithinRel(alpha, 1e-12));
        REQUIRE(line.phase_rad >= 0.0);
        REQUIRE(line.phase_rad < 2.0 * kPi);
    }
    CHECK(pn.seed() == 42);
}

TEST_CASE("synthesis errors")
{
    const auto mask = PsdMask::default_pll();
    CHECK(code_of([&] { synthesize(mask, 0.0, 1e6, 1); }) == ErrorCode::BadDuration);
    CHECK(code_of([&] { synthesize(mask, -1.0, 1e6, 1); }) == ErrorCode::BadDuration);
    CHECK(code_of([&] { synthesize(mask, 1e-3, 1e3, 1); }) == ErrorCode::BadBand);
    CHECK(code_of([&] { synthesize(mask, 1e-3, 500.0, 1); }) == ErrorCode::BadBand);
}

TEST_CASE("vanishing mask is pruned to nothing")
{
    const PsdMask silent({{1e3, -300.0}, {1e9, -300.0}});
    const auto pn = synthesize(silent, kFrame, 100e6, 3);
    CHECK(pn.lines().empty());
    CHECK(pn.pruned() == pn.k_max());
    for (double v : pn.evaluate_grid(0.0, 1e-9, 1000))
        REQUIRE(v == 0.0);
}

TEST_CASE("synthesis is deterministic per seed")
{
    const auto mask = PsdMask::default_pll();
    const auto a = synthesize(mask, kFrame, 100e6, 7);
    const auto b = synthesize(mask, kFrame, 100e6, 7);
    const auto c = synthesize(mask, kFrame, 100e6, 8);
    REQUIRE(a.lines().size() == b.lines().size());
    bool identical = true, differs = false;
    for (std::size_t i = 0; i < a.lines().size(); ++i) {
        identical = identical && a.lines()[i].phase_rad == b.lines()[i].phase_rad &&
                    a.lines()[i].amplitude_rad == b.lines()[i].amplitude_rad;
        differs = differs || a.lines()[i].phase_rad != c.lines()[i].phase_rad;
    }
    CHECK(identical);
    CHECK(differs);
}

TEST_CASE("evaluate basics")
{
    const PhaseNoiseProcess empty;
    CHECK(empty.evaluate(0.3) == 0.0);
    const auto p = one_line(1e5, 0.02, 0.0, 1e3);
    CHECK(p.evaluate(0.0) == 0.02);
    const std::vector<double> times{0.0, 2.5e-6};
    const auto v = p.evaluate(times);
    CHECK(v[0] == 0.02);
    CHECK_THAT(v[1], WithinAbs(0.02 * std::cos(2.0 * kPi * 1e5 * 2.5e-6), 1e-15));
    CHECK_THAT(p.variance(), WithinAbs(0.0002, 1e-18));
}

TEST_CASE("difference identity for a single component")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double f = 3.3e5, a = 0.05, theta = 0.4;
    const auto p = one_line(f, a, theta, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const double t = u(rng) * 1e-3, tau = u(rng) * 1e-6;
        const double lhs = p.evaluate(t) - p.evaluate(t - tau);
        // cos x - cos y = -2 sin((x+y)/2) sin((x-y)/2)
        const double rhs = -2.0 * a * std::sin(kPi * f * tau) * std::sin(2.0 * kPi * f * (t - tau / 2.0) + theta);
        REQUIRE_THAT(lhs, WithinAbs(rhs, 1e-12));
    }
}

TEST_CASE("exact delay property")
{
    const auto pn = synthesize(PsdMask::default_pll(), kFrame, 20e6, 11);
    const double tau = 33.356e-9;
    const auto shifted = pn.delayed(tau);
    for (double t : {0.0, 1.7e-6, 5e-5, 1.2e-4}) {
        const double direct = pn.evaluate(t - tau);
        REQUIRE_THAT(shifted.evaluate(t), WithinAbs(direct, 1e-12 * std::max(1.0, std::abs(direct))));
    }
}

TEST_CASE("grid evaluation matches the direct sum on both routes")
{
    const auto pn = synthesize(PsdMask::default_pll(), kFrame, 100e6, 13);
    // Commensurate grid: FFT route.
    const std::size_t count = 504 * 256;
    const auto grid = pn.evaluate_grid(-33.356e-9, 1e-9, count);
    double worst = 0.0;
    for (std::size_t i = 0; i < count; i += 997)
        worst = std::max(worst, std::abs(grid[i] - pn.evaluate(-33.356e-9 + static_cast<double>(i) * 1e-9)));
    CHECK(worst < 1e-12);
    // Incommensurate step: direct route.
    const auto odd = pn.evaluate_grid(1e-7, 1.3e-9, 200);
    for (std::size_t i = 0; i < odd.size(); ++i)
        REQUIRE_THAT(odd[i], WithinAbs(pn.evaluate(1e-7 + static_cast<double>(i) * 1.3e-9), 1e-12));
    CHECK(pn.evaluate_grid(0.0, 1e-9, 0).empty());
}

TEST_CASE("range-correlation RMS law")
{
    const double f = 2e6, a = 0.03, tau = 40e-9;
    const auto p = one_line(f, a, 1.0, 1e4);
    // Average over exactly one period of the line.
    const std::size_t n = 10000;
    const double dt = 1.0 / (f * static_cast<double>(n));
    double s_phi = 0.0, s_diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        s_phi += std::pow(p.evaluate(t), 2);
        s_diff += std::pow(p.evaluate(t) - p.evaluate(t - tau), 2);
    }
    const double ratio = std::sqrt(s_diff / s_phi);
    CHECK_THAT(ratio, WithinRel(2.0 * std::abs(std::sin(kPi * f * tau)), 1e-9));
}

TEST_CASE("modulation modes")
{
    CHECK(modulation(0.0) == cplx(1.0, 0.0));
    CHECK(modulation(0.0, ModulationMode::Linearized) == cplx(1.0, 0.0));
    CHECK(std::abs(modulation(0.01) - modulation(0.01, ModulationMode::Linearized)) <= 5e-5);
    CHECK(std::abs(modulation(kPi) - cplx(-1.0, 0.0)) < 1e-15);
    CHECK(modulation(kPi, ModulationMode::Linearized) == cplx(1.0, kPi));
    const std::vector<double> phis{0.0, 0.2, -1.0};
    const auto v = modulation(phis, ModulationMode::Exact);
    for (std::size_t i = 0; i < phis.size(); ++i)
        CHECK(v[i] == std::polar(1.0, phis[i]));
}

TEST_CASE("PSD estimate of a sinusoid integrates to a^2 / 2")
{
    const double fs = 1e6, a = 0.1;
    const std::size_t n = 4096;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = a * std::cos(2.0 * kPi * 12345.6 * static_cast<double>(i) / fs);
    const auto est = estimate_psd(x, fs, 1);
    const double bin = fs / static_cast<double>(n);
    double total = 0.0;
    for (const auto& p : est)
        total += std::pow(10.0, p.level_dbc_hz / 10.0) * bin;
    CHECK_THAT(total, WithinRel(a * a / 2.0, 0.05));
}

TEST_CASE("PSD estimate edge cases")
{
    const std::vector<double> zeros(64, 0.0);
    for (const auto& p : estimate_psd(zeros, 1e6, 4))
        CHECK(p.level_dbc_hz == kFloorDb);
    const std::vector<double> few(3, 1.0);
    CHECK(code_of([&] { estimate_psd(few, 1e6, 2); }) == ErrorCode::TooFewSamples);
    CHECK(code_of([&] { estimate_psd(few, 1e6, 0); }) == ErrorCode::TooFewSamples);
}

TEST_CASE("flat mask round trip over the reference frame")
{
    const PsdMask flat({{1e3, -80.0}, {1e9, -80.0}});
    const double fs = 1e9;
    const auto count = static_cast<std::size_t>(std::llround(kFrame * fs));
    std::vector<double> mean;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto pn = synthesize(flat, kFrame, 100e6, seed);
        const auto est = estimate_psd(pn.evaluate_grid(0.0, 1.0 / fs, count), fs, 1);
        if (mean.empty())
            mean.assign(est.size(), 0.0);
        for (std::size_t i = 0; i < est.size(); ++i)
            mean[i] += std::pow(10.0, est[i].level_dbc_hz / 10.0) / 100.0;
    }
    const double df = 1.0 / kFrame;
    for (std::size_t i = 0; i < mean.size(); ++i) {
        const double f = static_cast<double>(i + 1) * df;
        if (f < 10.0 * df || f > 50e6)
            continue;
        REQUIRE_THAT(10.0 * std::log10(mean[i]), WithinAbs(-80.0, 1.0));
    }
}

TEST_CASE("different seeds are uncorrelated")
{
    const auto mask = PsdMask::default_pll();
    const auto a = synthesize(mask, kFrame, 100e6, 1).evaluate_grid(0.0, 1e-9, 129024);
    const auto b = synthesize(mask, kFrame, 100e6, 2).evaluate_grid(0.0, 1e-9, 129024);
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    CHECK(std::abs(ab) / std::sqrt(aa * bb) <= 0.05);
}
