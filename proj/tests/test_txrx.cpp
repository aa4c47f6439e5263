// SPDX-License-Identifier: Apache-2.0
#include "pmcw/dsp.hpp"
#include "pmcw/error.hpp"
#include "pmcw/txrx.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <numbers>

using namespace pmcw;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

RadarNode node(std::size_t id, Vec2 pos)
{
    RadarNode n;
    n.id = id;
    n.position = pos;
    return n;
}

Scenario small_scene(std::size_t radars, std::size_t L = 48, std::size_t N = 16)
{
    Scenario sc;
    sc.code = generate_p3(L);
    sc.bursts = N;
    for (std::size_t m = 1; m <= radars; ++m)
        sc.nodes.push_back(node(m, {static_cast<double>(m) - 1.5, 0.0}));
    return sc;
}

std::shared_ptr<const PhaseNoiseProcess> pll(const Scenario& sc, std::uint64_t seed, double f_max = 200e6)
{
    return std::make_shared<const PhaseNoiseProcess>(
        synthesize(PsdMask::default_pll(), sc.frame_duration(), f_max, seed));
}

PropagationPath unit_path(std::size_t tx, std::size_t rx, double delay_s, PathKind kind = PathKind::Mono)
{
    PropagationPath p;
    p.kind = kind;
    p.tx_id = tx;
    p.rx_id = rx;
    p.delay_s = delay_s;
    p.amplitude = 1.0;
    return p;
}

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

} // namespace

TEST_CASE("tx baseband")
{
    const auto code = generate_p3(504);
    const auto one = tx_baseband(code, 0, 1);
    REQUIRE(one.size() == 504);
    for (std::size_t i = 0; i < 504; ++i)
        REQUIRE(one[i] == code[i]);
    const auto two = tx_baseband(code, 0, 2);
    for (std::size_t i = 0; i < 504; ++i)
        REQUIRE(two[i] == two[i + 504]);
    CHECK(tx_baseband(code, 126, 1)[0] == code[378]);
}

TEST_CASE("ideal mono path correlates to a single peak")
{
    auto sc = small_scene(1, 64, 4);
    sc.pn_enabled = false;
    const std::vector<PropagationPath> paths{unit_path(1, 1, 13.5e-9)};
    const auto rst = periodic_correlate(synthesize_rx(sc, 1, paths), sc.code);
    for (std::size_t n = 0; n < 4; ++n)
        for (std::size_t p = 0; p < rst.range_bins(); ++p)
            REQUIRE(std::abs(rst.values(p, n) - (p == 13 ? cplx(64.0, 0.0) : cplx{})) < 1e-9);
}

TEST_CASE("identical PN on both ends cancels at zero delay")
{
    auto sc = small_scene(1);
    sc.nodes[0].pll = pll(sc, 4);
    const auto path = unit_path(1, 1, 0.0);
    const auto with_pn = path_samples(sc, path);
    auto clean = sc;
    clean.pn_enabled = false;
    const auto without = path_samples(clean, path);
    for (std::size_t i = 0; i < with_pn.size(); ++i)
        REQUIRE(with_pn[i] == without[i]);
}

TEST_CASE("LOS sample phase follows the two PLLs")
{
    auto sc = small_scene(2);
    sc.nodes[0].pll = pll(sc, 1);
    sc.nodes[1].pll = pll(sc, 2);
    const double tau = 3.3356e-9;
    const auto path = unit_path(1, 2, tau, PathKind::Los);
    const auto samples = path_samples(sc, path);
    const auto chips = tx_baseband(sc.code, static_cast<long long>(sc.code_shift(1)), sc.bursts);
    const std::size_t d = 3;
    for (std::size_t i = 0; i < samples.size(); i += 7) {
        const double t = static_cast<double>(i) * sc.chip_s;
        const double expected = sc.nodes[0].pll->evaluate(t - tau) - sc.nodes[1].pll->evaluate(t);
        const cplx code_chip = chips[(i + samples.size() - d) % samples.size()];
        REQUIRE_THAT(std::arg(samples[i] / code_chip), WithinAbs(std::remainder(expected, 2.0 * kPi), 1e-9));
    }
}

TEST_CASE("mono path PN factor is exp(j (phi(t - tau) - phi(t)))")
{
    auto sc = small_scene(1);
    sc.nodes[0].pll = pll(sc, 9);
    const double tau = 40.2e-9;
    const auto samples = path_samples(sc, unit_path(1, 1, tau));
    auto clean = sc;
    clean.pn_enabled = false;
    const auto reference = path_samples(clean, unit_path(1, 1, tau));
    for (std::size_t i = 0; i < samples.size(); i += 5) {
        const double t = static_cast<double>(i) * sc.chip_s;
        const double dphi = sc.nodes[0].pll->evaluate(t - tau) - sc.nodes[0].pll->evaluate(t);
        REQUIRE(std::abs(samples[i] / reference[i] - std::polar(1.0, dphi)) < 1e-9);
    }
}

TEST_CASE("linearized mode multiplies by 1 + j dphi")
{
    auto sc = small_scene(1);
    sc.nodes[0].pll = pll(sc, 9);
    sc.pn_mode = ModulationMode::Linearized;
    const double tau = 20e-9;
    const auto samples = path_samples(sc, unit_path(1, 1, tau));
    auto clean = sc;
    clean.pn_enabled = false;
    const auto reference = path_samples(clean, unit_path(1, 1, tau));
    for (std::size_t i = 0; i < samples.size(); i += 11) {
        const double t = static_cast<double>(i) * sc.chip_s;
        const double dphi = sc.nodes[0].pll->evaluate(t - tau) - sc.nodes[0].pll->evaluate(t);
        REQUIRE(std::abs(samples[i] / reference[i] - cplx(1.0, dphi)) < 1e-9);
    }
}

TEST_CASE("frame synthesis is linear in the path set")
{
    auto sc = small_scene(2);
    sc.nodes[0].pll = pll(sc, 1);
    sc.nodes[1].pll = pll(sc, 2);
    sc.targets = {{{0.2, 3.0}, {0.0, 5.0}, 10.0}, {{-1.0, 4.5}, {0.0, 0.0}, 0.0}};
    const auto paths = enumerate_paths(sc, 1);
    const auto whole = synthesize_rx(sc, 1, paths);
    std::vector<cplx> sum(whole.samples.size());
    for (const auto& p : paths) {
        const auto single = synthesize_rx(sc, 1, std::span<const PropagationPath>(&p, 1));
        for (std::size_t i = 0; i < sum.size(); ++i)
            sum[i] += single.samples[i];
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < sum.size(); ++i) {
        num += std::norm(sum[i] - whole.samples[i]);
        den += std::norm(whole.samples[i]);
    }
    CHECK(std::sqrt(num / den) <= 1e-12);
    CHECK(whole.samples == synthesize_rx(sc, 1).samples);
}

TEST_CASE("unit path has unit mean power")
{
    auto sc = small_scene(1);
    sc.nodes[0].pll = pll(sc, 3);
    const auto samples = path_samples(sc, unit_path(1, 1, 17e-9));
    double power = 0.0;
    for (const auto& s : samples)
        power += std::norm(s);
    CHECK_THAT(power / static_cast<double>(samples.size()), WithinAbs(1.0, 1e-12));
}

TEST_CASE("Doppler advances the peak phase by -2 pi fD T per burst")
{
    auto sc = small_scene(1, 64, 32);
    sc.pn_enabled = false;
    auto path = unit_path(1, 1, 10e-9);
    path.doppler_hz = 37e3;
    const auto rst = periodic_correlate(synthesize_rx(sc, 1, std::span<const PropagationPath>(&path, 1)), sc.code);
    const double expected = std::remainder(-2.0 * kPi * path.doppler_hz * sc.burst_period(), 2.0 * kPi);
    for (std::size_t n = 1; n < sc.bursts; ++n) {
        const double step = std::arg(rst.values(10, n) / rst.values(10, n - 1));
        REQUIRE_THAT(step, WithinAbs(expected, 1e-6));
    }
}

TEST_CASE("PLL coverage is enforced")
{
    auto sc = small_scene(1);
    CHECK(code_of([&] { path_samples(sc, unit_path(1, 1, 1e-9)); }) == ErrorCode::PnDurationTooShort);
    sc.nodes[0].pll = std::make_shared<const PhaseNoiseProcess>(
        synthesize(PsdMask::default_pll(), sc.frame_duration() / 2.0, 100e6, 1));
    CHECK(code_of([&] { path_samples(sc, unit_path(1, 1, 1e-9)); }) == ErrorCode::PnDurationTooShort);
    sc.pn_enabled = false;
    CHECK_NOTHROW(path_samples(sc, unit_path(1, 1, 1e-9)));
}

TEST_CASE("paths for another receiver are rejected")
{
    auto sc = small_scene(2);
    sc.pn_enabled = false;
    const std::vector<PropagationPath> paths{unit_path(1, 2, 1e-9)};
    CHECK(code_of([&] { synthesize_rx(sc, 1, paths); }) == ErrorCode::BadNode);
}

TEST_CASE("thermal noise")
{
    auto sc = small_scene(1, 64, 64);
    sc.pn_enabled = false;
    sc.thermal = {true, -10.0, 77};
    const std::vector<PropagationPath> none;
    const auto a = synthesize_rx(sc, 1, none);
    const auto b = synthesize_rx(sc, 1, none);
    CHECK(a.samples == b.samples);
    double power = 0.0;
    for (const auto& s : a.samples)
        power += std::norm(s);
    CHECK_THAT(power / static_cast<double>(a.samples.size()), WithinRel(0.1, 0.05));
    sc.thermal.seed = 78;
    CHECK(synthesize_rx(sc, 1, none).samples != a.samples);
}
