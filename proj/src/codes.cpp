// SPDX-License-Identifier: Apache-2.0
#include "pmcw/codes.hpp"

#include "pmcw/error.hpp"
#include "pmcw/fft.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace pmcw {

namespace {

constexpr double kUnitModulusTolerance = 1e-9;

std::size_t wrap(long long index, std::size_t length)
{
    const auto len = static_cast<long long>(length);
    long long r = index % len;
    if (r < 0)
        r += len;
    return static_cast<std::size_t>(r);
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, std::size_t line_no)
{
    token = trim(token);
    if (!token.empty() && token.front() == '+')
        token.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw Error(ErrorCode::BadCode, fmt::format("line {}: cannot parse '{}'", line_no, token));
    return value;
}

} // namespace

std::string_view to_string(CodeFamily family) noexcept
{
    switch (family) {
    case CodeFamily::ApasBinary: return "apas";
    case CodeFamily::P3: return "p3";
    case CodeFamily::Imported: return "imported";
    }
    return "unknown";
}

CodeSequence::CodeSequence(std::vector<cplx> chips, CodeFamily family)
    : chips_(std::move(chips)), family_(family)
{
    if (chips_.empty())
        throw Error(ErrorCode::BadCode, "code sequence must not be empty");
    for (std::size_t l = 0; l < chips_.size(); ++l) {
        if (std::abs(std::abs(chips_[l]) - 1.0) > kUnitModulusTolerance)
            throw Error(ErrorCode::BadCode, fmt::format("chip {} is not unit modulus", l));
    }
    if (family_ == CodeFamily::ApasBinary && !is_binary())
        throw Error(ErrorCode::BadCode, "binary code family requires +1/-1 chips");
}

CodeSequence CodeSequence::binary(std::span<const int> signs, CodeFamily family)
{
    std::vector<cplx> chips;
    chips.reserve(signs.size());
    for (int s : signs) {
        if (s != 1 && s != -1)
            throw Error(ErrorCode::BadCode, "binary chips must be +1 or -1");
        chips.emplace_back(static_cast<double>(s), 0.0);
    }
    return CodeSequence(std::move(chips), family);
}

bool CodeSequence::is_binary() const noexcept
{
    return std::all_of(chips_.begin(), chips_.end(), [](const cplx& c) {
        return c.imag() == 0.0 && (c.real() == 1.0 || c.real() == -1.0);
    });
}

std::vector<cplx> periodic_autocorrelation(const CodeSequence& seq)
{
    const std::size_t len = seq.length();
    const auto chips = seq.chips();
    std::vector<cplx> out(len);
    for (std::size_t p = 0; p < len; ++p) {
        cplx acc{};
        for (std::size_t l = 0; l < len; ++l)
            acc += chips[l] * std::conj(chips[(l + p) % len]);
        out[p] = acc;
    }
    return out;
}

std::vector<cplx> periodic_autocorrelation_fft(const CodeSequence& seq)
{
    auto spectrum = fft::forward(seq.chips());
    for (auto& v : spectrum)
        v = std::norm(v);
    auto out = fft::backward(spectrum);
    const double scale = 1.0 / static_cast<double>(seq.length());
    for (auto& v : out)
        v = std::conj(v) * scale;
    return out;
}

ApasReport verify_almost_perfect(const CodeSequence& seq, double tolerance)
{
    const std::size_t len = seq.length();
    if (len % 2 != 0)
        throw Error(ErrorCode::OddLength, fmt::format("length {} is odd", len));
    const auto ac = periodic_autocorrelation(seq);
    ApasReport report;
    report.peak = ac[0].real();
    report.half_lag = ac[len / 2];
    for (std::size_t p = 1; p < len; ++p) {
        if (p == len / 2)
            continue;
        report.max_sidelobe = std::max(report.max_sidelobe, std::abs(ac[p]));
    }
    const bool peak_ok = std::abs(ac[0] - cplx(static_cast<double>(len), 0.0)) <= tolerance;
    report.passed = peak_ok && report.max_sidelobe <= tolerance && report.half_lag.real() < 0.0;
    return report;
}

CodeSequence generate_p3(std::size_t length)
{
    if (length < 2)
        throw Error(ErrorCode::BadCode, "P3 length must be at least 2");
    std::vector<cplx> chips(length);
    const auto len = static_cast<double>(length);
    for (std::size_t l = 0; l < length; ++l) {
        // l^2 mod 2L keeps the argument small; the phase is periodic in 2L.
        const auto sq = static_cast<std::uint64_t>(l) * l % (2 * length);
        chips[l] = std::polar(1.0, std::numbers::pi * static_cast<double>(sq) / len);
    }
    return CodeSequence(std::move(chips), CodeFamily::P3);
}

CodeSequence circular_shift(const CodeSequence& seq, long long shift)
{
    const std::size_t len = seq.length();
    std::vector<cplx> out(len);
    for (std::size_t l = 0; l < len; ++l)
        out[l] = seq[wrap(static_cast<long long>(l) - shift, len)];
    return CodeSequence(std::move(out), seq.family());
}

std::size_t radar_code_shift(std::size_t radar, std::size_t radar_count, std::size_t length)
{
    if (radar_count == 0 || radar < 1 || radar > radar_count)
        throw Error(ErrorCode::BadNode, fmt::format("radar index {} outside 1..{}", radar, radar_count));
    if (length % (2 * radar_count) != 0)
        throw Error(ErrorCode::IndivisibleCode,
                    fmt::format("2M = {} does not divide L = {}", 2 * radar_count, length));
    return length * (radar - 1) / (2 * radar_count);
}

std::vector<CodeSequence> search_apas(std::size_t length)
{
    if (length % 2 != 0)
        throw Error(ErrorCode::OddLength, fmt::format("length {} is odd", length));
    if (length > 20)
        throw Error(ErrorCode::SearchTooLarge, fmt::format("length {} exceeds 20", length));
    if (length == 0)
        return {};

    const std::uint32_t mask = (1u << length) - 1u;
    auto rotate = [&](std::uint32_t bits, std::size_t k) {
        if (k == 0)
            return bits;
        return ((bits >> k) | (bits << (length - k))) & mask;
    };
    auto canonical = [&](std::uint32_t bits) {
        std::uint32_t best = bits;
        for (std::size_t k = 0; k < length; ++k) {
            best = std::min(best, rotate(bits, k));
            best = std::min(best, rotate(~bits & mask, k));
        }
        return best;
    };

    // Bit set means chip -1. Autocorrelation at lag p is L - 2 popcount(b ^ rot(b, p)).
    const int half = static_cast<int>(length / 2);
    std::vector<std::uint32_t> found;
    for (std::uint32_t bits = 0; bits <= mask; ++bits) {
        if (bits & 1u)
            continue; // chip 0 fixed at +1; negation is folded into the canonical form
        bool ok = true;
        for (std::size_t p = 1; p < length && ok; ++p) {
            const int ac = static_cast<int>(length) - 2 * std::popcount(bits ^ rotate(bits, p));
            ok = (static_cast<int>(p) == half) ? ac < 0 : ac == 0;
        }
        if (ok)
            found.push_back(canonical(bits));
        if (bits == mask)
            break;
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());

    std::vector<CodeSequence> out;
    out.reserve(found.size());
    for (auto bits : found) {
        std::vector<int> signs(length);
        for (std::size_t l = 0; l < length; ++l)
            signs[l] = ((bits >> l) & 1u) ? -1 : 1;
        out.push_back(CodeSequence::binary(signs, CodeFamily::ApasBinary));
    }
    return out;
}

CodeSequence parse_code_text(std::string_view text)
{
    std::vector<cplx> chips;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = (eol == std::string_view::npos) ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (const auto comma = line.find(','); comma != std::string_view::npos) {
            chips.emplace_back(parse_double(line.substr(0, comma), line_no),
                               parse_double(line.substr(comma + 1), line_no));
        } else {
            chips.emplace_back(parse_double(line, line_no), 0.0);
        }
    }
    return CodeSequence(std::move(chips), CodeFamily::Imported);
}

CodeSequence read_code_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open code file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_code_text(buffer.str());
}

std::string format_code_text(const CodeSequence& seq)
{
    std::string out = fmt::format("# family={} length={}\n", to_string(seq.family()), seq.length());
    const bool binary = seq.is_binary();
    for (const auto& c : seq.chips()) {
        if (binary)
            out += c.real() > 0 ? "+1\n" : "-1\n";
        else
            out += fmt::format("{:.17g},{:.17g}\n", c.real(), c.imag());
    }
    return out;
}

void write_code_file(const std::filesystem::path& path, const CodeSequence& seq)
{
    std::ofstream out(path);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write code file " + path.string());
    out << format_code_text(seq);
    if (!out)
        throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

} // namespace pmcw
