// SPDX-License-Identifier: Apache-2.0
#include "pmcw/io.hpp"

#include "pmcw/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace pmcw::io {

namespace {


void put_f64(std::ostream& out, double v)
{
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    std::array<char, 8> bytes{};
    for (int i = 0; i < 8; ++i)
        bytes[static_cast<std::size_t>(i)] = static_cast<char>((bits >> (8 * i)) & 0xffu);
    out.write(bytes.data(), bytes.size());
}

double get_f64(std::istream& in)
{
    std::array<unsigned char, 8> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!in)
        throw Error(ErrorCode::IoError, "truncated binary payload");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(bytes[static_cast<std::size_t>(i)]) << (8 * i);
    return std::bit_cast<double>(bits);
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return in;
}

std::string read_header(std::istream& in, const std::string& magic)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind(magic + " ", 0) != 0)
        throw Error(ErrorCode::IoError, "missing " + magic + " header");
    return line.substr(magic.size() + 1);
}

struct Rgb {
    double r, g, b;
};

// Viridis sampled at 0, 0.25, 0.5, 0.75, 1.
constexpr std::array<Rgb, 5> kRamp{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};

std::array<unsigned char, 3> colour(double t)
{
    t = std::clamp(t, 0.0, 1.0) * static_cast<double>(kRamp.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(t), kRamp.size() - 2);
    const double w = t - static_cast<double>(i);
    auto mix = [&](double a, double b) { return static_cast<unsigned char>(std::lround(a + w * (b - a))); };
    return {mix(kRamp[i].r, kRamp[i + 1].r), mix(kRamp[i].g, kRamp[i + 1].g), mix(kRamp[i].b, kRamp[i + 1].b)};
}

} // namespace

std::string matrix_db_csv(const ComplexMatrix& m)
{
    const double peak = peak_power(m);
    std::string out;
    out.reserve(m.rows() * m.cols() * 12);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
            const double db = peak > 0.0 ? power_db(std::norm(row[c]) / peak) : -300.0;
            if (c != 0)
                out += ',';
            out += fmt::format("{:.6f}", db);
        }
        out += '\n';
    }
    return out;
}

std::string profile_csv(std::span<const double> levels_db)
{
    std::string out = "bin,level_db\n";
    for (std::size_t p = 0; p < levels_db.size(); ++p)
        out += fmt::format("{},{:.6f}\n", p, levels_db[p]);
    return out;
}

void write_matrix_binary(const std::filesystem::path& path, const ComplexMatrix& m)
{
    auto out = open_out(path);
    out << "PMCWMAT1 " << m.rows() << ' ' << m.cols() << '\n';
    for (const auto& v : m.data()) {
        put_f64(out, v.real());
        put_f64(out, v.imag());
    }
    if (!out)
        throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

ComplexMatrix read_matrix_binary(const std::filesystem::path& path)
{
    auto in = open_in(path);
    std::istringstream header(read_header(in, "PMCWMAT1"));
    std::size_t rows = 0, cols = 0;
    if (!(header >> rows >> cols))
        throw Error(ErrorCode::IoError, "malformed PMCWMAT1 header");
    ComplexMatrix m(rows, cols);
    for (auto& v : m.data()) {
        const double re = get_f64(in);
        v = cplx(re, get_f64(in));
    }
    return m;
}

void write_raw_frame(const std::filesystem::path& path, const BasebandFrame& frame)
{
    auto out = open_out(path);
    out << fmt::format("PMCWRAW1 {} {} {:.17g} {:.17g}\n", frame.bursts, frame.code_length, frame.chip_s,
                       frame.carrier_hz);
    for (const auto& v : frame.samples) {
        put_f64(out, v.real());
        put_f64(out, v.imag());
    }
    if (!out)
        throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

BasebandFrame read_raw_frame(const std::filesystem::path& path)
{
    auto in = open_in(path);
    std::istringstream header(read_header(in, "PMCWRAW1"));
    BasebandFrame frame;
    if (!(header >> frame.bursts >> frame.code_length >> frame.chip_s >> frame.carrier_hz))
        throw Error(ErrorCode::IoError, "malformed PMCWRAW1 header");
    frame.samples.resize(frame.bursts * frame.code_length);
    for (auto& v : frame.samples) {
        const double re = get_f64(in);
        v = cplx(re, get_f64(in));
    }
    return frame;
}

void write_heatmap_ppm(const std::filesystem::path& path, const ComplexMatrix& m, DbRange range)
{
    auto out = open_out(path);
    out << "P6\n" << m.cols() << ' ' << m.rows() << "\n255\n";
    const double peak = peak_power(m);
    const double span = range.hi - range.lo;
    for (std::size_t r = m.rows(); r-- > 0;) {
        for (const auto& v : m.row(r)) {
            const double db = peak > 0.0 ? power_db(std::norm(v) / peak) : range.lo;
            const auto rgb = colour(span > 0.0 ? (db - range.lo) / span : 0.0);
            out.write(reinterpret_cast<const char*>(rgb.data()), rgb.size());
        }
    }
    if (!out)
        throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    auto out = open_out(path);
    out << text;
    if (!out)
        throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

} // namespace pmcw::io
