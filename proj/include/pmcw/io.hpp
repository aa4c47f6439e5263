// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "pmcw/dsp.hpp"
#include "pmcw/txrx.hpp"

#include <filesystem>
#include <span>
#include <string>

namespace pmcw::io {

/// Heatmap colour scale bounds, dB relative to the map peak.
struct DbRange {
    double lo = -80.0;
    double hi = 0.0;
};

/// dB magnitudes (relative to the matrix peak power), one line per row,
/// comma-separated, fixed 6-decimal formatting.
std::string matrix_db_csv(const ComplexMatrix& m);

/// `bin,level_db` lines for a range profile.
std::string profile_csv(std::span<const double> levels_db);

/// "PMCWMAT1 <rows> <cols>\n" then row-major little-endian float64 (re, im).
void write_matrix_binary(const std::filesystem::path& path, const ComplexMatrix& m);
ComplexMatrix read_matrix_binary(const std::filesystem::path& path);

/// "PMCWRAW1 <N> <Lc> <Tc_seconds> <fc_hz>\n" then little-endian float64 (re, im).
void write_raw_frame(const std::filesystem::path& path, const BasebandFrame& frame);
BasebandFrame read_raw_frame(const std::filesystem::path& path);

/// Binary PPM (P6). Rows are range bins (bin 0 at the bottom), columns are
/// Doppler bins; colours follow a fixed 5-stop viridis ramp over `range`.
void write_heatmap_ppm(const std::filesystem::path& path, const ComplexMatrix& m, DbRange range = {});

/// Writes text, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace pmcw::io
