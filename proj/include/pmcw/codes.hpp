// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace pmcw {

using cplx = std::complex<double>;

enum class CodeFamily { ApasBinary, P3, Imported };

std::string_view to_string(CodeFamily family) noexcept;

/**
 * @brief Periodic spreading code: one unit-modulus complex chip per element.
 *
 * Construction validates the unit-modulus invariant. Binary families also
 * require every chip to be exactly +1 or -1.
 */
class CodeSequence {
public:
    CodeSequence(std::vector<cplx> chips, CodeFamily family);

    /// Binary code from +1/-1 values.
    static CodeSequence binary(std::span<const int> signs, CodeFamily family = CodeFamily::ApasBinary);

    std::size_t length() const noexcept { return chips_.size(); }
    std::span<const cplx> chips() const noexcept { return chips_; }
    const cplx& operator[](std::size_t l) const { return chips_[l]; }
    CodeFamily family() const noexcept { return family_; }

    /// True when every chip is exactly +1 or -1.
    bool is_binary() const noexcept;

    friend bool operator==(const CodeSequence&, const CodeSequence&) = default;

private:
    std::vector<cplx> chips_;
    CodeFamily family_;
};

/// output[p] = sum_l chips[l] * conj(chips[(l + p) mod L]), direct O(L^2) sum.
/// Exact for binary codes (integer arithmetic in doubles).
std::vector<cplx> periodic_autocorrelation(const CodeSequence& seq);

/// Same quantity through conj(IDFT(|DFT(chips)|^2)); O(L log L).
std::vector<cplx> periodic_autocorrelation_fft(const CodeSequence& seq);

/// Result of the almost-perfect autocorrelation check.
struct ApasReport {
    bool passed = false;
    double peak = 0.0;          ///< autocorrelation at lag 0
    cplx half_lag{};            ///< autocorrelation at lag L/2
    double max_sidelobe = 0.0;  ///< max |autocorr| over lags other than 0 and L/2
};

/// Checks zero sidelobes (within tolerance) outside lags {0, L/2}, a peak of L
/// at lag 0 and a negative real part at L/2. Throws OddLength for odd L.
ApasReport verify_almost_perfect(const CodeSequence& seq, double tolerance);

/// P3 polyphase code, chip l has phase pi * l^2 / L. Perfect periodic
/// autocorrelation for even L.
CodeSequence generate_p3(std::size_t length);

/// output[l] = chips[(l - shift) mod L]
CodeSequence circular_shift(const CodeSequence& seq, long long shift);

/// Transmit-code shift of radar m (1-based) in an M-radar network:
/// L (m - 1) / (2 M). Throws IndivisibleCode unless 2M divides L.
std::size_t radar_code_shift(std::size_t radar, std::size_t radar_count, std::size_t length);

/// Exhaustive search for binary almost-perfect sequences of the given length.
/// Results are canonical representatives modulo cyclic shift and negation,
/// sorted. Throws OddLength or SearchTooLarge (length > 20).
std::vector<CodeSequence> search_apas(std::size_t length);

/// Reads a chip file: one chip per line, `+1`/`-1` or `re,im`, `#` comments.
/// All-real +-1 files become ApasBinary-compatible Imported codes.
CodeSequence read_code_file(const std::filesystem::path& path);
CodeSequence parse_code_text(std::string_view text);

/// Writes the same format; binary codes are written as `+1`/`-1`.
void write_code_file(const std::filesystem::path& path, const CodeSequence& seq);
std::string format_code_text(const CodeSequence& seq);

} // namespace pmcw
