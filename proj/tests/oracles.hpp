// SPDX-License-Identifier: Apache-2.0
// Slow, obviously-correct reference implementations that the library's fast
// paths are checked against. Nothing here calls into the library's DSP code.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// R(p, n) = sum_l frame[n L + (l + p) mod L] conj(ref[l]), every lag p < L.
inline std::vector<std::vector<cplx>> correlate(const std::vector<cplx>& frame, const std::vector<cplx>& ref)
{
    const std::size_t L = ref.size();
    const std::size_t N = frame.size() / L;
    std::vector<std::vector<cplx>> out(L, std::vector<cplx>(N));
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t p = 0; p < L; ++p) {
            cplx acc{};
            for (std::size_t l = 0; l < L; ++l)
                acc += frame[n * L + (l + p) % L] * std::conj(ref[l]);
            out[p][n] = acc;
        }
    return out;
}

/// sum_l x[(l + p) mod L] conj(x[l]), unnormalized.
inline std::vector<cplx> autocorrelation(const std::vector<cplx>& x)
{
    const std::size_t L = x.size();
    std::vector<cplx> out(L);
    for (std::size_t p = 0; p < L; ++p)
        for (std::size_t l = 0; l < L; ++l)
            out[p] += x[(l + p) % L] * std::conj(x[l]);
    return out;
}

/// Every +-1 word of length L whose periodic autocorrelation vanishes
/// except at lags 0 and L/2 (negative there), up to rotation and negation.
/// Returns the count of distinct equivalence classes.
inline std::size_t count_apas_classes(std::size_t L)
{
    std::vector<std::uint32_t> canon;
    for (std::uint32_t w = 0; w < (1u << L); ++w) {
        std::vector<cplx> x(L);
        for (std::size_t l = 0; l < L; ++l)
            x[l] = ((w >> l) & 1u) ? -1.0 : 1.0;
        const auto r = autocorrelation(x);
        bool ok = r[L / 2].real() < 0.0;
        for (std::size_t p = 1; p < L && ok; ++p)
            if (p != L / 2 && std::abs(r[p]) > 1e-9)
                ok = false;
        if (!ok)
            continue;
        std::uint32_t best = w;
        const std::uint32_t mask = (1u << L) - 1u;
        for (std::size_t s = 0; s < L; ++s) {
            const std::uint32_t rot = ((w >> s) | (w << (L - s))) & mask;
            best = std::min({best, rot, static_cast<std::uint32_t>(~rot & mask)});
        }
        canon.push_back(best);
    }
    std::sort(canon.begin(), canon.end());
    return static_cast<std::size_t>(std::unique(canon.begin(), canon.end()) - canon.begin());
}

/// Naive DFT, forward sign -1.
inline std::vector<cplx> dft(const std::vector<cplx>& x)
{
    const std::size_t N = x.size();
    std::vector<cplx> out(N);
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t n = 0; n < N; ++n)
            out[k] += x[n] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * n % N) /
                                                  static_cast<double>(N));
    return out;
}

inline std::vector<cplx> random_frame(std::size_t length, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> out(length);
    for (auto& v : out)
        v = {g(rng), g(rng)};
    return out;
}

inline double relative_error(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

} // namespace oracle
