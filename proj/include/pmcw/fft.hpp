// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <vector>

namespace pmcw::fft {

using cplx = std::complex<double>;

/// Unnormalized forward DFT, X[k] = sum_n x[n] exp(-j 2 pi k n / len).
std::vector<cplx> forward(std::span<const cplx> x);

/// Unnormalized inverse DFT, x[n] = sum_k X[k] exp(+j 2 pi k n / len).
/// Callers divide by the length when they need the true inverse.
std::vector<cplx> backward(std::span<const cplx> x);

/// In-place variants over contiguous buffers of equal length.
void forward(std::span<const cplx> in, std::span<cplx> out);
void backward(std::span<const cplx> in, std::span<cplx> out);

} // namespace pmcw::fft
