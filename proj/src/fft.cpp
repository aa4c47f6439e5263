// SPDX-License-Identifier: Apache-2.0
#include "pmcw/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace pmcw::fft {
namespace {

// FFTW planning is not thread-safe; executing an existing plan on new arrays is.
// Plans are created once per (length, direction) with FFTW_ESTIMATE so that the
// chosen algorithm, and hence the rounding, never depends on timing.
class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t len, int sign)
    {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(len, sign);
        if (auto it = plans_.find(key); it != plans_.end())
            return it->second;
        std::vector<fftw_complex> scratch_in(len), scratch_out(len);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(len), scratch_in.data(), scratch_out.data(), sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr)
            throw std::runtime_error("fftw plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache()
{
    static PlanCache instance;
    return instance;
}

void execute(std::span<const cplx> in, std::span<cplx> out, int sign)
{
    if (in.size() != out.size())
        throw std::invalid_argument("fft: input/output length mismatch");
    if (in.empty())
        return;
    fftw_plan plan = cache().get(in.size(), sign);
    // std::complex<double> is layout-compatible with fftw_complex.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    if (src == dst) {
        std::vector<cplx> copy(in.begin(), in.end());
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(copy.data()), dst);
    } else {
        fftw_execute_dft(plan, src, dst);
    }
}

} // namespace

void forward(std::span<const cplx> in, std::span<cplx> out) { execute(in, out, FFTW_FORWARD); }

void backward(std::span<const cplx> in, std::span<cplx> out) { execute(in, out, FFTW_BACKWARD); }

std::vector<cplx> forward(std::span<const cplx> x)
{
    std::vector<cplx> out(x.size());
    forward(x, out);
    return out;
}

std::vector<cplx> backward(std::span<const cplx> x)
{
    std::vector<cplx> out(x.size());
    backward(x, out);
    return out;
}

} // namespace pmcw::fft
