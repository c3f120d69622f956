#pragma once

#include <complex>
#include <cstddef>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include <fftw3.h>

namespace lpkit::detail {

enum class Direction { forward, backward };

// FFTW planning is not thread-safe; execution of a shared plan on fresh
// arrays (fftw_execute_dft) is. Plans are cached per shape and always run on
// fftw_malloc'd scratch so SIMD alignment, and hence the bits, never vary.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    fftw_complex* p = nullptr;
    std::size_t len = 0;
    ~FftwBuffer() { if (p) fftw_free(p); }
    fftw_complex* get(std::size_t n) {
        if (n > len) {
            if (p) fftw_free(p);
            p = fftw_alloc_complex(n);
            len = n;
        }
        return p;
    }
};

inline fftw_plan cached_plan(int dim, std::size_t n, int sign) {
    static std::map<std::tuple<int, std::size_t, int>, fftw_plan> cache;
    std::lock_guard lock(fftw_planner_mutex());
    const auto key = std::make_tuple(dim, n, sign);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const std::size_t total = dim == 1 ? n : n * n;
    fftw_complex* tmp = fftw_alloc_complex(total);
    fftw_plan plan = dim == 1
                         ? fftw_plan_dft_1d(static_cast<int>(n), tmp, tmp, sign, FFTW_ESTIMATE)
                         : fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), tmp, tmp, sign, FFTW_ESTIMATE);
    fftw_free(tmp);
    cache.emplace(key, plan);
    return plan;
}

/// Unnormalized in-place DFT: forward uses exp(-2 pi i jk/n), backward exp(+...).
inline void fft_inplace(std::vector<std::complex<double>>& data, int dim, std::size_t n, Direction dir) {
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    const fftw_plan plan = cached_plan(dim, n, sign);
    thread_local FftwBuffer scratch;
    fftw_complex* buf = scratch.get(data.size());
    std::memcpy(buf, data.data(), data.size() * sizeof(fftw_complex));
    fftw_execute_dft(plan, buf, buf);
    std::memcpy(static_cast<void*>(data.data()), buf, data.size() * sizeof(fftw_complex));
}

}  // namespace lpkit::detail
