#include <immintrin.h>

#include "heraldstat/kernels.hpp"

// AVX2 variants of the scalar kernels. Loads are unaligned; tails fall back
// to scalar code. Bit-exact equivalence with scalar.cpp is required.

namespace heraldstat::kernels {
namespace {

const __m256i sign64 = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ull));

inline __m256i cmpgt_u64(__m256i a, __m256i b) {
    // unsigned 64-bit a > b via sign-bias
    return _mm256_cmpgt_epi64(_mm256_xor_si256(a, sign64),
                              _mm256_xor_si256(b, sign64));
}

bool is_sorted_u64(const std::uint64_t* t, std::size_t n) {
    if (n < 2) return true;
    std::size_t i = 1;
    for (; i + 4 <= n; i += 4) {
        const __m256i prev = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(t + i - 1));
        const __m256i cur = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(t + i));
        if (_mm256_movemask_epi8(cmpgt_u64(prev, cur)) != 0) return false;
    }
    for (; i < n; ++i)
        if (t[i] < t[i - 1]) return false;
    return true;
}

std::size_t select_channel_times(const std::uint8_t* ch, const std::uint64_t* t,
                                 std::size_t n, std::uint8_t target,
                                 std::uint64_t* out) {
    std::size_t m = 0;
    const __m256i tgt = _mm256_set1_epi8(static_cast<char>(target));
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ch + i));
        std::uint32_t mask = static_cast<std::uint32_t>(
            _mm256_movemask_epi8(_mm256_cmpeq_epi8(c, tgt)));
        while (mask) {
            const unsigned bit = static_cast<unsigned>(__builtin_ctz(mask));
            out[m++] = t[i + bit];
            mask &= mask - 1;
        }
    }
    for (; i < n; ++i)
        if (ch[i] == target) out[m++] = t[i];
    return m;
}

std::size_t count_channel(const std::uint8_t* ch, std::size_t n,
                          std::uint8_t target) {
    std::size_t m = 0;
    const __m256i tgt = _mm256_set1_epi8(static_cast<char>(target));
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        const __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ch + i));
        const std::uint32_t mask = static_cast<std::uint32_t>(
            _mm256_movemask_epi8(_mm256_cmpeq_epi8(c, tgt)));
        m += static_cast<std::size_t>(__builtin_popcount(mask));
    }
    for (; i < n; ++i) m += (ch[i] == target);
    return m;
}

void pair_diff_histogram(const std::uint64_t* xs, std::size_t nx,
                         const std::uint64_t* ys, std::size_t ny,
                         std::int64_t bin_width, std::int64_t range,
                         std::uint64_t* bins) {
    std::size_t j0 = 0, j1 = 0;
    alignas(32) std::int64_t shifted[4];
    for (std::size_t i = 0; i < nx; ++i) {
        const auto x = static_cast<std::int64_t>(xs[i]);
        while (j0 < ny && static_cast<std::int64_t>(ys[j0]) < x - range) ++j0;
        if (j1 < j0) j1 = j0;
        while (j1 < ny && static_cast<std::int64_t>(ys[j1]) < x + range) ++j1;
        // delays are strictly inside [-range, range) between j0 and j1;
        // vectorise the shift, keep the bin update scalar (integer division)
        const __m256i vx = _mm256_set1_epi64x(x - range);
        std::size_t j = j0;
        for (; j + 4 <= j1; j += 4) {
            const __m256i vy = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(ys + j));
            _mm256_store_si256(reinterpret_cast<__m256i*>(shifted),
                               _mm256_sub_epi64(vy, vx));
            bins[shifted[0] / bin_width]++;
            bins[shifted[1] / bin_width]++;
            bins[shifted[2] / bin_width]++;
            bins[shifted[3] / bin_width]++;
        }
        for (; j < j1; ++j) {
            const std::int64_t d = static_cast<std::int64_t>(ys[j]) - x;
            bins[(d + range) / bin_width]++;
        }
    }
}

}  // namespace

namespace detail {
const Kernels avx2_table = {
    &is_sorted_u64,
    &select_channel_times,
    &count_channel,
    &pair_diff_histogram,
};
}  // namespace detail

}  // namespace heraldstat::kernels
