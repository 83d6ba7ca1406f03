#pragma once

// Hot inner loops over timestamp arrays: scalar reference implementations
// plus AVX2 variants selected at runtime. Both variants of a kernel must
// produce bit-identical results; tests/test_kernels.cpp enforces that on
// random inputs.

#include <cstddef>
#include <cstdint>
#include <string>

namespace heraldstat::kernels {

enum class Backend { scalar, avx2 };

struct Kernels {
    // true iff t[0..n) is non-decreasing
    bool (*is_sorted_u64)(const std::uint64_t* t, std::size_t n);

    // copy t[i] for every i with ch[i] == target into out (caller sizes it);
    // returns the number of copied elements
    std::size_t (*select_channel_times)(const std::uint8_t* ch,
                                        const std::uint64_t* t, std::size_t n,
                                        std::uint8_t target,
                                        std::uint64_t* out);

    // count of ch[i] == target
    std::size_t (*count_channel)(const std::uint8_t* ch, std::size_t n,
                                 std::uint8_t target);

    // histogram of pairwise delays y - x for sorted xs, ys:
    // for each x, every y with y - x in [-range, range) adds one count to
    // bin (y - x + range) / bin_width. bins must hold 2*range/bin_width
    // zero-initialised entries. Values must fit in int64 (validated upstream).
    void (*pair_diff_histogram)(const std::uint64_t* xs, std::size_t nx,
                                const std::uint64_t* ys, std::size_t ny,
                                std::int64_t bin_width, std::int64_t range,
                                std::uint64_t* bins);
};

// active kernel table (auto-detected on first use, override with set_backend)
const Kernels& active();
Backend active_backend();
void set_backend(Backend b);   // throws if unavailable on this host
bool backend_available(Backend b);
std::string backend_name(Backend b);

namespace detail {
extern const Kernels scalar_table;
#ifdef HERALDSTAT_HAVE_AVX2
extern const Kernels avx2_table;
#endif
}  // namespace detail

}  // namespace heraldstat::kernels
