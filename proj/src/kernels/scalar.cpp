#include "heraldstat/kernels.hpp"

namespace heraldstat::kernels {
namespace {

bool is_sorted_u64(const std::uint64_t* t, std::size_t n) {
    for (std::size_t i = 1; i < n; ++i)
        if (t[i] < t[i - 1]) return false;
    return true;
}

std::size_t select_channel_times(const std::uint8_t* ch, const std::uint64_t* t,
                                 std::size_t n, std::uint8_t target,
                                 std::uint64_t* out) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (ch[i] == target) out[m++] = t[i];
    return m;
}

std::size_t count_channel(const std::uint8_t* ch, std::size_t n,
                          std::uint8_t target) {
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) m += (ch[i] == target);
    return m;
}

void pair_diff_histogram(const std::uint64_t* xs, std::size_t nx,
                         const std::uint64_t* ys, std::size_t ny,
                         std::int64_t bin_width, std::int64_t range,
                         std::uint64_t* bins) {
    // two-pointer sweep: window bounds are monotone in x since both arrays
    // are sorted
    std::size_t j0 = 0, j1 = 0;
    for (std::size_t i = 0; i < nx; ++i) {
        const auto x = static_cast<std::int64_t>(xs[i]);
        while (j0 < ny && static_cast<std::int64_t>(ys[j0]) < x - range) ++j0;
        if (j1 < j0) j1 = j0;
        while (j1 < ny && static_cast<std::int64_t>(ys[j1]) < x + range) ++j1;
        for (std::size_t j = j0; j < j1; ++j) {
            const std::int64_t d = static_cast<std::int64_t>(ys[j]) - x;
            bins[(d + range) / bin_width]++;
        }
    }
}

}  // namespace

namespace detail {
const Kernels scalar_table = {
    &is_sorted_u64,
    &select_channel_times,
    &count_channel,
    &pair_diff_histogram,
};
}  // namespace detail

}  // namespace heraldstat::kernels
