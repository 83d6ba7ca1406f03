#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "heraldstat/kernels.hpp"

using namespace heraldstat;

namespace {

std::mt19937_64 rng(12345);

std::vector<std::uint64_t> random_sorted(std::size_t n, std::uint64_t span) {
    std::vector<std::uint64_t> v(n);
    std::uniform_int_distribution<std::uint64_t> d(0, span);
    for (auto& x : v) x = d(rng);
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("scalar basics") {
    const auto& k = kernels::detail::scalar_table;
    std::vector<std::uint64_t> t{1, 2, 2, 5};
    CHECK(k.is_sorted_u64(t.data(), t.size()));
    std::vector<std::uint64_t> bad{1, 3, 2};
    CHECK_FALSE(k.is_sorted_u64(bad.data(), bad.size()));
    CHECK(k.is_sorted_u64(nullptr, 0));

    std::vector<std::uint8_t> ch{0, 1, 0, 1, 2};
    std::vector<std::uint64_t> times{10, 20, 30, 40, 50};
    std::vector<std::uint64_t> out(5);
    CHECK(k.count_channel(ch.data(), ch.size(), 1) == 2);
    CHECK(k.select_channel_times(ch.data(), times.data(), ch.size(), 1, out.data()) == 2);
    CHECK(out[0] == 20);
    CHECK(out[1] == 40);
}

TEST_CASE("pair_diff_histogram against all-pairs brute force") {
    const auto& k = kernels::detail::scalar_table;
    for (int rep = 0; rep < 50; ++rep) {
        const auto xs = random_sorted(1 + rng() % 200, 5000);
        const auto ys = random_sorted(1 + rng() % 200, 5000);
        const std::int64_t bin = 1 + static_cast<std::int64_t>(rng() % 40);
        const std::int64_t range = bin * (1 + static_cast<std::int64_t>(rng() % 50));
        std::vector<std::uint64_t> got(2 * range / bin, 0);
        k.pair_diff_histogram(xs.data(), xs.size(), ys.data(), ys.size(), bin, range,
                              got.data());
        std::vector<std::uint64_t> want(got.size(), 0);
        for (auto x : xs)
            for (auto y : ys) {
                const auto d = static_cast<std::int64_t>(y) - static_cast<std::int64_t>(x);
                if (d >= -range && d < range) want[(d + range) / bin]++;
            }
        REQUIRE(got == want);
    }
}

#ifdef HERALDSTAT_HAVE_AVX2
TEST_CASE("avx2 variants match scalar bit for bit") {
    if (!kernels::backend_available(kernels::Backend::avx2)) {
        MESSAGE("avx2 not available on this host, skipping");
        return;
    }
    const auto& sc = kernels::detail::scalar_table;
    const auto& vx = kernels::detail::avx2_table;

    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = rng() % 300;
        auto t = random_sorted(n, 1000);
        if (rep % 3 == 0 && n > 2) std::swap(t[rng() % n], t[rng() % n]);
        CHECK(sc.is_sorted_u64(t.data(), n) == vx.is_sorted_u64(t.data(), n));

        std::vector<std::uint8_t> ch(n);
        for (auto& c : ch) c = static_cast<std::uint8_t>(rng() % 4);
        const auto target = static_cast<std::uint8_t>(rng() % 4);
        CHECK(sc.count_channel(ch.data(), n, target) ==
              vx.count_channel(ch.data(), n, target));
        std::vector<std::uint64_t> a(n), b(n);
        const auto na = sc.select_channel_times(ch.data(), t.data(), n, target, a.data());
        const auto nb = vx.select_channel_times(ch.data(), t.data(), n, target, b.data());
        REQUIRE(na == nb);
        a.resize(na);
        b.resize(nb);
        REQUIRE(a == b);
    }

    for (int rep = 0; rep < 50; ++rep) {
        const auto xs = random_sorted(1 + rng() % 400, 20000);
        const auto ys = random_sorted(1 + rng() % 400, 20000);
        const std::int64_t bin = 1 + static_cast<std::int64_t>(rng() % 64);
        const std::int64_t range = bin * (1 + static_cast<std::int64_t>(rng() % 64));
        std::vector<std::uint64_t> hs(2 * range / bin, 0), hv(2 * range / bin, 0);
        sc.pair_diff_histogram(xs.data(), xs.size(), ys.data(), ys.size(), bin, range,
                               hs.data());
        vx.pair_diff_histogram(xs.data(), xs.size(), ys.data(), ys.size(), bin, range,
                               hv.data());
        REQUIRE(hs == hv);
    }
}
#endif

TEST_CASE("backend selection") {
    CHECK(kernels::backend_available(kernels::Backend::scalar));
    kernels::set_backend(kernels::Backend::scalar);
    CHECK(kernels::active_backend() == kernels::Backend::scalar);
    CHECK(kernels::backend_name(kernels::Backend::avx2) == "avx2");
#ifdef HERALDSTAT_HAVE_AVX2
    if (kernels::backend_available(kernels::Backend::avx2)) {
        kernels::set_backend(kernels::Backend::avx2);
        CHECK(kernels::active_backend() == kernels::Backend::avx2);
    }
#endif
}
