#include "heraldstat/coincidence.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "heraldstat/kernels.hpp"

namespace heraldstat {

namespace {

struct CountsOnly {
    std::uint64_t r0 = 0, r1a = 0, r1b = 0, r2 = 0;
};

// two-pointer category pass over one contiguous trigger range
CountsOnly count_range(const std::vector<std::uint64_t>& trig,
                       const std::vector<std::uint64_t>& a,
                       const std::vector<std::uint64_t>& b, std::size_t lo,
                       std::size_t hi, std::int64_t offset, std::int64_t width) {
    CountsOnly c;
    // window starts are non-decreasing, so each pointer only moves forward
    std::size_t pa = 0, pb = 0;
    if (lo > 0) {
        // seed pointers for this chunk so chunked and sequential runs agree
        const std::int64_t w0 = static_cast<std::int64_t>(trig[lo]) + offset;
        pa = static_cast<std::size_t>(
            std::lower_bound(a.begin(), a.end(), static_cast<std::uint64_t>(std::max<std::int64_t>(w0, 0))) -
            a.begin());
        pb = static_cast<std::size_t>(
            std::lower_bound(b.begin(), b.end(), static_cast<std::uint64_t>(std::max<std::int64_t>(w0, 0))) -
            b.begin());
    }
    for (std::size_t i = lo; i < hi; ++i) {
        const std::int64_t wlo = static_cast<std::int64_t>(trig[i]) + offset;
        const std::int64_t whi = wlo + width;
        while (pa < a.size() && static_cast<std::int64_t>(a[pa]) < wlo) ++pa;
        while (pb < b.size() && static_cast<std::int64_t>(b[pb]) < wlo) ++pb;
        const bool clickA = pa < a.size() && static_cast<std::int64_t>(a[pa]) < whi;
        const bool clickB = pb < b.size() && static_cast<std::int64_t>(b[pb]) < whi;
        ++c.r0;
        if (clickA && clickB)
            ++c.r2;
        else if (clickA)
            ++c.r1a;
        else if (clickB)
            ++c.r1b;
    }
    return c;
}

}  // namespace

CoincidenceCounts count_triggered(const TagStream& stream, WindowSpec window,
                                  unsigned n_chunks) {
    if (window.width_ps == 0)
        throw Error(Error::Kind::usage, "coincidence window width must be > 0");
    if (!stream.has_role(ChannelRole::trigger) || !stream.has_role(ChannelRole::signal_a) ||
        !stream.has_role(ChannelRole::signal_b))
        throw Error(Error::Kind::data,
                    "stream needs trigger/signal_a/signal_b role assignments");

    const auto trig = stream.channel_times(stream.channel_of(ChannelRole::trigger));
    const auto a = stream.channel_times(stream.channel_of(ChannelRole::signal_a));
    const auto b = stream.channel_times(stream.channel_of(ChannelRole::signal_b));
    const auto width = static_cast<std::int64_t>(window.width_ps);

    CoincidenceCounts out;
    out.window = window;
    out.duration_ps = stream.duration_ps;
    out.trigger_source = TriggerSource::channel;

    if (n_chunks <= 1 || trig.size() < 2 * n_chunks) {
        const auto c = count_range(trig, a, b, 0, trig.size(), window.offset_ps, width);
        out.r0 = c.r0;
        out.r1a = c.r1a;
        out.r1b = c.r1b;
        out.r2 = c.r2;
        return out;
    }

    std::vector<CountsOnly> parts(n_chunks);
    std::vector<std::thread> workers;
    const std::size_t per = (trig.size() + n_chunks - 1) / n_chunks;
    for (unsigned k = 0; k < n_chunks; ++k) {
        const std::size_t lo = std::min<std::size_t>(k * per, trig.size());
        const std::size_t hi = std::min<std::size_t>(lo + per, trig.size());
        workers.emplace_back([&, k, lo, hi] {
            parts[k] = count_range(trig, a, b, lo, hi, window.offset_ps, width);
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& c : parts) {
        out.r0 += c.r0;
        out.r1a += c.r1a;
        out.r1b += c.r1b;
        out.r2 += c.r2;
    }
    return out;
}

TagStream synth_periodic_triggers(std::uint64_t period_ps, std::uint64_t phase_ps,
                                  std::uint64_t duration_ps, std::uint8_t channel) {
    if (period_ps == 0)
        throw Error(Error::Kind::usage, "trigger period must be > 0");
    if (phase_ps >= period_ps)
        throw Error(Error::Kind::usage, "trigger phase must be < period (normalize first)");
    TagStream s;
    s.duration_ps = duration_ps;
    s.roles = {{channel, ChannelRole::trigger}};
    if (phase_ps < duration_ps) {
        const std::uint64_t n = (duration_ps - phase_ps - 1) / period_ps + 1;
        s.channels.assign(n, channel);
        s.times.resize(n);
        for (std::uint64_t k = 0; k < n; ++k) s.times[k] = phase_ps + k * period_ps;
    }
    s.meta["source"] = "synthetic_periodic";
    return s;
}

Histogram cross_histogram(const TagStream& stream, std::uint8_t ch_x,
                          std::uint8_t ch_y, std::int64_t bin_ps,
                          std::int64_t range_ps, unsigned n_chunks) {
    if (bin_ps <= 0) throw Error(Error::Kind::usage, "bin width must be > 0");
    if (range_ps <= 0 || range_ps % bin_ps != 0)
        throw Error(Error::Kind::usage, "range must be a positive multiple of the bin width");
    if (ch_x == ch_y)
        throw Error(Error::Kind::usage, "cross histogram needs two distinct channels");

    const auto xs = stream.channel_times(ch_x);
    const auto ys = stream.channel_times(ch_y);

    Histogram h;
    h.bin_ps = bin_ps;
    h.range_ps = range_ps;
    h.counts.assign(static_cast<std::size_t>(2 * range_ps / bin_ps), 0);

    const auto& k = kernels::active();
    if (n_chunks <= 1 || xs.size() < 2 * n_chunks) {
        k.pair_diff_histogram(xs.data(), xs.size(), ys.data(), ys.size(), bin_ps,
                              range_ps, h.counts.data());
        return h;
    }

    std::vector<std::vector<std::uint64_t>> parts(
        n_chunks, std::vector<std::uint64_t>(h.counts.size(), 0));
    std::vector<std::thread> workers;
    const std::size_t per = (xs.size() + n_chunks - 1) / n_chunks;
    for (unsigned c = 0; c < n_chunks; ++c) {
        const std::size_t lo = std::min<std::size_t>(c * per, xs.size());
        const std::size_t hi = std::min<std::size_t>(lo + per, xs.size());
        workers.emplace_back([&, c, lo, hi] {
            k.pair_diff_histogram(xs.data() + lo, hi - lo, ys.data(), ys.size(),
                                  bin_ps, range_ps, parts[c].data());
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& p : parts)
        for (std::size_t i = 0; i < p.size(); ++i) h.counts[i] += p[i];
    return h;
}

ValueSigma g2_peak_ratio(const Histogram& hist, std::int64_t period_ps,
                         std::int64_t integration_ps, int far_peak_min_index) {
    if (period_ps <= 0 || integration_ps <= 0)
        throw Error(Error::Kind::usage, "period and integration width must be > 0");
    if (far_peak_min_index < 1)
        throw Error(Error::Kind::usage, "far_peak_min_index must be >= 1");
    const int k_max = static_cast<int>((hist.range_ps - integration_ps / 2) / period_ps);
    if (k_max < far_peak_min_index)
        throw Error(Error::Kind::usage,
                    "histogram range does not cover the requested far peaks");

    auto area = [&](int k) {
        // bins whose centre (x2, exact integers) lies within the peak
        const std::int64_t c2 = 2 * k * period_ps;
        double sum = 0;
        for (std::size_t i = 0; i < hist.counts.size(); ++i) {
            const std::int64_t center2 = 2 * hist.bin_start(i) + hist.bin_ps;
            if (center2 >= c2 - integration_ps && center2 < c2 + integration_ps)
                sum += static_cast<double>(hist.counts[i]);
        }
        return sum;
    };

    const double a0 = area(0);
    double far_sum = 0;
    int far_n = 0;
    for (int k = far_peak_min_index; k <= k_max; ++k) {
        far_sum += area(k) + area(-k);
        far_n += 2;
    }
    if (far_sum <= 0)
        throw Error(Error::Kind::data, "g2 peak ratio: zero normalization area");
    const double mean_far = far_sum / far_n;

    // ratio = A0 / M; Var(A) = A (Poisson), Var(M) = sum(A_far)/N^2
    const double ratio = a0 / mean_far;
    const double var =
        std::max(a0, 1.0) / (mean_far * mean_far) +
        (a0 * a0) * far_sum / (static_cast<double>(far_n) * far_n * mean_far * mean_far *
                               mean_far * mean_far);
    return {ratio, std::sqrt(var)};
}

}  // namespace heraldstat
