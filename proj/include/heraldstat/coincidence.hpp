#pragma once

// Windowed trigger-based coincidence counting (R0, R1A, R1B, R2),
// cross-correlation histogramming and synthetic periodic triggers.

#include <cstdint>
#include <vector>

#include "heraldstat/tagstream.hpp"

namespace heraldstat {

struct WindowSpec {
    std::uint64_t width_ps = 0;   // > 0
    std::int64_t offset_ps = 0;   // window start delay after the trigger
};

enum class TriggerSource { channel, synthetic_periodic };

struct CoincidenceCounts {
    std::uint64_t r0 = 0;    // triggers
    std::uint64_t r1a = 0;   // trigger + A click, no B click
    std::uint64_t r1b = 0;   // trigger + B click, no A click
    std::uint64_t r2 = 0;    // trigger + clicks on both arms
    WindowSpec window;
    std::uint64_t duration_ps = 0;
    TriggerSource trigger_source = TriggerSource::channel;
};

// For each trigger tag at t0 the half-open interval
// [t0+offset, t0+offset+width) is examined. Per trigger exactly one of
// {A only, B only, both, neither} is scored; repeated same-channel tags in
// one window count as a single click. Overlapping windows are evaluated
// independently; partial windows at stream end count as-is.
// n_chunks > 1 splits the trigger list across worker threads; the summed
// result is bit-identical to the sequential one.
CoincidenceCounts count_triggered(const TagStream& stream, WindowSpec window,
                                  unsigned n_chunks = 1);

// Trigger-only stream with tags at phase + k*period for all k with
// time < duration. phase must be < period.
TagStream synth_periodic_triggers(std::uint64_t period_ps, std::uint64_t phase_ps,
                                  std::uint64_t duration_ps,
                                  std::uint8_t channel = 0);

struct Histogram {
    std::int64_t bin_ps = 0;
    std::int64_t range_ps = 0;                // covers [-range, range)
    std::vector<std::uint64_t> counts;        // 2*range/bin bins
    std::int64_t bin_start(std::size_t i) const {
        return -range_ps + static_cast<std::int64_t>(i) * bin_ps;
    }
};

// Delay histogram of t_y - t_x over all (x, y) tag pairs of the two
// channels; bin b counts delays in [b*bin, (b+1)*bin). One pass over the
// sorted stream with a sliding window.
Histogram cross_histogram(const TagStream& stream, std::uint8_t ch_x,
                          std::uint8_t ch_y, std::int64_t bin_ps,
                          std::int64_t range_ps, unsigned n_chunks = 1);

struct ValueSigma {
    double value = 0;
    double sigma = 0;
};

// Ratio of the zero-delay peak area to the mean area of far peaks
// (|index| >= far_peak_min_index) in a pulsed-excitation delay histogram.
// Peak areas integrate bins whose centres lie within +-integration_ps/2 of
// k*period_ps; sigma from Poisson bin statistics.
ValueSigma g2_peak_ratio(const Histogram& hist, std::int64_t period_ps,
                         std::int64_t integration_ps, int far_peak_min_index);

}  // namespace heraldstat
