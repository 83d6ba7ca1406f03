#pragma once

// shared between the simulators and their oracles (not installed)

#include <cstdint>
#include <random>
#include <vector>

namespace heraldstat::detail {

// mt19937_64 with explicit inverse-CDF sampling so streams are reproducible
// across standard libraries (std distributions are implementation-defined)
struct Rng {
    std::mt19937_64 eng;
    double uniform();                       // [0, 1)
    double exponential(double mean);
    bool bernoulli(double p);
    std::uint64_t skip_geometric(double p); // failures before first success
};

struct Interval {
    double begin, end;
};

std::vector<Interval> telegraph_on_intervals(double tau_on, double tau_off,
                                             double duration, Rng& rng);

}  // namespace heraldstat::detail
