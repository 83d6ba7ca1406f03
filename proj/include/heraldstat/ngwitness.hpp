#pragma once

// Non-Gaussianity boundary and witness. The boundary is the parametric
// curve over the squeezing parameter r
//   p0(r) = exp(-d^2 (1 - tanh r)) / cosh r
//   p1(r) = d^2 exp(-d^2 (1 - tanh r)) / cosh^3 r,   d^2 = (e^{4r} - 1)/4
// separating photon statistics reachable by mixtures of Gaussian states
// from those that are not. The witness is the distance, in units of
// sigma(p2+), from a measured (p1, p2+) point to the boundary at fixed p1;
// positive means non-Gaussian.

#include <cstdint>
#include <vector>

#include "heraldstat/estimators.hpp"

namespace heraldstat {

struct BoundaryPoint {
    double r = 0;       // squeezing parameter, >= 0
    double d_sq = 0;    // displacement squared, (e^{4r}-1)/4
    double p0 = 1, p1 = 0, p2 = 0;
};

inline constexpr double kBoundaryRMax = 10.0;

// evaluate the boundary curve; r in [0, kBoundaryRMax]
BoundaryPoint boundary_point(double r);

struct P1Peak {
    double r_peak = 0;
    double p1_max = 0;
};

// maximum of p1(r) over r >= 0 (cached after the first call); the curve
// rises from zero and returns to zero, so this bounds every root search
const P1Peak& p1_peak();

struct BoundaryRoot {
    double p2_boundary = 0;
    double r_root = 0;
};

// smallest r with p1(r) = p1_meas (ascending branch, bracketed bisection to
// 1e-12 relative). The ascending branch carries the smaller of the two p2
// values, i.e. the edge of the non-Gaussian region below the curve.
// Throws Error{data} for p1_meas <= 0; p1_meas > p1_max means no Gaussian
// mixture reaches that p1 (callers treat it as trivially non-Gaussian).
BoundaryRoot boundary_p2_at_p1(double p1_meas);

enum class Side { non_gaussian, gaussian_compatible, indeterminate };

std::string side_name(Side s);

struct WitnessResult {
    double delta_w_sigma = 0;   // (p2_boundary - p2plus) / sigma(p2plus)
    BoundaryPoint boundary;     // boundary point at the root
    double p2_boundary = 0;
    Side side = Side::indeterminate;
};

// Distance from the measured statistics to the boundary at the measured p1,
// in units of sigma(p2plus). Positive = non-Gaussian; stats with
// low_count_flag give side = indeterminate. p1 beyond the curve's peak is
// reported as non-Gaussian with an infinite witness.
WitnessResult witness(const PhotonStats& stats);

// n log-spaced (p1, p2_boundary) samples on the ascending branch
std::vector<std::pair<double, double>> sample_boundary(double p1_lo, double p1_hi,
                                                       std::size_t n);

}  // namespace heraldstat
