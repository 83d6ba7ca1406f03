#include "heraldstat/ngwitness.hpp"

#include <cmath>
#include <limits>
#include <mutex>

namespace heraldstat {

namespace {

// Taylor coefficients of p2(r) about r = 0, orders 3..17. The direct
// expression 1 - p0 - p1 cancels to O(r^3) and loses everything below
// r ~ 1e-4 in doubles; the series keeps full relative precision there.
constexpr double kP2Series[] = {
    2.0 / 3.0,                          // r^3
    1.5,                                // r^4
    2.0 / 15.0,                         // r^5
    -14.0 / 9.0,                        // r^6
    -311.0 / 315.0,                     // r^7
    181.0 / 360.0,                      // r^8
    419.0 / 567.0,                      // r^9
    383.0 / 4725.0,                     // r^10
    -128519.0 / 623700.0,               // r^11
    -0.0509009406231628453850676073,    // r^12
    0.0282722627167071611516055960,     // r^13
    -0.0298144712430426716141001855,    // r^14
    -0.0327484420341563198706055849,    // r^15
    0.0176522052193348489644785941,     // r^16
    0.0261256337120015924871200315,     // r^17
};
constexpr double kSeriesSwitch = 0.1;   // truncation error < 1e-17 relative here

double p2_series(double r) {
    double acc = 0;
    for (int i = static_cast<int>(std::size(kP2Series)) - 1; i >= 0; --i)
        acc = acc * r + kP2Series[i];
    return acc * r * r * r;
}

// log-derivative of p1: p1'(r)/p1(r) = 4/(1 - e^{-4r}) - e^{2r} - 3 tanh r
double p1_log_deriv(double r) {
    return 4.0 / -std::expm1(-4.0 * r) - std::exp(2.0 * r) - 3.0 * std::tanh(r);
}

}  // namespace

BoundaryPoint boundary_point(double r) {
    if (!(r >= 0.0) || r > kBoundaryRMax)
        throw Error(Error::Kind::usage, "boundary parameter r out of range [0, 10]");
    BoundaryPoint p;
    p.r = r;
    p.d_sq = std::expm1(4.0 * r) / 4.0;
    // d^2 (1 - tanh r) simplifies to (e^{2r} - 1)/2, which is cancellation-free
    const double w = std::expm1(2.0 * r) / 2.0;
    const double ch = std::cosh(r);
    const double e = std::exp(-w);
    p.p0 = e / ch;
    p.p1 = p.d_sq * e / (ch * ch * ch);
    p.p2 = r <= kSeriesSwitch ? p2_series(r)
                              : 1.0 - (1.0 + p.d_sq / (ch * ch)) * e / ch;
    return p;
}

const P1Peak& p1_peak() {
    static P1Peak cached;
    static std::once_flag once;
    std::call_once(once, [] {
        // p1'(r) > 0 at 0.1 and < 0 at 2; bisect on the sign change
        double lo = 0.1, hi = 2.0;
        for (int i = 0; i < 200 && hi - lo > 1e-12 * lo; ++i) {
            const double mid = 0.5 * (lo + hi);
            (p1_log_deriv(mid) > 0 ? lo : hi) = mid;
        }
        cached.r_peak = 0.5 * (lo + hi);
        cached.p1_max = boundary_point(cached.r_peak).p1;
    });
    return cached;
}

BoundaryRoot boundary_p2_at_p1(double p1_meas) {
    const auto& peak = p1_peak();
    if (!(p1_meas > 0.0))
        throw Error(Error::Kind::data, "boundary lookup needs p1 > 0");
    if (p1_meas > peak.p1_max)
        throw Error(Error::Kind::data,
                    "p1 exceeds the boundary curve's maximum (out of reach)");
    // p1 is monotone on (0, r_peak]; bracketed bisection
    double lo = 0.0, hi = peak.r_peak;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (boundary_point(mid).p1 < p1_meas ? lo : hi) = mid;
        if (hi - lo <= 1e-12 * lo) break;
    }
    const double r = 0.5 * (lo + hi);
    return {boundary_point(r).p2, r};
}

std::string side_name(Side s) {
    switch (s) {
        case Side::non_gaussian: return "non_gaussian";
        case Side::gaussian_compatible: return "gaussian_compatible";
        case Side::indeterminate: return "indeterminate";
    }
    return "?";
}

WitnessResult witness(const PhotonStats& stats) {
    if (!(stats.sigma_p2plus > 0))
        throw Error(Error::Kind::data, "witness needs a positive sigma(p2plus)");
    WitnessResult out;
    if (stats.p1 <= 0) {
        // vacuum limit of the curve
        out.boundary = boundary_point(0.0);
        out.p2_boundary = 0.0;
        out.delta_w_sigma = (0.0 - stats.p2plus) / stats.sigma_p2plus;
    } else if (stats.p1 > p1_peak().p1_max) {
        // no Gaussian mixture reaches this p1 at all
        out.boundary = boundary_point(p1_peak().r_peak);
        out.p2_boundary = out.boundary.p2;
        out.delta_w_sigma = std::numeric_limits<double>::infinity();
        out.side = Side::non_gaussian;
        return out;
    } else {
        const auto root = boundary_p2_at_p1(stats.p1);
        out.boundary = boundary_point(root.r_root);
        out.p2_boundary = root.p2_boundary;
        out.delta_w_sigma = (root.p2_boundary - stats.p2plus) / stats.sigma_p2plus;
    }
    if (stats.low_count_flag)
        out.side = Side::indeterminate;
    else
        out.side = out.delta_w_sigma > 0 ? Side::non_gaussian : Side::gaussian_compatible;
    return out;
}

std::vector<std::pair<double, double>> sample_boundary(double p1_lo, double p1_hi,
                                                       std::size_t n) {
    if (!(p1_lo > 0) || !(p1_hi > p1_lo) || p1_hi > p1_peak().p1_max)
        throw Error(Error::Kind::usage, "boundary sample range must satisfy 0 < lo < hi <= p1_max");
    if (n < 2) throw Error(Error::Kind::usage, "need at least 2 boundary samples");
    std::vector<std::pair<double, double>> out;
    out.reserve(n);
    const double llo = std::log(p1_lo), lhi = std::log(p1_hi);
    for (std::size_t i = 0; i < n; ++i) {
        const double p1 = i + 1 == n ? p1_hi
                                     : std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                                          static_cast<double>(n - 1));
        out.emplace_back(p1, boundary_p2_at_p1(p1).p2_boundary);
    }
    return out;
}

}  // namespace heraldstat
