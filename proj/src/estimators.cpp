#include "heraldstat/estimators.hpp"

#include <cmath>

namespace heraldstat {

double k_factor(SplittingRatio t) {
    const double v = t.t();
    return (v * v + (1 - v) * (1 - v)) / (2 * v * (1 - v));
}

PhotonStats estimate_stats(const CoincidenceCounts& counts, SplittingRatio t) {
    if (counts.r0 == 0)
        throw Error(Error::Kind::data, "cannot estimate statistics with zero triggers");
    if (counts.r1a + counts.r1b + counts.r2 > counts.r0)
        throw Error(Error::Kind::data, "inconsistent counts: coincidences exceed triggers");

    const double r0 = static_cast<double>(counts.r0);
    const double r1a = static_cast<double>(counts.r1a);
    const double r1b = static_cast<double>(counts.r1b);
    const double r2 = static_cast<double>(counts.r2);
    const double k = k_factor(t);
    const double s1 = r1a + r1b;

    PhotonStats out;
    out.counts = counts;
    out.splitting_t = t.t();
    out.p0 = 1.0 - (s1 + r2) / r0;
    out.p1 = s1 / r0 - k * r2 / r0;
    out.p2plus = (1.0 + k) * r2 / r0;
    if (out.p1 < 0) {
        // huge r2 pushes the lower bound negative; keep the triple summing to 1
        out.p1 = 0.0;
        out.p2plus = 1.0 - out.p0;
        out.p1_clamped = true;
    }
    out.low_count_flag = counts.r2 == 0;

    const double c = s1 + r2;
    out.sigma_p0 = std::sqrt(c / (r0 * r0) + c * c / (r0 * r0 * r0));
    out.sigma_p1 = std::sqrt((s1 + k * k * r2) / (r0 * r0) +
                             (s1 - k * r2) * (s1 - k * r2) / (r0 * r0 * r0));
    const double r2e = counts.r2 == 0 ? 1.0 : r2;
    out.sigma_p2plus =
        (1.0 + k) * std::sqrt(r2e / (r0 * r0) + r2 * r2 / (r0 * r0 * r0));
    return out;
}

ValueSigma g2_from_stats(const PhotonStats& stats) {
    const double denom = 2.0 * (1.0 - stats.p0) - stats.p1;
    if (denom <= 0)
        throw Error(Error::Kind::data, "g2 undefined for an all-vacuum input");
    const double g2 = 2.0 * stats.p2plus / (denom * denom);
    // first-order propagation, counter correlations ignored
    const double d_p2 = 2.0 / (denom * denom);
    const double d_p1 = 4.0 * stats.p2plus / (denom * denom * denom);
    const double d_p0 = 8.0 * stats.p2plus / (denom * denom * denom);
    const double var = d_p2 * d_p2 * stats.sigma_p2plus * stats.sigma_p2plus +
                       d_p1 * d_p1 * stats.sigma_p1 * stats.sigma_p1 +
                       d_p0 * d_p0 * stats.sigma_p0 * stats.sigma_p0;
    return {g2, std::sqrt(var)};
}

ValueSigma alpha(const CoincidenceCounts& counts) {
    if (counts.r1a == 0 || counts.r1b == 0)
        throw Error(Error::Kind::data, "alpha undefined with zero two-fold counts");
    const double r0 = static_cast<double>(counts.r0);
    const double r1a = static_cast<double>(counts.r1a);
    const double r1b = static_cast<double>(counts.r1b);
    const double r2 = static_cast<double>(counts.r2);
    const double a = r0 * r2 / (r1a * r1b);
    if (counts.r2 == 0) {
        // alpha = 0; quote the one-count sensitivity as its uncertainty
        return {0.0, r0 / (r1a * r1b)};
    }
    const double rel2 = 1.0 / r0 + 1.0 / r2 + 1.0 / r1a + 1.0 / r1b;
    return {a, a * std::sqrt(rel2)};
}

double noise_floor_triples(double r0, double p_a, double p_b, double dark_a_hz,
                           double dark_b_hz, double width_ps) {
    if (r0 < 0 || p_a < 0 || p_b < 0 || dark_a_hz < 0 || dark_b_hz < 0 || width_ps < 0)
        throw Error(Error::Kind::usage, "noise floor inputs must be non-negative");
    const double w = width_ps * 1e-12;
    return r0 * (p_a * dark_b_hz * w + p_b * dark_a_hz * w + dark_a_hz * dark_b_hz * w * w);
}

}  // namespace heraldstat
