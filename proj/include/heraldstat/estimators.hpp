#pragma once

// Photon statistics (p0, p1, p2+) from coincidence counts, with Poisson
// error propagation, plus g2(0), the anticorrelation parameter alpha and
// the accidental three-fold noise floor.

#include "heraldstat/coincidence.hpp"

namespace heraldstat {

// beamsplitter transmission toward arm A, open interval (0,1)
class SplittingRatio {
  public:
    explicit SplittingRatio(double t) : t_(t) {
        if (!(t > 0.0 && t < 1.0))
            throw Error(Error::Kind::usage, "splitting ratio must be in (0,1)");
    }
    double t() const { return t_; }

  private:
    double t_;
};

// k = (t^2 + (1-t)^2) / (2 t (1-t)); k >= 1 with equality iff t = 1/2.
// Scales the three-fold term in the lower-bound single-photon estimator so
// an unbalanced splitter cannot inflate p1.
double k_factor(SplittingRatio t);

struct PhotonStats {
    double p0 = 1, p1 = 0, p2plus = 0;
    double sigma_p0 = 0, sigma_p1 = 0, sigma_p2plus = 0;
    CoincidenceCounts counts;
    double splitting_t = 0.5;
    bool low_count_flag = false;   // no three-fold coincidences observed
    bool p1_clamped = false;       // negative lower bound clamped to zero
};

// p0 = 1 - (r1a+r1b+r2)/r0
// p1 = (r1a+r1b)/r0 - k*r2/r0          (lower-bound estimator)
// p2plus = (1+k)*r2/r0  ( == 1 - p0 - p1 )
// Uncertainties treat the four counters as independent Poisson variables;
// with r2 = 0 the p2+ uncertainty uses sqrt(r2+1) and low_count_flag is set.
PhotonStats estimate_stats(const CoincidenceCounts& counts, SplittingRatio t);

// g2(0) = 2*p2plus / (2*(1-p0) - p1)^2
ValueSigma g2_from_stats(const PhotonStats& stats);

// alpha = r0*r2 / (r1a*r1b); equals g2(0) for a symmetric splitter
ValueSigma alpha(const CoincidenceCounts& counts);

// expected accidental three-fold coincidences:
// r0 * [pA*dark_b*w + pB*dark_a*w + dark_a*dark_b*w^2], w in seconds
double noise_floor_triples(double r0, double p_a, double p_b, double dark_a_hz,
                           double dark_b_hz, double width_ps);

}  // namespace heraldstat
