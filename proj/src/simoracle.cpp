#include <array>
#include <cmath>

#include "heraldstat/estimators.hpp"
#include "heraldstat/simsource.hpp"

// Closed-form / quadrature oracles for the three simulators. Every capture
// probability is an explicit integral of exponential laws; telegraph
// correlations across pulses go through exact 2-state transfer products and
// the CW chain through killed-generator matrix exponentials. Quantisation
// to 1 ps and stream-edge effects are neglected (both are orders of
// magnitude below the statistical resolution of any feasible run).

namespace heraldstat {

namespace {

// ---------------------------------------------------------------- small
// category probabilities P(neither), P(A only), P(B only), P(both) from the
// no-click marginals
struct Categories {
    double none = 1, a_only = 0, b_only = 0, both = 0;
};

Categories from_marginals(double no_a, double no_b, double no_ab) {
    Categories c;
    c.none = no_ab;
    c.a_only = no_b - no_ab;
    c.b_only = no_a - no_ab;
    c.both = 1.0 - no_a - no_b + no_ab;
    return c;
}

OracleStats finish(double w_a, const Categories& ca, double w_b,
                   const Categories& cb, double k) {
    // mixture over trigger populations, then the estimator functionals
    OracleStats o;
    const double w = w_a + w_b;
    o.expected_r0 = w;
    if (w <= 0) return o;
    const double pa = (w_a * ca.a_only + w_b * cb.a_only) / w;
    const double pb = (w_a * ca.b_only + w_b * cb.b_only) / w;
    const double p2 = (w_a * ca.both + w_b * cb.both) / w;
    o.expected_r1a = w * pa;
    o.expected_r1b = w * pb;
    o.expected_r2 = w * p2;
    o.p0 = 1.0 - pa - pb - p2;
    o.p1 = pa + pb - k * p2;
    o.p2plus = (1.0 + k) * p2;
    return o;
}

double exp_cdf(double x, double tau) {
    return x <= 0 ? 0.0 : -std::expm1(-x / tau);
}

// CDF of Exp(tau_a) + Exp(tau_b)
double hypoexp_cdf(double s, double tau_a, double tau_b) {
    if (s <= 0) return 0.0;
    if (std::abs(tau_a - tau_b) < 1e-9 * (tau_a + tau_b)) {
        const double t = 0.5 * (tau_a + tau_b);
        return 1.0 - std::exp(-s / t) * (1.0 + s / t);
    }
    return 1.0 -
           (tau_a * std::exp(-s / tau_a) - tau_b * std::exp(-s / tau_b)) /
               (tau_a - tau_b);
}

// 2-state blinking telegraph sampled at pulse spacing; index 0 = off, 1 = on
struct Telegraph {
    double f = 1;          // stationary on probability
    double lambda = 0;     // 1/tau_on + 1/tau_off; 0 disables blinking
    bool enabled = false;

    std::array<double, 4> propagator(double dt) const {
        if (!enabled) return {1, 0, 0, 1};
        const double e = std::exp(-lambda * std::abs(dt));
        const double on_from_on = f + (1 - f) * e;
        const double on_from_off = f * (1 - e);
        return {1 - on_from_off, on_from_off, 1 - on_from_on, on_from_on};
    }
};

Telegraph make_telegraph(double tau_on, double tau_off) {
    Telegraph t;
    if (tau_on == 0) {
        t.f = 0;
    } else if (tau_off == 0) {
        t.f = 1;
    } else {
        t.f = tau_on / (tau_on + tau_off);
        t.lambda = 1.0 / tau_on + 1.0 / tau_off;
        t.enabled = true;
    }
    return t;
}

// E[ prod_j (1 - x_j 1{on_j}) ] over pulses at the given spacings; the
// state vector carries value-weighted occupation probabilities
struct TelegraphWalk {
    const Telegraph& tg;
    double v_off, v_on;

    explicit TelegraphWalk(const Telegraph& tg, double p_on)
        : tg(tg), v_off(1 - p_on), v_on(p_on) {}

    void step(double dt, double x) {
        const auto m = tg.propagator(dt);
        const double off = v_off * m[0] + v_on * m[2];
        const double on = v_off * m[1] + v_on * m[3];
        v_off = off;
        v_on = on * (1.0 - x);
    }
    double value() const { return v_off + v_on; }
};

// ------------------------------------------------------------ qd_pulsed

struct PulsedCommon {
    double period, w, off;
    double tau_xx, tau_x;
    double p_ex, eta_x, t;
    Telegraph tg;

    double in_window(double lo) const {   // P(U'+V' in [lo, lo+w))
        return hypoexp_cdf(lo + w, tau_xx, tau_x) - hypoexp_cdf(lo, tau_xx, tau_x);
    }
};

// conditional categories for a trigger caused by a biexciton detection.
// Sources of signal clicks given the trigger's own biexciton delay u:
//   - own exciton: Exp(tau_x) after the trigger (u cancels)
//   - pulse m != 0: emission gated by the telegraph (conditioned on at the
//     trigger pulse) and the excitation coin, arrival m*period - u + U' + V'
//   - darks
// Integrated over u ~ Exp(tau_xx) by composite Simpson.
Categories xx_trigger_categories(const PulsedCommon& pc, double dark_prob) {
    const double q_own = exp_cdf(pc.off + pc.w, pc.tau_x) - exp_cdf(pc.off, pc.tau_x);
    const double route_a = pc.t * pc.eta_x, route_b = (1 - pc.t) * pc.eta_x;

    const double u_max = 45.0 * pc.tau_xx;
    const int m_lo = static_cast<int>(
        std::floor((pc.off - 45.0 * (pc.tau_xx + pc.tau_x)) / pc.period)) - 1;
    const int m_hi = static_cast<int>(
        std::ceil((pc.off + pc.w + u_max) / pc.period)) + 1;

    auto chains = [&](double u, double* no_a, double* no_b, double* no_ab) {
        // left and right walks are independent given the known on state at
        // the trigger pulse
        TelegraphWalk ra(pc.tg, 1), rb(pc.tg, 1), rab(pc.tg, 1);
        int prev = 0;
        for (int m = 1; m <= m_hi; ++m) {
            const double q = pc.p_ex * pc.in_window(pc.off - m * pc.period + u);
            const double dt = (m - prev) * pc.period;
            ra.step(dt, route_a * q);
            rb.step(dt, route_b * q);
            rab.step(dt, pc.eta_x * q);
            prev = m;
        }
        TelegraphWalk la(pc.tg, 1), lb(pc.tg, 1), lab(pc.tg, 1);
        prev = 0;
        for (int m = -1; m >= m_lo; --m) {
            const double q = pc.p_ex * pc.in_window(pc.off - m * pc.period + u);
            const double dt = (prev - m) * pc.period;
            la.step(dt, route_a * q);
            lb.step(dt, route_b * q);
            lab.step(dt, pc.eta_x * q);
            prev = m;
        }
        *no_a = ra.value() * la.value();
        *no_b = rb.value() * lb.value();
        *no_ab = rab.value() * lab.value();
    };

    // Simpson over u with the Exp(tau_xx) weight folded in
    const int n = 4096;
    const double h = u_max / n;
    double ia = 0, ib = 0, iab = 0, iw = 0;
    for (int i = 0; i <= n; ++i) {
        const double u = i * h;
        const double weight = std::exp(-u / pc.tau_xx) / pc.tau_xx;
        const double simp = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        double na, nb, nab;
        chains(u, &na, &nb, &nab);
        ia += simp * weight * na;
        ib += simp * weight * nb;
        iab += simp * weight * nab;
        iw += simp * weight;
    }
    const double no_a = (1 - route_a * q_own) * ia / iw * (1 - dark_prob);
    const double no_b = (1 - route_b * q_own) * ib / iw * (1 - dark_prob);
    const double no_ab = (1 - pc.eta_x * q_own) * iab / iw *
                         (1 - dark_prob) * (1 - dark_prob);
    return from_marginals(no_a, no_b, no_ab);
}

// conditional categories for a trigger at a uniformly random time (dark
// count on the trigger channel): phase-averaged over the pulse grid, with
// the telegraph taken from its stationary law
Categories dark_trigger_categories(const PulsedCommon& pc, double dark_prob) {
    const double route_a = pc.t * pc.eta_x, route_b = (1 - pc.t) * pc.eta_x;
    const double tail = 45.0 * (pc.tau_xx + pc.tau_x);
    const int phases = 128;
    double sa = 0, sb = 0, sab = 0;
    for (int i = 0; i < phases; ++i) {
        const double phi = (i + 0.5) / phases * pc.period;
        // pulses at rho = phi + j*period with rho in (-tail, w)
        const int j_lo = static_cast<int>(std::ceil((-tail - phi) / pc.period));
        const int j_hi = static_cast<int>(std::floor((pc.w - phi) / pc.period));
        TelegraphWalk wa(pc.tg, pc.tg.f), wb(pc.tg, pc.tg.f), wab(pc.tg, pc.tg.f);
        bool first = true;
        for (int j = j_lo; j <= j_hi; ++j) {
            const double rho = phi + j * pc.period;
            const double q =
                pc.p_ex * (hypoexp_cdf(pc.w - rho, pc.tau_xx, pc.tau_x) -
                           hypoexp_cdf(-rho, pc.tau_xx, pc.tau_x));
            const double dt = first ? 0.0 : pc.period;
            wa.step(dt, route_a * q);
            wb.step(dt, route_b * q);
            wab.step(dt, pc.eta_x * q);
            first = false;
        }
        sa += wa.value();
        sb += wb.value();
        sab += wab.value();
    }
    const double no_a = sa / phases * (1 - dark_prob);
    const double no_b = sb / phases * (1 - dark_prob);
    const double no_ab = sab / phases * (1 - dark_prob) * (1 - dark_prob);
    return from_marginals(no_a, no_b, no_ab);
}

// ------------------------------------------------------------ qd_cw
// 6-state chain {off,on} x {g,x,b}; state index tele*3 + level

using Mat6 = std::array<double, 36>;
using Vec6 = std::array<double, 6>;

Mat6 cw_generator(const QdCwConfig& cfg, double kill_a, double kill_b) {
    Mat6 q{};
    const double pump = cfg.pump_rate_hz * 1e-12;
    const double re = cfg.reexcite_rate_hz * 1e-12;
    const double gx = 1.0 / cfg.tau_x_ps;
    const double gb = 1.0 / cfg.tau_xx_ps;
    const bool blink = cfg.tau_on_ps > 0 && cfg.tau_off_ps > 0;
    auto add = [&](int i, int j, double r) {
        q[i * 6 + j] += r;
        q[i * 6 + i] -= r;
    };
    for (int tele = 0; tele < 2; ++tele) {
        const int base = tele * 3;
        add(base + 2, base + 1, gb);                       // b -> x, XX photon
        q[(base + 1) * 6 + base] += gx * (1 - kill_a - kill_b);
        q[(base + 1) * 6 + base + 1] -= gx;                // x -> g, X photon
        if (tele == 1) {
            add(base + 0, base + 2, pump);
            add(base + 1, base + 2, re);
        }
    }
    if (blink) {
        for (int lv = 0; lv < 3; ++lv) {
            add(3 + lv, 0 + lv, 1.0 / cfg.tau_on_ps);      // on -> off
            add(0 + lv, 3 + lv, 1.0 / cfg.tau_off_ps);     // off -> on
        }
    }
    return q;
}

Vec6 mat_vec_left(const Vec6& v, const Mat6& m) {
    Vec6 out{};
    for (int j = 0; j < 6; ++j)
        for (int i = 0; i < 6; ++i) out[j] += v[i] * m[i * 6 + j];
    return out;
}

Mat6 mat_mul(const Mat6& a, const Mat6& b) {
    Mat6 out{};
    for (int i = 0; i < 6; ++i)
        for (int k = 0; k < 6; ++k) {
            const double aik = a[i * 6 + k];
            if (aik == 0) continue;
            for (int j = 0; j < 6; ++j) out[i * 6 + j] += aik * b[k * 6 + j];
        }
    return out;
}

Mat6 expm(const Mat6& q, double t) {
    Mat6 a = q;
    double norm = 0;
    for (int i = 0; i < 6; ++i) {
        double row = 0;
        for (int j = 0; j < 6; ++j) row += std::abs(q[i * 6 + j]) * t;
        norm = std::max(norm, row);
    }
    int s = 0;
    double scale = t;
    while (norm > 0.5) {
        norm /= 2;
        scale /= 2;
        ++s;
    }
    for (auto& x : a) x *= scale;
    // Taylor on the scaled matrix
    Mat6 e{}, term{};
    for (int i = 0; i < 6; ++i) e[i * 6 + i] = term[i * 6 + i] = 1.0;
    for (int k = 1; k <= 24; ++k) {
        term = mat_mul(term, a);
        for (auto& x : term) x /= k;
        double tn = 0;
        for (int i = 0; i < 36; ++i) {
            e[i] += term[i];
            tn += std::abs(term[i]);
        }
        if (tn < 1e-19) break;
    }
    for (int i = 0; i < s; ++i) e = mat_mul(e, e);
    return e;
}

// stationary law of the (possibly reducible when blinking is disabled) chain
Vec6 cw_stationary(const QdCwConfig& cfg) {
    Vec6 pi{};
    const bool blink = cfg.tau_on_ps > 0 && cfg.tau_off_ps > 0;
    if (!blink && cfg.tau_on_ps == 0) {
        pi[0] = 1.0;   // stuck in (off, ground)
        return pi;
    }
    const Mat6 q = cw_generator(cfg, 0, 0);
    const int dim = blink ? 6 : 3;
    const int base = blink ? 0 : 3;   // only the on block is reachable
    // solve pi Q = 0 with sum(pi) = 1 (Gaussian elimination on Q^T)
    std::array<double, 49> m{};
    auto at = [&](int r, int c) -> double& { return m[r * (dim + 1) + c]; };
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            at(r, c) = q[(base + c) * 6 + (base + r)];   // transpose
    for (int c = 0; c < dim; ++c) at(dim - 1, c) = 1.0;  // normalisation row
    at(dim - 1, dim) = 1.0;
    for (int col = 0; col < dim; ++col) {
        int piv = col;
        for (int r = col + 1; r < dim; ++r)
            if (std::abs(at(r, col)) > std::abs(at(piv, col))) piv = r;
        for (int c = 0; c <= dim; ++c) std::swap(at(col, c), at(piv, c));
        const double d = at(col, col);
        for (int r = 0; r < dim; ++r) {
            if (r == col || at(r, col) == 0) continue;
            const double f = at(r, col) / d;
            for (int c = col; c <= dim; ++c) at(r, c) -= f * at(col, c);
        }
    }
    for (int r = 0; r < dim; ++r) pi[base + r] = at(r, dim) / at(r, r);
    return pi;
}

Categories cw_conditional(const QdCwConfig& cfg, const Vec6& start, double offset,
                          double width, double dark_prob) {
    Vec6 v = start;
    if (offset > 0) v = mat_vec_left(v, expm(cw_generator(cfg, 0, 0), offset));
    const double ka = cfg.eta_x * cfg.splitter_t;
    const double kb = cfg.eta_x * (1 - cfg.splitter_t);
    auto survive = [&](double kill_a, double kill_b) {
        const Vec6 s = mat_vec_left(v, expm(cw_generator(cfg, kill_a, kill_b), width));
        double sum = 0;
        for (double x : s) sum += x;
        return sum;
    };
    const double no_a = survive(ka, 0) * (1 - dark_prob);
    const double no_b = survive(0, kb) * (1 - dark_prob);
    const double no_ab = survive(ka, kb) * (1 - dark_prob) * (1 - dark_prob);
    return from_marginals(no_a, no_b, no_ab);
}

// ------------------------------------------------------------ spdc

// overlap of the jittered photon spread with the window, per photon
double spdc_capture(double rho, double jitter, double w) {
    if (jitter <= 0) return (rho >= 0 && rho < w) ? 1.0 : 0.0;
    const double lo = std::max(rho, 0.0);
    const double hi = std::min(rho + jitter, w);
    return std::max(0.0, hi - lo) / jitter;
}

}  // namespace

OracleStats oracle_stats(const QdPulsedConfig& cfg, WindowSpec window) {
    cfg.validate();
    if (window.width_ps == 0)
        throw Error(Error::Kind::usage, "oracle needs a positive window width");
    PulsedCommon pc{static_cast<double>(cfg.period_ps()),
                    static_cast<double>(window.width_ps),
                    static_cast<double>(window.offset_ps),
                    cfg.tau_xx_ps,
                    cfg.tau_x_ps,
                    cfg.p_excite,
                    cfg.eta_x,
                    cfg.splitter_t,
                    make_telegraph(cfg.tau_on_ps, cfg.tau_off_ps)};
    const double dark_prob = -std::expm1(-cfg.dark_hz * pc.w * 1e-12);
    const double duration = static_cast<double>(cfg.duration_ps);
    const double n_pulses = std::ceil(duration / pc.period);
    const double w_xx = n_pulses * pc.tg.f * cfg.p_excite * cfg.eta_xx;
    const double w_dark = cfg.dark_hz * duration * 1e-12;

    Categories cxx, cdark;
    if (w_xx > 0) cxx = xx_trigger_categories(pc, dark_prob);
    if (w_dark > 0) cdark = dark_trigger_categories(pc, dark_prob);
    return finish(w_xx, cxx, w_dark, cdark,
                  k_factor(SplittingRatio(cfg.splitter_t)));
}

OracleStats oracle_stats(const QdCwConfig& cfg, WindowSpec window) {
    cfg.validate();
    if (window.width_ps == 0)
        throw Error(Error::Kind::usage, "oracle needs a positive window width");
    if (window.offset_ps < 0)
        throw Error(Error::Kind::usage,
                    "unsupported config combination: cw oracle needs offset >= 0");
    const double w = static_cast<double>(window.width_ps);
    const double dark_prob = -std::expm1(-cfg.dark_hz * w * 1e-12);
    const double duration = static_cast<double>(cfg.duration_ps);

    const Vec6 pi = cw_stationary(cfg);
    const double trig_rate = (pi[2] + pi[5]) / cfg.tau_xx_ps * cfg.eta_xx;  // per ps
    const double w_xx = trig_rate * duration;
    const double w_dark = cfg.dark_hz * duration * 1e-12;

    Categories cxx, cdark;
    if (w_xx > 0) {
        // a biexciton decay leaves the chain in the exciton level
        Vec6 start{};
        start[1] = pi[2];
        start[4] = pi[5];
        const double norm = start[1] + start[4];
        start[1] /= norm;
        start[4] /= norm;
        cxx = cw_conditional(cfg, start, static_cast<double>(window.offset_ps), w,
                             dark_prob);
    }
    if (w_dark > 0)
        cdark = cw_conditional(cfg, pi, static_cast<double>(window.offset_ps), w,
                               dark_prob);
    return finish(w_xx, cxx, w_dark, cdark,
                  k_factor(SplittingRatio(cfg.splitter_t)));
}

OracleStats oracle_stats(const SpdcConfig& cfg, WindowSpec window) {
    cfg.validate();
    if (window.width_ps == 0)
        throw Error(Error::Kind::usage, "oracle needs a positive window width");
    const double w = static_cast<double>(window.width_ps);
    const double off = static_cast<double>(window.offset_ps);
    const double period = static_cast<double>(cfg.period_ps());
    const double jit = cfg.jitter_ps;
    // the window must capture same-pulse photons fully and neighbours not
    // at all, otherwise trigger jitter couples into the capture and no
    // closed form applies
    if (!(off <= -jit && off + w > jit && off > jit - period &&
          off + w <= period - jit))
        throw Error(Error::Kind::usage,
                    "unsupported config combination: spdc oracle needs a window "
                    "covering the full jitter spread and no neighbouring pulse");

    const double eta_i = cfg.eta_idler * cfg.attenuation;
    const double t = cfg.splitter_t;
    const double m_ha = cfg.mu * cfg.eta_herald * eta_i * t;
    const double m_hb = cfg.mu * cfg.eta_herald * eta_i * (1 - t);
    const double m_h0 = cfg.mu * cfg.eta_herald * (1 - eta_i);
    const double m_0a = cfg.mu * (1 - cfg.eta_herald) * eta_i * t;
    const double m_0b = cfg.mu * (1 - cfg.eta_herald) * eta_i * (1 - t);
    const double dark_prob = -std::expm1(-cfg.dark_hz * w * 1e-12);

    const double p_h = -std::expm1(-cfg.mu * cfg.eta_herald);
    const double duration = static_cast<double>(cfg.duration_ps);
    const double n_pulses = std::ceil(duration / period);
    const double w_h = n_pulses * p_h;
    const double w_dark = cfg.dark_hz * duration * 1e-12;

    Categories ch;
    if (w_h > 0) {
        const double no_a = std::exp(-(m_ha + m_0a)) * (1 - dark_prob) *
                            (-std::expm1(-(m_h0 + m_hb))) / p_h;
        const double no_b = std::exp(-(m_hb + m_0b)) * (1 - dark_prob) *
                            (-std::expm1(-(m_h0 + m_ha))) / p_h;
        const double no_ab = std::exp(-(m_ha + m_0a + m_hb + m_0b)) *
                             (1 - dark_prob) * (1 - dark_prob) *
                             (-std::expm1(-m_h0)) / p_h;
        ch = from_marginals(no_a, no_b, no_ab);
    }

    Categories cdark;
    if (w_dark > 0) {
        // uniform window phase; photons of a pulse at relative position rho
        // are captured with the jitter-overlap fraction
        const int phases = 512;
        double sa = 0, sb = 0, sab = 0;
        const double lam_a = cfg.mu * eta_i * t;
        const double lam_b = cfg.mu * eta_i * (1 - t);
        for (int i = 0; i < phases; ++i) {
            const double phi = (i + 0.5) / phases * period;
            double ea = 0, eb = 0;
            for (double rho = phi - std::ceil((phi + jit) / period) * period;
                 rho < w; rho += period) {
                const double q = spdc_capture(rho, jit, w);
                ea += lam_a * q;
                eb += lam_b * q;
            }
            sa += std::exp(-ea);
            sb += std::exp(-eb);
            sab += std::exp(-ea - eb);
        }
        const double no_a = sa / phases * (1 - dark_prob);
        const double no_b = sb / phases * (1 - dark_prob);
        const double no_ab = sab / phases * (1 - dark_prob) * (1 - dark_prob);
        cdark = from_marginals(no_a, no_b, no_ab);
    }
    return finish(w_h, ch, w_dark, cdark, k_factor(SplittingRatio(t)));
}

}  // namespace heraldstat
