// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with its runtime. Statistical criteria use fixed seeds; grid points
// are chosen so every comparison sits in a regime where the 3-sigma rule is
// sound (expected two-fold counts >= 50, expected three-fold counts outside
// the Poisson-marginal band [2, 30]), which the suite itself asserts.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "heraldstat/coincidence.hpp"
#include "heraldstat/estimators.hpp"
#include "heraldstat/ngwitness.hpp"
#include "heraldstat/simsource.hpp"
#include "heraldstat/tagstream.hpp"

using namespace heraldstat;

namespace {

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int id, bool ok, const char* label, double secs) {
    std::printf("[criterion %d] %s - %s (%.2f s)\n", id, ok ? "PASS" : "FAIL", label,
                secs);
    std::fflush(stdout);
}

PhotonStats stats_from(double p1, double p2plus, double sigma_p2plus) {
    PhotonStats s;
    s.p1 = p1;
    s.p2plus = p2plus;
    s.p0 = 1.0 - p1 - p2plus;
    s.sigma_p2plus = sigma_p2plus;
    return s;
}

PhotonStats analyze(const TagStream& s, WindowSpec w, double t) {
    return estimate_stats(count_triggered(s, w), SplittingRatio(t));
}

bool within(double got, double want, double nsig, double sigma) {
    return std::abs(got - want) <= nsig * sigma;
}

}  // namespace

// -------------------------------------------------------------------- 1
TEST_CASE("criterion 1: witness reproduces the published tables") {
    Stopwatch sw;
    struct Row {
        double p1e3, p2e8, sig_e8, paper_dw;
    };
    const Row rows[14] = {
        {2.446, 6.92, 4.89, -1.21},   {2.859, 38.46, 11.59, -3.18},
        {3.114, 80.55, 16.78, -4.67}, {3.339, 119.20, 20.40, -5.70},
        {3.678, 231.40, 28.50, -8.00},
        {3.061, 0.52, 0.52, 2.63},    {3.062, 1.05, 0.74, 1.16},
        {3.064, 2.10, 1.05, -0.17},   {3.067, 2.62, 1.17, -0.60},
        {131.4, 3477.0, 941.0, 146.0},{49.81, 725.4, 123.0, 56.7},
        {19.18, 100.7, 35.6, 10.1},   {5.45, 19.20, 8.59, -0.98},
        {2.723, 3.11, 2.20, -0.80},
    };
    bool ok = true;
    for (const auto& r : rows) {
        const auto w = witness(stats_from(r.p1e3 * 1e-3, r.p2e8 * 1e-8, r.sig_e8 * 1e-8));
        const bool sign_ok = (w.delta_w_sigma > 0) == (r.paper_dw > 0);
        const bool value_ok = std::abs(r.paper_dw) <= 3
                                  ? std::abs(w.delta_w_sigma - r.paper_dw) <= 0.15
                                  : std::abs(w.delta_w_sigma / r.paper_dw - 1.0) <= 0.10;
        if (!(sign_ok && value_ok)) {
            std::printf("  row (p1=%g e-3): computed %+0.3f, published %+0.2f\n",
                        r.p1e3, w.delta_w_sigma, r.paper_dw);
            ok = false;
        }
    }
    const double secs = sw.seconds();
    report(1, ok && secs < 1.0, "witness golden tables (14 rows, signs exact)", secs);
    CHECK(ok);
    CHECK(secs < 1.0);
}

// -------------------------------------------------------------------- 2
TEST_CASE("criterion 2: boundary asymptotics") {
    Stopwatch sw;
    const double ratio = boundary_p2_at_p1(1e-4).p2_boundary / 1e-12;
    const bool small_ok = std::abs(ratio - 0.6667) <= 0.0005;
    const double at_table = boundary_p2_at_p1(3.061e-3).p2_boundary;
    const bool table_ok = std::abs(at_table / 1.89e-8 - 1.0) <= 0.01;
    const double secs = sw.seconds();
    const bool ok = small_ok && table_ok;
    report(2, ok && secs < 1.0, "boundary cubic limit and Table-2 cross-check", secs);
    CHECK(small_ok);
    CHECK(table_ok);
    CHECK(secs < 1.0);
}

// -------------------------------------------------------------------- 3
TEST_CASE("criterion 3: estimator identities") {
    Stopwatch sw;
    std::mt19937_64 rng(5150);
    bool ok = true;
    for (int rep = 0; rep < 10000; ++rep) {
        CoincidenceCounts c;
        c.r0 = 1000 + rng() % 1'000'000'000ull;
        const std::uint64_t s1 = rng() % (c.r0 / 2);
        c.r1a = s1 > 0 ? rng() % s1 : 0;
        c.r1b = s1 - c.r1a;
        c.r2 = s1 > 0 ? rng() % (s1 / 4 + 1) : 0;
        const double t = 0.2 + 0.6 * static_cast<double>(rng() % 1001) / 1000.0;
        const auto s = estimate_stats(c, SplittingRatio(t));
        const double k = k_factor(SplittingRatio(t));
        if (std::abs(s.p0 + s.p1 + s.p2plus - 1.0) > 1e-12) ok = false;
        const double lhs = s.p2plus * static_cast<double>(c.r0);
        const double rhs = (1.0 + k) * static_cast<double>(c.r2);
        if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, rhs)) ok = false;
    }
    // sigma(p0) for the reconstructed resonant-run counts: published 3e-6
    CoincidenceCounts t2;
    t2.r0 = 399'600'000;
    t2.r1a = 660'600;
    t2.r1b = 562'700;
    t2.r2 = 1;
    const auto s = estimate_stats(t2, SplittingRatio(0.54));
    const bool sigma_ok = std::abs(s.sigma_p0 / 3e-6 - 1.0) <= 0.20;
    const double secs = sw.seconds();
    report(3, ok && sigma_ok && secs < 5.0,
           "triple sums to 1, p2+ r0 = (1+k) r2, sigma(p0) vs published", secs);
    CHECK(ok);
    CHECK(sigma_ok);
    CHECK(secs < 5.0);
}

// -------------------------------------------------------------------- 4
namespace {

CoincidenceCounts brute_counts(const TagStream& s, WindowSpec w) {
    CoincidenceCounts out;
    out.window = w;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.channels[i] != 0) continue;
        const std::int64_t lo = static_cast<std::int64_t>(s.times[i]) + w.offset_ps;
        const std::int64_t hi = lo + static_cast<std::int64_t>(w.width_ps);
        bool a = false, b = false;
        for (std::size_t j = 0; j < s.size(); ++j) {
            const auto t = static_cast<std::int64_t>(s.times[j]);
            if (t < lo || t >= hi) continue;
            if (s.channels[j] == 1) a = true;
            if (s.channels[j] == 2) b = true;
        }
        ++out.r0;
        if (a && b) ++out.r2;
        else if (a) ++out.r1a;
        else if (b) ++out.r1b;
    }
    return out;
}

std::vector<std::uint64_t> brute_hist(const TagStream& s, std::int64_t bin,
                                      std::int64_t range) {
    std::vector<std::uint64_t> h(static_cast<std::size_t>(2 * range / bin), 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.channels[i] != 1) continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (s.channels[j] != 2) continue;
            const std::int64_t d = static_cast<std::int64_t>(s.times[j]) -
                                   static_cast<std::int64_t>(s.times[i]);
            if (d >= -range && d < range) h[(d + range) / bin]++;
        }
    }
    return h;
}

}  // namespace

TEST_CASE("criterion 4: coincidence counting equals the quadratic oracles") {
    Stopwatch sw;
    std::mt19937_64 rng(4096);
    bool ok = true;
    for (int rep = 0; rep < 500 && ok; ++rep) {
        const std::size_t n = 1 + rng() % 10000;
        TagStream s;
        s.duration_ps = 100'000 + rng() % 1'000'000;
        std::vector<std::uint64_t> t(n);
        for (auto& x : t) x = rng() % s.duration_ps;
        std::sort(t.begin(), t.end());
        for (auto x : t) s.push_back(static_cast<std::uint8_t>(rng() % 3), x);

        const WindowSpec w{1 + rng() % 20000,
                           static_cast<std::int64_t>(rng() % 8000) - 4000};
        const auto got = count_triggered(s, w);
        const auto want = brute_counts(s, w);
        if (got.r0 != want.r0 || got.r1a != want.r1a || got.r1b != want.r1b ||
            got.r2 != want.r2)
            ok = false;

        const std::int64_t bin = 1 + static_cast<std::int64_t>(rng() % 500);
        const std::int64_t range = bin * (1 + static_cast<std::int64_t>(rng() % 32));
        if (cross_histogram(s, 1, 2, bin, range).counts != brute_hist(s, bin, range))
            ok = false;
    }
    const double secs = sw.seconds();
    report(4, ok && secs < 30.0, "500 random streams vs brute-force counting", secs);
    CHECK(ok);
    CHECK(secs < 30.0);
}

// -------------------------------------------------------------------- 5
namespace {

struct AgreementTally {
    int runs = 0;
    int passed = 0;
};

template <typename Config>
void run_grid_point(Config cfg, WindowSpec w, std::uint64_t seed_base,
                    AgreementTally& tally, TagStream (*simulate)(const Config&)) {
    const auto oracle = oracle_stats(cfg, w);
    const double er1 = oracle.expected_r1a + oracle.expected_r1b;
    // statistical soundness of the 3-sigma comparison
    REQUIRE(er1 >= 50.0);
    REQUIRE((oracle.expected_r2 < 2.0 || oracle.expected_r2 > 30.0));
    for (int i = 0; i < 100; ++i) {
        cfg.seed = seed_base + static_cast<std::uint64_t>(i);
        const auto stats = analyze(simulate(cfg), w, cfg.splitter_t);
        const bool pass = within(stats.p0, oracle.p0, 3, stats.sigma_p0) &&
                          within(stats.p1, oracle.p1, 3, stats.sigma_p1) &&
                          within(stats.p2plus, oracle.p2plus, 3, stats.sigma_p2plus);
        ++tally.runs;
        tally.passed += pass;
    }
}

}  // namespace

TEST_CASE("criterion 5: simulators agree with their oracles over the grid") {
    Stopwatch sw;
    AgreementTally tally;

    {
        QdPulsedConfig base;
        base.duration_ps = 11'905'000'000ull;   // 1e6 pulses
        base.eta_xx = 0.3;
        struct Pt {
            double eta_x, tau_xx, t, dark, p_ex, tau_on, tau_off;
            std::uint64_t width;
            std::int64_t offset;
        };
        const Pt pts[10] = {
            {0.05, 355, 0.54, 0, 0.6, 1e6, 2e6, 3000, 0},
            {0.20, 355, 0.54, 0, 0.6, 1e6, 2e6, 11240, 0},   // runs 2e6 pulses
            {0.20, 800, 0.50, 0, 0.9, 1e6, 0, 10000, 0},     // blinking off
            {0.05, 355, 0.54, 2000, 0.6, 1e6, 2e6, 10000, 0},
            {0.05, 355, 0.50, 0, 0.9, 1e6, 2e6, 3000, 2000}, // delayed window
            {0.20, 800, 0.54, 500, 0.6, 1e6, 2e6, 11240, 0},
            {0.20, 355, 0.30, 0, 0.6, 1e6, 2e6, 1540, 0},    // strong k correction
            {0.10, 710, 0.54, 0, 0.6, 1e6, 2e6, 5000, 0},    // equal lifetimes
            {0.05, 355, 0.54, 0, 1.0, 5e5, 1e6, 10000, 0},   // certain excitation
            {0.30, 800, 0.50, 0, 0.6, 1e6, 2e6, 11905, 0},   // window = period
        };
        std::uint64_t seed_base = 100'000;
        for (std::size_t idx = 0; idx < 10; ++idx) {
            const auto& p = pts[idx];
            QdPulsedConfig cfg = base;
            if (idx == 1) cfg.duration_ps = 23'810'000'000ull;   // 2e6 pulses
            cfg.eta_x = p.eta_x;
            cfg.tau_xx_ps = p.tau_xx;
            cfg.splitter_t = p.t;
            cfg.dark_hz = p.dark;
            cfg.p_excite = p.p_ex;
            cfg.tau_on_ps = p.tau_on;
            cfg.tau_off_ps = p.tau_off;
            run_grid_point(cfg, WindowSpec{p.width, p.offset}, seed_base, tally,
                           &simulate_qd_pulsed);
            seed_base += 1000;
        }
    }
    const double secs_pulsed = sw.seconds();

    {
        struct Pt {
            double pump, re, eta_xx, eta_x, t, dark, tau_on, tau_off;
            std::uint64_t width, dur;
            std::int64_t offset;
        };
        const Pt pts[10] = {
            {5e7, 0, 0.15, 0.10, 0.64, 500, 1e6, 2e6, 1540, 5'000'000'000, 0},
            {2e9, 8e9, 0.20, 0.10, 0.64, 0, 1e6, 2e6, 3840, 1'000'000'000, 0},
            {8e9, 3.2e10, 0.20, 0.10, 0.64, 0, 1e6, 2e6, 3840, 1'000'000'000, 0},
            {1e9, 0, 0.15, 0.10, 0.64, 500, 1e6, 2e6, 1540, 2'000'000'000, 0},
            {1e8, 4e8, 0.20, 0.10, 0.64, 0, 1e6, 2e6, 3840, 5'000'000'000, 0},
            {2e9, 8e9, 0.20, 0.05, 0.64, 0, 5e5, 1e6, 2000, 3'000'000'000, 0},
            {1e9, 4e9, 0.20, 0.10, 0.64, 0, 1e6, 2e6, 2000, 2'000'000'000, 1000},
            {4e9, 1.6e10, 0.20, 0.10, 0.50, 0, 1e6, 2e6, 3840, 1'000'000'000, 0},
            {5e8, 2e9, 0.15, 0.10, 0.64, 5000, 1e6, 2e6, 1540, 3'000'000'000, 0},
            {1e9, 4e9, 0.10, 0.10, 0.64, 0, 1e6, 0, 3840, 1'000'000'000, 0},
        };
        std::uint64_t seed_base = 200'000;
        for (const auto& p : pts) {
            QdCwConfig cfg;
            cfg.pump_rate_hz = p.pump;
            cfg.reexcite_rate_hz = p.re;
            cfg.eta_xx = p.eta_xx;
            cfg.eta_x = p.eta_x;
            cfg.splitter_t = p.t;
            cfg.dark_hz = p.dark;
            cfg.tau_on_ps = p.tau_on;
            cfg.tau_off_ps = p.tau_off;
            cfg.duration_ps = p.dur;
            run_grid_point(cfg, WindowSpec{p.width, p.offset}, seed_base, tally,
                           &simulate_qd_cw);
            seed_base += 1000;
        }
    }
    const double secs_cw = sw.seconds() - secs_pulsed;

    {
        struct Pt {
            double mu, att, eta_i, eta_h, t, dark, jitter;
            std::uint64_t n_pulses, width;
            std::int64_t offset;
        };
        const Pt pts[10] = {
            {0.003, 1.0, 0.14, 0.37, 0.50, 0, 100, 1'000'000, 1200, -600},
            {0.010, 1.0, 0.40, 0.37, 0.50, 0, 100, 20'000'000, 1200, -600},
            {0.030, 1.0, 0.40, 0.50, 0.54, 0, 0, 4'000'000, 1200, -600},
            {0.003, 0.15, 0.14, 0.37, 0.50, 0, 100, 4'000'000, 1200, -600},
            {0.003, 1.0, 0.14, 0.37, 0.50, 2000, 100, 1'000'000, 1200, -600},
            {0.100, 1.0, 0.20, 0.20, 0.50, 0, 100, 2'000'000, 1200, -600},
            {0.010, 0.38, 0.40, 0.37, 0.50, 0, 500, 96'000'000, 2000, -1000},
            {0.003, 1.0, 0.14, 0.80, 0.70, 0, 100, 2'000'000, 1200, -600},
            {0.050, 0.5, 0.30, 0.37, 0.50, 0, 100, 4'000'000, 1200, -600},
            {0.003, 1.0, 0.14, 0.37, 0.50, 0, 0, 1'000'000, 1200, -600},
        };
        std::uint64_t seed_base = 300'000;
        for (const auto& p : pts) {
            SpdcConfig cfg;
            cfg.mu = p.mu;
            cfg.attenuation = p.att;
            cfg.eta_idler = p.eta_i;
            cfg.eta_herald = p.eta_h;
            cfg.splitter_t = p.t;
            cfg.dark_hz = p.dark;
            cfg.jitter_ps = p.jitter;
            cfg.duration_ps = p.n_pulses * 11905;
            run_grid_point(cfg, WindowSpec{p.width, p.offset}, seed_base, tally,
                           &simulate_spdc);
            seed_base += 1000;
        }
    }

    const double secs = sw.seconds();
    const double rate = static_cast<double>(tally.passed) / tally.runs;
    std::printf("  %d/%d runs within 3 sigma (%.1f%%)  [pulsed %.0f s, cw %.0f s, "
                "spdc %.0f s]\n",
                tally.passed, tally.runs, 100.0 * rate, secs_pulsed, secs_cw,
                secs - secs_pulsed - secs_cw);
    const bool ok = tally.runs == 3000 && rate >= 0.95 && secs < 600.0;
    report(5, ok, "simulator vs oracle, 3 models x 10 points x 100 seeds", secs);
    CHECK(rate >= 0.95);
    CHECK(tally.runs == 3000);
    CHECK(secs < 600.0);
}

// -------------------------------------------------------------------- 6
TEST_CASE("criterion 6a: resonant-shaped run, witness falls across the pulse gap") {
    Stopwatch sw;
    QdPulsedConfig cfg;
    cfg.tau_xx_ps = 800;
    cfg.eta_xx = 0.3;
    cfg.eta_x = 0.05;
    cfg.splitter_t = 0.54;
    cfg.dark_hz = 20;
    cfg.duration_ps = 551'000'000'000ull;
    cfg.seed = 60601;
    const auto stream = simulate_qd_pulsed(cfg);
    std::vector<double> dls;
    bool first_positive = false;
    for (const std::uint64_t w : {10000ull, 10240ull, 10750ull, 11240ull}) {
        const auto s = analyze(stream, {w, 0}, cfg.splitter_t);
        const auto wit = witness(s);
        dls.push_back(wit.delta_w_sigma);
        if (w == 10000)
            first_positive = wit.delta_w_sigma > 0 && wit.side == Side::non_gaussian;
        std::printf("  w=%5.2f ns: p1=%.4g p2+=%.4g  dW=%+.2f (%s)\n", w / 1000.0,
                    s.p1, s.p2plus, wit.delta_w_sigma, side_name(wit.side).c_str());
    }
    bool mono = true;
    for (std::size_t i = 1; i < dls.size(); ++i) mono &= dls[i] < dls[i - 1];
    const double secs = sw.seconds();
    const bool ok = mono && first_positive;
    report(6, ok, "(a) pulsed windows 10.00-11.24 ns: dW decreasing, positive at 10 ns",
           secs);
    CHECK(mono);
    CHECK(first_positive);
}

TEST_CASE("criterion 6b: above-band-shaped run stays Gaussian-compatible") {
    Stopwatch sw;
    QdCwConfig cfg;
    cfg.pump_rate_hz = 3e8;
    cfg.reexcite_rate_hz = 1.5e9;
    cfg.eta_xx = 0.2;
    cfg.eta_x = 0.05;
    cfg.splitter_t = 0.64;
    cfg.dark_hz = 500;
    cfg.duration_ps = 15'000'000'000ull;   // 15 ms
    cfg.seed = 60602;
    const auto stream = simulate_qd_cw(cfg);
    std::vector<double> dls;
    bool all_negative = true;
    for (const std::uint64_t w : {1540ull, 2050ull, 2560ull, 3070ull, 3840ull}) {
        const auto s = analyze(stream, {w, 0}, cfg.splitter_t);
        const auto wit = witness(s);
        all_negative &= wit.delta_w_sigma < 0 && wit.side == Side::gaussian_compatible;
        dls.push_back(wit.delta_w_sigma);
        std::printf("  w=%4.2f ns: p1=%.4g p2+=%.4g  dW=%+.2f (%s)\n", w / 1000.0,
                    s.p1, s.p2plus, wit.delta_w_sigma, side_name(wit.side).c_str());
    }
    bool growing = true;
    for (std::size_t i = 1; i < dls.size(); ++i)
        growing &= std::abs(dls[i]) > std::abs(dls[i - 1]);
    const double secs = sw.seconds();
    const bool ok = all_negative && growing;
    report(6, ok, "(b) cw windows 1.54-3.84 ns: all dW < 0, |dW| increasing", secs);
    CHECK(all_negative);
    CHECK(growing);
}

TEST_CASE("criterion 6c: down-conversion attenuation sweep crosses the boundary") {
    Stopwatch sw;
    SpdcConfig cfg;
    cfg.dark_hz = 0;
    cfg.duration_ps = 13'450'000'000'000ull;   // ~1.13e9 pulses
    const double atts[5] = {1.0, 0.38, 0.15, 0.04, 0.02};
    const WindowSpec w{1200, -600};

    // oracle scaling: p2+ proportional to p1^2 along the sweep
    double base_ratio = 0;
    bool ratio_ok = true;
    for (const double att : atts) {
        cfg.attenuation = att;
        const auto o = oracle_stats(cfg, w);
        const double ratio = o.p2plus / (o.p1 * o.p1);
        if (att == 1.0) base_ratio = ratio;
        if (std::abs(ratio / base_ratio - 1.0) > 0.10) ratio_ok = false;
    }

    // pipeline: the witness must cross from positive to indeterminate or
    // negative as p1 falls to a few 1e-3
    std::vector<Side> sides;
    std::vector<double> p1s;
    for (std::size_t i = 0; i < 5; ++i) {
        cfg.attenuation = atts[i];
        cfg.seed = 60603 + i;
        const auto s = analyze(simulate_spdc(cfg), w, cfg.splitter_t);
        const auto wit = witness(s);
        sides.push_back(wit.side);
        p1s.push_back(s.p1);
        std::printf("  att=%.2f: p1=%.4g p2+=%.4g  dW=%+.2f (%s)\n", atts[i], s.p1,
                    s.p2plus, wit.delta_w_sigma, side_name(wit.side).c_str());
    }
    const bool head_positive =
        sides[0] == Side::non_gaussian && sides[1] == Side::non_gaussian;
    const bool tail_not_positive =
        sides[3] != Side::non_gaussian && sides[4] != Side::non_gaussian;
    const bool crossing_region = p1s[2] > 5e-3 && p1s[3] > 2e-3 && p1s[4] < 5e-3;
    const double secs = sw.seconds();
    const bool ok = ratio_ok && head_positive && tail_not_positive && crossing_region;
    report(6, ok, "(c) spdc sweep: p2+ ~ p1^2 on the oracle, witness sign crossing",
           secs);
    CHECK(ratio_ok);
    CHECK(head_positive);
    CHECK(tail_not_positive);
    CHECK(crossing_region);
}

// -------------------------------------------------------------------- 7
TEST_CASE("criterion 7: g2 consistency") {
    Stopwatch sw;
    // published laser-triggered statistics through the quoted formula
    PhotonStats s;
    s.p1 = 0.43444e-3;
    s.p2plus = 0.41e-8;
    s.p0 = 1.0 - s.p1 - s.p2plus;
    s.sigma_p1 = 0.00004e-3;
    s.sigma_p2plus = 0.02e-8;
    s.sigma_p0 = std::hypot(s.sigma_p1, s.sigma_p2plus);
    const auto g = g2_from_stats(s);
    const double comb = std::hypot(g.sigma, 0.002);
    const bool paper_ok = std::abs(g.value - 0.043) < 1e-3 &&
                          std::abs(g.value - 0.041) < 2 * comb;

    // a laser-triggered analysis of a simulated resonant run feeds the same
    // formula; the estimate must match the direct evaluation identically
    QdPulsedConfig cfg;
    cfg.eta_xx = 0.3;
    cfg.eta_x = 0.3;
    cfg.splitter_t = 0.5;
    cfg.dark_hz = 0;
    cfg.duration_ps = 1'200'000'000ull;   // ~1e5 pulses
    cfg.seed = 707;
    auto stream = simulate_qd_pulsed(cfg);
    for (auto& [ch, role] : stream.roles)
        if (role == ChannelRole::trigger) role = ChannelRole::other;
    const auto laser = merge_streams(
        stream, synth_periodic_triggers(11905, 0, stream.duration_ps, 3));
    const auto ls = analyze(laser, {10000, 0}, 0.5);
    const auto lg = g2_from_stats(ls);
    const double denom = 2 * (1 - ls.p0) - ls.p1;
    const bool pipeline_ok = ls.counts.r0 == (laser.duration_ps - 1) / 11905 + 1 &&
                             lg.value == 2 * ls.p2plus / (denom * denom);

    // anticorrelation parameter equals g2 on symmetric-splitter counts
    CoincidenceCounts sym;
    sym.r0 = 1'000'000'000'000ull;
    sym.r1a = sym.r1b = 3'000'000'000ull;
    sym.r2 = 9000;
    const auto a = alpha(sym);
    const auto g2sym = g2_from_stats(estimate_stats(sym, SplittingRatio(0.5)));
    const bool alpha_ok = std::abs(a.value - g2sym.value) <= 1e-3 * a.value;

    const double secs = sw.seconds();
    const bool ok = paper_ok && pipeline_ok && alpha_ok;
    report(7, ok && secs < 5.0,
           "g2 formula vs published value; alpha = g2 when symmetric", secs);
    CHECK(paper_ok);
    CHECK(pipeline_ok);
    CHECK(alpha_ok);
    CHECK(secs < 5.0);
}

// -------------------------------------------------------------------- 8
TEST_CASE("criterion 8: accidental-triples noise floor brackets the published value") {
    Stopwatch sw;
    const double r0 = 5.4e3 * 28800;
    const double lo = noise_floor_triples(r0, 2.45e-3 / 2, 2.45e-3 / 2, 500, 500, 1540);
    const double hi = noise_floor_triples(r0, 3.68e-3 / 2, 3.68e-3 / 2, 500, 500, 1540);
    const bool ok = lo < 0.41 && 0.41 < hi && std::abs(lo - 0.29) < 0.01 &&
                    std::abs(hi - 0.44) < 0.01;
    const double secs = sw.seconds();
    report(8, ok && secs < 1.0, "noise floor range [~0.29, ~0.44] brackets 0.41", secs);
    CHECK(ok);
    CHECK(secs < 1.0);
}
