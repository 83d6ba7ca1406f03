#include "heraldstat/simsource.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "simsource_detail.hpp"

namespace heraldstat {

namespace detail {

double Rng::uniform() {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

double Rng::exponential(double mean) {
    return -mean * std::log1p(-uniform());
}

bool Rng::bernoulli(double p) { return uniform() < p; }

std::uint64_t Rng::skip_geometric(double p) {
    // failures before the first success
    if (p >= 1.0) return 0;
    return static_cast<std::uint64_t>(std::floor(std::log1p(-uniform()) / std::log1p(-p)));
}

std::vector<Interval> telegraph_on_intervals(double tau_on, double tau_off,
                                             double duration, Rng& rng) {
    std::vector<Interval> on;
    if (tau_on == 0) return on;                       // never on
    if (tau_off == 0) {                               // never off
        on.push_back({0.0, duration});
        return on;
    }
    const double f = tau_on / (tau_on + tau_off);
    bool state = rng.bernoulli(f);
    double t = 0;
    while (t < duration) {
        const double dwell = rng.exponential(state ? tau_on : tau_off);
        if (state) on.push_back({t, std::min(t + dwell, duration)});
        t += dwell;
        state = !state;
    }
    return on;
}

}  // namespace detail

using detail::Rng;

std::uint64_t QdPulsedConfig::period_ps() const {
    return static_cast<std::uint64_t>(std::llround(1e12 / rep_rate_hz));
}

std::uint64_t SpdcConfig::period_ps() const {
    return static_cast<std::uint64_t>(std::llround(1e12 / rep_rate_hz));
}

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw Error(Error::Kind::usage, msg);
}

void validate_common(double tau_on, double tau_off, double tau_x, double tau_xx,
                     double eta_xx, double eta_x, double t, double dark,
                     std::uint64_t duration) {
    require(tau_on >= 0 && tau_off >= 0 && (tau_on > 0 || tau_off > 0),
            "blinking dwell times must be non-negative, not both zero");
    require(tau_x > 0 && tau_xx > 0, "lifetimes must be positive");
    require(eta_xx >= 0 && eta_xx <= 1 && eta_x >= 0 && eta_x <= 1,
            "efficiencies must be in [0,1]");
    require(t > 0 && t < 1, "splitting ratio must be in (0,1)");
    require(dark >= 0, "dark rate must be non-negative");
    require(duration > 0, "duration must be positive");
    require(duration <= (std::uint64_t(1) << 62), "duration exceeds supported range");
}

}  // namespace

void QdPulsedConfig::validate() const {
    require(rep_rate_hz > 0, "repetition rate must be positive");
    require(p_excite >= 0 && p_excite <= 1, "excitation probability must be in [0,1]");
    validate_common(tau_on_ps, tau_off_ps, tau_x_ps, tau_xx_ps, eta_xx, eta_x,
                    splitter_t, dark_hz, duration_ps);
}

void QdCwConfig::validate() const {
    require(pump_rate_hz >= 0, "pump rate must be non-negative");
    require(reexcite_rate_hz >= 0, "re-excitation rate must be non-negative");
    validate_common(tau_on_ps, tau_off_ps, tau_x_ps, tau_xx_ps, eta_xx, eta_x,
                    splitter_t, dark_hz, duration_ps);
}

void SpdcConfig::validate() const {
    require(mu >= 0, "mean pair number must be non-negative");
    require(rep_rate_hz > 0, "repetition rate must be positive");
    require(eta_herald >= 0 && eta_herald <= 1 && eta_idler >= 0 && eta_idler <= 1 &&
                attenuation >= 0 && attenuation <= 1,
            "efficiencies and attenuation must be in [0,1]");
    require(splitter_t > 0 && splitter_t < 1, "splitting ratio must be in (0,1)");
    require(dark_hz >= 0, "dark rate must be non-negative");
    require(jitter_ps >= 0 && jitter_ps < static_cast<double>(period_ps()),
            "jitter must be non-negative and below the pulse period");
    require(duration_ps > 0, "duration must be positive");
}

namespace {

constexpr std::uint8_t kTrigger = 0, kSignalA = 1, kSignalB = 2;

void add_dark_tags(TagStream& s, std::uint8_t ch, double rate_hz, double duration,
                   Rng& rng) {
    if (rate_hz <= 0) return;
    const double mean_gap = 1e12 / rate_hz;
    double t = rng.exponential(mean_gap);
    while (t < duration) {
        const auto q = static_cast<std::uint64_t>(std::llround(t));
        if (q < s.duration_ps) s.push_back(ch, q);
        t += rng.exponential(mean_gap);
    }
}

void stamp_meta(TagStream& s, const char* model, std::uint64_t seed,
                const nlohmann::json& cfg) {
    s.meta["model"] = model;
    s.meta["seed"] = std::to_string(seed);
    s.meta["rng"] = "mt19937_64/inverse-cdf-v1";
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(
                      std::hash<std::string>{}(cfg.dump())));
    s.meta["config_fnv"] = hash;
}

}  // namespace

TagStream simulate_qd_pulsed(const QdPulsedConfig& cfg) {
    cfg.validate();
    Rng rng{std::mt19937_64(cfg.seed)};
    TagStream s;
    s.duration_ps = cfg.duration_ps;
    const double duration = static_cast<double>(cfg.duration_ps);
    const auto period = cfg.period_ps();

    const auto on = detail::telegraph_on_intervals(cfg.tau_on_ps, cfg.tau_off_ps,
                                                   duration, rng);
    // skip-sample the excited pulses inside each on interval
    for (const auto& iv : on) {
        if (cfg.p_excite <= 0) break;
        std::uint64_t k = static_cast<std::uint64_t>(std::ceil(iv.begin / static_cast<double>(period)));
        while (true) {
            k += rng.skip_geometric(cfg.p_excite);
            const double pulse_t = static_cast<double>(k * period);
            if (pulse_t >= iv.end || pulse_t >= duration) break;
            const double u = rng.exponential(cfg.tau_xx_ps);   // biexciton delay
            const double v = rng.exponential(cfg.tau_x_ps);    // exciton delay
            if (rng.bernoulli(cfg.eta_xx)) {
                const auto q = static_cast<std::uint64_t>(std::llround(pulse_t + u));
                if (q < s.duration_ps) s.push_back(kTrigger, q);
            }
            if (rng.bernoulli(cfg.eta_x)) {
                const auto q = static_cast<std::uint64_t>(std::llround(pulse_t + u + v));
                if (q < s.duration_ps)
                    s.push_back(rng.bernoulli(cfg.splitter_t) ? kSignalA : kSignalB, q);
            }
            ++k;
        }
    }
    add_dark_tags(s, kTrigger, cfg.dark_hz, duration, rng);
    add_dark_tags(s, kSignalA, cfg.dark_hz, duration, rng);
    add_dark_tags(s, kSignalB, cfg.dark_hz, duration, rng);
    s.sort_tags();
    stamp_meta(s, "qd_pulsed", cfg.seed, to_json(cfg));
    return s;
}

TagStream simulate_qd_cw(const QdCwConfig& cfg) {
    cfg.validate();
    Rng rng{std::mt19937_64(cfg.seed)};
    TagStream s;
    s.duration_ps = cfg.duration_ps;
    const double duration = static_cast<double>(cfg.duration_ps);

    const double pump = cfg.pump_rate_hz * 1e-12;
    const double re = cfg.reexcite_rate_hz * 1e-12;
    const double gx = 1.0 / cfg.tau_x_ps;
    const double gb = 1.0 / cfg.tau_xx_ps;
    const bool blink = cfg.tau_on_ps > 0 && cfg.tau_off_ps > 0;
    const double lon = blink ? 1.0 / cfg.tau_on_ps : 0.0;
    const double loff = blink ? 1.0 / cfg.tau_off_ps : 0.0;

    // state: level 0=ground 1=exciton 2=biexciton; telegraph on/off
    int level = 0;
    bool tele_on = cfg.tau_on_ps == 0 ? false : rng.bernoulli(cfg.on_fraction());
    double t = 0;
    while (true) {
        double rates[4];   // 0: level transition a, 1: level transition b, 2: flip
        int n = 0;
        int dest[4];
        int emit[4];       // 0 none, 1 XX, 2 X
        if (level == 2) {
            rates[n] = gb; dest[n] = 1; emit[n] = 1; ++n;
        } else if (level == 1) {
            rates[n] = gx; dest[n] = 0; emit[n] = 2; ++n;
            if (tele_on && re > 0) { rates[n] = re; dest[n] = 2; emit[n] = 0; ++n; }
        } else if (tele_on && pump > 0) {
            rates[n] = pump; dest[n] = 2; emit[n] = 0; ++n;
        }
        int flip = -1;
        if (blink) {
            rates[n] = tele_on ? lon : loff; dest[n] = level; emit[n] = 0; flip = n; ++n;
        }
        double total = 0;
        for (int i = 0; i < n; ++i) total += rates[i];
        if (total <= 0) break;
        t += rng.exponential(1.0 / total);
        if (t >= duration) break;
        double pick = rng.uniform() * total;
        int chosen = n - 1;
        for (int i = 0; i < n; ++i) {
            pick -= rates[i];
            if (pick < 0) { chosen = i; break; }
        }
        if (chosen == flip) {
            tele_on = !tele_on;
            continue;
        }
        if (emit[chosen] == 1 && rng.bernoulli(cfg.eta_xx)) {
            const auto q = static_cast<std::uint64_t>(std::llround(t));
            if (q < s.duration_ps) s.push_back(kTrigger, q);
        } else if (emit[chosen] == 2 && rng.bernoulli(cfg.eta_x)) {
            const auto q = static_cast<std::uint64_t>(std::llround(t));
            if (q < s.duration_ps)
                s.push_back(rng.bernoulli(cfg.splitter_t) ? kSignalA : kSignalB, q);
        }
        level = dest[chosen];
    }
    add_dark_tags(s, kTrigger, cfg.dark_hz, duration, rng);
    add_dark_tags(s, kSignalA, cfg.dark_hz, duration, rng);
    add_dark_tags(s, kSignalB, cfg.dark_hz, duration, rng);
    s.sort_tags();
    stamp_meta(s, "qd_cw", cfg.seed, to_json(cfg));
    return s;
}

TagStream simulate_spdc(const SpdcConfig& cfg) {
    cfg.validate();
    Rng rng{std::mt19937_64(cfg.seed)};
    TagStream s;
    s.duration_ps = cfg.duration_ps;
    const auto period = cfg.period_ps();
    const std::uint64_t n_pulses = (cfg.duration_ps + period - 1) / period;
    const double eta_i = cfg.eta_idler * cfg.attenuation;
    const double p_active = -std::expm1(-cfg.mu);

    std::uint64_t k = 0;
    while (cfg.mu > 0) {
        k += rng.skip_geometric(p_active);
        if (k >= n_pulses) break;
        // pair count conditioned on >= 1, by inversion
        int npairs = 1;
        {
            double u = rng.uniform() * p_active;
            double pmf = cfg.mu * std::exp(-cfg.mu);
            double acc = pmf;
            while (u >= acc && npairs < 64) {
                ++npairs;
                pmf *= cfg.mu / npairs;
                acc += pmf;
            }
        }
        bool h = false, a = false, b = false;
        for (int i = 0; i < npairs; ++i) {
            if (rng.bernoulli(cfg.eta_herald)) h = true;
            if (rng.bernoulli(eta_i)) {
                if (rng.bernoulli(cfg.splitter_t)) a = true; else b = true;
            }
        }
        const double pulse_t = static_cast<double>(k * period);
        auto stamp = [&](std::uint8_t ch) {
            const auto q = static_cast<std::uint64_t>(
                std::llround(pulse_t + cfg.jitter_ps * rng.uniform()));
            if (q < s.duration_ps) s.push_back(ch, q);
        };
        if (h) stamp(kTrigger);
        if (a) stamp(kSignalA);
        if (b) stamp(kSignalB);
        ++k;
    }
    const double duration = static_cast<double>(cfg.duration_ps);
    add_dark_tags(s, kTrigger, cfg.dark_hz, duration, rng);
    add_dark_tags(s, kSignalA, cfg.dark_hz, duration, rng);
    add_dark_tags(s, kSignalB, cfg.dark_hz, duration, rng);
    s.sort_tags();
    stamp_meta(s, "spdc", cfg.seed, to_json(cfg));
    return s;
}

// ---------------------------------------------------------------- JSON

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw Error(Error::Kind::data, "config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) { ok = true; break; }
        if (!ok) throw Error(Error::Kind::data, "unknown config key '" + key + "'");
    }
}

template <typename T>
void load(const nlohmann::json& j, const char* key, T& field) {
    if (j.contains(key)) {
        try {
            field = j.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            throw Error(Error::Kind::data, std::string("bad value for config key '") + key + "'");
        }
    }
}

// "on_fraction" may replace the dwell-time pair: the default total dwell is
// kept and split accordingly. Giving both is accepted only if consistent.
void load_blinking(const nlohmann::json& j, double& tau_on, double& tau_off) {
    const bool have_taus = j.contains("tau_on_ps") || j.contains("tau_off_ps");
    load(j, "tau_on_ps", tau_on);
    load(j, "tau_off_ps", tau_off);
    if (j.contains("on_fraction")) {
        double f = 0;
        load(j, "on_fraction", f);
        if (!(f >= 0 && f <= 1))
            throw Error(Error::Kind::data, "on_fraction must be in [0,1]");
        if (have_taus) {
            const double implied = tau_off == 0 ? 1.0 : tau_on / (tau_on + tau_off);
            if (std::abs(implied - f) > 1e-9)
                throw Error(Error::Kind::data,
                            "on_fraction inconsistent with tau_on_ps/tau_off_ps");
        } else {
            const double total = tau_on + tau_off;
            tau_on = f * total;
            tau_off = total - tau_on;
        }
    }
}

}  // namespace

QdPulsedConfig qd_pulsed_from_json(const nlohmann::json& j) {
    check_keys(j, {"rep_rate_hz", "p_excite", "on_fraction", "tau_on_ps", "tau_off_ps",
                   "tau_x_ps", "tau_xx_ps", "eta_xx", "eta_x", "splitter_t", "dark_hz",
                   "duration_ps", "seed"});
    QdPulsedConfig c;
    load(j, "rep_rate_hz", c.rep_rate_hz);
    load(j, "p_excite", c.p_excite);
    load_blinking(j, c.tau_on_ps, c.tau_off_ps);
    load(j, "tau_x_ps", c.tau_x_ps);
    load(j, "tau_xx_ps", c.tau_xx_ps);
    load(j, "eta_xx", c.eta_xx);
    load(j, "eta_x", c.eta_x);
    load(j, "splitter_t", c.splitter_t);
    load(j, "dark_hz", c.dark_hz);
    load(j, "duration_ps", c.duration_ps);
    load(j, "seed", c.seed);
    c.validate();
    return c;
}

QdCwConfig qd_cw_from_json(const nlohmann::json& j) {
    check_keys(j, {"pump_rate_hz", "reexcite_rate_hz", "on_fraction", "tau_on_ps",
                   "tau_off_ps", "tau_x_ps", "tau_xx_ps", "eta_xx", "eta_x",
                   "splitter_t", "dark_hz", "duration_ps", "seed"});
    QdCwConfig c;
    load(j, "pump_rate_hz", c.pump_rate_hz);
    load(j, "reexcite_rate_hz", c.reexcite_rate_hz);
    load_blinking(j, c.tau_on_ps, c.tau_off_ps);
    load(j, "tau_x_ps", c.tau_x_ps);
    load(j, "tau_xx_ps", c.tau_xx_ps);
    load(j, "eta_xx", c.eta_xx);
    load(j, "eta_x", c.eta_x);
    load(j, "splitter_t", c.splitter_t);
    load(j, "dark_hz", c.dark_hz);
    load(j, "duration_ps", c.duration_ps);
    load(j, "seed", c.seed);
    c.validate();
    return c;
}

SpdcConfig spdc_from_json(const nlohmann::json& j) {
    check_keys(j, {"mu", "rep_rate_hz", "eta_herald", "eta_idler", "attenuation",
                   "splitter_t", "dark_hz", "jitter_ps", "duration_ps", "seed"});
    SpdcConfig c;
    load(j, "mu", c.mu);
    load(j, "rep_rate_hz", c.rep_rate_hz);
    load(j, "eta_herald", c.eta_herald);
    load(j, "eta_idler", c.eta_idler);
    load(j, "attenuation", c.attenuation);
    load(j, "splitter_t", c.splitter_t);
    load(j, "dark_hz", c.dark_hz);
    load(j, "jitter_ps", c.jitter_ps);
    load(j, "duration_ps", c.duration_ps);
    load(j, "seed", c.seed);
    c.validate();
    return c;
}

nlohmann::json to_json(const QdPulsedConfig& c) {
    return {{"rep_rate_hz", c.rep_rate_hz}, {"p_excite", c.p_excite},
            {"tau_on_ps", c.tau_on_ps},     {"tau_off_ps", c.tau_off_ps},
            {"tau_x_ps", c.tau_x_ps},       {"tau_xx_ps", c.tau_xx_ps},
            {"eta_xx", c.eta_xx},           {"eta_x", c.eta_x},
            {"splitter_t", c.splitter_t},   {"dark_hz", c.dark_hz},
            {"duration_ps", c.duration_ps}, {"seed", c.seed}};
}

nlohmann::json to_json(const QdCwConfig& c) {
    return {{"pump_rate_hz", c.pump_rate_hz}, {"reexcite_rate_hz", c.reexcite_rate_hz},
            {"tau_on_ps", c.tau_on_ps},       {"tau_off_ps", c.tau_off_ps},
            {"tau_x_ps", c.tau_x_ps},         {"tau_xx_ps", c.tau_xx_ps},
            {"eta_xx", c.eta_xx},             {"eta_x", c.eta_x},
            {"splitter_t", c.splitter_t},     {"dark_hz", c.dark_hz},
            {"duration_ps", c.duration_ps},   {"seed", c.seed}};
}

nlohmann::json to_json(const SpdcConfig& c) {
    return {{"mu", c.mu},                   {"rep_rate_hz", c.rep_rate_hz},
            {"eta_herald", c.eta_herald},   {"eta_idler", c.eta_idler},
            {"attenuation", c.attenuation}, {"splitter_t", c.splitter_t},
            {"dark_hz", c.dark_hz},         {"jitter_ps", c.jitter_ps},
            {"duration_ps", c.duration_ps}, {"seed", c.seed}};
}

}  // namespace heraldstat
