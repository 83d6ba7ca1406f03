#pragma once

// Seeded stochastic source simulators producing TagStreams, each paired
// with a closed-form statistics oracle:
//   qd_pulsed — pulsed resonant excitation of the biexciton cascade with
//               telegraph blinking (on state gates excitation)
//   qd_cw     — continuous above-band pumping as a CTMC over
//               {ground, exciton, biexciton} x {off, on}, with re-excitation
//               stealing exciton emissions
//   spdc      — pulsed heralded pair source with Poissonian pair numbers
// Identical config + seed reproduces the stream bit for bit.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "heraldstat/coincidence.hpp"
#include "heraldstat/tagstream.hpp"

namespace heraldstat {

struct QdPulsedConfig {
    double rep_rate_hz = 84e6;
    double p_excite = 0.60;        // per-pulse cascade probability while on
    double tau_on_ps = 1e6;        // blinking dwell times; duty cycle 1/3
    double tau_off_ps = 2e6;       //   (tau_off = 0 disables blinking)
    double tau_x_ps = 710;         // exciton lifetime
    double tau_xx_ps = 355;        // biexciton lifetime (not measured; X/2)
    double eta_xx = 0.003;         // end-to-end trigger-arm efficiency
    double eta_x = 0.003;
    double splitter_t = 0.54;
    double dark_hz = 500;          // per detector
    std::uint64_t duration_ps = 0;
    std::uint64_t seed = 1;

    double on_fraction() const {
        return tau_off_ps == 0 ? 1.0 : tau_on_ps / (tau_on_ps + tau_off_ps);
    }
    std::uint64_t period_ps() const;
    void validate() const;
};

struct QdCwConfig {
    double pump_rate_hz = 1e7;       // ground -> biexciton while on
    double reexcite_rate_hz = 0;     // exciton -> biexciton while on
    double tau_on_ps = 1e6;
    double tau_off_ps = 2e6;
    double tau_x_ps = 710;
    double tau_xx_ps = 355;
    double eta_xx = 0.003;
    double eta_x = 0.003;
    double splitter_t = 0.64;
    double dark_hz = 500;
    std::uint64_t duration_ps = 0;
    std::uint64_t seed = 1;

    double on_fraction() const {
        return tau_off_ps == 0 ? 1.0 : tau_on_ps / (tau_on_ps + tau_off_ps);
    }
    void validate() const;
};

struct SpdcConfig {
    double mu = 0.003;             // mean pairs per pulse (Poissonian)
    double rep_rate_hz = 84e6;
    double eta_herald = 0.37;      // 74% coupling x 0.5 detector
    double eta_idler = 0.14;       // net idler-arm efficiency
    double attenuation = 1.0;      // extra idler loss, the sweep knob
    double splitter_t = 0.5;
    double dark_hz = 500;
    double jitter_ps = 100;        // detection spread after the pulse
    std::uint64_t duration_ps = 0;
    std::uint64_t seed = 1;

    std::uint64_t period_ps() const;
    void validate() const;
};

TagStream simulate_qd_pulsed(const QdPulsedConfig& cfg);
TagStream simulate_qd_cw(const QdCwConfig& cfg);
TagStream simulate_spdc(const SpdcConfig& cfg);

// Exact per-trigger expectations for the configured source and window, in
// the same estimator convention the analysis pipeline reports (p1 is the
// lower-bound functional with the config's splitting ratio).
struct OracleStats {
    double p0 = 1, p1 = 0, p2plus = 0;
    double expected_r0 = 0, expected_r1a = 0, expected_r1b = 0, expected_r2 = 0;
};

OracleStats oracle_stats(const QdPulsedConfig& cfg, WindowSpec window);
OracleStats oracle_stats(const QdCwConfig& cfg, WindowSpec window);
OracleStats oracle_stats(const SpdcConfig& cfg, WindowSpec window);

// strict JSON codecs: unknown keys are rejected, "on_fraction" may replace
// the dwell times (scales the default total dwell)
QdPulsedConfig qd_pulsed_from_json(const nlohmann::json& j);
QdCwConfig qd_cw_from_json(const nlohmann::json& j);
SpdcConfig spdc_from_json(const nlohmann::json& j);
nlohmann::json to_json(const QdPulsedConfig& cfg);
nlohmann::json to_json(const QdCwConfig& cfg);
nlohmann::json to_json(const SpdcConfig& cfg);

}  // namespace heraldstat
