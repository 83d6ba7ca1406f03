// heraldstat — photon statistics and the non-Gaussianity witness from
// time-tagged detection events, plus the built-in source simulators.
//
// Subcommands: analyze, simulate, boundary, g2, sweep.
// Exit codes: 0 success, 2 usage error, 3 data/IO error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "heraldstat/coincidence.hpp"
#include "heraldstat/estimators.hpp"
#include "heraldstat/kernels.hpp"
#include "heraldstat/manifest.hpp"
#include "heraldstat/ngwitness.hpp"
#include "heraldstat/serialize.hpp"
#include "heraldstat/simsource.hpp"
#include "heraldstat/tagstream.hpp"

using namespace heraldstat;
using nlohmann::json;

namespace {

struct GlobalOpts {
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::string channels = "trigger=0,a=1,b=2";
    std::string kernel = "auto";
    unsigned threads = 1;
};

RoleMap parse_channels(const std::string& spec) {
    RoleMap roles;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw Error(Error::Kind::usage, "bad --channels entry '" + item + "'");
        const std::string name = item.substr(0, eq);
        const int ch = std::stoi(item.substr(eq + 1));
        if (ch < 0 || ch > 255)
            throw Error(Error::Kind::usage, "channel out of range in --channels");
        ChannelRole role;
        if (name == "trigger") role = ChannelRole::trigger;
        else if (name == "a") role = ChannelRole::signal_a;
        else if (name == "b") role = ChannelRole::signal_b;
        else if (name == "other") role = ChannelRole::other;
        else throw Error(Error::Kind::usage, "unknown role '" + name + "' in --channels");
        roles[static_cast<std::uint8_t>(ch)] = role;
    }
    return roles;
}

void apply_kernel_choice(const std::string& k) {
    if (k == "auto") return;
    if (k == "scalar") kernels::set_backend(kernels::Backend::scalar);
    else if (k == "avx2") kernels::set_backend(kernels::Backend::avx2);
    else throw Error(Error::Kind::usage, "unknown --kernel '" + k + "'");
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct AnalyzeRow {
    std::uint64_t window_ps;
    PhotonStats stats;
    WitnessResult wit;
};

std::string analyze_csv(const std::vector<AnalyzeRow>& rows) {
    std::ostringstream os;
    os << "window_ns,window_ps,p0,sigma_p0,p1,sigma_p1,p2plus,sigma_p2plus,"
          "delta_w_sigma,side,low_count_flag\n";
    for (const auto& r : rows) {
        char ns[32];
        std::snprintf(ns, sizeof ns, "%.2f", static_cast<double>(r.window_ps) / 1000.0);
        os << ns << ',' << r.window_ps << ',' << num(r.stats.p0) << ','
           << num(r.stats.sigma_p0) << ',' << num(r.stats.p1) << ','
           << num(r.stats.sigma_p1) << ',' << num(r.stats.p2plus) << ','
           << num(r.stats.sigma_p2plus) << ','
           << (std::isinf(r.wit.delta_w_sigma) ? "inf" : num(r.wit.delta_w_sigma)) << ','
           << side_name(r.wit.side) << ',' << (r.stats.low_count_flag ? 1 : 0) << '\n';
    }
    return os.str();
}

json analyze_json(const std::vector<AnalyzeRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json j;
        j["window_ps"] = r.window_ps;
        j["stats"] = to_json(r.stats);
        j["witness"] = to_json(r.wit);
        arr.push_back(std::move(j));
    }
    return arr;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw Error(Error::Kind::io, "cannot open " + path + " for writing");
    f << text;
    if (!f) throw Error(Error::Kind::io, "write failed: " + path);
}

StreamFormat parse_stream_format(const std::string& s) {
    if (s == "binary") return StreamFormat::binary;
    if (s == "csv") return StreamFormat::csv;
    throw Error(Error::Kind::usage, "unknown stream format '" + s + "'");
}

// ------------------------------------------------------------- analyze

struct AnalyzeArgs {
    std::string stream_path;
    std::string stream_format = "binary";
    std::optional<std::uint64_t> duration_ps;
    std::vector<std::uint64_t> windows;
    std::int64_t offset_ps = 0;
    double splitter = 0.5;
    std::string trigger_mode = "channel";
    std::uint64_t period_ps = 0;
    std::uint64_t phase_ps = 0;
    std::string out;
};

std::vector<AnalyzeRow> analyze_stream(const TagStream& stream,
                                       const std::vector<std::uint64_t>& windows,
                                       std::int64_t offset_ps, double splitter,
                                       TriggerSource source, unsigned threads) {
    if (windows.empty()) throw Error(Error::Kind::usage, "no windows given");
    if (stream.size() == 0) throw Error(Error::Kind::data, "empty stream");
    std::vector<AnalyzeRow> rows;
    for (const auto w : windows) {
        auto counts = count_triggered(stream, WindowSpec{w, offset_ps}, threads);
        counts.trigger_source = source;
        const auto stats = estimate_stats(counts, SplittingRatio(splitter));
        rows.push_back({w, stats, witness(stats)});
    }
    return rows;
}

int cmd_analyze(const GlobalOpts& g, const AnalyzeArgs& a) {
    apply_kernel_choice(g.kernel);
    auto stream = read_stream(a.stream_path, parse_stream_format(a.stream_format),
                              parse_channels(g.channels), a.duration_ps);
    TriggerSource source = TriggerSource::channel;
    if (a.trigger_mode == "periodic") {
        if (a.period_ps == 0)
            throw Error(Error::Kind::usage, "periodic trigger mode needs --period-ps");
        // replace the trigger role: the former trigger channel is demoted and
        // a synthetic channel takes over
        std::uint8_t synth_ch = 0;
        for (const auto& [ch, _] : stream.roles)
            synth_ch = std::max<std::uint8_t>(synth_ch, static_cast<std::uint8_t>(ch + 1));
        TagStream base = std::move(stream);
        for (auto& [ch, role] : base.roles)
            if (role == ChannelRole::trigger) role = ChannelRole::other;
        auto trig = synth_periodic_triggers(a.period_ps, a.phase_ps,
                                            base.duration_ps, synth_ch);
        stream = merge_streams(base, trig);
        source = TriggerSource::synthetic_periodic;
    } else if (a.trigger_mode != "channel") {
        throw Error(Error::Kind::usage, "unknown trigger mode '" + a.trigger_mode + "'");
    }

    const auto rows =
        analyze_stream(stream, a.windows, a.offset_ps, a.splitter, source, g.threads);

    std::string text = g.format == "json" ? analyze_json(rows).dump(2) + "\n"
                                          : analyze_csv(rows);
    if (a.out.empty()) {
        std::cout << text;
    } else {
        write_text(a.out, text);
        RunManifest m;
        m.command = "analyze";
        m.config = {{"stream", a.stream_path},
                    {"windows_ps", a.windows},
                    {"offset_ps", a.offset_ps},
                    {"splitter_t", a.splitter},
                    {"trigger_mode", a.trigger_mode},
                    {"period_ps", a.period_ps},
                    {"phase_ps", a.phase_ps},
                    {"channels", g.channels},
                    {"format", g.format}};
        m.inputs = {a.stream_path};
        m.timestamp = iso_timestamp_now();
        m.write_sidecar(a.out);
    }
    return 0;
}

// ------------------------------------------------------------- simulate

json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Error::Kind::io, "cannot open config " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw Error(Error::Kind::data, path + ": " + e.what());
    }
    return j;
}

TagStream run_model(const std::string& model, json cfg,
                    std::optional<std::uint64_t> seed_override, json* resolved) {
    if (seed_override) cfg["seed"] = *seed_override;
    if (model == "qd_pulsed") {
        const auto c = qd_pulsed_from_json(cfg);
        *resolved = to_json(c);
        return simulate_qd_pulsed(c);
    }
    if (model == "qd_cw") {
        const auto c = qd_cw_from_json(cfg);
        *resolved = to_json(c);
        return simulate_qd_cw(c);
    }
    if (model == "spdc") {
        const auto c = spdc_from_json(cfg);
        *resolved = to_json(c);
        return simulate_spdc(c);
    }
    throw Error(Error::Kind::usage, "unknown model '" + model + "'");
}

int cmd_simulate(const GlobalOpts& g, const std::string& model,
                 const std::string& config_path, const std::string& out) {
    json resolved;
    const auto stream = run_model(model, load_config(config_path), g.seed, &resolved);
    write_stream(stream, out, StreamFormat::binary);
    RunManifest m;
    m.command = "simulate";
    m.config = {{"model", model}, {"parameters", resolved}};
    m.inputs = {config_path};
    m.seed = resolved.value("seed", std::uint64_t(0));
    m.timestamp = iso_timestamp_now();
    m.write_sidecar(out);
    return 0;
}

// ------------------------------------------------------------- boundary

int cmd_boundary(const GlobalOpts& g, double p1_lo, double p1_hi, std::size_t n,
                 const std::string& out) {
    const auto samples = sample_boundary(p1_lo, p1_hi, n);
    std::string text;
    if (g.format == "json") {
        json arr = json::array();
        for (const auto& [p1, p2] : samples) arr.push_back({{"p1", p1}, {"p2_boundary", p2}});
        text = arr.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << boundary_csv_header() << '\n';
        for (const auto& [p1, p2] : samples) os << num(p1) << ',' << num(p2) << '\n';
        text = os.str();
    }
    if (out.empty()) {
        std::cout << text;
    } else {
        write_text(out, text);
        RunManifest m;
        m.command = "boundary";
        m.config = {{"p1_lo", p1_lo}, {"p1_hi", p1_hi}, {"n", n}};
        m.timestamp = iso_timestamp_now();
        m.write_sidecar(out);
    }
    return 0;
}

// ------------------------------------------------------------- g2

int cmd_g2(const GlobalOpts& g, const std::string& stream_path,
           const std::string& stream_format, std::optional<std::uint64_t> duration,
           std::int64_t bin_ps, std::int64_t range_ps, std::int64_t period_ps,
           std::int64_t integration_ps, int far_peak_min, const std::string& out) {
    apply_kernel_choice(g.kernel);
    const auto stream = read_stream(stream_path, parse_stream_format(stream_format),
                                    parse_channels(g.channels), duration);
    const auto ch_a = stream.channel_of(ChannelRole::signal_a);
    const auto ch_b = stream.channel_of(ChannelRole::signal_b);
    const auto hist = cross_histogram(stream, ch_a, ch_b, bin_ps, range_ps, g.threads);
    const auto ratio = g2_peak_ratio(hist, period_ps, integration_ps, far_peak_min);

    write_text(out, histogram_csv(hist));
    json summary{{"peak_ratio", ratio.value},
                 {"sigma", ratio.sigma},
                 {"period_ps", period_ps},
                 {"integration_ps", integration_ps},
                 {"far_peak_min_index", far_peak_min}};
    write_text(out + ".summary.json", summary.dump(2) + "\n");
    std::cout << "g2 peak ratio: " << num(ratio.value) << " +- " << num(ratio.sigma)
              << "\n";
    RunManifest m;
    m.command = "g2";
    m.config = summary;
    m.inputs = {stream_path};
    m.timestamp = iso_timestamp_now();
    m.write_sidecar(out);
    return 0;
}

// ------------------------------------------------------------- sweep

int cmd_sweep(const GlobalOpts& g, const std::string& model,
              const std::string& config_path, const std::string& param,
              const std::vector<double>& values,
              const std::vector<std::uint64_t>& windows, std::int64_t offset_ps,
              double splitter, const std::string& out) {
    apply_kernel_choice(g.kernel);
    if (values.empty()) throw Error(Error::Kind::usage, "empty sweep value list");
    if (windows.empty()) throw Error(Error::Kind::usage, "no windows given");
    const json base = load_config(config_path);
    if (!base.is_object()) throw Error(Error::Kind::data, "config must be a JSON object");

    std::ostringstream os;
    os << "param,value,window_ns,window_ps,p0,sigma_p0,p1,sigma_p1,p2plus,"
          "sigma_p2plus,delta_w_sigma,side,low_count_flag\n";
    const std::uint64_t seed0 = g.seed.value_or(base.value("seed", std::uint64_t(1)));
    for (std::size_t i = 0; i < values.size(); ++i) {
        json cfg = base;
        cfg[param] = values[i];
        cfg["seed"] = seed0 + i;
        json resolved;
        const auto stream = run_model(model, cfg, std::nullopt, &resolved);
        const auto rows = analyze_stream(stream, windows, offset_ps, splitter,
                                         TriggerSource::channel, g.threads);
        for (const auto& r : rows) {
            char ns[32];
            std::snprintf(ns, sizeof ns, "%.2f", static_cast<double>(r.window_ps) / 1000.0);
            os << param << ',' << num(values[i]) << ',' << ns << ',' << r.window_ps
               << ',' << num(r.stats.p0) << ',' << num(r.stats.sigma_p0) << ','
               << num(r.stats.p1) << ',' << num(r.stats.sigma_p1) << ','
               << num(r.stats.p2plus) << ',' << num(r.stats.sigma_p2plus) << ','
               << (std::isinf(r.wit.delta_w_sigma) ? "inf" : num(r.wit.delta_w_sigma))
               << ',' << side_name(r.wit.side) << ',' << (r.stats.low_count_flag ? 1 : 0)
               << '\n';
        }
    }
    write_text(out, os.str());
    RunManifest m;
    m.command = "sweep";
    m.config = {{"model", model}, {"param", param},     {"values", values},
                {"windows_ps", windows}, {"offset_ps", offset_ps},
                {"splitter_t", splitter}};
    m.inputs = {config_path};
    m.seed = seed0;
    m.timestamp = iso_timestamp_now();
    m.write_sidecar(out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"photon statistics and non-Gaussianity witness for heralded "
                 "single-photon sources"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", g.seed, "override the config seed");
    app.add_option("--channels", g.channels, "channel roles, e.g. trigger=0,a=1,b=2");
    app.add_option("--kernel", g.kernel, "kernel backend")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
    app.add_option("--threads", g.threads, "worker threads for counting");

    AnalyzeArgs aa;
    auto* analyze = app.add_subcommand("analyze", "coincidence counting, photon "
                                                  "statistics and witness per window");
    analyze->add_option("--stream", aa.stream_path, "input tag stream")->required();
    analyze->add_option("--stream-format", aa.stream_format)->check(CLI::IsMember({"binary", "csv"}));
    analyze->add_option("--duration-ps", aa.duration_ps, "stream duration for CSV input");
    analyze->add_option("--windows", aa.windows, "coincidence window widths in ps")
        ->required()->delimiter(',');
    analyze->add_option("--offset-ps", aa.offset_ps, "window start delay after trigger");
    analyze->add_option("--splitter", aa.splitter, "beamsplitter transmission toward arm A")
        ->required();
    analyze->add_option("--trigger-mode", aa.trigger_mode)->check(CLI::IsMember({"channel", "periodic"}));
    analyze->add_option("--period-ps", aa.period_ps, "synthetic trigger period");
    analyze->add_option("--phase-ps", aa.phase_ps, "synthetic trigger phase");
    analyze->add_option("--out", aa.out, "output table (stdout if omitted)");

    std::string sim_model, sim_config, sim_out;
    auto* simulate = app.add_subcommand("simulate", "run a source simulator");
    simulate->add_option("--model", sim_model)->required()
        ->check(CLI::IsMember({"qd_pulsed", "qd_cw", "spdc"}));
    simulate->add_option("--config", sim_config, "JSON config")->required();
    simulate->add_option("--out", sim_out, "output PTAG stream")->required();

    double b_lo = 1e-4, b_hi = 0.2;
    std::size_t b_n = 200;
    std::string b_out;
    auto* boundary = app.add_subcommand("boundary", "export boundary curve samples");
    boundary->add_option("--p1-lo", b_lo);
    boundary->add_option("--p1-hi", b_hi);
    boundary->add_option("--n", b_n);
    boundary->add_option("--out", b_out, "output CSV (stdout if omitted)");

    std::string g2_stream, g2_format = "binary", g2_out;
    std::optional<std::uint64_t> g2_duration;
    std::int64_t g2_bin = 100, g2_range = 0, g2_period = 0, g2_integration = 0;
    int g2_far = 1;
    auto* g2c = app.add_subcommand("g2", "delay histogram and peak-ratio summary");
    g2c->add_option("--stream", g2_stream)->required();
    g2c->add_option("--stream-format", g2_format)->check(CLI::IsMember({"binary", "csv"}));
    g2c->add_option("--duration-ps", g2_duration);
    g2c->add_option("--bin-ps", g2_bin)->required();
    g2c->add_option("--range-ps", g2_range)->required();
    g2c->add_option("--period-ps", g2_period)->required();
    g2c->add_option("--integration-ps", g2_integration)->required();
    g2c->add_option("--far-peak-min", g2_far, "first peak index counted as 'far'");
    g2c->add_option("--out", g2_out, "histogram CSV path")->required();

    std::string sw_model, sw_config, sw_param, sw_out;
    std::vector<double> sw_values;
    std::vector<std::uint64_t> sw_windows;
    std::int64_t sw_offset = 0;
    double sw_splitter = 0.5;
    auto* sweep = app.add_subcommand("sweep", "simulate over one swept parameter and analyze");
    sweep->add_option("--model", sw_model)->required()
        ->check(CLI::IsMember({"qd_pulsed", "qd_cw", "spdc"}));
    sweep->add_option("--config", sw_config)->required();
    sweep->add_option("--param", sw_param, "config key to sweep")->required();
    sweep->add_option("--values", sw_values)->required()->delimiter(',');
    sweep->add_option("--windows", sw_windows)->required()->delimiter(',');
    sweep->add_option("--offset-ps", sw_offset);
    sweep->add_option("--splitter", sw_splitter)->required();
    sweep->add_option("--out", sw_out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(g, aa);
        if (simulate->parsed()) return cmd_simulate(g, sim_model, sim_config, sim_out);
        if (boundary->parsed()) return cmd_boundary(g, b_lo, b_hi, b_n, b_out);
        if (g2c->parsed())
            return cmd_g2(g, g2_stream, g2_format, g2_duration, g2_bin, g2_range,
                          g2_period, g2_integration, g2_far, g2_out);
        if (sweep->parsed())
            return cmd_sweep(g, sw_model, sw_config, sw_param, sw_values, sw_windows,
                             sw_offset, sw_splitter, sw_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == Error::Kind::usage ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
