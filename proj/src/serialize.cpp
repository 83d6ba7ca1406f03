#include "heraldstat/serialize.hpp"

#include <cstdio>
#include <sstream>

namespace heraldstat {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::string stats_csv_header() {
    return "window_ps,p0,sigma_p0,p1,sigma_p1,p2plus,sigma_p2plus,low_count_flag";
}

std::string stats_csv_row(const PhotonStats& s) {
    std::ostringstream os;
    os << s.counts.window.width_ps << ',' << num(s.p0) << ',' << num(s.sigma_p0) << ','
       << num(s.p1) << ',' << num(s.sigma_p1) << ',' << num(s.p2plus) << ','
       << num(s.sigma_p2plus) << ',' << (s.low_count_flag ? 1 : 0);
    return os.str();
}

std::string boundary_csv_header() { return "p1,p2_boundary"; }

std::string witness_csv_header() {
    return "window_ps,p1,p2plus,sigma_p2plus,delta_w_sigma,side";
}

std::string witness_csv_row(const PhotonStats& s, const WitnessResult& w) {
    std::ostringstream os;
    os << s.counts.window.width_ps << ',' << num(s.p1) << ',' << num(s.p2plus) << ','
       << num(s.sigma_p2plus) << ',' << num(w.delta_w_sigma) << ',' << side_name(w.side);
    return os.str();
}

std::string histogram_csv(const Histogram& h) {
    std::ostringstream os;
    os << "bin_start_ps,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        os << h.bin_start(i) << ',' << h.counts[i] << '\n';
    return os.str();
}

nlohmann::json to_json(const CoincidenceCounts& c) {
    return {{"r0", c.r0},
            {"r1a", c.r1a},
            {"r1b", c.r1b},
            {"r2", c.r2},
            {"window_width_ps", c.window.width_ps},
            {"window_offset_ps", c.window.offset_ps},
            {"duration_ps", c.duration_ps},
            {"trigger_source",
             c.trigger_source == TriggerSource::channel ? "channel" : "synthetic_periodic"}};
}

nlohmann::json to_json(const PhotonStats& s) {
    return {{"p0", s.p0},
            {"sigma_p0", s.sigma_p0},
            {"p1", s.p1},
            {"sigma_p1", s.sigma_p1},
            {"p2plus", s.p2plus},
            {"sigma_p2plus", s.sigma_p2plus},
            {"splitting_t", s.splitting_t},
            {"low_count_flag", s.low_count_flag},
            {"counts", to_json(s.counts)}};
}

nlohmann::json to_json(const WitnessResult& w) {
    nlohmann::json j{{"delta_w_sigma", w.delta_w_sigma},
                     {"p2_boundary", w.p2_boundary},
                     {"side", side_name(w.side)},
                     {"boundary",
                      {{"r", w.boundary.r},
                       {"d_sq", w.boundary.d_sq},
                       {"p0", w.boundary.p0},
                       {"p1", w.boundary.p1},
                       {"p2", w.boundary.p2}}}};
    if (std::isinf(w.delta_w_sigma)) j["delta_w_sigma"] = "inf";
    return j;
}

}  // namespace heraldstat
