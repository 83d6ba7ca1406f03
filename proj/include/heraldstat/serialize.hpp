#pragma once

// Stable CSV/JSON encodings of analysis results (schemas are pinned by
// golden-file tests).

#include <string>

#include <json.hpp>

#include "heraldstat/coincidence.hpp"
#include "heraldstat/estimators.hpp"
#include "heraldstat/ngwitness.hpp"

namespace heraldstat {

// "window_ps,p0,sigma_p0,p1,sigma_p1,p2plus,sigma_p2plus,low_count_flag"
std::string stats_csv_header();
std::string stats_csv_row(const PhotonStats& s);

// "p1,p2_boundary"
std::string boundary_csv_header();

// "window_ps,p1,p2plus,sigma_p2plus,delta_w_sigma,side"
std::string witness_csv_header();
std::string witness_csv_row(const PhotonStats& s, const WitnessResult& w);

// "bin_start_ps,count"
std::string histogram_csv(const Histogram& h);

nlohmann::json to_json(const CoincidenceCounts& c);
nlohmann::json to_json(const PhotonStats& s);
nlohmann::json to_json(const WitnessResult& w);

}  // namespace heraldstat
