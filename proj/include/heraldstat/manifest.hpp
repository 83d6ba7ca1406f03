#pragma once

// Run manifests: every CLI output file gets a "<path>.manifest.json"
// sidecar recording what produced it, so runs are reproducible.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace heraldstat {

inline constexpr const char* kToolVersion = "1.0.0";

struct RunManifest {
    std::string command;
    nlohmann::json config;            // resolved parameters of the run
    std::vector<std::string> inputs;
    std::uint64_t seed = 0;
    std::string timestamp;            // ISO 8601 UTC

    nlohmann::json to_json() const;   // includes an FNV-1a hash of config
    void write_sidecar(const std::string& output_path) const;
};

std::string iso_timestamp_now();
std::string fnv1a_hex(const std::string& s);

}  // namespace heraldstat
