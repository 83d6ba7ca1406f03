#include "heraldstat/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "heraldstat/tagstream.hpp"

namespace heraldstat {

std::string iso_timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config;
    j["config_hash"] = fnv1a_hex(config.dump());
    j["inputs"] = inputs;
    j["seed"] = seed;
    j["tool_version"] = kToolVersion;
    j["timestamp"] = timestamp;
    return j;
}

void RunManifest::write_sidecar(const std::string& output_path) const {
    std::ofstream f(output_path + ".manifest.json", std::ios::trunc);
    if (!f) throw Error(Error::Kind::io, "cannot write manifest for " + output_path);
    f << to_json().dump(2) << '\n';
}

}  // namespace heraldstat
