#include "heraldstat/tagstream.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "heraldstat/kernels.hpp"

namespace heraldstat {

namespace {

constexpr std::uint64_t kMaxDuration = std::uint64_t(1) << 62;
constexpr char kMagic[4] = {'P', 'T', 'A', 'G'};
constexpr std::uint16_t kVersion = 1;
constexpr std::uint16_t kResolutionPs = 1;

void put_u16(std::string& buf, std::uint16_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

std::string role_name(ChannelRole r) {
    switch (r) {
        case ChannelRole::trigger: return "trigger";
        case ChannelRole::signal_a: return "signal_a";
        case ChannelRole::signal_b: return "signal_b";
        case ChannelRole::other: return "other";
    }
    return "?";
}

RoleMap default_roles() {
    return {{0, ChannelRole::trigger}, {1, ChannelRole::signal_a}, {2, ChannelRole::signal_b}};
}

void TagStream::validate() const {
    if (channels.size() != times.size())
        throw Error(Error::Kind::data, "tag stream columns out of sync");
    if (duration_ps > kMaxDuration)
        throw Error(Error::Kind::data, "duration exceeds supported range (2^62 ps)");
    if (!kernels::active().is_sorted_u64(times.data(), times.size())) {
        for (std::size_t i = 1; i < times.size(); ++i)
            if (times[i] < times[i - 1])
                throw Error(Error::Kind::data,
                            "tags not sorted by time (first offending index " +
                                std::to_string(i) + ")");
    }
    for (std::size_t i = 0; i < channels.size(); ++i) {
        if (!roles.count(channels[i]))
            throw Error(Error::Kind::data, "unknown channel " +
                                               std::to_string(channels[i]) +
                                               " at index " + std::to_string(i));
        if (times[i] > duration_ps)
            throw Error(Error::Kind::data, "tag beyond stream duration at index " +
                                               std::to_string(i));
    }
}

std::vector<std::uint64_t> TagStream::channel_times(std::uint8_t ch) const {
    const auto& k = kernels::active();
    std::vector<std::uint64_t> out(k.count_channel(channels.data(), channels.size(), ch));
    k.select_channel_times(channels.data(), times.data(), channels.size(), ch, out.data());
    return out;
}

std::uint8_t TagStream::channel_of(ChannelRole role) const {
    std::optional<std::uint8_t> found;
    for (const auto& [ch, r] : roles)
        if (r == role) {
            if (found)
                throw Error(Error::Kind::data, "role " + role_name(role) +
                                                   " assigned to more than one channel");
            found = ch;
        }
    if (!found)
        throw Error(Error::Kind::data, "no channel with role " + role_name(role));
    return *found;
}

bool TagStream::has_role(ChannelRole role) const {
    for (const auto& [ch, r] : roles)
        if (r == role) return true;
    return false;
}

void TagStream::sort_tags() {
    std::vector<std::size_t> order(times.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
    std::vector<std::uint8_t> ch(channels.size());
    std::vector<std::uint64_t> t(times.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        ch[i] = channels[order[i]];
        t[i] = times[order[i]];
    }
    channels = std::move(ch);
    times = std::move(t);
}

namespace {

TagStream read_binary(const std::string& path, RoleMap roles) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(Error::Kind::io, "cannot open " + path);
    std::array<unsigned char, 16> hdr{};
    f.read(reinterpret_cast<char*>(hdr.data()), 16);
    if (f.gcount() != 16) throw Error(Error::Kind::data, path + ": truncated header");
    if (std::memcmp(hdr.data(), kMagic, 4) != 0)
        throw Error(Error::Kind::data, path + ": bad magic, not a PTAG file");
    const auto version = get_u16(hdr.data() + 4);
    if (version != kVersion)
        throw Error(Error::Kind::data,
                    path + ": unsupported PTAG version " + std::to_string(version));
    const auto res = get_u16(hdr.data() + 6);
    if (res != kResolutionPs)
        throw Error(Error::Kind::data, path + ": unsupported resolution " +
                                           std::to_string(res) + " ps (expected 1)");
    TagStream s;
    s.roles = std::move(roles);
    s.duration_ps = get_u64(hdr.data() + 8);

    f.seekg(0, std::ios::end);
    const std::streamoff total = f.tellg();
    const std::streamoff body = total - 16;
    if (body % 9 != 0)
        throw Error(Error::Kind::data, path + ": truncated record (body not a multiple of 9 bytes)");
    const std::size_t n = static_cast<std::size_t>(body / 9);
    s.channels.resize(n);
    s.times.resize(n);
    f.seekg(16);
    std::vector<unsigned char> buf(std::min<std::size_t>(n, 1 << 16) * 9);
    std::size_t done = 0;
    while (done < n) {
        const std::size_t chunk = std::min(n - done, buf.size() / 9);
        f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(chunk * 9));
        if (static_cast<std::size_t>(f.gcount()) != chunk * 9)
            throw Error(Error::Kind::io, path + ": short read");
        for (std::size_t i = 0; i < chunk; ++i) {
            const unsigned char* rec = buf.data() + i * 9;
            s.channels[done + i] = rec[0];
            s.times[done + i] = get_u64(rec + 1);
        }
        done += chunk;
    }
    s.validate();
    return s;
}

TagStream read_csv(const std::string& path, RoleMap roles,
                   std::optional<std::uint64_t> duration) {
    std::ifstream f(path);
    if (!f) throw Error(Error::Kind::io, "cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw Error(Error::Kind::data, path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "channel,time_ps")
        throw Error(Error::Kind::data, path + ": bad CSV header '" + line + "'");
    TagStream s;
    s.roles = std::move(roles);
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        unsigned ch;
        unsigned long long t;
        char extra;
        if (std::sscanf(line.c_str(), "%u,%llu%c", &ch, &t, &extra) != 2 || ch > 255)
            throw Error(Error::Kind::data,
                        path + ": bad record at line " + std::to_string(lineno));
        s.push_back(static_cast<std::uint8_t>(ch), t);
    }

    if (duration) {
        s.duration_ps = *duration;
    } else {
        const std::string sidecar = path + ".meta.json";
        std::ifstream m(sidecar);
        if (!m)
            throw Error(Error::Kind::usage,
                        path + ": CSV needs a duration (sidecar " + sidecar +
                            " missing and none given)");
        nlohmann::json j;
        try {
            m >> j;
            s.duration_ps = j.at("duration_ps").get<std::uint64_t>();
        } catch (const nlohmann::json::exception& e) {
            throw Error(Error::Kind::data, sidecar + ": " + e.what());
        }
    }
    s.validate();
    return s;
}

}  // namespace

TagStream read_stream(const std::string& path, StreamFormat format, RoleMap roles,
                      std::optional<std::uint64_t> csv_duration_ps) {
    return format == StreamFormat::binary ? read_binary(path, std::move(roles))
                                          : read_csv(path, std::move(roles), csv_duration_ps);
}

void write_stream(const TagStream& stream, const std::string& path, StreamFormat format) {
    stream.validate();
    if (format == StreamFormat::binary) {
        std::string buf;
        buf.reserve(16 + stream.size() * 9);
        buf.append(kMagic, 4);
        put_u16(buf, kVersion);
        put_u16(buf, kResolutionPs);
        put_u64(buf, stream.duration_ps);
        for (std::size_t i = 0; i < stream.size(); ++i) {
            buf.push_back(static_cast<char>(stream.channels[i]));
            put_u64(buf, stream.times[i]);
        }
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(Error::Kind::io, "cannot open " + path + " for writing");
        f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!f) throw Error(Error::Kind::io, "write failed: " + path);
    } else {
        std::ofstream f(path, std::ios::trunc);
        if (!f) throw Error(Error::Kind::io, "cannot open " + path + " for writing");
        f << "channel,time_ps\n";
        for (std::size_t i = 0; i < stream.size(); ++i)
            f << unsigned(stream.channels[i]) << ',' << stream.times[i] << '\n';
        if (!f) throw Error(Error::Kind::io, "write failed: " + path);
        nlohmann::json j;
        j["duration_ps"] = stream.duration_ps;
        std::ofstream m(path + ".meta.json", std::ios::trunc);
        m << j.dump(2) << '\n';
        if (!m) throw Error(Error::Kind::io, "write failed: " + path + ".meta.json");
    }
}

TagStream merge_streams(const TagStream& a, const TagStream& b) {
    if (a.duration_ps != b.duration_ps)
        throw Error(Error::Kind::data, "merge: duration mismatch");
    TagStream out;
    out.duration_ps = a.duration_ps;
    out.roles = a.roles;
    for (const auto& [ch, role] : b.roles) {
        auto it = out.roles.find(ch);
        if (it == out.roles.end())
            out.roles.emplace(ch, role);
        else if (it->second != role)
            throw Error(Error::Kind::data,
                        "merge: conflicting role for channel " + std::to_string(ch));
    }
    out.meta = a.meta;
    out.meta.insert(b.meta.begin(), b.meta.end());

    out.channels.reserve(a.size() + b.size());
    out.times.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        const bool take_a =
            j >= b.size() || (i < a.size() && a.times[i] <= b.times[j]);
        if (take_a) {
            out.push_back(a.channels[i], a.times[i]);
            ++i;
        } else {
            out.push_back(b.channels[j], b.times[j]);
            ++j;
        }
    }
    return out;
}

}  // namespace heraldstat
