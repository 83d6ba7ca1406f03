#pragma once

// Time-tagged detection events: data model, PTAG v1 / CSV file formats,
// ordered ingestion and merging. Streams are immutable once built and
// validated; analysis code shares them read-only.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace heraldstat {

class Error : public std::runtime_error {
  public:
    enum class Kind { usage, data, io };
    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

struct TimeTag {
    std::uint8_t channel = 0;
    std::uint64_t time_ps = 0;
};

enum class ChannelRole { trigger, signal_a, signal_b, other };

std::string role_name(ChannelRole r);

using RoleMap = std::map<std::uint8_t, ChannelRole>;

// 0 = trigger, 1 = signal A, 2 = signal B
RoleMap default_roles();

// Event records are stored column-wise (channel bytes and ps timestamps in
// parallel arrays); the scan kernels operate on the raw columns.
struct TagStream {
    std::vector<std::uint8_t> channels;
    std::vector<std::uint64_t> times;   // non-decreasing
    std::uint64_t duration_ps = 0;
    RoleMap roles = default_roles();
    std::map<std::string, std::string> meta;

    std::size_t size() const { return times.size(); }
    TimeTag tag(std::size_t i) const { return {channels[i], times[i]}; }

    void push_back(std::uint8_t ch, std::uint64_t t) {
        channels.push_back(ch);
        times.push_back(t);
    }

    // throws Error{data} on: unsorted times (reports first offending index),
    // channel outside the role map, tag beyond duration, or an unsupported
    // duration (must fit signed 62-bit so window arithmetic cannot overflow)
    void validate() const;

    // sorted timestamps of one channel (select kernel)
    std::vector<std::uint64_t> channel_times(std::uint8_t ch) const;

    std::uint8_t channel_of(ChannelRole role) const;  // throws if not unique
    bool has_role(ChannelRole role) const;

    // stable sort by time, ties keep insertion order (simulators emit
    // per-process tags out of order)
    void sort_tags();
};

enum class StreamFormat { binary, csv };

// PTAG v1: 16-byte header (magic "PTAG", u16 version=1, u16 resolution_ps=1,
// u64 duration_ps), then 9-byte records (u8 channel, u64 time_ps), all
// little-endian, sorted by time. CSV: header "channel,time_ps", one record
// per line; duration comes from a JSON sidecar "<path>.meta.json" or the
// explicit argument.
TagStream read_stream(const std::string& path, StreamFormat format,
                      RoleMap roles = default_roles(),
                      std::optional<std::uint64_t> csv_duration_ps = std::nullopt);

void write_stream(const TagStream& stream, const std::string& path,
                  StreamFormat format);

// sorted merge; |result| = |a| + |b|, ties keep a's tags first.
// Durations must match; role maps must agree where they overlap.
TagStream merge_streams(const TagStream& a, const TagStream& b);

}  // namespace heraldstat
