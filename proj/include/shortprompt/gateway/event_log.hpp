#pragma once

#include "shortprompt/engine/events.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

namespace shortprompt::gateway {

// Destination for log lines. write_line must not return before the line
// is handed to the OS; it throws on any I/O error.
class LineSink {
public:
    virtual ~LineSink() = default;
    virtual void write_line(std::string_view line) = 0;
};

class FileSink final : public LineSink {
public:
    /// Creates the file (and parent directories); fails if it already exists.
    explicit FileSink(const std::filesystem::path& path);
    ~FileSink() override;
    FileSink(const FileSink&) = delete;
    FileSink& operator=(const FileSink&) = delete;

    void write_line(std::string_view line) override;

private:
    std::FILE* file_ = nullptr;
    std::filesystem::path path_;
};

/// "2026-03-01T12:00:00.123Z"
std::string wall_clock_now();

// Append-only JSON-lines log: one header record, then one line per event
// with gapless seq starting at 1.
class EventLog {
public:
    /// Writes the header immediately. Throws Errc::log_failure.
    EventLog(std::unique_ptr<LineSink> sink, const nlohmann::json& header);

    static std::unique_ptr<EventLog> open(const std::filesystem::path& path,
                                          const nlohmann::json& header);

    /// Throws Errc::out_of_order unless event.seq == last_seq() + 1, and
    /// Errc::log_failure when the sink fails (after which every append fails).
    void append(const engine::GameEvent& event, const std::string& wall);

    std::uint64_t last_seq() const;
    bool failed() const;

private:
    std::unique_ptr<LineSink> sink_;
    mutable std::mutex mutex_;
    std::uint64_t last_seq_ = 0;
    bool failed_ = false;
};

}  // namespace shortprompt::gateway
