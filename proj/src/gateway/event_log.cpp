#include "shortprompt/gateway/event_log.hpp"

#include "shortprompt/core/errors.hpp"

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>

namespace shortprompt::gateway {

FileSink::FileSink(const std::filesystem::path& path) : path_(path)
{
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    file_ = std::fopen(path.c_str(), "wbx");
    if (!file_) {
        throw Error(Errc::log_failure, path.string() + ": " + std::strerror(errno));
    }
}

FileSink::~FileSink()
{
    if (file_) std::fclose(file_);
}

void FileSink::write_line(std::string_view line)
{
    if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() || std::fputc('\n', file_) == EOF ||
        std::fflush(file_) != 0) {
        throw Error(Errc::log_failure, path_.string() + ": " + std::strerror(errno));
    }
}

std::string wall_clock_now()
{
    const auto now = std::chrono::system_clock::now();
    const auto t = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

EventLog::EventLog(std::unique_ptr<LineSink> sink, const nlohmann::json& header) : sink_(std::move(sink))
{
    try {
        sink_->write_line(header.dump());
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(Errc::log_failure, e.what());
    }
}

std::unique_ptr<EventLog> EventLog::open(const std::filesystem::path& path, const nlohmann::json& header)
{
    return std::make_unique<EventLog>(std::make_unique<FileSink>(path), header);
}

void EventLog::append(const engine::GameEvent& event, const std::string& wall)
{
    std::lock_guard lock(mutex_);
    if (failed_) {
        throw Error(Errc::log_failure, "log already failed");
    }
    if (event.seq != last_seq_ + 1) {
        throw Error(Errc::out_of_order,
                    "expected seq " + std::to_string(last_seq_ + 1) + ", got " + std::to_string(event.seq));
    }
    try {
        sink_->write_line(engine::to_json(event, wall).dump());
    } catch (const std::exception& e) {
        failed_ = true;
        throw Error(Errc::log_failure, e.what());
    }
    last_seq_ = event.seq;
}

std::uint64_t EventLog::last_seq() const
{
    std::lock_guard lock(mutex_);
    return last_seq_;
}

bool EventLog::failed() const
{
    std::lock_guard lock(mutex_);
    return failed_;
}

}  // namespace shortprompt::gateway
