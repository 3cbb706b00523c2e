#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace shortprompt::imaging {

// Content-addressed PNG storage. Keys are the SHA-256 of the bytes; files
// live at <dir>/<key>.png. An empty directory keeps everything in memory.
class AssetStore {
public:
    AssetStore() = default;
    explicit AssetStore(std::filesystem::path dir);

    AssetStore(const AssetStore&) = delete;
    AssetStore& operator=(const AssetStore&) = delete;

    std::string put(std::span<const std::uint8_t> png);
    std::optional<std::vector<std::uint8_t>> get(const std::string& key) const;
    bool contains(const std::string& key) const;

    /// Originals cache: identity is (provider identity, prompt). Persisted as
    /// JSON lines in <dir>/originals.jsonl.
    std::optional<std::string> find_original(const std::string& identity,
                                             const std::string& prompt) const;
    void remember_original(const std::string& identity, const std::string& prompt,
                           const std::string& key);

    const std::filesystem::path& dir() const noexcept { return dir_; }

    static bool valid_key(const std::string& key) noexcept;

private:
    std::filesystem::path path_for(const std::string& key) const;

    std::filesystem::path dir_;
    mutable std::mutex mutex_;
    std::map<std::string, std::vector<std::uint8_t>> memory_;
    std::map<std::pair<std::string, std::string>, std::string> originals_;
};

}  // namespace shortprompt::imaging
