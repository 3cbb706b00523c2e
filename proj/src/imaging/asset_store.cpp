#include "shortprompt/imaging/asset_store.hpp"

#include "shortprompt/core/codec.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <iterator>

namespace shortprompt::imaging {

namespace fs = std::filesystem;

AssetStore::AssetStore(fs::path dir) : dir_(std::move(dir))
{
    if (dir_.empty()) {
        return;
    }
    fs::create_directories(dir_);
    std::ifstream index(dir_ / "originals.jsonl");
    std::string line;
    while (std::getline(index, line)) {
        // A torn last line from a crash is skipped.
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_object() && j.contains("identity") && j.contains("prompt") && j.contains("key")) {
            originals_[{j["identity"].get<std::string>(), j["prompt"].get<std::string>()}] =
                j["key"].get<std::string>();
        }
    }
}

bool AssetStore::valid_key(const std::string& key) noexcept
{
    if (key.size() != 64) return false;
    for (char c : key) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    }
    return true;
}

fs::path AssetStore::path_for(const std::string& key) const { return dir_ / (key + ".png"); }

std::string AssetStore::put(std::span<const std::uint8_t> png)
{
    auto key = codec::sha256_hex(png);
    std::lock_guard lock(mutex_);
    if (dir_.empty()) {
        memory_.try_emplace(key, png.begin(), png.end());
        return key;
    }
    const auto final_path = path_for(key);
    if (!fs::exists(final_path)) {
        auto tmp = final_path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out.write(reinterpret_cast<const char*>(png.data()),
                      static_cast<std::streamsize>(png.size()));
            if (!out) {
                throw std::runtime_error("asset write failed: " + tmp.string());
            }
        }
        fs::rename(tmp, final_path);
    }
    return key;
}

std::optional<std::vector<std::uint8_t>> AssetStore::get(const std::string& key) const
{
    if (!valid_key(key)) return std::nullopt;
    std::lock_guard lock(mutex_);
    if (dir_.empty()) {
        auto it = memory_.find(key);
        if (it == memory_.end()) return std::nullopt;
        return it->second;
    }
    std::ifstream in(path_for(key), std::ios::binary);
    if (!in) return std::nullopt;
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

bool AssetStore::contains(const std::string& key) const
{
    if (!valid_key(key)) return false;
    std::lock_guard lock(mutex_);
    return dir_.empty() ? memory_.contains(key) : fs::exists(path_for(key));
}

std::optional<std::string> AssetStore::find_original(const std::string& identity,
                                                     const std::string& prompt) const
{
    std::lock_guard lock(mutex_);
    auto it = originals_.find({identity, prompt});
    if (it == originals_.end()) return std::nullopt;
    return it->second;
}

void AssetStore::remember_original(const std::string& identity, const std::string& prompt,
                                   const std::string& key)
{
    std::lock_guard lock(mutex_);
    if (!originals_.insert_or_assign({identity, prompt}, key).second) {
        return;
    }
    if (!dir_.empty()) {
        std::ofstream index(dir_ / "originals.jsonl", std::ios::app);
        index << nlohmann::json{{"identity", identity}, {"prompt", prompt}, {"key", key}}.dump()
              << '\n';
    }
}

}  // namespace shortprompt::imaging
