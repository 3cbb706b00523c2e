#pragma once

#include "shortprompt/core/category.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace shortprompt {

struct PoolEntry {
    Category category;
    std::string prompt;
    std::string image;  // pre-rendered asset key, empty when rendered on demand

    bool operator==(const PoolEntry&) const = default;
};

// Categorized original prompts a session's rounds are drawn from.
class PromptPool {
public:
    PromptPool() = default;

    /// Entries are validated: prompts are trimmed and must be non-empty.
    explicit PromptPool(std::vector<PoolEntry> entries);

    /// Parses the on-disk format: a JSON array of
    /// {"category": string, "prompt": string, "image": string|null}.
    static PromptPool from_json(std::string_view document);
    static PromptPool load(const std::filesystem::path& path);

    /// The pool shipped with the game: the example prompts for each category.
    static const PromptPool& builtin();

    const std::vector<PoolEntry>& entries() const noexcept { return entries_; }
    std::vector<const PoolEntry*> entries_for(Category category) const;
    std::vector<Category> missing_categories() const;
    bool viable() const { return missing_categories().empty(); }

    std::string to_json() const;

private:
    std::vector<PoolEntry> entries_;
};

}  // namespace shortprompt
