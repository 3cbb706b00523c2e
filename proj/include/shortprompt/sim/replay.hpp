#pragma once

#include "shortprompt/core/category.hpp"
#include "shortprompt/core/ids.hpp"
#include "shortprompt/core/scoring.hpp"
#include "shortprompt/tokenizer/tokenizer.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace shortprompt::sim {

inline constexpr int kLogVersion = 1;

struct Mismatch {
    int round = 0;  // 0 when not tied to a round
    std::string detail;

    bool operator==(const Mismatch&) const = default;
};

struct RoundRecord {
    int index = 0;
    Category category = Category::demographic_bias;
    bool practice = false;
    std::vector<PromptSubmission> submissions;
    std::map<PlayerId, ImageOutcome> main_outcomes;  // submitters only
    std::vector<Vote> votes;
    std::optional<RoundScores> logged;
    int main_issued = 0;
    int quick_issued = 0;
};

struct ReplayReport {
    nlohmann::json header;
    std::vector<PlayerId> players;
    std::map<PlayerId, std::string> nicknames;
    std::vector<RoundRecord> rounds;  // play order, practice included
    Scoreboard recomputed;            // scored rounds only
    std::vector<Mismatch> mismatches;
    std::map<PlayerId, int> logged_totals;
    std::optional<std::string> end_reason;
    std::uint64_t events = 0;

    bool ok() const noexcept { return mismatches.empty(); }
};

/// Re-derives every scored round from prompt-submitted, generation-resolved
/// and vote-cast events with game-core, recounts every token_count, and
/// compares with the logged round-scored events.
///
/// Throws Errc::parse_error ("line N: ...") on malformed lines and
/// Errc::unsupported_version for unknown header versions. Sequence gaps and
/// disagreements are reported as mismatches.
ReplayReport replay(std::istream& in, const tokenizer::TokenizerRegistry& tokenizers = {});
ReplayReport replay_file(const std::filesystem::path& path,
                         const tokenizer::TokenizerRegistry& tokenizers = {});

nlohmann::json to_json(const ReplayReport& report);

}  // namespace shortprompt::sim
