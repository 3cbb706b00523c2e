#include "shortprompt/sim/strategies.hpp"

#include "shortprompt/core/errors.hpp"
#include "shortprompt/core/random.hpp"
#include "shortprompt/core/utf8.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace shortprompt::sim {

namespace {

constexpr std::array<std::pair<BotKind, std::string_view>, 6> kNames{{
    {BotKind::gambler, "gambler"},
    {BotKind::verbose, "verbose"},
    {BotKind::contrastive, "contrastive"},
    {BotKind::random_voter, "random-voter"},
    {BotKind::first_voter, "first-voter"},
    {BotKind::adversarial, "adversarial"},
}};

const std::set<std::string, std::less<>> kStopWords{
    "a", "an", "the", "of", "and", "or", "as", "in", "on", "at", "to", "there", "are", "is",
    "with", "for", "little", "further", "away", "some", "this", "that",
};

std::vector<std::string> words_of(std::string_view text)
{
    std::vector<std::string> out;
    for (auto w : utf8::split_whitespace(text)) {
        auto bare = utf8::strip_punctuation(w);
        if (!bare.empty()) out.emplace_back(bare);
    }
    return out;
}

std::string join(const std::vector<std::string>& words)
{
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

std::uint64_t round_seed(std::uint64_t seed, int round, std::uint64_t salt)
{
    return mix_seed(mix_seed(seed, static_cast<std::uint64_t>(round)), salt);
}

std::string gamble(std::string_view original)
{
    const auto words = words_of(original);
    std::vector<std::string> content;
    for (const auto& w : words) {
        if (!kStopWords.contains(utf8::fold_case(w))) content.push_back(w);
    }
    if (content.empty()) content = words;
    if (content.size() > 2) content.erase(content.begin(), content.end() - 2);
    auto out = join(content);
    return out.empty() ? std::string(original) : out;
}

}  // namespace

std::string_view to_string(BotKind kind) noexcept
{
    for (const auto& [k, name] : kNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

std::optional<BotKind> parse_bot_kind(std::string_view name) noexcept
{
    for (const auto& [k, n] : kNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

std::vector<BotKind> parse_roster(std::string_view list)
{
    std::vector<BotKind> out;
    while (!list.empty()) {
        const auto comma = list.find(',');
        const auto name = utf8::trim(list.substr(0, comma));
        if (!name.empty()) {
            auto kind = parse_bot_kind(name);
            if (!kind) throw Error(Errc::invalid_config, "unknown bot " + std::string(name));
            out.push_back(*kind);
        }
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    if (out.empty()) throw Error(Errc::invalid_config, "empty roster");
    return out;
}

std::string choose_prompt(BotKind kind, std::string_view original, int round, std::uint64_t seed)
{
    switch (kind) {
    case BotKind::gambler:
    case BotKind::adversarial: return gamble(original);
    case BotKind::verbose: return std::string(original) + ", highly detailed, photorealistic, soft natural lighting";
    case BotKind::contrastive: {
        auto words = words_of(original);
        if (words.empty()) return std::string(original);
        std::size_t longest = 0;
        for (std::size_t i = 1; i < words.size(); ++i) {
            if (words[i].size() > words[longest].size()) longest = i;
        }
        static constexpr std::array<std::string_view, 6> swaps{"painted", "tiny", "ancient", "glowing",
                                                               "wooden", "smiling"};
        Rng rng(round_seed(seed, round, 0x636f6e74));
        words[longest] = swaps[rng.below(swaps.size())];
        return join(words);
    }
    case BotKind::random_voter:
    case BotKind::first_voter: return std::string(original);
    }
    return std::string(original);
}

bool inspects_images(BotKind kind) noexcept
{
    return kind == BotKind::gambler || kind == BotKind::verbose || kind == BotKind::contrastive;
}

PlayerId choose_vote(BotKind kind, const std::vector<PlayerId>& options, const std::vector<double>& distance,
                     int round, std::uint64_t seed)
{
    if (options.empty()) throw Error(Errc::target_has_no_image, "no options");
    if (kind == BotKind::first_voter) return options.front();
    if (inspects_images(kind) && distance.size() == options.size()) {
        const auto best = std::min_element(distance.begin(), distance.end()) - distance.begin();
        return options[static_cast<std::size_t>(best)];
    }
    Rng rng(round_seed(seed, round, 0x766f7465));
    return options[rng.below(options.size())];
}

std::vector<std::string> quick_draw_prompts(BotKind kind, std::string_view original, int round,
                                            std::uint64_t seed)
{
    switch (kind) {
    case BotKind::adversarial:
        // One more than the budget allows.
        return {gamble(original), std::string(original), "just " + gamble(original)};
    case BotKind::contrastive: return {choose_prompt(kind, original, round + 1000, seed)};
    default: return {};
    }
}

}  // namespace shortprompt::sim
