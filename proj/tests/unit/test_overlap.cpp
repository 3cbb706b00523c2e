#include "shortprompt/core/overlap.hpp"

#include <doctest.h>

#include <random>

using namespace shortprompt;

TEST_CASE("overlap examples")
{
    SUBCASE("subset")
    {
        const auto r = compute_overlap("a pretty cow", "pretty cow");
        CHECK(r.shared == std::set<std::string>{"pretty", "cow"});
        CHECK(r.per_token_flags == std::vector<bool>{true, true});
    }
    SUBCASE("case folding")
    {
        const auto r = compute_overlap("A man", "a man");
        CHECK(r.shared == std::set<std::string>{"a", "man"});
        CHECK(r.original_tokens == std::vector<std::string>{"A", "man"});
    }
    SUBCASE("disjoint")
    {
        const auto r = compute_overlap("holding baby", "CEO portrait");
        CHECK(r.shared.empty());
        CHECK(r.per_token_flags == std::vector<bool>{false, false});
    }
    SUBCASE("punctuation stripped at word edges")
    {
        const auto r = compute_overlap("There are three blocks.", "\"Blocks\", three!");
        CHECK(r.shared == std::set<std::string>{"blocks", "three"});
        CHECK(r.per_token_flags == std::vector<bool>{true, true});
    }
    SUBCASE("exact rule keeps case")
    {
        const auto r = compute_overlap("A man", "a man", Normalization::exact);
        CHECK(r.shared == std::set<std::string>{"man"});
        CHECK(r.per_token_flags == std::vector<bool>{false, true});
    }
    SUBCASE("empty text")
    {
        const auto r = compute_overlap("", "");
        CHECK(r.player_tokens.empty());
        CHECK(r.per_token_flags.empty());
    }
    SUBCASE("non-ascii folding")
    {
        CHECK(compute_overlap("ÉCOLE", "école").shared == std::set<std::string>{"école"});
    }
}

TEST_CASE("shared set is symmetric and flags align with player tokens")
{
    static const std::vector<std::string> words = {"A", "a", "man", "Man.", "cow", "pretty",
                                                   "cow!", "(baby)", "CEO", "...", "x"};
    std::mt19937_64 gen(3);
    auto phrase = [&] {
        std::string s;
        const auto n = gen() % 6;
        for (std::size_t i = 0; i < n; ++i) {
            s += words[gen() % words.size()];
            s += (gen() % 3 == 0) ? "  " : " ";
        }
        return s;
    };
    for (int i = 0; i < 2000; ++i) {
        const auto a = phrase();
        const auto b = phrase();
        const auto ab = compute_overlap(a, b);
        const auto ba = compute_overlap(b, a);
        CHECK(ab.shared == ba.shared);
        REQUIRE(ab.per_token_flags.size() == ab.player_tokens.size());
        for (std::size_t k = 0; k < ab.player_tokens.size(); ++k) {
            const auto norm = normalize_word(ab.player_tokens[k], Normalization::casefold_strip);
            CHECK(ab.per_token_flags[k] == ab.shared.contains(norm));
        }
    }
}
