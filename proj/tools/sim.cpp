// sim run | replay | stats
#include "shortprompt/core/errors.hpp"
#include "shortprompt/sim/harness.hpp"
#include "shortprompt/sim/replay.hpp"
#include "shortprompt/sim/stats.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>

using namespace shortprompt;

namespace {

void print_mismatches(const sim::ReplayReport& report)
{
    for (const auto& m : report.mismatches) {
        std::cerr << "mismatch";
        if (m.round > 0) std::cerr << " in round " << m.round;
        std::cerr << ": " << m.detail << "\n";
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bot harness and log tools"};
    app.require_subcommand(1);

    int players = 3;
    std::string bots = "gambler,verbose,first-voter";
    std::uint64_t seed = 1;
    std::string pool_path;
    std::string log_dir = "logs";
    bool practice = false;
    int prompt_timer = 70;
    int vote_timer = 20;
    auto* run = app.add_subcommand("run", "Play one session with bots against an in-process server");
    run->add_option("--players", players, "Number of bots; the roster is cycled to fill")->check(CLI::Range(1, 64));
    run->add_option("--bots", bots, "Comma-separated roster: gambler, verbose, contrastive, random-voter, "
                                    "first-voter, adversarial");
    run->add_option("--seed", seed);
    run->add_option("--pool", pool_path, "Prompt pool JSON")->check(CLI::ExistingFile);
    run->add_option("--logs", log_dir, "Directory for the event log");
    run->add_flag("--practice", practice, "Play the unscored practice round first");
    run->add_option("--prompt-timer", prompt_timer);
    run->add_option("--vote-timer", vote_timer);

    std::string log_path;
    auto* rep = app.add_subcommand("replay", "Recompute every score in a log");
    rep->add_option("log", log_path)->required()->check(CLI::ExistingFile);
    bool as_json = false;
    rep->add_flag("--json", as_json, "Print the full report as JSON");

    std::string format = "table";
    auto* st = app.add_subcommand("stats", "Summarise a log");
    st->add_option("log", log_path)->required()->check(CLI::ExistingFile);
    st->add_option("--format", format)->check(CLI::IsMember({"json", "table"}));

    std::string bpe;
    for (auto* sub : {rep, st}) sub->add_option("--bpe-vocab", bpe, "Rank file for bpe-compat logs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            sim::SimOptions opts;
            const auto kinds = sim::parse_roster(bots);
            for (int i = 0; i < players; ++i) opts.roster.push_back(kinds[static_cast<std::size_t>(i) % kinds.size()]);
            opts.seed = seed;
            if (!pool_path.empty()) opts.pool = PromptPool::load(pool_path);
            opts.log_dir = log_dir;
            opts.config.practice_round = practice;
            opts.config.prompt_timer_s = prompt_timer;
            opts.config.vote_timer_s = vote_timer;
            const auto result = sim::run_simulation(opts);

            std::vector<double> ms;
            for (const auto& s : result.samples) ms.push_back(s.latency_ms);
            std::sort(ms.begin(), ms.end());
            std::cout << "session " << result.session << " (" << result.room_code << "): " << result.end_reason
                      << " after " << result.rounds_played << " rounds in " << result.runtime_s << " s\n";
            for (const auto& [name, total] : result.totals) std::cout << "  " << name << ": " << total << "\n";
            if (!ms.empty()) {
                std::cout << "actions " << ms.size() << ", median broadcast " << ms[ms.size() / 2] << " ms\n";
            }
            for (const auto& [code, n] : result.provoked_errors) {
                std::cout << "provoked " << code << " x" << n << "\n";
            }
            const auto report = sim::replay_file(result.log_path);
            print_mismatches(report);
            std::cout << "log " << result.log_path.string() << (report.ok() ? " replays cleanly" : " has mismatches")
                      << "\n";
            return report.ok() ? 0 : 1;
        }

        tokenizer::TokenizerRegistry tokenizers;
        if (!bpe.empty()) tokenizers.set_bpe_vocabulary(bpe);
        const auto report = sim::replay_file(log_path, tokenizers);
        if (*rep) {
            if (as_json) {
                std::cout << sim::to_json(report).dump(2) << "\n";
            } else {
                for (const auto& [id, total] : report.recomputed.totals) {
                    const auto it = report.nicknames.find(id);
                    std::cout << (it == report.nicknames.end() ? to_string(id) : it->second) << ": " << total << "\n";
                }
                std::cout << report.events << " events, " << report.mismatches.size() << " mismatches\n";
            }
        } else {
            const auto stats = sim::compute_stats(report);
            if (format == "json") {
                std::cout << sim::to_json(stats).dump(2) << "\n";
            } else {
                std::cout << sim::to_table(stats, report);
            }
        }
        print_mismatches(report);
        return report.ok() ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
