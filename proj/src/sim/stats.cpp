#include "shortprompt/sim/stats.hpp"

#include <iomanip>
#include <set>
#include <sstream>

namespace shortprompt::sim {

using nlohmann::json;

SessionStats compute_stats(const ReplayReport& report)
{
    SessionStats s;
    s.players = static_cast<int>(report.players.size());
    for (auto id : report.players) s.penalties[id] = 0;
    for (const auto& r : report.rounds) {
        for (const auto& sub : r.submissions) ++s.token_counts[sub.token_count];
        if (r.practice) continue;
        ++s.category_rounds[r.category];
        RoundImages img{r.index, r.main_issued, r.quick_issued, s.players * 3};
        if (img.total() > img.cap) s.within_caps = false;
        s.total_images += img.total();
        s.images.push_back(img);
        for (const auto& v : r.votes) ++s.votes[v.voter][v.target];
        if (r.logged) {
            for (const auto& [id, d] : *r.logged) s.penalties[id] += d.penalty;
        }
    }
    return s;
}

json to_json(const SessionStats& s)
{
    json images = json::array();
    for (const auto& i : s.images) {
        images.push_back({{"round", i.round}, {"main", i.main}, {"quick_draw", i.quick_draw},
                          {"total", i.total()}, {"cap", i.cap}});
    }
    json categories = json::object();
    for (const auto& [c, n] : s.category_rounds) categories[std::string(to_string(c))] = n;
    json tokens = json::object();
    for (const auto& [t, n] : s.token_counts) tokens[std::to_string(t)] = n;
    json penalties = json::object();
    for (const auto& [id, n] : s.penalties) penalties[to_string(id)] = n;
    json votes = json::object();
    for (const auto& [voter, row] : s.votes) {
        json r = json::object();
        for (const auto& [target, n] : row) r[to_string(target)] = n;
        votes[to_string(voter)] = r;
    }
    return {{"players", s.players},         {"images", images},
            {"total_images", s.total_images}, {"within_caps", s.within_caps},
            {"category_rounds", categories},  {"token_counts", tokens},
            {"penalties", penalties},         {"votes", votes}};
}

std::string to_table(const SessionStats& s, const ReplayReport& report)
{
    auto name = [&](PlayerId id) {
        auto it = report.nicknames.find(id);
        return it == report.nicknames.end() ? to_string(id) : it->second;
    };
    std::ostringstream out;
    out << "images per round (cap " << s.players * 3 << ")\n";
    for (const auto& i : s.images) {
        out << "  round " << i.round << ": " << i.main << " main + " << i.quick_draw << " quick = " << i.total()
            << "\n";
    }
    out << "  total: " << s.total_images << (s.within_caps ? "" : "  (cap exceeded)") << "\n";

    out << "categories\n";
    for (const auto& [c, n] : s.category_rounds) out << "  " << std::left << std::setw(18) << to_string(c) << n << "\n";

    out << "token counts\n";
    for (const auto& [t, n] : s.token_counts) out << "  " << std::setw(4) << t << std::string(n, '#') << "\n";

    out << "penalties\n";
    for (const auto& [id, n] : s.penalties) out << "  " << std::setw(18) << name(id) << n << "\n";

    out << "votes (row voted for column)\n";
    out << "  " << std::setw(18) << "";
    for (auto id : report.players) out << std::setw(6) << to_string(id);
    out << "\n";
    for (auto voter : report.players) {
        out << "  " << std::setw(18) << name(voter);
        for (auto target : report.players) {
            int n = 0;
            if (auto row = s.votes.find(voter); row != s.votes.end()) {
                if (auto c = row->second.find(target); c != row->second.end()) n = c->second;
            }
            out << std::setw(6) << n;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace shortprompt::sim
