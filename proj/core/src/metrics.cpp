#include "chorus/metrics.hpp"

#include "chorus/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace chorus {

using nlohmann::json;

namespace {

int bin_of(Minutes timestamp, int bin_count) {
    int b = static_cast<int>(std::floor(timestamp));
    if (b < 0) b = 0;
    if (b >= bin_count) b = bin_count - 1;  // records at exactly t == T land in the last bin
    return b;
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
    std::string quoted = "\"";
    for (char c : value) {
        if (c == '"') quoted += "\"\"";
        else quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path, "cannot open report file for writing");
    return out;
}

} // namespace

ActivitySeries per_minute_activity(const SharedHistory& history, Minutes horizon) {
    ActivitySeries series;
    const int bin_count = static_cast<int>(std::ceil(std::max(horizon, 0.0)));
    series.bins.resize(static_cast<std::size_t>(bin_count));
    for (int i = 0; i < bin_count; ++i) series.bins[static_cast<std::size_t>(i)].minute = i;
    if (bin_count == 0) return series;
    for (const Post& p : history.posts()) {
        ++series.bins[static_cast<std::size_t>(bin_of(p.timestamp, bin_count))].post_count;
    }
    for (const VoteRecord& v : history.votes()) {
        ++series.bins[static_cast<std::size_t>(bin_of(v.timestamp, bin_count))].vote_count;
    }
    return series;
}

ActorBreakdown actor_breakdown(const SharedHistory& history, const std::vector<ActorId>& roster) {
    std::map<ActorId, ActorTotals> totals;
    for (const ActorId& id : roster) totals[id].actor = id;
    for (const Post& p : history.posts()) {
        ActorTotals& t = totals[p.author];
        t.actor = p.author;
        ++t.post_count;
        if (p.kind == PostKind::Reply) ++t.reply_count;
        else ++t.new_comment_count;
    }
    for (const VoteRecord& v : history.votes()) {
        ActorTotals& t = totals[v.voter];
        t.actor = v.voter;
        ++t.vote_count;
    }
    ActorBreakdown breakdown;
    for (auto& [id, t] : totals) breakdown.actors.push_back(std::move(t));
    return breakdown;
}

void export_report(const ActivitySeries& series, const ActorBreakdown& breakdown,
                   const std::string& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw IoError(directory, "cannot create report directory: " + ec.message());

    const std::string activity_path = directory + "/activity.csv";
    {
        std::ofstream out = open_out(activity_path);
        out << "minute,posts,votes\n";
        for (const MinuteBin& bin : series.bins) {
            out << bin.minute << ',' << bin.post_count << ',' << bin.vote_count << '\n';
        }
        if (!out.good()) throw IoError(activity_path, "failed writing activity report");
    }

    const std::string actors_path = directory + "/actors.csv";
    {
        std::ofstream out = open_out(actors_path);
        out << "actor,posts,votes,new,replies\n";
        for (const ActorTotals& t : breakdown.actors) {
            out << csv_field(t.actor) << ',' << t.post_count << ',' << t.vote_count << ','
                << t.new_comment_count << ',' << t.reply_count << '\n';
        }
        if (!out.good()) throw IoError(actors_path, "failed writing actors report");
    }

    const std::string plot_path = directory + "/plot_data.json";
    {
        json minutes = json::array(), posts = json::array(), votes = json::array();
        for (const MinuteBin& bin : series.bins) {
            minutes.push_back(bin.minute);
            posts.push_back(bin.post_count);
            votes.push_back(bin.vote_count);
        }
        json actors = json::array();
        for (const ActorTotals& t : breakdown.actors) {
            actors.push_back({{"actor", t.actor},
                              {"posts", t.post_count},
                              {"votes", t.vote_count},
                              {"new_comments", t.new_comment_count},
                              {"replies", t.reply_count}});
        }
        json doc = {
            {"actions_definition", "executed votes (one record per vote, not per action event)"},
            {"activity", {{"minutes", minutes}, {"posts", posts}, {"votes", votes}}},
            {"actors", actors},
        };
        std::ofstream out = open_out(plot_path);
        out << doc.dump(2) << '\n';
        if (!out.good()) throw IoError(plot_path, "failed writing plot data");
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                in_quotes = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open report file");
    return in;
}

} // namespace

ActivitySeries parse_activity_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    std::getline(in, line);  // header
    ActivitySeries series;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) throw IoError(path, "malformed activity row: " + line);
        series.bins.push_back(
            {std::stoi(fields[0]), std::stoi(fields[1]), std::stoi(fields[2])});
    }
    return series;
}

ActorBreakdown parse_actors_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    std::getline(in, line);  // header
    ActorBreakdown breakdown;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 5) throw IoError(path, "malformed actors row: " + line);
        breakdown.actors.push_back({fields[0], std::stoi(fields[1]), std::stoi(fields[2]),
                                    std::stoi(fields[3]), std::stoi(fields[4])});
    }
    return breakdown;
}

} // namespace chorus
