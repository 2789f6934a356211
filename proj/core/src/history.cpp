#include "chorus/history.hpp"

#include "chorus/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace chorus {

using nlohmann::json;

void SharedHistory::append_post(Post post) {
    if (post.post_id <= 0) {
        throw ValidationError("post_id must be positive");
    }
    if (post_index_.count(post.post_id) != 0) {
        throw ValidationError("duplicate post_id " + std::to_string(post.post_id));
    }
    if (post.timestamp < 0.0) {
        throw ValidationError("post timestamp must be >= 0");
    }
    if (!posts_.empty()) {
        const Post& last = posts_.back();
        if (post.timestamp < last.timestamp ||
            (post.timestamp == last.timestamp && post.post_id < last.post_id)) {
            throw ValidationError("posts must be ordered by (timestamp, post_id)");
        }
    }
    if (post.kind == PostKind::Reply) {
        if (!post.parent.has_value()) {
            throw ValidationError("reply post requires a parent");
        }
        const Post* parent = find_post(*post.parent);
        if (parent == nullptr) {
            throw ValidationError("reply parent " + std::to_string(*post.parent) +
                                  " not found in history");
        }
        if (parent->post_id >= post.post_id) {
            throw ValidationError("reply parent must predate the reply");
        }
        if (parent->author == post.author) {
            throw ValidationError("reply parent must have a different author");
        }
    } else {
        if (post.parent.has_value()) {
            throw ValidationError("new comment must not carry a parent");
        }
        if (post.stance.has_value()) {
            throw ValidationError("new comment must not carry a stance");
        }
    }
    post_index_.emplace(post.post_id, posts_.size());
    order_.push_back({true, posts_.size()});
    posts_.push_back(std::move(post));
}

void SharedHistory::append_vote(VoteRecord vote) {
    const Post* target = find_post(vote.target);
    if (target == nullptr) {
        throw ValidationError("vote target " + std::to_string(vote.target) +
                              " not found in history");
    }
    if (target->author == vote.voter) {
        throw ValidationError("self-votes are forbidden");
    }
    if (!vote_keys_.insert({vote.voter, vote.target}).second) {
        throw ValidationError("duplicate vote by \"" + vote.voter + "\" on post " +
                              std::to_string(vote.target));
    }
    if (vote.timestamp < 0.0) {
        vote_keys_.erase({vote.voter, vote.target});
        throw ValidationError("vote timestamp must be >= 0");
    }
    if (!votes_.empty() && vote.timestamp < votes_.back().timestamp) {
        vote_keys_.erase({vote.voter, vote.target});
        throw ValidationError("votes must be ordered by timestamp");
    }
    order_.push_back({false, votes_.size()});
    votes_.push_back(std::move(vote));
}

const Post* SharedHistory::find_post(PostId id) const {
    auto it = post_index_.find(id);
    return it == post_index_.end() ? nullptr : &posts_[it->second];
}

bool SharedHistory::has_vote(const ActorId& voter, PostId target) const {
    return vote_keys_.count({voter, target}) != 0;
}

std::vector<Post> SharedHistory::posts_by(const ActorId& author) const {
    std::vector<Post> out;
    for (const Post& p : posts_) {
        if (p.author == author) out.push_back(p);
    }
    return out;
}

std::vector<VoteRecord> SharedHistory::votes_by(const ActorId& voter) const {
    std::vector<VoteRecord> out;
    for (const VoteRecord& v : votes_) {
        if (v.voter == voter) out.push_back(v);
    }
    return out;
}

std::string format_minutes(Minutes value) {
    char buf[64];
    for (int digits = 3; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

namespace {

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string post_line(const Post& p) {
    std::string line = "{\"record_type\":\"post\",\"post_id\":" + std::to_string(p.post_id) +
                       ",\"author\":" + quoted(p.author) +
                       ",\"timestamp\":" + format_minutes(p.timestamp) +
                       ",\"body\":" + quoted(p.body) +
                       ",\"kind\":\"" + to_string(p.kind) + "\"";
    line += ",\"parent\":";
    line += p.parent ? std::to_string(*p.parent) : "null";
    line += ",\"stance\":";
    line += p.stance ? quoted(to_string(*p.stance)) : "null";
    json trace = json::array();
    for (const ToolTraceEntry& t : p.tool_trace) {
        trace.push_back({{"tool", t.tool}, {"query", t.query}, {"summary", t.summary}});
    }
    line += ",\"tool_trace\":" + trace.dump() + "}";
    return line;
}

std::string vote_line(const VoteRecord& v) {
    return "{\"record_type\":\"vote\",\"voter\":" + quoted(v.voter) +
           ",\"target\":" + std::to_string(v.target) +
           ",\"direction\":\"" + to_string(v.direction) + "\"" +
           ",\"timestamp\":" + format_minutes(v.timestamp) + "}";
}

Post parse_post(const json& rec) {
    Post p;
    p.post_id = rec.at("post_id").get<PostId>();
    p.author = rec.at("author").get<std::string>();
    p.timestamp = rec.at("timestamp").get<double>();
    p.body = rec.at("body").get<std::string>();
    p.kind = post_kind_from_string(rec.at("kind").get<std::string>());
    if (rec.contains("parent") && !rec["parent"].is_null()) {
        p.parent = rec["parent"].get<PostId>();
    }
    if (rec.contains("stance") && !rec["stance"].is_null()) {
        p.stance = stance_from_string(rec["stance"].get<std::string>());
    }
    if (rec.contains("tool_trace")) {
        for (const json& t : rec["tool_trace"]) {
            p.tool_trace.push_back({t.at("tool").get<std::string>(),
                                    t.at("query").get<std::string>(),
                                    t.at("summary").get<std::string>()});
        }
    }
    return p;
}

VoteRecord parse_vote(const json& rec) {
    VoteRecord v;
    v.voter = rec.at("voter").get<std::string>();
    v.target = rec.at("target").get<PostId>();
    v.direction = vote_direction_from_string(rec.at("direction").get<std::string>());
    v.timestamp = rec.at("timestamp").get<double>();
    return v;
}

} // namespace

void write_history_jsonl(const SharedHistory& history, std::ostream& out) {
    for (const SharedHistory::RecordRef& ref : history.records()) {
        out << (ref.is_post ? post_line(history.posts()[ref.index])
                            : vote_line(history.votes()[ref.index]))
            << '\n';
    }
}

void write_history_jsonl(const SharedHistory& history, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError(path, "cannot open history file for writing");
    }
    write_history_jsonl(history, out);
    if (!out.good()) {
        throw IoError(path, "failed writing history file");
    }
}

SharedHistory read_history_jsonl(std::istream& in) {
    SharedHistory history;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw HistoryParseError(line_no, e.what());
        }
        try {
            const std::string type = rec.at("record_type").get<std::string>();
            if (type == "post") {
                history.append_post(parse_post(rec));
            } else if (type == "vote") {
                history.append_vote(parse_vote(rec));
            } else {
                throw ValidationError("unknown record_type \"" + type + "\"");
            }
        } catch (const json::exception& e) {
            throw HistoryParseError(line_no, e.what());
        } catch (const ValidationError& e) {
            throw HistoryParseError(line_no, e.what());
        }
    }
    return history;
}

SharedHistory read_history_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(path, "cannot open history file");
    }
    return read_history_jsonl(in);
}

} // namespace chorus
