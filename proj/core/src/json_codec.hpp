#pragma once

// Internal JSON encodings shared by the history reader, the HTTP platform
// adapter and the stub servers. Not installed.

#include "chorus/types.hpp"

#include <nlohmann/json.hpp>

namespace chorus::codec {

inline nlohmann::json tool_trace_to_json(const std::vector<ToolTraceEntry>& trace) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ToolTraceEntry& t : trace) {
        arr.push_back({{"tool", t.tool}, {"query", t.query}, {"summary", t.summary}});
    }
    return arr;
}

inline nlohmann::json post_to_json(const Post& p, bool include_id = true) {
    nlohmann::json doc = {
        {"author", p.author},
        {"timestamp", p.timestamp},
        {"body", p.body},
        {"kind", to_string(p.kind)},
        {"parent", p.parent ? nlohmann::json(*p.parent) : nlohmann::json(nullptr)},
        {"stance", p.stance ? nlohmann::json(to_string(*p.stance)) : nlohmann::json(nullptr)},
        {"tool_trace", tool_trace_to_json(p.tool_trace)},
    };
    if (include_id) doc["post_id"] = p.post_id;
    return doc;
}

inline Post post_from_json(const nlohmann::json& rec) {
    Post p;
    if (rec.contains("post_id")) p.post_id = rec["post_id"].get<PostId>();
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
        for (const nlohmann::json& t : rec["tool_trace"]) {
            p.tool_trace.push_back({t.at("tool").get<std::string>(),
                                    t.at("query").get<std::string>(),
                                    t.at("summary").get<std::string>()});
        }
    }
    return p;
}

inline nlohmann::json vote_to_json(const VoteRecord& v) {
    return {{"voter", v.voter},
            {"target", v.target},
            {"direction", to_string(v.direction)},
            {"timestamp", v.timestamp}};
}

inline VoteRecord vote_from_json(const nlohmann::json& rec) {
    VoteRecord v;
    v.voter = rec.at("voter").get<std::string>();
    v.target = rec.at("target").get<PostId>();
    v.direction = vote_direction_from_string(rec.at("direction").get<std::string>());
    if (rec.contains("timestamp")) v.timestamp = rec["timestamp"].get<double>();
    return v;
}

} // namespace chorus::codec
