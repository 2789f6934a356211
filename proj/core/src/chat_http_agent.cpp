#include "chorus/chat_http_agent.hpp"

#include "chorus/errors.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

namespace chorus {

using nlohmann::json;

PromptTemplates PromptTemplates::defaults() {
    PromptTemplates t;
    t.system_template =
        "You are {name}, a {archetype} taking part in an online public deliberation "
        "about \"{topic}\".\n"
        "Biography: {biography}\n"
        "Tone: {tone}\n"
        "Content style: {style}\n"
        "Core beliefs:\n{beliefs}\n"
        "Stay in character. Write between {min_words} and {max_words} words when asked "
        "for content. Always answer with a single JSON object and nothing else.";
    t.vote_candidates_instruction =
        "Here is the discussion so far:\n{history}\n\n"
        "You may vote on up to {max_candidates} of these posts:\n{pool}\n\n"
        "Pick the posts your persona would react to and whether you would upvote or "
        "downvote each. Answer with JSON: "
        "{\"candidates\": [{\"target\": <post id>, \"direction\": \"up\"|\"down\"}]}";
    t.reply_target_instruction =
        "Here is the discussion so far:\n{history}\n\n"
        "You will write a reply. Choose one of these posts to agree or disagree "
        "with:\n{pool}\n\n"
        "Answer with JSON: {\"target\": <post id>, \"stance\": \"agree\"|\"disagree\"}";
    t.new_comment_instruction =
        "Here is the discussion so far:\n{history}\n\n"
        "Write a new comment for the discussion, in character{tool_hint}. "
        "Answer with JSON: {\"body\": \"<your comment>\"}";
    t.reply_content_instruction =
        "Here is the discussion so far:\n{history}\n\n"
        "Write a reply that {stance}s with post {target}{tool_hint}. "
        "Answer with JSON: {\"body\": \"<your reply>\"}";
    t.tool_results_template =
        "Results for web_search(\"{query}\"):\n{results}\n"
        "Now answer with JSON: {\"body\": \"<your text>\"}";
    t.reformat_instruction =
        "That response was not a single valid JSON object of the requested shape. "
        "Answer again with exactly one JSON object and nothing else.";
    return t;
}

namespace {

std::string read_field(const json& doc, const char* key, const std::string& fallback) {
    return doc.contains(key) ? doc[key].get<std::string>() : fallback;
}

} // namespace

PromptTemplates PromptTemplates::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open prompt template file");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError(path, std::string("invalid prompt template file: ") + e.what());
    }
    PromptTemplates defaults = PromptTemplates::defaults();
    PromptTemplates t;
    t.system_template = read_field(doc, "system", defaults.system_template);
    t.vote_candidates_instruction =
        read_field(doc, "vote_candidates", defaults.vote_candidates_instruction);
    t.reply_target_instruction =
        read_field(doc, "reply_target", defaults.reply_target_instruction);
    t.new_comment_instruction =
        read_field(doc, "new_comment", defaults.new_comment_instruction);
    t.reply_content_instruction =
        read_field(doc, "reply_content", defaults.reply_content_instruction);
    t.tool_results_template = read_field(doc, "tool_results", defaults.tool_results_template);
    t.reformat_instruction = read_field(doc, "reformat", defaults.reformat_instruction);
    return t;
}

namespace {

std::string replace_all(std::string text, const std::string& token, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(token, pos)) != std::string::npos) {
        text.replace(pos, token.size(), value);
        pos += value.size();
    }
    return text;
}

std::string render_post_line(const Post& p, const std::vector<RosterEntry>& roster) {
    std::string name = p.author;
    for (const RosterEntry& e : roster) {
        if (e.actor_id == p.author) {
            name = e.name + " (" + to_string(e.archetype) + ")";
            break;
        }
    }
    std::string line = "[" + std::to_string(p.post_id) + "] " + name;
    if (p.kind == PostKind::Reply && p.parent) {
        line += " replying to [" + std::to_string(*p.parent) + "]";
    }
    line += ": " + p.body;
    return line;
}

std::string render_posts(const std::vector<Post>& posts, const std::vector<RosterEntry>& roster,
                         int cap) {
    std::size_t first = 0;
    if (cap > 0 && posts.size() > static_cast<std::size_t>(cap)) {
        first = posts.size() - static_cast<std::size_t>(cap);
    }
    std::string out;
    for (std::size_t i = first; i < posts.size(); ++i) {
        out += render_post_line(posts[i], roster);
        out += '\n';
    }
    if (out.empty()) out = "(no posts yet)\n";
    return out;
}

std::string render_beliefs(const std::vector<std::string>& beliefs) {
    std::string out;
    for (const std::string& b : beliefs) out += "- " + b + "\n";
    if (out.empty()) out = "- (none stated)\n";
    return out;
}

/// Pulls the first JSON object out of a model reply, tolerating markdown
/// fences and prose around it.
json extract_json_object(const std::string& content) {
    const std::size_t begin = content.find('{');
    const std::size_t end = content.rfind('}');
    if (begin == std::string::npos || end == std::string::npos || end < begin) {
        throw AgentError(AgentError::Kind::MalformedOutput, "no JSON object in model reply");
    }
    try {
        return json::parse(content.substr(begin, end - begin + 1));
    } catch (const json::exception& e) {
        throw AgentError(AgentError::Kind::MalformedOutput,
                         std::string("unparseable model reply: ") + e.what());
    }
}

} // namespace

struct ChatHttpAgent::Impl {
    ChatBackendSettings settings;
    httplib::Client client;
    std::string bearer;

    explicit Impl(ChatBackendSettings s) : settings(std::move(s)), client(settings.base_url) {
        const time_t sec = settings.timeout_ms / 1000;
        const time_t usec = (settings.timeout_ms % 1000) * 1000;
        client.set_connection_timeout(sec, usec);
        client.set_read_timeout(sec, usec);
        client.set_write_timeout(sec, usec);
        if (const char* key = std::getenv(settings.api_key_env.c_str())) {
            bearer = key;
        }
    }

    std::string system_prompt(const AgentContext& ctx) const {
        std::string s = settings.prompts.system_template;
        s = replace_all(s, "{name}", ctx.persona.actor_name);
        s = replace_all(s, "{archetype}", to_string(ctx.persona.archetype));
        s = replace_all(s, "{topic}", ctx.discussion_topic);
        s = replace_all(s, "{biography}", ctx.persona.biography);
        s = replace_all(s, "{tone}", ctx.persona.tone);
        s = replace_all(s, "{style}", ctx.persona.content_style);
        s = replace_all(s, "{beliefs}", render_beliefs(ctx.persona.core_beliefs));
        s = replace_all(s, "{min_words}", std::to_string(ctx.persona.response_length.min));
        s = replace_all(s, "{max_words}", std::to_string(ctx.persona.response_length.max));
        return s;
    }

    /// One chat-completion exchange; returns the assistant message content.
    std::string complete(const json& messages) {
        const json request = {{"model", settings.model}, {"messages", messages}};
        httplib::Headers headers;
        if (!bearer.empty()) headers.emplace("Authorization", "Bearer " + bearer);

        std::string last_error;
        for (int attempt = 0; attempt <= settings.max_retries; ++attempt) {
            if (attempt > 0 && settings.retry_backoff_ms > 0) {
                std::this_thread::sleep_for(
                    std::chrono::milliseconds(settings.retry_backoff_ms * attempt));
            }
            auto res = client.Post(settings.completion_path, headers, request.dump(),
                                   "application/json");
            if (!res) {
                last_error = "transport failure (" + httplib::to_string(res.error()) + ")";
                continue;
            }
            if (res->status < 200 || res->status >= 300) {
                last_error = "HTTP " + std::to_string(res->status);
                // Client errors will not improve on retry.
                if (res->status >= 400 && res->status < 500 && res->status != 429) break;
                continue;
            }
            try {
                const json doc = json::parse(res->body);
                return doc.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const json::exception& e) {
                last_error = std::string("malformed completion envelope: ") + e.what();
                break;
            }
        }
        throw AgentError(AgentError::Kind::Transport, "chat completion failed: " + last_error);
    }

    /// Exchange expecting a JSON object back, with one reformat retry.
    json complete_json(json& messages) {
        try {
            return extract_json_object(complete(messages));
        } catch (const AgentError& e) {
            if (e.kind() != AgentError::Kind::MalformedOutput) throw;
            messages.push_back(
                {{"role", "user"}, {"content", settings.prompts.reformat_instruction}});
            return extract_json_object(complete(messages));
        }
    }
};

ChatHttpAgent::ChatHttpAgent(ChatBackendSettings settings)
    : impl_(std::make_unique<Impl>(std::move(settings))) {}

ChatHttpAgent::~ChatHttpAgent() = default;

std::vector<VoteDecision> ChatHttpAgent::select_vote_candidates(const AgentContext& ctx,
                                                                const std::vector<Post>& pool,
                                                                int max_candidates) {
    const auto& s = impl_->settings;
    std::string prompt = s.prompts.vote_candidates_instruction;
    prompt = replace_all(prompt, "{history}",
                         render_posts(ctx.visible_posts, ctx.roster, s.max_visible_posts));
    prompt = replace_all(prompt, "{pool}", render_posts(pool, ctx.roster, 0));
    prompt = replace_all(prompt, "{max_candidates}", std::to_string(max_candidates));

    json messages = json::array({{{"role", "system"}, {"content", impl_->system_prompt(ctx)}},
                                 {{"role", "user"}, {"content", prompt}}});
    const json reply = impl_->complete_json(messages);

    std::vector<VoteDecision> decisions;
    try {
        for (const json& c : reply.value("candidates", json::array())) {
            if (static_cast<int>(decisions.size()) >= max_candidates) break;
            decisions.push_back({c.at("target").get<PostId>(),
                                 vote_direction_from_string(c.at("direction").get<std::string>()),
                                 c.value("rationale", "")});
        }
    } catch (const json::exception& e) {
        throw AgentError(AgentError::Kind::MalformedOutput,
                         std::string("bad candidates payload: ") + e.what());
    } catch (const ValidationError& e) {
        throw AgentError(AgentError::Kind::MalformedOutput, e.what());
    }
    return decisions;
}

PostIntent ChatHttpAgent::select_reply_target(const AgentContext& ctx,
                                              const std::vector<Post>& pool) {
    const auto& s = impl_->settings;
    std::string prompt = s.prompts.reply_target_instruction;
    prompt = replace_all(prompt, "{history}",
                         render_posts(ctx.visible_posts, ctx.roster, s.max_visible_posts));
    prompt = replace_all(prompt, "{pool}", render_posts(pool, ctx.roster, 0));

    json messages = json::array({{{"role", "system"}, {"content", impl_->system_prompt(ctx)}},
                                 {{"role", "user"}, {"content", prompt}}});
    const json reply = impl_->complete_json(messages);

    PostIntent intent;
    intent.kind = PostKind::Reply;
    try {
        intent.target = reply.at("target").get<PostId>();
        intent.stance = stance_from_string(reply.at("stance").get<std::string>());
    } catch (const json::exception& e) {
        throw AgentError(AgentError::Kind::MalformedOutput,
                         std::string("bad reply-target payload: ") + e.what());
    } catch (const ValidationError& e) {
        throw AgentError(AgentError::Kind::MalformedOutput, e.what());
    }
    return intent;
}

GeneratedContent ChatHttpAgent::generate_content(const AgentContext& ctx,
                                                 const PostIntent& intent, ToolSuite& tools) {
    const auto& s = impl_->settings;
    const bool has_search = tools.provisioned(ToolId::WebSearch);
    const std::string tool_hint =
        has_search ? ", optionally requesting {\"tool\": \"web_search\", \"query\": \"...\"} "
                     "first if external evidence would help"
                   : "";

    std::string prompt;
    if (intent.kind == PostKind::Reply && intent.target.has_value()) {
        prompt = s.prompts.reply_content_instruction;
        prompt = replace_all(prompt, "{target}", std::to_string(*intent.target));
        prompt = replace_all(
            prompt, "{stance}",
            intent.stance.value_or(Stance::Agree) == Stance::Agree ? "agree" : "disagree");
    } else {
        prompt = s.prompts.new_comment_instruction;
    }
    prompt = replace_all(prompt, "{history}",
                         render_posts(ctx.visible_posts, ctx.roster, s.max_visible_posts));
    prompt = replace_all(prompt, "{tool_hint}", tool_hint);

    json messages = json::array({{{"role", "system"}, {"content", impl_->system_prompt(ctx)}},
                                 {{"role", "user"}, {"content", prompt}}});

    GeneratedContent out;
    int tool_rounds = 0;
    int body_retries = 0;
    for (;;) {
        json reply = impl_->complete_json(messages);

        if (reply.contains("tool")) {
            const std::string query = reply.value("query", "");
            std::string rendered = "(no results)";
            if (has_search && tool_rounds < s.max_tool_rounds && !query.empty()) {
                std::vector<SearchResult> results = tools.web_search(query);
                std::string lines;
                for (const SearchResult& r : results) {
                    lines += "- " + r.title + ": " + r.snippet + " (" + r.url + ")\n";
                    out.tool_trace.push_back({"web_search", query, r.title});
                }
                if (!lines.empty()) rendered = lines;
            }
            ++tool_rounds;
            if (tool_rounds > s.max_tool_rounds) {
                throw AgentError(AgentError::Kind::MalformedOutput,
                                 "tool round limit exceeded");
            }
            messages.push_back({{"role", "assistant"}, {"content", reply.dump()}});
            std::string follow = s.prompts.tool_results_template;
            follow = replace_all(follow, "{query}", query);
            follow = replace_all(follow, "{results}", rendered);
            messages.push_back({{"role", "user"}, {"content", follow}});
            continue;
        }

        std::string body = reply.value("body", "");
        if (body.empty() || static_cast<int>(body.size()) > s.max_body_chars) {
            if (body_retries++ < 1) {
                messages.push_back(
                    {{"role", "user"}, {"content", s.prompts.reformat_instruction}});
                continue;
            }
            throw AgentError(body.empty() ? AgentError::Kind::EmptyOutput
                                          : AgentError::Kind::MalformedOutput,
                             body.empty() ? "model returned an empty body"
                                          : "model body exceeds size limit");
        }
        out.body = std::move(body);
        return out;
    }
}

} // namespace chorus
