#pragma once

#include "chorus/agent.hpp"
#include "chorus/types.hpp"

#include <memory>
#include <string>

namespace chorus {

/// Prompt assembly templates for the chat backend. Placeholders in curly
/// braces ({name}, {archetype}, {biography}, {tone}, {style}, {beliefs},
/// {min_words}, {max_words}, {topic}, {history}, {pool}, {stance},
/// {target}, {query}, {results}) are substituted at call time. The shipped
/// template file is the reference; the compiled defaults are identical.
struct PromptTemplates {
    std::string system_template;
    std::string vote_candidates_instruction;
    std::string reply_target_instruction;
    std::string new_comment_instruction;
    std::string reply_content_instruction;
    std::string tool_results_template;
    std::string reformat_instruction;

    static PromptTemplates defaults();
    static PromptTemplates from_file(const std::string& path);
};

struct ChatBackendSettings {
    std::string base_url;                             // e.g. "https://api.example.com"
    std::string completion_path = "/v1/chat/completions";
    std::string model;
    std::string api_key_env = "CHORUS_API_KEY";       // bearer token variable name
    int timeout_ms = 60000;                           // per HTTP call
    int max_retries = 2;                              // transport retries per call
    int retry_backoff_ms = 250;
    int max_tool_rounds = 2;                          // tool round-trips per generation
    int max_visible_posts = 0;                        // 0 = uncapped prompt history
    int max_body_chars = 4000;
    PromptTemplates prompts = PromptTemplates::defaults();
};

/// LLM-powered backend speaking the chat-completion HTTP JSON exchange
/// (system/user roles). Replies are requested as a single strict JSON
/// object; malformed output triggers one reformat retry before the event is
/// surfaced as an AgentError. Calls never block past the configured
/// timeout per HTTP request.
class ChatHttpAgent : public AgentBackend {
public:
    explicit ChatHttpAgent(ChatBackendSettings settings);
    ~ChatHttpAgent() override;

    ChatHttpAgent(const ChatHttpAgent&) = delete;
    ChatHttpAgent& operator=(const ChatHttpAgent&) = delete;

    std::vector<VoteDecision> select_vote_candidates(const AgentContext& ctx,
                                                     const std::vector<Post>& pool,
                                                     int max_candidates) override;
    PostIntent select_reply_target(const AgentContext& ctx,
                                   const std::vector<Post>& pool) override;
    GeneratedContent generate_content(const AgentContext& ctx, const PostIntent& intent,
                                      ToolSuite& tools) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace chorus
