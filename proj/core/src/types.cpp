#include "chorus/types.hpp"

#include "chorus/errors.hpp"

#include <set>

namespace chorus {

std::string to_string(Archetype v) {
    switch (v) {
    case Archetype::CasualUser: return "casual_user";
    case Archetype::Expert: return "expert";
    case Archetype::Advocate: return "advocate";
    case Archetype::Skeptic: return "skeptic";
    case Archetype::Custom: return "custom";
    }
    return "custom";
}

std::string to_string(HistoryScope v) {
    return v == HistoryScope::Full ? "full" : "recent_only";
}

std::string to_string(PostKind v) {
    return v == PostKind::NewComment ? "new_comment" : "reply";
}

std::string to_string(Stance v) {
    return v == Stance::Agree ? "agree" : "disagree";
}

std::string to_string(VoteDirection v) {
    return v == VoteDirection::Up ? "up" : "down";
}

std::string to_string(ProcedureKind v) {
    return v == ProcedureKind::PostProc ? "post" : "action";
}

std::string to_string(ToolId v) {
    switch (v) {
    case ToolId::PublishPost: return "publish_post";
    case ToolId::FetchHistory: return "fetch_history";
    case ToolId::Vote: return "vote";
    case ToolId::WebSearch: return "web_search";
    }
    return "vote";
}

std::string to_string(InterArrivalMode v) {
    return v == InterArrivalMode::ExponentialRate ? "exponential_rate" : "literal_poisson";
}

std::string to_string(AgentBackendKind v) {
    return v == AgentBackendKind::Scripted ? "scripted" : "chat_completion_http";
}

std::string to_string(PlatformAdapterKind v) {
    return v == PlatformAdapterKind::InMemory ? "in_memory" : "http_remote";
}

namespace {

[[noreturn]] void bad_token(const char* what, const std::string& s) {
    throw ValidationError(std::string("unknown ") + what + ": \"" + s + "\"");
}

} // namespace

Archetype archetype_from_string(const std::string& s) {
    if (s == "casual_user") return Archetype::CasualUser;
    if (s == "expert") return Archetype::Expert;
    if (s == "advocate") return Archetype::Advocate;
    if (s == "skeptic") return Archetype::Skeptic;
    if (s == "custom") return Archetype::Custom;
    bad_token("archetype", s);
}

HistoryScope history_scope_from_string(const std::string& s) {
    if (s == "full") return HistoryScope::Full;
    if (s == "recent_only") return HistoryScope::RecentOnly;
    bad_token("history_scope", s);
}

PostKind post_kind_from_string(const std::string& s) {
    if (s == "new_comment") return PostKind::NewComment;
    if (s == "reply") return PostKind::Reply;
    bad_token("post kind", s);
}

Stance stance_from_string(const std::string& s) {
    if (s == "agree") return Stance::Agree;
    if (s == "disagree") return Stance::Disagree;
    bad_token("stance", s);
}

VoteDirection vote_direction_from_string(const std::string& s) {
    if (s == "up") return VoteDirection::Up;
    if (s == "down") return VoteDirection::Down;
    bad_token("vote direction", s);
}

ToolId tool_id_from_string(const std::string& s) {
    if (s == "publish_post") return ToolId::PublishPost;
    if (s == "fetch_history") return ToolId::FetchHistory;
    if (s == "vote") return ToolId::Vote;
    if (s == "web_search") return ToolId::WebSearch;
    bad_token("tool id", s);
}

InterArrivalMode interarrival_mode_from_string(const std::string& s) {
    if (s == "exponential_rate") return InterArrivalMode::ExponentialRate;
    if (s == "literal_poisson") return InterArrivalMode::LiteralPoisson;
    bad_token("interarrival mode", s);
}

AgentBackendKind agent_backend_kind_from_string(const std::string& s) {
    if (s == "scripted") return AgentBackendKind::Scripted;
    if (s == "chat_completion_http") return AgentBackendKind::ChatCompletionHttp;
    bad_token("agent backend kind", s);
}

PlatformAdapterKind platform_adapter_kind_from_string(const std::string& s) {
    if (s == "in_memory") return PlatformAdapterKind::InMemory;
    if (s == "http_remote") return PlatformAdapterKind::HttpRemote;
    bad_token("platform adapter kind", s);
}

void validate_persona(const Persona& persona, const std::string& where) {
    if (persona.actor_name.empty()) {
        throw ConfigError(where + ".name", "must not be empty");
    }
    if (persona.response_length.min < 1) {
        throw ConfigError(where + ".response_length.min", "must be >= 1");
    }
    if (persona.response_length.min > persona.response_length.max) {
        throw ConfigError(where + ".response_length", "min must be <= max");
    }
    if (persona.archetype == Archetype::Custom && persona.biography.empty()) {
        throw ConfigError(where + ".biography",
                          "custom archetype requires a non-empty biography");
    }
}

void validate_actor_config(const ActorConfig& actor, const std::string& where) {
    if (actor.actor_id.empty()) {
        throw ConfigError(where + ".actor_id", "must not be empty");
    }
    if (actor.actor_id.find_first_of(",\n\r\"") != std::string::npos) {
        throw ConfigError(where + ".actor_id",
                          "must not contain commas, quotes or line breaks");
    }
    if (!(actor.lambda_post > 0.0)) {
        throw ConfigError(where + ".lambda_post", "must be strictly positive");
    }
    if (!(actor.lambda_action > 0.0)) {
        throw ConfigError(where + ".lambda_action", "must be strictly positive");
    }
    if (actor.p_reply < 0.0 || actor.p_reply > 1.0) {
        throw ConfigError(where + ".p_reply", "must be in [0, 1]");
    }
    if (actor.theta_action < 0.0 || actor.theta_action > 1.0) {
        throw ConfigError(where + ".theta_action", "must be in [0, 1]");
    }
    if (actor.candidate_count < 1) {
        throw ConfigError(where + ".candidate_count_M", "must be >= 1");
    }
    validate_persona(actor.persona, where + ".persona");
}

void validate_actor_set(const std::vector<ActorConfig>& actors, const std::string& where) {
    if (actors.empty()) {
        throw ConfigError(where, "at least one actor is required");
    }
    std::set<ActorId> seen;
    for (std::size_t i = 0; i < actors.size(); ++i) {
        const std::string slot = where + "[" + std::to_string(i) + "]";
        validate_actor_config(actors[i], slot);
        if (!seen.insert(actors[i].actor_id).second) {
            throw ConfigError(slot + ".actor_id",
                              "duplicate actor_id \"" + actors[i].actor_id + "\"");
        }
    }
}

} // namespace chorus
