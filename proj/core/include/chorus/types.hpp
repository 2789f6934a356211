#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chorus {

using ActorId = std::string;
using PostId = std::int64_t;
/// Simulated time, in real-valued minutes from the start of the run.
using Minutes = double;

enum class Archetype { CasualUser, Expert, Advocate, Skeptic, Custom };
enum class HistoryScope { Full, RecentOnly };
enum class PostKind { NewComment, Reply };
enum class Stance { Agree, Disagree };
enum class VoteDirection { Up, Down };
enum class ProcedureKind { PostProc, ActionProc };
enum class ToolId { PublishPost, FetchHistory, Vote, WebSearch };
enum class InterArrivalMode { ExponentialRate, LiteralPoisson };
enum class AgentBackendKind { Scripted, ChatCompletionHttp };
enum class PlatformAdapterKind { InMemory, HttpRemote };

/// Inclusive word-count range for generated bodies. Advisory persona
/// guidance, not hard output validation.
struct WordRange {
    int min = 10;
    int max = 20;

    bool operator==(const WordRange&) const = default;
};

/// Behavioral blueprint conditioning an actor's agent.
struct Persona {
    std::string actor_name;
    Archetype archetype = Archetype::CasualUser;
    std::string biography;
    std::string tone;
    std::string content_style;
    WordRange response_length;
    HistoryScope history_scope = HistoryScope::Full;
    std::vector<std::string> core_beliefs;

    bool operator==(const Persona&) const = default;
};

/// Per-actor stochastic parameters plus tool provisioning.
struct ActorConfig {
    ActorId actor_id;
    Persona persona;
    double lambda_post = 1.0;   // expected posts per simulated minute, > 0
    double lambda_action = 1.0; // expected action events per simulated minute, > 0
    double p_reply = 0.5;       // in [0, 1]
    double theta_action = 0.5;  // in [0, 1]; a candidate vote executes iff u > theta
    int candidate_count = 3;    // M, candidates considered per action event
    std::vector<ToolId> tools = {ToolId::PublishPost, ToolId::FetchHistory, ToolId::Vote};

    bool operator==(const ActorConfig&) const = default;
};

struct ToolTraceEntry {
    std::string tool;
    std::string query;
    std::string summary;

    bool operator==(const ToolTraceEntry&) const = default;
};

struct Post {
    PostId post_id = 0;
    ActorId author;
    Minutes timestamp = 0.0;
    std::string body;
    PostKind kind = PostKind::NewComment;
    std::optional<PostId> parent;  // required iff kind == Reply
    std::optional<Stance> stance;  // Reply only
    std::vector<ToolTraceEntry> tool_trace;

    bool operator==(const Post&) const = default;
};

struct VoteRecord {
    ActorId voter;
    PostId target = 0;
    VoteDirection direction = VoteDirection::Up;
    Minutes timestamp = 0.0;

    bool operator==(const VoteRecord&) const = default;
};

/// Entry in the global event queue. `sequence` is the insertion counter used
/// as FIFO tie-break for equal fire times.
struct ScheduledEvent {
    Minutes fire_time = 0.0;
    ActorId actor;
    ProcedureKind procedure = ProcedureKind::PostProc;
    std::uint64_t sequence = 0;

    bool operator==(const ScheduledEvent&) const = default;
};

// Enum <-> wire-format string conversions. Parsers throw ValidationError on
// unknown tokens.
std::string to_string(Archetype v);
std::string to_string(HistoryScope v);
std::string to_string(PostKind v);
std::string to_string(Stance v);
std::string to_string(VoteDirection v);
std::string to_string(ProcedureKind v);
std::string to_string(ToolId v);
std::string to_string(InterArrivalMode v);
std::string to_string(AgentBackendKind v);
std::string to_string(PlatformAdapterKind v);

Archetype archetype_from_string(const std::string& s);
HistoryScope history_scope_from_string(const std::string& s);
PostKind post_kind_from_string(const std::string& s);
Stance stance_from_string(const std::string& s);
VoteDirection vote_direction_from_string(const std::string& s);
ToolId tool_id_from_string(const std::string& s);
InterArrivalMode interarrival_mode_from_string(const std::string& s);
AgentBackendKind agent_backend_kind_from_string(const std::string& s);
PlatformAdapterKind platform_adapter_kind_from_string(const std::string& s);

/// Throws ConfigError naming the offending field. `where` prefixes field
/// names in diagnostics (e.g. "actors[2]").
void validate_persona(const Persona& persona, const std::string& where = "persona");
void validate_actor_config(const ActorConfig& actor, const std::string& where = "actor");
void validate_actor_set(const std::vector<ActorConfig>& actors, const std::string& where = "actors");

} // namespace chorus
