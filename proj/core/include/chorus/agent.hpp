#pragma once

#include "chorus/platform.hpp"
#include "chorus/types.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace chorus {

struct VoteDecision {
    PostId target = 0;
    VoteDirection direction = VoteDirection::Up;
    std::string rationale;

    bool operator==(const VoteDecision&) const = default;
};

struct PostIntent {
    PostKind kind = PostKind::NewComment;
    std::optional<PostId> target;  // present iff kind == Reply
    std::optional<Stance> stance;

    bool operator==(const PostIntent&) const = default;
};

struct RosterEntry {
    ActorId actor_id;
    std::string name;
    Archetype archetype = Archetype::CasualUser;
};

/// Everything an agent backend sees when asked for a decision.
/// visible_posts respects the actor's history_scope.
struct AgentContext {
    ActorId actor_id;
    Persona persona;
    std::vector<Post> visible_posts;
    std::vector<Post> own_post_history;
    std::vector<VoteRecord> own_action_history;
    std::vector<ToolId> provisioned_tools;
    std::vector<RosterEntry> roster;
    std::string discussion_topic;
};

struct GeneratedContent {
    std::string body;
    std::vector<ToolTraceEntry> tool_trace;
};

/// Decision/content component bound to one actor. Implementations throw
/// AgentError on failure; callers re-validate every output regardless of
/// backend kind.
class AgentBackend {
public:
    virtual ~AgentBackend() = default;

    /// Picks up to `max_candidates` distinct posts from `pool` (already
    /// filtered: no own posts, no prior targets) together with vote
    /// directions.
    virtual std::vector<VoteDecision> select_vote_candidates(const AgentContext& ctx,
                                                             const std::vector<Post>& pool,
                                                             int max_candidates) = 0;

    /// Picks a reply target and stance from a non-empty pool of other
    /// actors' posts.
    virtual PostIntent select_reply_target(const AgentContext& ctx,
                                           const std::vector<Post>& pool) = 0;

    /// Produces the post body for `intent`, optionally invoking provisioned
    /// tools.
    virtual GeneratedContent generate_content(const AgentContext& ctx, const PostIntent& intent,
                                              ToolSuite& tools) = 0;
};

/// Which archetypes an actor agrees with when replying. Configuration data,
/// not code: runs may override the defaults from their config file.
struct AffinityTable {
    std::map<Archetype, std::set<Archetype>> agrees_with;

    static AffinityTable defaults();
    bool agrees(Archetype own, Archetype target) const;

    bool operator==(const AffinityTable&) const = default;
};

/// Deterministic backend: a pure function of (context, pool, intent).
/// Vote candidates are the most recent pool posts with directions decided by
/// belief-keyword matching; reply targets are the most recent other-author
/// post with stance from the affinity table; bodies come from a
/// persona-parameterized template honoring the response_length range.
class ScriptedAgent : public AgentBackend {
public:
    ScriptedAgent() : affinity_(AffinityTable::defaults()) {}
    explicit ScriptedAgent(AffinityTable affinity) : affinity_(std::move(affinity)) {}

    std::vector<VoteDecision> select_vote_candidates(const AgentContext& ctx,
                                                     const std::vector<Post>& pool,
                                                     int max_candidates) override;
    PostIntent select_reply_target(const AgentContext& ctx,
                                   const std::vector<Post>& pool) override;
    GeneratedContent generate_content(const AgentContext& ctx, const PostIntent& intent,
                                      ToolSuite& tools) override;

private:
    AffinityTable affinity_;
};

/// True when any keyword (word of length >= 4) from the beliefs occurs in
/// `text`, case-insensitively. The scripted vote-direction rule.
bool matches_belief_keyword(const std::vector<std::string>& beliefs, const std::string& text);

} // namespace chorus
