#pragma once

#include "chorus/agent.hpp"
#include "chorus/history.hpp"
#include "chorus/random.hpp"
#include "chorus/trace.hpp"
#include "chorus/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chorus {

/// Run-wide context shared by every event: the cast roster, the discussion
/// topic, and the RecentOnly window size K.
struct RunView {
    std::vector<RosterEntry> roster;
    std::string discussion_topic;
    int recent_window_k = 10;
};

/// The posts this actor sees: everything for Full scope, the most recent K
/// for RecentOnly, oldest first.
std::vector<Post> visible_history(const ActorConfig& actor, const SharedHistory& history,
                                  int recent_k);

AgentContext build_agent_context(const ActorConfig& actor, const SharedHistory& history,
                                 const RunView& view);

/// One action event: the agent proposes up to M candidates from the filtered
/// pool (no own posts, no previously voted targets), each candidate passes a
/// Bernoulli gate (executed iff u > theta), surviving votes go through the
/// platform and into the history. Invalid candidates are dropped with a
/// warning. Returns the executed votes.
std::vector<VoteRecord> execute_action_event(const ActorConfig& actor, SharedHistory& history,
                                             AgentBackend& agent, ToolSuite& tools,
                                             StreamRng& decision_rng, Minutes now,
                                             const RunView& view, RunTrace* trace,
                                             std::vector<std::string>& warnings,
                                             TracedEvent* event_out = nullptr);

/// One post event: a uniform draw picks the branch (reply iff v <= p_reply),
/// the reply branch asks the agent for a target and stance, either branch
/// asks for body text, and the result is published and recorded. A reply
/// branch with no eligible target degrades to a new comment. Returns the
/// published post, or nullopt when the agent failed and the event was
/// skipped.
std::optional<Post> execute_post_event(const ActorConfig& actor, SharedHistory& history,
                                       AgentBackend& agent, ToolSuite& tools,
                                       StreamRng& decision_rng, Minutes now,
                                       const RunView& view, RunTrace* trace,
                                       std::vector<std::string>& warnings,
                                       TracedEvent* event_out = nullptr);

} // namespace chorus
