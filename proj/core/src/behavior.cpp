#include "chorus/behavior.hpp"

#include "chorus/errors.hpp"

#include <algorithm>
#include <set>

namespace chorus {

std::vector<Post> visible_history(const ActorConfig& actor, const SharedHistory& history,
                                  int recent_k) {
    const std::vector<Post>& posts = history.posts();
    if (actor.persona.history_scope == HistoryScope::Full ||
        static_cast<int>(posts.size()) <= recent_k) {
        return posts;
    }
    if (recent_k <= 0) return {};
    return {posts.end() - recent_k, posts.end()};
}

AgentContext build_agent_context(const ActorConfig& actor, const SharedHistory& history,
                                 const RunView& view) {
    AgentContext ctx;
    ctx.actor_id = actor.actor_id;
    ctx.persona = actor.persona;
    ctx.visible_posts = visible_history(actor, history, view.recent_window_k);
    ctx.own_post_history = history.posts_by(actor.actor_id);
    ctx.own_action_history = history.votes_by(actor.actor_id);
    ctx.provisioned_tools = actor.tools;
    ctx.roster = view.roster;
    ctx.discussion_topic = view.discussion_topic;
    return ctx;
}

std::vector<VoteRecord> execute_action_event(const ActorConfig& actor, SharedHistory& history,
                                             AgentBackend& agent, ToolSuite& tools,
                                             StreamRng& decision_rng, Minutes now,
                                             const RunView& view, RunTrace* trace,
                                             std::vector<std::string>& warnings,
                                             TracedEvent* event_out) {
    // Candidate pool: every post by another actor this actor has not voted
    // on yet. The no-redundancy rule is enforced here, before the agent sees
    // anything, and re-checked on the agent's output.
    std::vector<Post> pool;
    for (const Post& p : history.posts()) {
        if (p.author == actor.actor_id) continue;
        if (history.has_vote(actor.actor_id, p.post_id)) continue;
        pool.push_back(p);
    }

    std::vector<VoteRecord> executed;
    if (pool.empty()) return executed;

    const AgentContext ctx = build_agent_context(actor, history, view);
    std::vector<VoteDecision> decisions;
    try {
        decisions = agent.select_vote_candidates(ctx, pool, actor.candidate_count);
    } catch (const AgentError& e) {
        warnings.push_back("actor \"" + actor.actor_id +
                           "\": candidate selection failed: " + e.what());
        if (event_out != nullptr) event_out->skipped = true;
        return executed;
    }

    if (static_cast<int>(decisions.size()) > actor.candidate_count) {
        warnings.push_back("actor \"" + actor.actor_id + "\": agent returned " +
                           std::to_string(decisions.size()) + " candidates, truncating to M=" +
                           std::to_string(actor.candidate_count));
        decisions.resize(static_cast<std::size_t>(actor.candidate_count));
    }

    std::set<PostId> seen;
    for (const VoteDecision& decision : decisions) {
        const bool in_pool = std::any_of(pool.begin(), pool.end(), [&](const Post& p) {
            return p.post_id == decision.target;
        });
        if (!in_pool || !seen.insert(decision.target).second) {
            warnings.push_back("actor \"" + actor.actor_id + "\": invalid vote candidate " +
                               std::to_string(decision.target) + " dropped");
            continue;
        }

        const double u = decision_rng.next_uniform();
        if (trace != nullptr) trace->record_draw(DrawPurpose::VoteGate, actor.actor_id, u);
        const bool execute = u > actor.theta_action;
        if (event_out != nullptr) {
            event_out->votes.push_back({decision.target, decision.direction, u, execute});
        }
        if (!execute) continue;

        try {
            tools.vote(decision.target, decision.direction);
        } catch (const PlatformError& e) {
            if (e.fatal()) throw;
            warnings.push_back("actor \"" + actor.actor_id + "\": vote on " +
                               std::to_string(decision.target) + " rejected: " + e.what());
            if (event_out != nullptr) event_out->votes.back().executed = false;
            continue;
        }
        VoteRecord record{actor.actor_id, decision.target, decision.direction, now};
        history.append_vote(record);
        executed.push_back(std::move(record));
    }
    return executed;
}

std::optional<Post> execute_post_event(const ActorConfig& actor, SharedHistory& history,
                                       AgentBackend& agent, ToolSuite& tools,
                                       StreamRng& decision_rng, Minutes now,
                                       const RunView& view, RunTrace* trace,
                                       std::vector<std::string>& warnings,
                                       TracedEvent* event_out) {
    const double v = decision_rng.next_uniform();
    if (trace != nullptr) trace->record_draw(DrawPurpose::ReplyBranch, actor.actor_id, v);
    const bool want_reply = v <= actor.p_reply;
    if (event_out != nullptr) {
        event_out->branch_draw = v;
        event_out->reply_branch = want_reply;
    }

    const AgentContext ctx = build_agent_context(actor, history, view);

    // Reply targets come from the actor's visible window, own posts excluded.
    std::vector<Post> reply_pool;
    for (const Post& p : ctx.visible_posts) {
        if (p.author != actor.actor_id) reply_pool.push_back(p);
    }

    PostIntent intent;
    if (want_reply && reply_pool.empty()) {
        // Cold start: degrade to a new comment instead of skipping, so
        // early-run activity still matches the configured rates.
        intent.kind = PostKind::NewComment;
        if (event_out != nullptr) event_out->fallback_new_comment = true;
    } else if (want_reply) {
        try {
            intent = agent.select_reply_target(ctx, reply_pool);
        } catch (const AgentError& e) {
            warnings.push_back("actor \"" + actor.actor_id +
                               "\": reply target selection failed: " + e.what());
            if (event_out != nullptr) event_out->skipped = true;
            return std::nullopt;
        }
        const bool valid = intent.kind == PostKind::Reply && intent.target.has_value() &&
                           intent.stance.has_value() &&
                           std::any_of(reply_pool.begin(), reply_pool.end(), [&](const Post& p) {
                               return p.post_id == *intent.target;
                           });
        if (!valid) {
            warnings.push_back("actor \"" + actor.actor_id +
                               "\": invalid reply target from agent, degrading to new comment");
            intent = PostIntent{};
            if (event_out != nullptr) event_out->fallback_new_comment = true;
        }
    }

    GeneratedContent content;
    try {
        content = agent.generate_content(ctx, intent, tools);
    } catch (const AgentError& e) {
        warnings.push_back("actor \"" + actor.actor_id + "\": content generation failed: " +
                           e.what());
        if (event_out != nullptr) event_out->skipped = true;
        return std::nullopt;
    }
    if (content.body.empty()) {
        warnings.push_back("actor \"" + actor.actor_id + "\": empty body, event skipped");
        if (event_out != nullptr) event_out->skipped = true;
        return std::nullopt;
    }

    Post post;
    post.author = actor.actor_id;
    post.timestamp = now;
    post.body = std::move(content.body);
    post.kind = intent.kind;
    post.parent = intent.target;
    post.stance = intent.stance;
    post.tool_trace = std::move(content.tool_trace);

    try {
        post.post_id = tools.publish(post);
    } catch (const PlatformError& e) {
        if (e.fatal()) throw;
        warnings.push_back("actor \"" + actor.actor_id + "\": publish rejected: " + e.what());
        if (event_out != nullptr) event_out->skipped = true;
        return std::nullopt;
    }
    try {
        history.append_post(post);
    } catch (const ValidationError& e) {
        warnings.push_back("actor \"" + actor.actor_id + "\": published post rejected by history: " +
                           e.what());
        if (event_out != nullptr) event_out->skipped = true;
        return std::nullopt;
    }

    if (event_out != nullptr) {
        event_out->created_post = post.post_id;
        event_out->reply_parent = post.parent;
        event_out->stance = post.stance;
    }
    return post;
}

} // namespace chorus
