#pragma once

#include "chorus/types.hpp"

#include <optional>
#include <vector>

namespace chorus {

/// What one recorded draw meant. Gap purposes store the sampled waiting time
/// (the Poisson variant consumes several uniforms internally; only the
/// resulting gap is logged). Gate purposes store the raw uniform.
enum class DrawPurpose { PostGap, ActionGap, VoteGate, ReplyBranch };

struct DrawRecord {
    DrawPurpose purpose = DrawPurpose::PostGap;
    ActorId actor;
    double value = 0.0;

    bool operator==(const DrawRecord&) const = default;
};

struct TracedVote {
    PostId target = 0;
    VoteDirection direction = VoteDirection::Up;
    double gate_draw = 0.0;
    bool executed = false;
};

/// One dispatched event, as the engine saw it. An independent replayer can
/// reproduce the run from the draw log alone and check itself against these.
struct TracedEvent {
    Minutes fire_time = 0.0;
    ActorId actor;
    ProcedureKind procedure = ProcedureKind::PostProc;

    // Post events.
    std::optional<double> branch_draw;
    bool reply_branch = false;
    bool fallback_new_comment = false;  // reply branch fired on an empty pool
    bool skipped = false;               // agent failure, no artifact produced
    std::optional<PostId> created_post;
    std::optional<PostId> reply_parent;
    std::optional<Stance> stance;

    // Action events.
    std::vector<TracedVote> votes;

    // Rescheduling gap sampled after dispatch.
    double next_gap = 0.0;
};

/// Optional run recording: the sequential draw log plus per-event outcomes.
struct RunTrace {
    std::vector<DrawRecord> draws;
    std::vector<TracedEvent> events;

    void record_draw(DrawPurpose purpose, const ActorId& actor, double value) {
        draws.push_back({purpose, actor, value});
    }
};

} // namespace chorus
