#pragma once

#include "chorus/agent.hpp"
#include "chorus/behavior.hpp"
#include "chorus/event_queue.hpp"
#include "chorus/history.hpp"
#include "chorus/platform.hpp"
#include "chorus/random.hpp"
#include "chorus/sampling.hpp"
#include "chorus/trace.hpp"
#include "chorus/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace chorus {

/// Everything a run needs beyond its collaborators.
struct RunInputs {
    Minutes horizon = 20.0;
    InterArrivalMode mode = InterArrivalMode::ExponentialRate;
    std::vector<ActorConfig> actors;
    std::string discussion_topic;
    int recent_window_k = 10;
    /// Dispatch cap per actor per procedure kind; guards LiteralPoisson
    /// zero-gap storms. Exceeding it aborts the run with a diagnostic.
    int event_cap_per_actor_kind = 10000;
    /// Wall-clock seconds slept per simulated minute between dispatches.
    /// 0 disables pacing. Never reorders dispatch.
    double pacing_seconds_per_sim_minute = 0.0;
};

struct ActorEventCounts {
    int post_events = 0;
    int action_events = 0;
    int executed_votes = 0;
    int skipped_events = 0;
};

struct RunMetadata {
    std::uint64_t seed = 0;
    InterArrivalMode mode = InterArrivalMode::ExponentialRate;
    Minutes horizon = 0.0;
    int recent_window_k = 10;
    int event_cap_per_actor_kind = 10000;
    std::string discussion_topic;
    bool completed = true;
    std::string abort_reason;  // empty when completed
    std::vector<ActorConfig> roster;
    std::map<ActorId, ActorEventCounts> counts;
    ActorEventCounts totals;
    std::vector<std::string> warnings;
    // Filled by the caller before serialization, when available.
    std::uint64_t config_hash = 0;
    std::string config_echo_json;
};

struct RunResult {
    SharedHistory history;
    RunMetadata meta;
};

/// Per-actor scheduling state: the config plus the two gap streams derived
/// from the master source ("post_gap" / "action_gap" labels).
struct ActorSchedulingState {
    const ActorConfig* config = nullptr;
    StreamRng post_gap;
    StreamRng action_gap;
};

std::vector<ActorSchedulingState> make_scheduling_states(const std::vector<ActorConfig>& actors,
                                                         const RandomSource& rng);

/// Seeds the queue with one post event and one action event per actor, fire
/// times sampled from each actor's own streams. Throws ConfigError on an
/// empty actor list.
EventQueue initialize_queue(std::vector<ActorSchedulingState>& states, InterArrivalMode mode,
                            RunTrace* trace = nullptr);

/// Convenience form sampling from freshly derived streams.
EventQueue initialize_queue(const std::vector<ActorConfig>& actors, InterArrivalMode mode,
                            const RandomSource& rng);

/// The main simulation cycle: pops the earliest event, stops once the popped
/// fire time exceeds the horizon (the popped event is discarded), otherwise
/// dispatches the procedure and reschedules the same (actor, kind) at
/// fire_time + fresh inter-arrival sample. Agent failures skip the event's
/// effect but keep the actor scheduled; transport-level platform failures
/// abort with the partial history flushed and the run marked incomplete.
///
/// `backends` must bind every actor id. Throws ConfigError on invalid
/// inputs; never throws for in-run failures (reported via metadata).
RunResult run_simulation(const RunInputs& inputs,
                         const std::map<ActorId, AgentBackend*>& backends, Platform& platform,
                         SearchProvider* search, RandomSource& rng, RunTrace* trace = nullptr);

/// Run metadata as a JSON document (the sidecar written next to
/// history.jsonl).
std::string run_metadata_to_json(const RunMetadata& meta);

} // namespace chorus
