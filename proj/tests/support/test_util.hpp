#pragma once

// Shared helpers for the unit and acceptance suites.

#include "chorus/agent.hpp"
#include "chorus/config.hpp"
#include "chorus/platform.hpp"
#include "chorus/scheduler.hpp"
#include "chorus/types.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

namespace chorus::test {

inline ActorConfig make_actor(std::string id, Archetype archetype, double lambda_post,
                              double lambda_action, double p_reply, double theta_action) {
    ActorConfig actor;
    actor.actor_id = id;
    actor.persona.actor_name = id;
    actor.persona.archetype = archetype;
    actor.persona.biography = "test actor";
    actor.persona.tone = "neutral";
    actor.persona.content_style = "plain";
    actor.persona.response_length = {10, 20};
    actor.persona.history_scope = HistoryScope::Full;
    actor.lambda_post = lambda_post;
    actor.lambda_action = lambda_action;
    actor.p_reply = p_reply;
    actor.theta_action = theta_action;
    return actor;
}

struct ScriptedRunOptions {
    std::vector<ActorConfig> actors;
    double horizon = 20.0;
    InterArrivalMode mode = InterArrivalMode::ExponentialRate;
    std::uint64_t seed = 1;
    std::string topic = "neighborhood heat resilience";
    int recent_window_k = 10;
    int event_cap = 10000;
    AffinityTable affinity = AffinityTable::defaults();
    SearchProvider* search = nullptr;
};

struct ScriptedRun {
    RunResult result;
    InMemoryPlatform platform;  // kept alive alongside the result
};

inline ScriptedRun run_scripted(const ScriptedRunOptions& options, RunTrace* trace = nullptr) {
    ScriptedRun out;
    ScriptedAgent agent(options.affinity);
    std::map<ActorId, AgentBackend*> bindings;
    for (const ActorConfig& actor : options.actors) {
        bindings[actor.actor_id] = &agent;
    }
    RunInputs inputs;
    inputs.horizon = options.horizon;
    inputs.mode = options.mode;
    inputs.actors = options.actors;
    inputs.discussion_topic = options.topic;
    inputs.recent_window_k = options.recent_window_k;
    inputs.event_cap_per_actor_kind = options.event_cap;
    RandomSource rng(options.seed);
    out.result =
        run_simulation(inputs, bindings, out.platform, options.search, rng, trace);
    return out;
}

inline std::string repo_root() {
#ifdef CHORUS_REPO_ROOT
    return CHORUS_REPO_ROOT;
#else
    return ".";
#endif
}

inline SimulationConfig load_preset() {
    return load_config(repo_root() + "/configs/preset_climate.json");
}

inline double mean(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

} // namespace chorus::test
