#include "chorus/scheduler.hpp"

#include "chorus/errors.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <thread>

namespace chorus {

using nlohmann::json;

std::vector<ActorSchedulingState> make_scheduling_states(const std::vector<ActorConfig>& actors,
                                                         const RandomSource& rng) {
    std::vector<ActorSchedulingState> states;
    states.reserve(actors.size());
    for (const ActorConfig& actor : actors) {
        states.push_back({&actor, rng.stream(actor.actor_id, "post_gap"),
                          rng.stream(actor.actor_id, "action_gap")});
    }
    return states;
}

EventQueue initialize_queue(std::vector<ActorSchedulingState>& states, InterArrivalMode mode,
                            RunTrace* trace) {
    if (states.empty()) {
        throw ConfigError("actors", "cannot initialize queue for an empty actor set");
    }
    EventQueue queue;
    for (ActorSchedulingState& st : states) {
        const ActorConfig& actor = *st.config;
        const double t_post = sample_interarrival(actor.lambda_post, mode, st.post_gap);
        if (trace != nullptr) trace->record_draw(DrawPurpose::PostGap, actor.actor_id, t_post);
        queue.push(t_post, actor.actor_id, ProcedureKind::PostProc);

        const double t_action = sample_interarrival(actor.lambda_action, mode, st.action_gap);
        if (trace != nullptr) {
            trace->record_draw(DrawPurpose::ActionGap, actor.actor_id, t_action);
        }
        queue.push(t_action, actor.actor_id, ProcedureKind::ActionProc);
    }
    return queue;
}

EventQueue initialize_queue(const std::vector<ActorConfig>& actors, InterArrivalMode mode,
                            const RandomSource& rng) {
    std::vector<ActorSchedulingState> states = make_scheduling_states(actors, rng);
    return initialize_queue(states, mode);
}

namespace {

struct ActorRuntime {
    const ActorConfig* config = nullptr;
    AgentBackend* backend = nullptr;
    ToolSuite tools;
    StreamRng post_gap;
    StreamRng action_gap;
    StreamRng decisions;
    ActorEventCounts counts;
};

} // namespace

RunResult run_simulation(const RunInputs& inputs,
                         const std::map<ActorId, AgentBackend*>& backends, Platform& platform,
                         SearchProvider* search, RandomSource& rng, RunTrace* trace) {
    if (inputs.horizon < 0.0) {
        throw ConfigError("horizon", "must be >= 0");
    }
    validate_actor_set(inputs.actors);

    RunResult result;
    RunMetadata& meta = result.meta;
    meta.seed = rng.seed();
    meta.mode = inputs.mode;
    meta.horizon = inputs.horizon;
    meta.recent_window_k = inputs.recent_window_k;
    meta.event_cap_per_actor_kind = inputs.event_cap_per_actor_kind;
    meta.discussion_topic = inputs.discussion_topic;
    meta.roster = inputs.actors;

    RunView view;
    view.discussion_topic = inputs.discussion_topic;
    view.recent_window_k = inputs.recent_window_k;
    for (const ActorConfig& actor : inputs.actors) {
        view.roster.push_back({actor.actor_id, actor.persona.actor_name,
                               actor.persona.archetype});
        meta.counts.emplace(actor.actor_id, ActorEventCounts{});
    }

    std::map<ActorId, ActorRuntime> runtimes;
    for (const ActorConfig& actor : inputs.actors) {
        auto backend_it = backends.find(actor.actor_id);
        if (backend_it == backends.end() || backend_it->second == nullptr) {
            throw ConfigError("backend", "no agent backend bound for actor \"" +
                                             actor.actor_id + "\"");
        }
        ActorRuntime rt;
        rt.config = &actor;
        rt.backend = backend_it->second;
        rt.tools = ToolSuite(actor.actor_id, actor.tools, &platform, search, &meta.warnings);
        rt.post_gap = rng.stream(actor.actor_id, "post_gap");
        rt.action_gap = rng.stream(actor.actor_id, "action_gap");
        rt.decisions = rng.stream(actor.actor_id, "decision");
        runtimes.emplace(actor.actor_id, std::move(rt));
    }

    // A zero-length horizon fires nothing.
    if (inputs.horizon <= 0.0) return result;

    std::vector<ActorSchedulingState> init_states;
    init_states.reserve(inputs.actors.size());
    for (const ActorConfig& actor : inputs.actors) {
        ActorRuntime& rt = runtimes.at(actor.actor_id);
        init_states.push_back({&actor, rt.post_gap, rt.action_gap});
    }
    EventQueue queue = initialize_queue(init_states, inputs.mode, trace);
    for (std::size_t i = 0; i < inputs.actors.size(); ++i) {
        ActorRuntime& rt = runtimes.at(inputs.actors[i].actor_id);
        rt.post_gap = init_states[i].post_gap;
        rt.action_gap = init_states[i].action_gap;
    }

    Minutes last_fire_time = 0.0;
    while (!queue.empty()) {
        const ScheduledEvent ev = queue.pop();
        if (ev.fire_time > inputs.horizon) break;  // popped event is discarded

        if (inputs.pacing_seconds_per_sim_minute > 0.0 && ev.fire_time > last_fire_time) {
            const double secs =
                (ev.fire_time - last_fire_time) * inputs.pacing_seconds_per_sim_minute;
            std::this_thread::sleep_for(std::chrono::duration<double>(secs));
        }
        last_fire_time = ev.fire_time;

        ActorRuntime& rt = runtimes.at(ev.actor);
        ActorEventCounts& counts = meta.counts.at(ev.actor);
        const bool is_post = ev.procedure == ProcedureKind::PostProc;

        int& dispatched = is_post ? counts.post_events : counts.action_events;
        if (dispatched >= inputs.event_cap_per_actor_kind) {
            meta.completed = false;
            meta.abort_reason = "event cap (" + std::to_string(inputs.event_cap_per_actor_kind) +
                                ") exceeded for actor \"" + ev.actor + "\" " +
                                to_string(ev.procedure) + " events";
            break;
        }
        ++dispatched;

        TracedEvent traced;
        traced.fire_time = ev.fire_time;
        traced.actor = ev.actor;
        traced.procedure = ev.procedure;

        try {
            if (is_post) {
                ++meta.totals.post_events;
                execute_post_event(*rt.config, result.history, *rt.backend, rt.tools,
                                   rt.decisions, ev.fire_time, view, trace, meta.warnings,
                                   &traced);
            } else {
                ++meta.totals.action_events;
                auto votes = execute_action_event(*rt.config, result.history, *rt.backend,
                                                  rt.tools, rt.decisions, ev.fire_time, view,
                                                  trace, meta.warnings, &traced);
                counts.executed_votes += static_cast<int>(votes.size());
                meta.totals.executed_votes += static_cast<int>(votes.size());
            }
            if (traced.skipped) {
                ++counts.skipped_events;
                ++meta.totals.skipped_events;
            }
        } catch (const PlatformError& e) {
            if (e.fatal()) {
                meta.completed = false;
                meta.abort_reason = std::string("platform unavailable: ") + e.what();
                if (trace != nullptr) trace->events.push_back(traced);
                break;
            }
            // Non-fatal rejection that escaped the behavior layer: the
            // event's effect is lost but the actor stays scheduled.
            meta.warnings.push_back("actor \"" + ev.actor + "\" " + to_string(ev.procedure) +
                                    " event rejected: " + e.what());
            traced.skipped = true;
            ++counts.skipped_events;
            ++meta.totals.skipped_events;
        }

        const double rate = is_post ? rt.config->lambda_post : rt.config->lambda_action;
        StreamRng& gap_stream = is_post ? rt.post_gap : rt.action_gap;
        const double gap = sample_interarrival(rate, inputs.mode, gap_stream);
        if (trace != nullptr) {
            trace->record_draw(is_post ? DrawPurpose::PostGap : DrawPurpose::ActionGap, ev.actor,
                               gap);
        }
        traced.next_gap = gap;
        queue.push(ev.fire_time + gap, ev.actor, ev.procedure);

        if (trace != nullptr) trace->events.push_back(traced);
    }

    return result;
}

std::string run_metadata_to_json(const RunMetadata& meta) {
    json actors = json::array();
    for (const ActorConfig& actor : meta.roster) {
        const ActorEventCounts& c = meta.counts.count(actor.actor_id) != 0
                                        ? meta.counts.at(actor.actor_id)
                                        : ActorEventCounts{};
        json tools = json::array();
        for (ToolId t : actor.tools) tools.push_back(to_string(t));
        actors.push_back({{"actor_id", actor.actor_id},
                          {"name", actor.persona.actor_name},
                          {"archetype", to_string(actor.persona.archetype)},
                          {"lambda_post", actor.lambda_post},
                          {"lambda_action", actor.lambda_action},
                          {"p_reply", actor.p_reply},
                          {"theta_action", actor.theta_action},
                          {"candidate_count_M", actor.candidate_count},
                          {"history_scope", to_string(actor.persona.history_scope)},
                          {"tools", tools},
                          {"post_events", c.post_events},
                          {"action_events", c.action_events},
                          {"executed_votes", c.executed_votes},
                          {"skipped_events", c.skipped_events}});
    }

    json doc = {
        {"seed", meta.seed},
        {"mode", to_string(meta.mode)},
        {"horizon_minutes", meta.horizon},
        {"discussion_topic", meta.discussion_topic},
        {"completed", meta.completed},
        {"abort_reason", meta.completed ? json(nullptr) : json(meta.abort_reason)},
        {"actors", actors},
        {"event_counts",
         {{"post_events", meta.totals.post_events},
          {"action_events", meta.totals.action_events},
          {"executed_votes", meta.totals.executed_votes},
          {"skipped_events", meta.totals.skipped_events}}},
        {"defaults",
         {{"recent_window_k", meta.recent_window_k},
          {"event_cap_per_actor_kind", meta.event_cap_per_actor_kind},
          {"mode", to_string(meta.mode)}}},
        {"warnings", meta.warnings},
    };
    if (meta.config_hash != 0) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(meta.config_hash));
        doc["config_hash"] = std::string(buf);
    }
    if (!meta.config_echo_json.empty()) {
        doc["config"] = json::parse(meta.config_echo_json);
    }
    return doc.dump(2) + "\n";
}

} // namespace chorus
