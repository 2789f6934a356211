#include <benchmark/benchmark.h>

#include "chorus/agent.hpp"
#include "chorus/config.hpp"
#include "chorus/event_queue.hpp"
#include "chorus/history.hpp"
#include "chorus/platform.hpp"
#include "chorus/random.hpp"
#include "chorus/sampling.hpp"
#include "chorus/scheduler.hpp"

#include <map>
#include <sstream>

namespace {

void BM_EventQueuePushPop(benchmark::State& state) {
    chorus::StreamRng rng(7);
    std::vector<double> times(static_cast<std::size_t>(state.range(0)));
    for (double& t : times) t = rng.next_uniform() * 100.0;
    for (auto _ : state) {
        chorus::EventQueue queue;
        for (double t : times) queue.push(t, "actor", chorus::ProcedureKind::PostProc);
        while (!queue.empty()) benchmark::DoNotOptimize(queue.pop());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EventQueuePushPop)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_ExponentialSampling(benchmark::State& state) {
    chorus::StreamRng rng(11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(chorus::sample_interarrival(
            1.3, chorus::InterArrivalMode::ExponentialRate, rng));
    }
}
BENCHMARK(BM_ExponentialSampling);

void BM_LiteralPoissonSampling(benchmark::State& state) {
    chorus::StreamRng rng(13);
    for (auto _ : state) {
        benchmark::DoNotOptimize(chorus::sample_interarrival(
            1.3, chorus::InterArrivalMode::LiteralPoisson, rng));
    }
}
BENCHMARK(BM_LiteralPoissonSampling);

void BM_ScriptedContent(benchmark::State& state) {
    chorus::ScriptedAgent agent;
    chorus::ToolSuite tools;
    chorus::AgentContext ctx;
    ctx.actor_id = "bench";
    ctx.persona.actor_name = "Bench";
    ctx.persona.archetype = chorus::Archetype::Expert;
    ctx.persona.response_length = {50, 100};
    ctx.persona.core_beliefs = {"evidence should guide policy"};
    ctx.discussion_topic = "city heat";
    for (auto _ : state) {
        benchmark::DoNotOptimize(agent.generate_content(ctx, chorus::PostIntent{}, tools));
    }
}
BENCHMARK(BM_ScriptedContent);

const chorus::SimulationConfig& preset() {
    static const chorus::SimulationConfig config =
        chorus::load_config(std::string(CHORUS_REPO_ROOT) + "/configs/preset_climate.json");
    return config;
}

void BM_PresetRun(benchmark::State& state) {
    const chorus::SimulationConfig& config = preset();
    chorus::FixtureSearchProvider search =
        chorus::FixtureSearchProvider::from_file(config.search_fixture_path);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        chorus::ScriptedAgent agent(config.affinity);
        std::map<chorus::ActorId, chorus::AgentBackend*> bindings;
        for (const chorus::ActorConfig& actor : config.actors) {
            bindings[actor.actor_id] = &agent;
        }
        chorus::InMemoryPlatform platform;
        chorus::RandomSource rng(seed++);
        const chorus::RunResult result = chorus::run_simulation(
            chorus::run_inputs_from(config), bindings, platform, &search, rng);
        benchmark::DoNotOptimize(result.history.posts().size());
    }
}
BENCHMARK(BM_PresetRun)->Unit(benchmark::kMillisecond);

void BM_HistorySerialization(benchmark::State& state) {
    const chorus::SimulationConfig& config = preset();
    chorus::ScriptedAgent agent(config.affinity);
    std::map<chorus::ActorId, chorus::AgentBackend*> bindings;
    for (const chorus::ActorConfig& actor : config.actors) {
        bindings[actor.actor_id] = &agent;
    }
    chorus::InMemoryPlatform platform;
    chorus::RandomSource rng(42);
    const chorus::RunResult result =
        chorus::run_simulation(chorus::run_inputs_from(config), bindings, platform, nullptr, rng);
    for (auto _ : state) {
        std::ostringstream out;
        chorus::write_history_jsonl(result.history, out);
        benchmark::DoNotOptimize(out.str().size());
    }
}
BENCHMARK(BM_HistorySerialization)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
