#pragma once

#include "chorus/agent.hpp"
#include "chorus/chat_http_agent.hpp"
#include "chorus/http_platform.hpp"
#include "chorus/scheduler.hpp"
#include "chorus/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chorus {

/// Parsed, validated simulation configuration: the operator-facing document
/// with every default applied. The reference schema ships in
/// configs/schema/simulation_config.schema.json.
struct SimulationConfig {
    Minutes horizon = 20.0;
    std::optional<std::uint64_t> seed;
    InterArrivalMode mode = InterArrivalMode::ExponentialRate;
    int recent_window_k = 10;
    int event_cap_per_actor_kind = 10000;
    double pacing_seconds_per_sim_minute = 0.0;
    std::string discussion_topic;
    std::string output_dir = "out";

    std::vector<ActorConfig> actors;

    AgentBackendKind backend_kind = AgentBackendKind::Scripted;
    ChatBackendSettings chat;       // meaningful when backend_kind == ChatCompletionHttp

    PlatformAdapterKind platform_kind = PlatformAdapterKind::InMemory;
    HttpPlatformSettings http_platform;  // bearer_token resolved at run time
    std::string platform_bearer_env;     // env var holding the platform token

    std::string search_fixture_path;     // deterministic web-search corpus
    AffinityTable affinity = AffinityTable::defaults();
};

/// Loads and validates a config file. All core-type invariants are enforced
/// here; failures throw ConfigError naming the offending field. Relative
/// fixture/template paths resolve against the config file's directory.
SimulationConfig load_config(const std::string& path);

/// Same, from an in-memory document (`origin` appears in diagnostics and
/// anchors relative paths).
SimulationConfig config_from_json_text(const std::string& text, const std::string& origin = "");

/// Canonical JSON echo of a validated config, defaults included. Feeding it
/// back through config_from_json_text reproduces the same config.
std::string config_to_json(const SimulationConfig& config);

/// FNV-1a hash of the canonical echo; recorded in run metadata so artifacts
/// can be matched to the exact configuration that produced them.
std::uint64_t config_hash(const SimulationConfig& config);

RunInputs run_inputs_from(const SimulationConfig& config);

} // namespace chorus
