#include "chorus/config.hpp"

#include "chorus/errors.hpp"
#include "chorus/random.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace chorus {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw ConfigError(field, message);
}

const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.contains(key)) fail(path + "." + key, "missing required field");
    return obj[key];
}

template <typename T>
T get_as(const json& value, const std::string& field) {
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        fail(field, "has the wrong type");
    }
}

template <typename T>
T value_or(const json& obj, const char* key, T fallback, const std::string& path) {
    if (!obj.contains(key)) return fallback;
    return get_as<T>(obj[key], path + "." + key);
}

std::string resolve_path(const std::string& value, const std::string& origin) {
    if (value.empty()) return value;
    std::filesystem::path p(value);
    if (p.is_absolute() || origin.empty()) return value;
    return (std::filesystem::path(origin).parent_path() / p).string();
}

Persona parse_persona(const json& doc, const std::string& path) {
    Persona persona;
    persona.actor_name = get_as<std::string>(require(doc, "name", path), path + ".name");
    persona.archetype = archetype_from_string(
        get_as<std::string>(require(doc, "archetype", path), path + ".archetype"));
    persona.biography = value_or<std::string>(doc, "biography", "", path);
    persona.tone = value_or<std::string>(doc, "tone", "", path);
    persona.content_style = value_or<std::string>(doc, "content_style", "", path);
    if (doc.contains("response_length")) {
        const json& range = doc["response_length"];
        const std::string rpath = path + ".response_length";
        if (range.is_array()) {
            if (range.size() != 2) fail(rpath, "expected [min, max]");
            persona.response_length = {get_as<int>(range[0], rpath),
                                       get_as<int>(range[1], rpath)};
        } else {
            persona.response_length = {get_as<int>(require(range, "min", rpath), rpath + ".min"),
                                       get_as<int>(require(range, "max", rpath), rpath + ".max")};
        }
    }
    if (doc.contains("history_scope")) {
        persona.history_scope = history_scope_from_string(
            get_as<std::string>(doc["history_scope"], path + ".history_scope"));
    }
    for (const json& belief : doc.value("core_beliefs", json::array())) {
        persona.core_beliefs.push_back(get_as<std::string>(belief, path + ".core_beliefs[]"));
    }
    return persona;
}

ActorConfig parse_actor(const json& doc, const std::string& path) {
    ActorConfig actor;
    actor.actor_id = get_as<std::string>(require(doc, "actor_id", path), path + ".actor_id");
    actor.persona = parse_persona(require(doc, "persona", path), path + ".persona");
    actor.lambda_post =
        get_as<double>(require(doc, "lambda_post", path), path + ".lambda_post");
    actor.lambda_action =
        get_as<double>(require(doc, "lambda_action", path), path + ".lambda_action");
    actor.p_reply = get_as<double>(require(doc, "p_reply", path), path + ".p_reply");
    actor.theta_action =
        get_as<double>(require(doc, "theta_action", path), path + ".theta_action");
    actor.candidate_count = value_or<int>(doc, "candidate_count_M", 3, path);
    if (doc.contains("tools")) {
        actor.tools.clear();
        for (const json& tool : doc["tools"]) {
            try {
                actor.tools.push_back(
                    tool_id_from_string(get_as<std::string>(tool, path + ".tools[]")));
            } catch (const ValidationError& e) {
                fail(path + ".tools", e.what());
            }
        }
    }
    return actor;
}

AffinityTable parse_affinity(const json& doc, const std::string& path) {
    AffinityTable table;
    for (const auto& [key, targets] : doc.items()) {
        Archetype own;
        try {
            own = archetype_from_string(key);
        } catch (const ValidationError& e) {
            fail(path, e.what());
        }
        std::set<Archetype> agreed;
        for (const json& t : targets) {
            try {
                agreed.insert(
                    archetype_from_string(get_as<std::string>(t, path + "." + key + "[]")));
            } catch (const ValidationError& e) {
                fail(path + "." + key, e.what());
            }
        }
        table.agrees_with[own] = std::move(agreed);
    }
    // Archetypes the override does not mention keep their defaults.
    for (const auto& [own, agreed] : AffinityTable::defaults().agrees_with) {
        table.agrees_with.emplace(own, agreed);
    }
    return table;
}

} // namespace

SimulationConfig config_from_json_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(origin.empty() ? "config" : origin,
                          std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError(origin.empty() ? "config" : origin, "top level must be an object");
    }

    SimulationConfig config;
    config.horizon = value_or<double>(doc, "horizon_minutes", 20.0, "");
    if (config.horizon < 0.0) fail("horizon_minutes", "must be >= 0");
    if (doc.contains("seed")) {
        config.seed = get_as<std::uint64_t>(doc["seed"], "seed");
    }
    if (doc.contains("interarrival_mode")) {
        try {
            config.mode = interarrival_mode_from_string(
                get_as<std::string>(doc["interarrival_mode"], "interarrival_mode"));
        } catch (const ValidationError& e) {
            fail("interarrival_mode", e.what());
        }
    }
    config.recent_window_k = value_or<int>(doc, "recent_window_k", 10, "");
    if (config.recent_window_k < 1) fail("recent_window_k", "must be >= 1");
    config.event_cap_per_actor_kind = value_or<int>(doc, "event_cap_per_actor_kind", 10000, "");
    if (config.event_cap_per_actor_kind < 1) fail("event_cap_per_actor_kind", "must be >= 1");
    config.pacing_seconds_per_sim_minute =
        value_or<double>(doc, "pacing_seconds_per_sim_minute", 0.0, "");
    if (config.pacing_seconds_per_sim_minute < 0.0) {
        fail("pacing_seconds_per_sim_minute", "must be >= 0");
    }
    config.discussion_topic = value_or<std::string>(doc, "discussion_topic", "", "");
    config.output_dir = value_or<std::string>(doc, "output_dir", "out", "");

    const json& actors = require(doc, "actors", "");
    if (!actors.is_array()) fail("actors", "must be an array");
    for (std::size_t i = 0; i < actors.size(); ++i) {
        config.actors.push_back(parse_actor(actors[i], "actors[" + std::to_string(i) + "]"));
    }
    validate_actor_set(config.actors);

    if (doc.contains("backend")) {
        const json& backend = doc["backend"];
        try {
            config.backend_kind = agent_backend_kind_from_string(
                get_as<std::string>(require(backend, "kind", "backend"), "backend.kind"));
        } catch (const ValidationError& e) {
            fail("backend.kind", e.what());
        }
        if (config.backend_kind == AgentBackendKind::ChatCompletionHttp) {
            config.chat.base_url = get_as<std::string>(require(backend, "base_url", "backend"),
                                                       "backend.base_url");
            config.chat.model =
                get_as<std::string>(require(backend, "model", "backend"), "backend.model");
            config.chat.completion_path = value_or<std::string>(
                backend, "completion_path", config.chat.completion_path, "backend");
            config.chat.api_key_env =
                value_or<std::string>(backend, "api_key_env", "CHORUS_API_KEY", "backend");
            config.chat.timeout_ms = value_or<int>(backend, "timeout_ms", 60000, "backend");
            config.chat.max_retries = value_or<int>(backend, "max_retries", 2, "backend");
            config.chat.retry_backoff_ms =
                value_or<int>(backend, "retry_backoff_ms", 250, "backend");
            config.chat.max_tool_rounds =
                value_or<int>(backend, "max_tool_rounds", 2, "backend");
            config.chat.max_visible_posts =
                value_or<int>(backend, "max_visible_posts", 0, "backend");
            config.chat.max_body_chars =
                value_or<int>(backend, "max_body_chars", 4000, "backend");
            if (config.chat.timeout_ms < 1) fail("backend.timeout_ms", "must be >= 1");
            if (config.chat.max_retries < 0) fail("backend.max_retries", "must be >= 0");
            if (config.chat.max_tool_rounds < 0) {
                fail("backend.max_tool_rounds", "must be >= 0");
            }
            if (backend.contains("prompt_template")) {
                const std::string p = resolve_path(
                    get_as<std::string>(backend["prompt_template"], "backend.prompt_template"),
                    origin);
                config.chat.prompts = PromptTemplates::from_file(p);
            }
        }
    }

    if (doc.contains("platform")) {
        const json& platform = doc["platform"];
        try {
            config.platform_kind = platform_adapter_kind_from_string(
                get_as<std::string>(require(platform, "kind", "platform"), "platform.kind"));
        } catch (const ValidationError& e) {
            fail("platform.kind", e.what());
        }
        if (config.platform_kind == PlatformAdapterKind::HttpRemote) {
            config.http_platform.base_url = get_as<std::string>(
                require(platform, "base_url", "platform"), "platform.base_url");
            config.http_platform.posts_path =
                value_or<std::string>(platform, "posts_path", "/posts", "platform");
            config.http_platform.timeout_ms =
                value_or<int>(platform, "timeout_ms", 10000, "platform");
            config.platform_bearer_env =
                value_or<std::string>(platform, "bearer_token_env", "", "platform");
        }
    }

    if (doc.contains("search_fixture")) {
        config.search_fixture_path = resolve_path(
            get_as<std::string>(doc["search_fixture"], "search_fixture"), origin);
    }
    if (doc.contains("scripted_affinity")) {
        config.affinity = parse_affinity(doc["scripted_affinity"], "scripted_affinity");
    }

    return config;
}

SimulationConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", "cannot open config file \"" + path + "\"");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return config_from_json_text(buffer.str(), path);
}

std::string config_to_json(const SimulationConfig& config) {
    json actors = json::array();
    for (const ActorConfig& actor : config.actors) {
        json beliefs = json::array();
        for (const std::string& b : actor.persona.core_beliefs) beliefs.push_back(b);
        json tools = json::array();
        for (ToolId t : actor.tools) tools.push_back(to_string(t));
        actors.push_back(
            {{"actor_id", actor.actor_id},
             {"persona",
              {{"name", actor.persona.actor_name},
               {"archetype", to_string(actor.persona.archetype)},
               {"biography", actor.persona.biography},
               {"tone", actor.persona.tone},
               {"content_style", actor.persona.content_style},
               {"response_length",
                {{"min", actor.persona.response_length.min},
                 {"max", actor.persona.response_length.max}}},
               {"history_scope", to_string(actor.persona.history_scope)},
               {"core_beliefs", beliefs}}},
             {"lambda_post", actor.lambda_post},
             {"lambda_action", actor.lambda_action},
             {"p_reply", actor.p_reply},
             {"theta_action", actor.theta_action},
             {"candidate_count_M", actor.candidate_count},
             {"tools", tools}});
    }

    json affinity = json::object();
    for (const auto& [own, agreed] : config.affinity.agrees_with) {
        json arr = json::array();
        for (Archetype a : agreed) arr.push_back(to_string(a));
        affinity[to_string(own)] = arr;
    }

    json backend = {{"kind", to_string(config.backend_kind)}};
    if (config.backend_kind == AgentBackendKind::ChatCompletionHttp) {
        backend["base_url"] = config.chat.base_url;
        backend["completion_path"] = config.chat.completion_path;
        backend["model"] = config.chat.model;
        backend["api_key_env"] = config.chat.api_key_env;
        backend["timeout_ms"] = config.chat.timeout_ms;
        backend["max_retries"] = config.chat.max_retries;
        backend["retry_backoff_ms"] = config.chat.retry_backoff_ms;
        backend["max_tool_rounds"] = config.chat.max_tool_rounds;
        backend["max_visible_posts"] = config.chat.max_visible_posts;
        backend["max_body_chars"] = config.chat.max_body_chars;
    }

    json platform = {{"kind", to_string(config.platform_kind)}};
    if (config.platform_kind == PlatformAdapterKind::HttpRemote) {
        platform["base_url"] = config.http_platform.base_url;
        platform["posts_path"] = config.http_platform.posts_path;
        platform["timeout_ms"] = config.http_platform.timeout_ms;
        if (!config.platform_bearer_env.empty()) {
            platform["bearer_token_env"] = config.platform_bearer_env;
        }
    }

    json doc = {
        {"horizon_minutes", config.horizon},
        {"interarrival_mode", to_string(config.mode)},
        {"recent_window_k", config.recent_window_k},
        {"event_cap_per_actor_kind", config.event_cap_per_actor_kind},
        {"pacing_seconds_per_sim_minute", config.pacing_seconds_per_sim_minute},
        {"discussion_topic", config.discussion_topic},
        {"output_dir", config.output_dir},
        {"actors", actors},
        {"backend", backend},
        {"platform", platform},
        {"scripted_affinity", affinity},
    };
    if (config.seed.has_value()) doc["seed"] = *config.seed;
    if (!config.search_fixture_path.empty()) {
        doc["search_fixture"] = config.search_fixture_path;
    }
    return doc.dump(2) + "\n";
}

std::uint64_t config_hash(const SimulationConfig& config) {
    return fnv1a64(config_to_json(config));
}

RunInputs run_inputs_from(const SimulationConfig& config) {
    RunInputs inputs;
    inputs.horizon = config.horizon;
    inputs.mode = config.mode;
    inputs.actors = config.actors;
    inputs.discussion_topic = config.discussion_topic;
    inputs.recent_window_k = config.recent_window_k;
    inputs.event_cap_per_actor_kind = config.event_cap_per_actor_kind;
    inputs.pacing_seconds_per_sim_minute = config.pacing_seconds_per_sim_minute;
    return inputs;
}

} // namespace chorus
