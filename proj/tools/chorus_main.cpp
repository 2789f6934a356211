// chorus: deliberation-simulation CLI.
//
// Subcommands:
//   run       execute a simulation and write history + metadata + reports
//   report    recompute metrics from an existing history.jsonl
//   validate  lint a config file
//
// Exit codes: 0 success, 2 config error, 3 backend failure, 4 platform
// failure, 5 internal error.

#include <CLI11.hpp>

#include "chorus/chat_http_agent.hpp"
#include "chorus/config.hpp"
#include "chorus/errors.hpp"
#include "chorus/history.hpp"
#include "chorus/metrics.hpp"
#include "chorus/scheduler.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitBackendFailure = 3;
constexpr int kExitPlatformFailure = 4;
constexpr int kExitInternalError = 5;

using nlohmann::json;

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> horizon;
    std::optional<std::string> mode;
    std::optional<std::string> out_dir;
};

std::uint64_t fresh_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw chorus::IoError(path, "cannot open file for writing");
    out << content;
    if (!out.good()) throw chorus::IoError(path, "failed writing file");
}

int command_run(const std::string& config_path, const RunOverrides& overrides) {
    chorus::SimulationConfig config;
    try {
        config = chorus::load_config(config_path);
        if (overrides.horizon) config.horizon = *overrides.horizon;
        if (overrides.mode) {
            config.mode = chorus::interarrival_mode_from_string(*overrides.mode);
        }
        if (overrides.seed) config.seed = *overrides.seed;
        if (overrides.out_dir) config.output_dir = *overrides.out_dir;
        if (config.horizon < 0.0) throw chorus::ConfigError("horizon", "must be >= 0");
    } catch (const chorus::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const chorus::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const chorus::IoError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }

    // Exploratory runs stay reproducible: a missing seed gets a fresh value
    // that is recorded in run_meta.json.
    const std::uint64_t seed = config.seed.value_or(fresh_seed());
    config.seed = seed;

    std::unique_ptr<chorus::Platform> platform;
    if (config.platform_kind == chorus::PlatformAdapterKind::InMemory) {
        platform = std::make_unique<chorus::InMemoryPlatform>();
    } else {
        chorus::HttpPlatformSettings settings = config.http_platform;
        if (!config.platform_bearer_env.empty()) {
            if (const char* token = std::getenv(config.platform_bearer_env.c_str())) {
                settings.bearer_token = token;
            }
        }
        platform = std::make_unique<chorus::HttpRemotePlatform>(std::move(settings));
    }

    std::unique_ptr<chorus::SearchProvider> search;
    if (!config.search_fixture_path.empty()) {
        try {
            search = std::make_unique<chorus::FixtureSearchProvider>(
                chorus::FixtureSearchProvider::from_file(config.search_fixture_path));
        } catch (const chorus::IoError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return kExitConfigError;
        }
    }

    // One backend instance per actor.
    std::vector<std::unique_ptr<chorus::AgentBackend>> backends;
    std::map<chorus::ActorId, chorus::AgentBackend*> bindings;
    for (const chorus::ActorConfig& actor : config.actors) {
        std::unique_ptr<chorus::AgentBackend> backend;
        if (config.backend_kind == chorus::AgentBackendKind::Scripted) {
            backend = std::make_unique<chorus::ScriptedAgent>(config.affinity);
        } else {
            backend = std::make_unique<chorus::ChatHttpAgent>(config.chat);
        }
        bindings[actor.actor_id] = backend.get();
        backends.push_back(std::move(backend));
    }

    chorus::RandomSource rng(seed);
    chorus::RunResult result;
    try {
        result = chorus::run_simulation(chorus::run_inputs_from(config), bindings, *platform,
                                        search.get(), rng);
    } catch (const chorus::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    }

    result.meta.config_hash = chorus::config_hash(config);
    result.meta.config_echo_json = chorus::config_to_json(config);

    try {
        std::filesystem::create_directories(config.output_dir);
        chorus::write_history_jsonl(result.history, config.output_dir + "/history.jsonl");
        write_text_file(config.output_dir + "/run_meta.json",
                        chorus::run_metadata_to_json(result.meta));

        std::vector<chorus::ActorId> roster;
        for (const chorus::ActorConfig& actor : config.actors) {
            roster.push_back(actor.actor_id);
        }
        const auto series = chorus::per_minute_activity(result.history, config.horizon);
        const auto breakdown = chorus::actor_breakdown(result.history, roster);
        chorus::export_report(series, breakdown, config.output_dir);
    } catch (const chorus::IoError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    }

    if (!result.meta.completed) {
        std::cerr << "run aborted: " << result.meta.abort_reason << "\n";
        if (result.meta.abort_reason.rfind("platform unavailable", 0) == 0) {
            return kExitPlatformFailure;
        }
        return kExitInternalError;
    }

    // Every post event skipped means the agent backend never produced
    // anything usable (votes cannot exist without posts either).
    const auto& totals = result.meta.totals;
    if (totals.post_events > 0 && totals.skipped_events >= totals.post_events) {
        std::cerr << "backend failure: all " << totals.post_events
                  << " post events were skipped\n";
        return kExitBackendFailure;
    }

    std::cout << "run complete: " << result.history.posts().size() << " posts, "
              << result.history.votes().size() << " votes -> " << config.output_dir << "\n";
    return kExitOk;
}

int command_report(const std::string& history_path, std::string out_dir,
                   std::optional<double> horizon_flag) {
    chorus::SharedHistory history;
    try {
        history = chorus::read_history_jsonl(history_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: cannot read history: " << e.what() << "\n";
        return kExitConfigError;
    }

    double horizon = 0.0;
    std::vector<chorus::ActorId> roster;
    if (horizon_flag) {
        horizon = *horizon_flag;
    } else {
        // Prefer the sidecar metadata; fall back to the last record time.
        const auto meta_path =
            std::filesystem::path(history_path).parent_path() / "run_meta.json";
        std::ifstream meta_in(meta_path);
        if (meta_in) {
            try {
                json meta = json::parse(meta_in);
                horizon = meta.value("horizon_minutes", 0.0);
                for (const json& a : meta.value("actors", json::array())) {
                    roster.push_back(a.at("actor_id").get<std::string>());
                }
            } catch (const json::exception&) {
                horizon = 0.0;
            }
        }
        if (horizon <= 0.0) {
            for (const chorus::Post& p : history.posts()) {
                horizon = std::max(horizon, p.timestamp);
            }
            for (const chorus::VoteRecord& v : history.votes()) {
                horizon = std::max(horizon, v.timestamp);
            }
            horizon = std::ceil(horizon);
        }
    }

    if (out_dir.empty()) {
        out_dir = std::filesystem::path(history_path).parent_path().string();
        if (out_dir.empty()) out_dir = ".";
    }

    try {
        const auto series = chorus::per_minute_activity(history, horizon);
        const auto breakdown = chorus::actor_breakdown(history, roster);
        chorus::export_report(series, breakdown, out_dir);
    } catch (const chorus::IoError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    }
    std::cout << "report written to " << out_dir << "\n";
    return kExitOk;
}

int command_validate(const std::string& config_path) {
    try {
        const chorus::SimulationConfig config = chorus::load_config(config_path);
        std::cout << "OK: " << config.actors.size() << " actors, horizon "
                  << config.horizon << " min, mode " << chorus::to_string(config.mode)
                  << ", backend " << chorus::to_string(config.backend_kind) << ", platform "
                  << chorus::to_string(config.platform_kind) << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chorus - multi-actor deliberation simulation"};
    app.require_subcommand(1);

    std::string config_path;
    RunOverrides overrides;
    std::uint64_t seed_value = 0;
    double horizon_value = 0.0;
    std::string mode_value;
    std::string out_value;

    CLI::App* run = app.add_subcommand("run", "Execute a simulation run");
    run->add_option("--config", config_path, "Config file path")->required();
    auto* seed_opt = run->add_option("--seed", seed_value, "Seed override");
    auto* horizon_opt = run->add_option("--horizon", horizon_value, "Horizon override, minutes");
    auto* mode_opt =
        run->add_option("--mode", mode_value, "exponential_rate or literal_poisson");
    auto* out_opt = run->add_option("--out", out_value, "Output directory override");

    std::string history_path;
    std::string report_out;
    double report_horizon = 0.0;
    CLI::App* report = app.add_subcommand("report", "Recompute metrics from a history file");
    report->add_option("--history", history_path, "history.jsonl path")->required();
    report->add_option("--out", report_out, "Output directory (default: history's directory)");
    auto* report_horizon_opt =
        report->add_option("--horizon", report_horizon, "Horizon override, minutes");

    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "Lint a config file");
    validate->add_option("--config", validate_path, "Config file path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    if (run->parsed()) {
        if (*seed_opt) overrides.seed = seed_value;
        if (*horizon_opt) overrides.horizon = horizon_value;
        if (*mode_opt) overrides.mode = mode_value;
        if (*out_opt) overrides.out_dir = out_value;
        return command_run(config_path, overrides);
    }
    if (report->parsed()) {
        std::optional<double> horizon;
        if (*report_horizon_opt) horizon = report_horizon;
        return command_report(history_path, report_out, horizon);
    }
    return command_validate(validate_path);
}
