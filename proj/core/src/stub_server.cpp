#include "chorus/stub_server.hpp"

#include "chorus/errors.hpp"
#include "chorus/platform.hpp"
#include "json_codec.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <mutex>
#include <thread>

namespace chorus {

using nlohmann::json;

namespace {

/// Shared listen/stop plumbing for the two stubs.
struct ServerCore {
    httplib::Server server;
    std::thread thread;
    int port = 0;

    int start(int requested_port) {
        if (requested_port > 0) {
            if (!server.bind_to_port("127.0.0.1", requested_port)) {
                throw IoError("127.0.0.1:" + std::to_string(requested_port),
                              "cannot bind stub server port");
            }
            port = requested_port;
        } else {
            port = server.bind_to_any_port("127.0.0.1");
            if (port <= 0) {
                throw IoError("127.0.0.1", "cannot bind stub server to an ephemeral port");
            }
        }
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
        return port;
    }

    void stop() {
        if (thread.joinable()) {
            server.stop();
            thread.join();
        }
    }

    ~ServerCore() { stop(); }
};

void send_error(httplib::Response& res, int status, const std::string& message) {
    res.status = status;
    res.set_content(json{{"error", message}}.dump(), "application/json");
}

int status_for(const PlatformError& e) {
    switch (e.kind()) {
    case PlatformError::Kind::NotFound: return 404;
    case PlatformError::Kind::Duplicate: return 409;
    case PlatformError::Kind::Unauthorized: return 401;
    default: return 422;
    }
}

} // namespace

struct StubPlatformServer::Impl {
    ServerCore core;
    std::string required_bearer;
    mutable std::mutex mutex;
    InMemoryPlatform store;

    explicit Impl(std::string bearer) : required_bearer(std::move(bearer)) {
        auto authorized = [this](const httplib::Request& req, httplib::Response& res) {
            if (required_bearer.empty()) return true;
            if (req.get_header_value("Authorization") == "Bearer " + required_bearer) {
                return true;
            }
            send_error(res, 401, "missing or invalid bearer token");
            return false;
        };

        core.server.Post("/posts", [this, authorized](const httplib::Request& req,
                                                      httplib::Response& res) {
            if (!authorized(req, res)) return;
            try {
                const Post post = codec::post_from_json(json::parse(req.body));
                std::lock_guard lock(mutex);
                const PostId id = store.publish(post);
                res.status = 201;
                res.set_content(json{{"post_id", id}}.dump(), "application/json");
            } catch (const PlatformError& e) {
                send_error(res, status_for(e), e.what());
            } catch (const std::exception& e) {
                send_error(res, 400, e.what());
            }
        });

        core.server.Post(R"(/posts/(\d+)/votes)", [this, authorized](const httplib::Request& req,
                                                                     httplib::Response& res) {
            if (!authorized(req, res)) return;
            try {
                const PostId target = std::stoll(req.matches[1].str());
                const json body = json::parse(req.body);
                std::lock_guard lock(mutex);
                store.vote(target,
                           vote_direction_from_string(body.at("direction").get<std::string>()),
                           body.at("voter").get<std::string>());
                res.status = 200;
                res.set_content(json{{"ok", true}}.dump(), "application/json");
            } catch (const PlatformError& e) {
                send_error(res, status_for(e), e.what());
            } catch (const std::exception& e) {
                send_error(res, 400, e.what());
            }
        });

        core.server.Get("/posts", [this, authorized](const httplib::Request& req,
                                                     httplib::Response& res) {
            if (!authorized(req, res)) return;
            const std::string scope = req.get_param_value("scope");
            int k = 10;
            if (req.has_param("k")) {
                try {
                    k = std::stoi(req.get_param_value("k"));
                } catch (const std::exception&) {
                    send_error(res, 400, "invalid k parameter");
                    return;
                }
            }
            std::lock_guard lock(mutex);
            std::vector<Post> posts = store.fetch_history(
                scope == "recent" ? HistoryScope::RecentOnly : HistoryScope::Full, k);
            json arr = json::array();
            for (const Post& p : posts) arr.push_back(codec::post_to_json(p));
            res.set_content(arr.dump(), "application/json");
        });

        core.server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("{\"status\":\"ok\"}", "application/json");
        });
    }
};

StubPlatformServer::StubPlatformServer(std::string required_bearer)
    : impl_(std::make_unique<Impl>(std::move(required_bearer))) {}

StubPlatformServer::~StubPlatformServer() = default;

int StubPlatformServer::start(int port) { return impl_->core.start(port); }
void StubPlatformServer::stop() { impl_->core.stop(); }
int StubPlatformServer::port() const noexcept { return impl_->core.port; }

std::string StubPlatformServer::base_url() const {
    return "http://127.0.0.1:" + std::to_string(impl_->core.port);
}

std::size_t StubPlatformServer::post_count() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->store.posts().size();
}

std::size_t StubPlatformServer::vote_count() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->store.votes().size();
}

struct StubChatServer::Impl {
    struct Slot {
        Fixture fixture;
        bool consumed = false;
    };

    ServerCore core;
    mutable std::mutex mutex;
    std::vector<Slot> slots;
    std::vector<std::string> user_messages;
    int delay_ms = 0;

    Impl() {
        core.server.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                        httplib::Response& res) {
            std::string last_user;
            try {
                const json body = json::parse(req.body);
                for (const json& msg : body.at("messages")) {
                    if (msg.value("role", "") == "user") {
                        last_user = msg.value("content", "");
                    }
                }
            } catch (const std::exception& e) {
                send_error(res, 400, e.what());
                return;
            }

            int delay = 0;
            std::string content;
            bool found = false;
            {
                std::lock_guard lock(mutex);
                user_messages.push_back(last_user);
                delay = delay_ms;
                for (Slot& slot : slots) {
                    if (slot.consumed) continue;
                    const Fixture& f = slot.fixture;
                    if (!f.match.empty() && last_user.find(f.match) == std::string::npos) {
                        continue;
                    }
                    content = f.content;
                    if (f.once) slot.consumed = true;
                    found = true;
                    break;
                }
            }
            if (delay > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(delay));
            }
            if (!found) {
                send_error(res, 404, "no fixture matches the request");
                return;
            }
            const json reply = {
                {"id", "stub-completion"},
                {"object", "chat.completion"},
                {"choices",
                 json::array({{{"index", 0},
                               {"finish_reason", "stop"},
                               {"message", {{"role", "assistant"}, {"content", content}}}}})},
            };
            res.set_content(reply.dump(), "application/json");
        });
    }
};

StubChatServer::StubChatServer() : impl_(std::make_unique<Impl>()) {}

StubChatServer::StubChatServer(std::vector<Fixture> fixtures) : StubChatServer() {
    for (Fixture& f : fixtures) impl_->slots.push_back({std::move(f), false});
}

StubChatServer::~StubChatServer() = default;

std::vector<StubChatServer::Fixture> StubChatServer::fixtures_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open chat fixture file");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError(path, std::string("invalid chat fixture file: ") + e.what());
    }
    std::vector<Fixture> fixtures;
    for (const json& f : doc.value("fixtures", json::array())) {
        Fixture fixture;
        fixture.match = f.value("match", "");
        const json& content = f.at("content");
        fixture.content = content.is_string() ? content.get<std::string>() : content.dump();
        fixture.once = f.value("once", false);
        fixtures.push_back(std::move(fixture));
    }
    return fixtures;
}

void StubChatServer::add_fixture(Fixture fixture) {
    std::lock_guard lock(impl_->mutex);
    impl_->slots.push_back({std::move(fixture), false});
}

void StubChatServer::set_response_delay_ms(int ms) {
    std::lock_guard lock(impl_->mutex);
    impl_->delay_ms = ms;
}

int StubChatServer::start(int port) { return impl_->core.start(port); }
void StubChatServer::stop() { impl_->core.stop(); }
int StubChatServer::port() const noexcept { return impl_->core.port; }

std::string StubChatServer::base_url() const {
    return "http://127.0.0.1:" + std::to_string(impl_->core.port);
}

std::size_t StubChatServer::request_count() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->user_messages.size();
}

std::string StubChatServer::request_user_message(std::size_t index) const {
    std::lock_guard lock(impl_->mutex);
    return index < impl_->user_messages.size() ? impl_->user_messages[index] : std::string();
}

} // namespace chorus
