#include "chorus/http_platform.hpp"

#include "chorus/errors.hpp"
#include "json_codec.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace chorus {

using nlohmann::json;

namespace {

PlatformError::Kind kind_for_status(int status) {
    switch (status) {
    case 404: return PlatformError::Kind::NotFound;
    case 409: return PlatformError::Kind::Duplicate;
    case 401:
    case 403: return PlatformError::Kind::Unauthorized;
    default: return PlatformError::Kind::Rejected;
    }
}

[[noreturn]] void throw_http_error(const std::string& what, const httplib::Result& res) {
    if (!res) {
        throw PlatformError(PlatformError::Kind::Unavailable,
                            what + ": transport failure (" + httplib::to_string(res.error()) +
                                ")");
    }
    std::string detail = res->body.substr(0, 200);
    throw PlatformError(kind_for_status(res->status),
                        what + ": HTTP " + std::to_string(res->status) +
                            (detail.empty() ? "" : " " + detail));
}

void apply_timeouts(httplib::Client& client, int timeout_ms) {
    const time_t sec = timeout_ms / 1000;
    const time_t usec = (timeout_ms % 1000) * 1000;
    client.set_connection_timeout(sec, usec);
    client.set_read_timeout(sec, usec);
    client.set_write_timeout(sec, usec);
}

} // namespace

struct HttpRemotePlatform::Impl {
    HttpPlatformSettings settings;
    httplib::Client client;

    explicit Impl(HttpPlatformSettings s) : settings(std::move(s)), client(settings.base_url) {
        apply_timeouts(client, settings.timeout_ms);
        if (!settings.bearer_token.empty()) {
            client.set_bearer_token_auth(settings.bearer_token);
        }
    }
};

HttpRemotePlatform::HttpRemotePlatform(HttpPlatformSettings settings)
    : impl_(std::make_unique<Impl>(std::move(settings))) {}

HttpRemotePlatform::~HttpRemotePlatform() = default;

PostId HttpRemotePlatform::publish(const Post& post) {
    const std::string body = codec::post_to_json(post, /*include_id=*/false).dump();
    auto res = impl_->client.Post(impl_->settings.posts_path, body, "application/json");
    if (!res || res->status < 200 || res->status >= 300) {
        throw_http_error("publish", res);
    }
    try {
        return json::parse(res->body).at("post_id").get<PostId>();
    } catch (const json::exception& e) {
        throw PlatformError(PlatformError::Kind::Rejected,
                            std::string("publish: malformed response: ") + e.what());
    }
}

void HttpRemotePlatform::vote(PostId target, VoteDirection direction, const ActorId& voter) {
    const std::string path =
        impl_->settings.posts_path + "/" + std::to_string(target) + "/votes";
    const json body = {{"voter", voter}, {"direction", to_string(direction)}};
    auto res = impl_->client.Post(path, body.dump(), "application/json");
    if (!res || res->status < 200 || res->status >= 300) {
        throw_http_error("vote", res);
    }
}

std::vector<Post> HttpRemotePlatform::fetch_history(HistoryScope scope, int recent_k) {
    std::string path = impl_->settings.posts_path + "?scope=";
    path += scope == HistoryScope::Full ? "full" : ("recent&k=" + std::to_string(recent_k));
    auto res = impl_->client.Get(path);
    if (!res || res->status < 200 || res->status >= 300) {
        throw_http_error("fetch_history", res);
    }
    std::vector<Post> posts;
    try {
        for (const json& rec : json::parse(res->body)) {
            posts.push_back(codec::post_from_json(rec));
        }
    } catch (const json::exception& e) {
        throw PlatformError(PlatformError::Kind::Rejected,
                            std::string("fetch_history: malformed response: ") + e.what());
    }
    return posts;
}

struct HttpSearchProvider::Impl {
    std::string search_path;
    httplib::Client client;

    Impl(const std::string& base_url, std::string path, int timeout_ms)
        : search_path(std::move(path)), client(base_url) {
        apply_timeouts(client, timeout_ms);
    }
};

HttpSearchProvider::HttpSearchProvider(std::string base_url, std::string search_path,
                                       int timeout_ms)
    : impl_(std::make_unique<Impl>(base_url, std::move(search_path), timeout_ms)) {}

HttpSearchProvider::~HttpSearchProvider() = default;

std::vector<SearchResult> HttpSearchProvider::search(const std::string& query) {
    if (query.empty()) {
        throw ValidationError("search query must not be empty");
    }
    httplib::Params params{{"q", query}};
    auto res = impl_->client.Get(impl_->search_path, params, httplib::Headers{});
    if (!res) {
        throw PlatformError(PlatformError::Kind::Unavailable,
                            "web search transport failure (" + httplib::to_string(res.error()) +
                                ")");
    }
    if (res->status < 200 || res->status >= 300) {
        throw PlatformError(PlatformError::Kind::Unavailable,
                            "web search HTTP " + std::to_string(res->status));
    }
    std::vector<SearchResult> results;
    try {
        for (const json& rec : json::parse(res->body)) {
            if (results.size() >= 5) break;
            results.push_back({rec.at("title").get<std::string>(), rec.value("snippet", ""),
                               rec.value("url", "")});
        }
    } catch (const json::exception&) {
        return {};
    }
    return results;
}

} // namespace chorus
