#pragma once

#include "chorus/platform.hpp"
#include "chorus/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace chorus {

/// Client-side settings for a remote deliberation platform. Paths are
/// configurable; the defaults define this repo's wire contract:
///
///   POST {posts_path}           body: post fields, no id -> {"post_id": n}
///   POST {posts_path}/{id}/votes body: {voter, direction, timestamp}
///   GET  {posts_path}?scope=full | ?scope=recent&k=K -> array of posts
///
/// Bodies mirror the Post/VoteRecord fields. Bearer auth is attached when a
/// token is configured.
struct HttpPlatformSettings {
    std::string base_url;          // e.g. "http://127.0.0.1:8787"
    std::string posts_path = "/posts";
    std::string bearer_token;      // empty = no Authorization header
    int timeout_ms = 10000;
};

/// HTTP adapter conforming to the same operation contracts as
/// InMemoryPlatform. Any HTTP response with a non-2xx status maps to a
/// non-fatal PlatformError (404 NotFound, 409 Duplicate, 401/403
/// Unauthorized, else Rejected); transport failures map to
/// PlatformError{Unavailable}.
class HttpRemotePlatform : public Platform {
public:
    explicit HttpRemotePlatform(HttpPlatformSettings settings);
    ~HttpRemotePlatform() override;

    HttpRemotePlatform(const HttpRemotePlatform&) = delete;
    HttpRemotePlatform& operator=(const HttpRemotePlatform&) = delete;

    PostId publish(const Post& post) override;
    void vote(PostId target, VoteDirection direction, const ActorId& voter) override;
    std::vector<Post> fetch_history(HistoryScope scope, int recent_k) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Live web-search adapter: GET {search_path}?q=... expecting a JSON array
/// of {title, snippet, url}. Transport failures surface as
/// PlatformError{Unavailable}, which the tool suite degrades to an empty
/// result.
class HttpSearchProvider : public SearchProvider {
public:
    HttpSearchProvider(std::string base_url, std::string search_path = "/search",
                       int timeout_ms = 10000);
    ~HttpSearchProvider() override;

    HttpSearchProvider(const HttpSearchProvider&) = delete;
    HttpSearchProvider& operator=(const HttpSearchProvider&) = delete;

    std::vector<SearchResult> search(const std::string& query) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace chorus
