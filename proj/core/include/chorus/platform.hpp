#pragma once

#include "chorus/types.hpp"

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace chorus {

struct SearchResult {
    std::string title;
    std::string snippet;
    std::string url;

    bool operator==(const SearchResult&) const = default;
};

/// Deliberation platform adapter: durable post/vote storage plus history
/// retrieval. One adapter per run. Implementations throw PlatformError;
/// only Kind::Unavailable is fatal to the run.
class Platform {
public:
    virtual ~Platform() = default;

    /// Stores the post and returns the assigned id. Ids form a gapless
    /// monotone counter starting at 1. `post.post_id` is ignored on input.
    /// Replies with unresolvable parents are rejected.
    virtual PostId publish(const Post& post) = 0;

    /// Records a vote. Duplicate (voter, target) pairs and self-votes are
    /// rejected by the adapter even if the caller already filtered them.
    virtual void vote(PostId target, VoteDirection direction, const ActorId& voter) = 0;

    /// Snapshot of stored posts, oldest first. RecentOnly returns the last
    /// `recent_k` posts.
    virtual std::vector<Post> fetch_history(HistoryScope scope, int recent_k) = 0;
};

/// External evidence retrieval, separate from the platform store so the
/// default stays deterministic and offline.
class SearchProvider {
public:
    virtual ~SearchProvider() = default;

    /// Returns at most 5 results. Empty queries are rejected with
    /// ValidationError; live adapters map transport failures to
    /// PlatformError{Unavailable} which callers degrade to an empty result.
    virtual std::vector<SearchResult> search(const std::string& query) = 0;
};

/// Fixture-backed search: a corpus file maps query substrings to result
/// lists, so runs never depend on live internet.
class FixtureSearchProvider : public SearchProvider {
public:
    struct Entry {
        std::string match;  // matched case-insensitively as a substring of the query
        std::vector<SearchResult> results;
    };

    FixtureSearchProvider() = default;
    explicit FixtureSearchProvider(std::vector<Entry> entries) : entries_(std::move(entries)) {}

    /// Loads {"entries": [{"match": ..., "results": [{title, snippet, url}...]}...]}.
    static FixtureSearchProvider from_file(const std::string& path);

    std::vector<SearchResult> search(const std::string& query) override;

private:
    std::vector<Entry> entries_;
};

/// In-memory platform, the default adapter.
class InMemoryPlatform : public Platform {
public:
    PostId publish(const Post& post) override;
    void vote(PostId target, VoteDirection direction, const ActorId& voter) override;
    std::vector<Post> fetch_history(HistoryScope scope, int recent_k) override;

    const std::vector<Post>& posts() const noexcept { return posts_; }
    const std::vector<VoteRecord>& votes() const noexcept { return votes_; }

    /// Adapter-side derived data, not part of the shared history.
    int score(PostId target) const;

private:
    std::vector<Post> posts_;
    std::vector<VoteRecord> votes_;
    std::set<std::pair<ActorId, PostId>> vote_keys_;
    PostId next_id_ = 1;
};

/// Per-actor facade over the shared tool suite. Every call checks that the
/// actor is provisioned with the corresponding tool; web search degrades to
/// an empty result (with a warning) when the live provider is unreachable.
class ToolSuite {
public:
    ToolSuite() = default;
    ToolSuite(ActorId actor, std::vector<ToolId> provisioned, Platform* platform,
              SearchProvider* search, std::vector<std::string>* warning_sink = nullptr)
        : actor_(std::move(actor)),
          provisioned_(std::move(provisioned)),
          platform_(platform),
          search_(search),
          warnings_(warning_sink) {}

    bool provisioned(ToolId tool) const;
    const ActorId& actor() const noexcept { return actor_; }

    PostId publish(const Post& post);
    void vote(PostId target, VoteDirection direction);
    std::vector<Post> fetch_history(HistoryScope scope, int recent_k);
    std::vector<SearchResult> web_search(const std::string& query);

private:
    void require(ToolId tool) const;

    ActorId actor_;
    std::vector<ToolId> provisioned_;
    Platform* platform_ = nullptr;
    SearchProvider* search_ = nullptr;
    std::vector<std::string>* warnings_ = nullptr;
};

} // namespace chorus
