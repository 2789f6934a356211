#include "chorus/platform.hpp"

#include "chorus/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>

namespace chorus {

using nlohmann::json;

namespace {

std::string lowercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

constexpr std::size_t kMaxSearchResults = 5;

} // namespace

FixtureSearchProvider FixtureSearchProvider::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(path, "cannot open search fixture corpus");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError(path, std::string("invalid fixture corpus: ") + e.what());
    }
    std::vector<Entry> entries;
    for (const json& e : doc.value("entries", json::array())) {
        Entry entry;
        entry.match = e.at("match").get<std::string>();
        for (const json& r : e.value("results", json::array())) {
            entry.results.push_back({r.at("title").get<std::string>(),
                                     r.value("snippet", ""),
                                     r.value("url", "")});
        }
        entries.push_back(std::move(entry));
    }
    return FixtureSearchProvider(std::move(entries));
}

std::vector<SearchResult> FixtureSearchProvider::search(const std::string& query) {
    if (query.empty()) {
        throw ValidationError("search query must not be empty");
    }
    const std::string q = lowercase(query);
    std::vector<SearchResult> out;
    for (const Entry& entry : entries_) {
        if (q.find(lowercase(entry.match)) == std::string::npos) continue;
        for (const SearchResult& r : entry.results) {
            if (out.size() >= kMaxSearchResults) return out;
            out.push_back(r);
        }
    }
    return out;
}

PostId InMemoryPlatform::publish(const Post& post) {
    if (post.kind == PostKind::Reply) {
        if (!post.parent.has_value()) {
            throw PlatformError(PlatformError::Kind::Rejected, "reply without parent");
        }
        const auto it = std::find_if(posts_.begin(), posts_.end(), [&](const Post& p) {
            return p.post_id == *post.parent;
        });
        if (it == posts_.end()) {
            throw PlatformError(PlatformError::Kind::Rejected,
                                "reply parent " + std::to_string(*post.parent) + " not found");
        }
        if (it->author == post.author) {
            throw PlatformError(PlatformError::Kind::Rejected, "cannot reply to own post");
        }
    }
    Post stored = post;
    stored.post_id = next_id_++;
    posts_.push_back(std::move(stored));
    return posts_.back().post_id;
}

void InMemoryPlatform::vote(PostId target, VoteDirection direction, const ActorId& voter) {
    const auto it = std::find_if(posts_.begin(), posts_.end(), [&](const Post& p) {
        return p.post_id == target;
    });
    if (it == posts_.end()) {
        throw PlatformError(PlatformError::Kind::NotFound,
                            "vote target " + std::to_string(target) + " not found");
    }
    if (it->author == voter) {
        throw PlatformError(PlatformError::Kind::Rejected, "self-votes are not allowed");
    }
    if (!vote_keys_.insert({voter, target}).second) {
        throw PlatformError(PlatformError::Kind::Duplicate,
                            "\"" + voter + "\" already voted on post " + std::to_string(target));
    }
    votes_.push_back({voter, target, direction, 0.0});
}

std::vector<Post> InMemoryPlatform::fetch_history(HistoryScope scope, int recent_k) {
    if (scope == HistoryScope::Full || static_cast<int>(posts_.size()) <= recent_k) {
        return posts_;
    }
    if (recent_k <= 0) return {};
    return {posts_.end() - recent_k, posts_.end()};
}

int InMemoryPlatform::score(PostId target) const {
    int score = 0;
    for (const VoteRecord& v : votes_) {
        if (v.target == target) score += v.direction == VoteDirection::Up ? 1 : -1;
    }
    return score;
}

bool ToolSuite::provisioned(ToolId tool) const {
    return std::find(provisioned_.begin(), provisioned_.end(), tool) != provisioned_.end();
}

void ToolSuite::require(ToolId tool) const {
    if (!provisioned(tool)) {
        throw PlatformError(PlatformError::Kind::Unauthorized,
                            "actor \"" + actor_ + "\" is not provisioned with " + to_string(tool));
    }
}

PostId ToolSuite::publish(const Post& post) {
    require(ToolId::PublishPost);
    return platform_->publish(post);
}

void ToolSuite::vote(PostId target, VoteDirection direction) {
    require(ToolId::Vote);
    platform_->vote(target, direction, actor_);
}

std::vector<Post> ToolSuite::fetch_history(HistoryScope scope, int recent_k) {
    require(ToolId::FetchHistory);
    return platform_->fetch_history(scope, recent_k);
}

std::vector<SearchResult> ToolSuite::web_search(const std::string& query) {
    require(ToolId::WebSearch);
    if (search_ == nullptr) {
        if (warnings_ != nullptr) {
            warnings_->push_back("web_search requested by \"" + actor_ +
                                 "\" but no search provider is configured");
        }
        return {};
    }
    try {
        return search_->search(query);
    } catch (const PlatformError& e) {
        if (!e.fatal()) throw;
        // Live search outage is not fatal: content generation proceeds
        // without evidence.
        if (warnings_ != nullptr) {
            warnings_->push_back("web_search unavailable for \"" + actor_ + "\": " + e.what());
        }
        return {};
    }
}

} // namespace chorus
