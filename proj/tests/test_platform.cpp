#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chorus/errors.hpp"
#include "chorus/platform.hpp"

#include "platform_contract.hpp"
#include "test_util.hpp"

#include <string>

using namespace chorus;
using chorus::test::contract_draft;
using chorus::test::run_platform_contract;

namespace {

Post draft(const ActorId& author, const std::string& body = "text",
           PostKind kind = PostKind::NewComment, std::optional<PostId> parent = std::nullopt) {
    return contract_draft(author, body, kind, parent);
}

} // namespace

TEST_CASE("in-memory platform satisfies the adapter contract") {
    InMemoryPlatform platform;
    run_platform_contract(platform);
}

TEST_CASE("156 publishes assign gapless ids 1..156") {
    // A typical full-run volume; the counter never skips or repeats.
    InMemoryPlatform platform;
    for (PostId expected = 1; expected <= 156; ++expected) {
        CHECK(platform.publish(draft(expected % 3 == 0 ? "a" : "b")) == expected);
    }
    CHECK(platform.fetch_history(HistoryScope::Full, 10).size() == 156);
}

TEST_CASE("fetch_history on an empty platform is empty") {
    InMemoryPlatform platform;
    CHECK(platform.fetch_history(HistoryScope::Full, 10).empty());
    CHECK(platform.fetch_history(HistoryScope::RecentOnly, 3).empty());
}

TEST_CASE("publish then fetch returns exactly k posts") {
    InMemoryPlatform platform;
    for (int k = 1; k <= 50; ++k) {
        platform.publish(draft("a", "p" + std::to_string(k)));
        CHECK(platform.fetch_history(HistoryScope::Full, 10).size() ==
              static_cast<std::size_t>(k));
    }
}

TEST_CASE("score aggregates adapter-side votes") {
    InMemoryPlatform platform;
    platform.publish(draft("a"));
    platform.vote(1, VoteDirection::Up, "b");
    platform.vote(1, VoteDirection::Up, "c");
    platform.vote(1, VoteDirection::Down, "d");
    CHECK(platform.score(1) == 1);
}

TEST_CASE("fixture search maps query substrings to canned results") {
    const std::string corpus_path =
        chorus::test::repo_root() + "/configs/fixtures/web_search_corpus.json";
    FixtureSearchProvider search = FixtureSearchProvider::from_file(corpus_path);

    const auto hits = search.search("heat mortality trends");
    REQUIRE_FALSE(hits.empty());
    CHECK(hits.size() <= 5);
    CHECK(hits[0].title == "Urban heat island mitigation handbook");
    // Stable across calls.
    CHECK(search.search("heat mortality trends") == hits);

    CHECK(search.search("completely unrelated topic").empty());
    CHECK_THROWS_AS(search.search(""), ValidationError);
}

TEST_CASE("fixture search caps results at 5") {
    std::vector<FixtureSearchProvider::Entry> entries;
    FixtureSearchProvider::Entry entry;
    entry.match = "q";
    for (int i = 0; i < 9; ++i) {
        entry.results.push_back({"r" + std::to_string(i), "", ""});
    }
    entries.push_back(entry);
    FixtureSearchProvider search(std::move(entries));
    CHECK(search.search("query").size() == 5);
}

TEST_CASE("tool suite enforces provisioning") {
    InMemoryPlatform platform;
    FixtureSearchProvider search({{"x", {{"t", "s", "u"}}}});

    ToolSuite casual("casual", {ToolId::PublishPost, ToolId::FetchHistory, ToolId::Vote},
                     &platform, &search);
    try {
        casual.web_search("x please");
        FAIL("unprovisioned web_search must throw");
    } catch (const PlatformError& e) {
        CHECK(e.kind() == PlatformError::Kind::Unauthorized);
    }

    ToolSuite expert("expert",
                     {ToolId::PublishPost, ToolId::FetchHistory, ToolId::Vote, ToolId::WebSearch},
                     &platform, &search);
    CHECK(expert.web_search("x please").size() == 1);

    ToolSuite muted("muted", {}, &platform, &search);
    CHECK_THROWS_AS(muted.publish(draft("muted")), PlatformError);
    CHECK_THROWS_AS(muted.fetch_history(HistoryScope::Full, 5), PlatformError);
    CHECK_THROWS_AS(muted.vote(1, VoteDirection::Up), PlatformError);
}

TEST_CASE("vote uniqueness holds under direct adapter calls") {
    // Defense in depth: even bypassing the behavior-layer filter, the
    // adapter rejects redundant engagement.
    InMemoryPlatform platform;
    platform.publish(draft("author"));
    int accepted = 0, rejected = 0;
    for (int i = 0; i < 10; ++i) {
        try {
            platform.vote(1, i % 2 == 0 ? VoteDirection::Up : VoteDirection::Down, "voter");
            ++accepted;
        } catch (const PlatformError& e) {
            CHECK(e.kind() == PlatformError::Kind::Duplicate);
            ++rejected;
        }
    }
    CHECK(accepted == 1);
    CHECK(rejected == 9);
    CHECK(platform.votes().size() == 1);
}
