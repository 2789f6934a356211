#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chorus/metrics.hpp"

#include "test_util.hpp"

#include <filesystem>
#include <fstream>

using namespace chorus;
using chorus::test::make_actor;
using chorus::test::run_scripted;
using chorus::test::ScriptedRunOptions;

namespace {

Post quick_post(PostId id, const ActorId& author, Minutes t,
                PostKind kind = PostKind::NewComment,
                std::optional<PostId> parent = std::nullopt) {
    Post p;
    p.post_id = id;
    p.author = author;
    p.timestamp = t;
    p.body = "b";
    p.kind = kind;
    p.parent = parent;
    if (kind == PostKind::Reply) p.stance = Stance::Agree;
    return p;
}

std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("chorus_metrics_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("empty history gives ceil(T) zero bins") {
    SharedHistory empty;
    const ActivitySeries series = per_minute_activity(empty, 20.0);
    REQUIRE(series.bins.size() == 20);
    for (const MinuteBin& bin : series.bins) {
        CHECK(bin.post_count == 0);
        CHECK(bin.vote_count == 0);
    }
    CHECK(per_minute_activity(empty, 0.0).bins.empty());
    CHECK(per_minute_activity(empty, 2.5).bins.size() == 3);
}

TEST_CASE("floor binning") {
    SharedHistory history;
    history.append_post(quick_post(1, "a", 0.2));
    history.append_post(quick_post(2, "b", 0.9));
    history.append_post(quick_post(3, "a", 1.1));
    const ActivitySeries series = per_minute_activity(history, 2.0);
    REQUIRE(series.bins.size() == 2);
    CHECK(series.bins[0].post_count == 2);
    CHECK(series.bins[1].post_count == 1);
}

TEST_CASE("a record at exactly t == T lands in the final bin") {
    SharedHistory history;
    history.append_post(quick_post(1, "a", 2.0));
    const ActivitySeries series = per_minute_activity(history, 2.0);
    REQUIRE(series.bins.size() == 2);
    CHECK(series.bins[1].post_count == 1);
}

TEST_CASE("conservation: bins sum to history totals") {
    ScriptedRunOptions options;
    options.actors = {make_actor("a", Archetype::CasualUser, 1.5, 2.0, 0.4, 0.3),
                      make_actor("b", Archetype::Advocate, 1.0, 1.5, 0.6, 0.2),
                      make_actor("c", Archetype::Skeptic, 0.5, 1.0, 0.7, 0.6)};
    options.horizon = 20.0;
    options.seed = 10;
    auto run = run_scripted(options);
    const SharedHistory& history = run.result.history;

    const ActivitySeries series = per_minute_activity(history, options.horizon);
    int posts = 0, votes = 0;
    for (const MinuteBin& bin : series.bins) {
        posts += bin.post_count;
        votes += bin.vote_count;
    }
    CHECK(posts == static_cast<int>(history.posts().size()));
    CHECK(votes == static_cast<int>(history.votes().size()));

    const ActorBreakdown breakdown = actor_breakdown(history);
    int bposts = 0, bvotes = 0;
    for (const ActorTotals& t : breakdown.actors) {
        CHECK(t.new_comment_count + t.reply_count == t.post_count);
        bposts += t.post_count;
        bvotes += t.vote_count;
    }
    CHECK(bposts == posts);
    CHECK(bvotes == votes);
}

TEST_CASE("actor breakdown tallies and roster zero rows") {
    SharedHistory history;
    history.append_post(quick_post(1, "a1", 0.1));
    const ActorBreakdown lone = actor_breakdown(history);
    REQUIRE(lone.actors.size() == 1);
    CHECK(lone.actors[0].actor == "a1");
    CHECK(lone.actors[0].post_count == 1);
    CHECK(lone.actors[0].reply_count == 0);

    const ActorBreakdown with_roster = actor_breakdown(history, {"a1", "quiet"});
    REQUIRE(with_roster.actors.size() == 2);
    CHECK(with_roster.actors[1].actor == "quiet");
    CHECK(with_roster.actors[1].post_count == 0);
}

TEST_CASE("export then re-parse returns identical numbers") {
    ScriptedRunOptions options;
    options.actors = {make_actor("a", Archetype::CasualUser, 1.0, 1.5, 0.4, 0.3),
                      make_actor("b", Archetype::Skeptic, 0.7, 1.2, 0.7, 0.5)};
    options.horizon = 12.0;
    options.seed = 77;
    auto run = run_scripted(options);

    const ActivitySeries series = per_minute_activity(run.result.history, options.horizon);
    const ActorBreakdown breakdown = actor_breakdown(run.result.history, {"a", "b"});

    const auto dir = temp_dir("roundtrip");
    export_report(series, breakdown, dir.string());

    CHECK(parse_activity_csv((dir / "activity.csv").string()) == series);
    CHECK(parse_actors_csv((dir / "actors.csv").string()) == breakdown);
}

TEST_CASE("export handles an empty history") {
    const auto dir = temp_dir("empty");
    SharedHistory empty;
    export_report(per_minute_activity(empty, 0.0), actor_breakdown(empty), dir.string());

    std::ifstream activity(dir / "activity.csv");
    std::string line;
    REQUIRE(std::getline(activity, line));
    CHECK(line == "minute,posts,votes");
    CHECK_FALSE(std::getline(activity, line));  // zero data rows

    std::ifstream actors(dir / "actors.csv");
    REQUIRE(std::getline(actors, line));
    CHECK(line == "actor,posts,votes,new,replies");
}

TEST_CASE("activity row count equals ceil(T)") {
    const auto dir = temp_dir("rows");
    SharedHistory empty;
    export_report(per_minute_activity(empty, 7.3), actor_breakdown(empty), dir.string());
    CHECK(parse_activity_csv((dir / "activity.csv").string()).bins.size() == 8);
}

TEST_CASE("plot data states the executed-votes definition") {
    const auto dir = temp_dir("plot");
    SharedHistory empty;
    export_report(per_minute_activity(empty, 1.0), actor_breakdown(empty), dir.string());
    std::ifstream in(dir / "plot_data.json");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("actions_definition") != std::string::npos);
    CHECK(text.find("executed votes") != std::string::npos);
}

TEST_CASE("csv fields with commas are quoted and re-parsed") {
    SharedHistory history;
    // Actor ids with commas are rejected at config load, but report can be
    // fed externally produced histories.
    ActorBreakdown breakdown;
    breakdown.actors.push_back({"weird, id", 1, 2, 1, 0});
    const auto dir = temp_dir("quoting");
    export_report(per_minute_activity(history, 1.0), breakdown, dir.string());
    const ActorBreakdown parsed = parse_actors_csv((dir / "actors.csv").string());
    REQUIRE(parsed.actors.size() == 1);
    CHECK(parsed.actors[0].actor == "weird, id");
}
