#pragma once

#include "chorus/history.hpp"
#include "chorus/types.hpp"

#include <string>
#include <vector>

namespace chorus {

/// Per-minute activity. "Votes" throughout the metrics surface means
/// executed votes, not action events.
struct MinuteBin {
    int minute = 0;
    int post_count = 0;
    int vote_count = 0;

    bool operator==(const MinuteBin&) const = default;
};

struct ActivitySeries {
    std::vector<MinuteBin> bins;  // ceil(horizon) bins, minute 0 first

    bool operator==(const ActivitySeries&) const = default;
};

struct ActorTotals {
    ActorId actor;
    int post_count = 0;
    int vote_count = 0;
    int new_comment_count = 0;
    int reply_count = 0;

    bool operator==(const ActorTotals&) const = default;
};

struct ActorBreakdown {
    std::vector<ActorTotals> actors;  // sorted by actor id

    bool operator==(const ActorBreakdown&) const = default;
};

/// Bins records by floor(timestamp). Counts are conserved: bin sums equal
/// history totals.
ActivitySeries per_minute_activity(const SharedHistory& history, Minutes horizon);

/// Exact per-actor tallies. `roster` adds zero rows for actors without any
/// activity; actors found in the history are always included.
ActorBreakdown actor_breakdown(const SharedHistory& history,
                               const std::vector<ActorId>& roster = {});

/// Writes activity.csv, actors.csv and plot_data.json into `directory`.
/// Throws IoError on failure.
void export_report(const ActivitySeries& series, const ActorBreakdown& breakdown,
                   const std::string& directory);

/// Re-parse helpers for the exported CSVs (used by report consumers and
/// round-trip checks).
ActivitySeries parse_activity_csv(const std::string& path);
ActorBreakdown parse_actors_csv(const std::string& path);

} // namespace chorus
