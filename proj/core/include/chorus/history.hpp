#pragma once

#include "chorus/types.hpp"

#include <cstddef>
#include <iosfwd>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace chorus {

/// The complete shared discussion record: every post and every executed vote,
/// in the order they were produced. Appends enforce the structural
/// invariants (resolvable earlier parents, unique (voter, target) pairs, no
/// self-votes, per-kind timestamp ordering); violations throw
/// ValidationError. Mutated only by the single dispatch thread.
class SharedHistory {
public:
    /// Reference into one of the two record lists, in append order.
    struct RecordRef {
        bool is_post = true;
        std::size_t index = 0;
    };

    const std::vector<Post>& posts() const noexcept { return posts_; }
    const std::vector<VoteRecord>& votes() const noexcept { return votes_; }

    /// Append order across both record kinds, used for serialization.
    const std::vector<RecordRef>& records() const noexcept { return order_; }

    void append_post(Post post);
    void append_vote(VoteRecord vote);

    const Post* find_post(PostId id) const;
    bool has_vote(const ActorId& voter, PostId target) const;

    std::size_t size() const noexcept { return order_.size(); }
    bool empty() const noexcept { return order_.empty(); }

    std::vector<Post> posts_by(const ActorId& author) const;
    std::vector<VoteRecord> votes_by(const ActorId& voter) const;

    /// Structural equality: same posts and votes in the same order.
    bool operator==(const SharedHistory& other) const {
        return posts_ == other.posts_ && votes_ == other.votes_;
    }

private:
    std::vector<Post> posts_;
    std::vector<VoteRecord> votes_;
    std::vector<RecordRef> order_;
    std::unordered_map<PostId, std::size_t> post_index_;
    std::set<std::pair<ActorId, PostId>> vote_keys_;
};

/// Decimal-minutes formatter for the JSONL format: shortest fixed-point
/// representation with at least 3 fractional digits that parses back to the
/// exact same double.
std::string format_minutes(Minutes value);

/// JSON Lines persistence. One object per record with a `record_type` field
/// ("post" or "vote"); records appear in append order.
void write_history_jsonl(const SharedHistory& history, std::ostream& out);
void write_history_jsonl(const SharedHistory& history, const std::string& path);

/// Parses and re-validates a history file. Throws HistoryParseError with the
/// offending line number, or IoError when the file cannot be read.
SharedHistory read_history_jsonl(std::istream& in);
SharedHistory read_history_jsonl(const std::string& path);

} // namespace chorus
