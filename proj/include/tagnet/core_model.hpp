#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tagnet/string_pool.hpp"

namespace tagnet {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;
using TagId = std::uint32_t;
using GroupId = std::uint32_t;

// One (user, item, tag) annotation triple, external string form.
struct Annotation {
    std::string user;
    std::string item;
    std::string tag;
};

// Internal per-user form of one triple.
struct Posting {
    ItemId item;
    TagId tag;

    friend bool operator==(const Posting&, const Posting&) = default;
};

// The triple store. Identifiers are normalized (trimmed, ASCII-lowercased)
// and interned; triples are a set, so duplicate lines collapse. Immutable
// after ingestion except for add()/remove(), which exist for incremental
// similarity indexing under a single-writer contract.
class Folksonomy {
public:
    Folksonomy() = default;

    // Reads tab-separated user<TAB>item<TAB>tag lines. '#' lines and blank
    // lines are skipped. Throws ParseError on a malformed line.
    static Folksonomy load(const std::filesystem::path& path);

    static Folksonomy from_annotations(std::span<const Annotation> annotations);

    // users with at least one annotation
    std::size_t user_count() const { return active_users_; }
    std::size_t item_count() const { return items_.size(); }
    std::size_t tag_count() const { return tags_.size(); }
    std::size_t annotation_count() const { return annotation_count_; }

    std::optional<UserId> find_user(std::string_view raw) const { return users_.find(normalize_id(raw)); }
    std::optional<ItemId> find_item(std::string_view raw) const { return items_.find(normalize_id(raw)); }
    std::optional<TagId> find_tag(std::string_view raw) const { return tags_.find(normalize_id(raw)); }

    const std::string& user_name(UserId u) const { return users_.name(u); }
    const std::string& item_name(ItemId i) const { return items_.name(i); }
    const std::string& tag_name(TagId t) const { return tags_.name(t); }

    std::size_t known_user_count() const { return users_.size(); }

    // f_u(t) over the user's vocabulary, sorted by tag id
    std::span<const std::pair<TagId, std::uint32_t>> tag_freq(UserId u) const {
        return records_[u].tag_freq;
    }
    // number of distinct tags the user put on each item, sorted by item id
    std::span<const std::pair<ItemId, std::uint32_t>> item_freq(UserId u) const {
        return records_[u].item_freq;
    }
    // the user's triples sorted by (item, tag)
    std::span<const Posting> postings_by_item(UserId u) const { return records_[u].by_item; }
    // the user's triples sorted by (tag, item)
    std::span<const Posting> postings_by_tag(UserId u) const { return records_[u].by_tag; }

    std::uint32_t vocab_size(UserId u) const { return static_cast<std::uint32_t>(records_[u].tag_freq.size()); }
    std::uint32_t item_count_of(UserId u) const { return static_cast<std::uint32_t>(records_[u].item_freq.size()); }
    std::uint32_t assignment_count(UserId u) const { return static_cast<std::uint32_t>(records_[u].by_item.size()); }
    bool is_active(UserId u) const { return u < records_.size() && !records_[u].by_item.empty(); }

    // sum of squared tag frequencies, exact (used by cosine)
    std::uint64_t tag_freq_sq_norm(UserId u) const { return records_[u].tag_sq_norm; }
    std::uint64_t item_freq_sq_norm(UserId u) const { return records_[u].item_sq_norm; }

    std::uint64_t global_tag_use(TagId t) const { return tag_use_[t]; }

    bool contains(UserId u, ItemId i, TagId t) const;

    // --- single-writer mutation ---------------------------------------

    UserId intern_user(std::string_view raw);
    ItemId intern_item(std::string_view raw);
    TagId intern_tag(std::string_view raw);

    // Throws StateError if the triple is already present / absent.
    void add(UserId u, ItemId i, TagId t);
    void remove(UserId u, ItemId i, TagId t);

    // Replaces the user's distinct tags with `tags`, the i-th entry taking
    // over the frequency and item set of the user's i-th tag in ascending
    // original-tag order. `tags` must be pairwise distinct and of vocabulary
    // size. Used by the reshuffling null model.
    void remap_user_tags(UserId u, std::span<const TagId> tags);

private:
    struct UserRecord {
        std::vector<Posting> by_item;  // sorted by (item, tag)
        std::vector<Posting> by_tag;   // sorted by (tag, item)
        std::vector<std::pair<TagId, std::uint32_t>> tag_freq;
        std::vector<std::pair<ItemId, std::uint32_t>> item_freq;
        std::uint64_t tag_sq_norm = 0;
        std::uint64_t item_sq_norm = 0;
    };

    UserRecord& record(UserId u);

    StringPool users_;
    StringPool items_;
    StringPool tags_;
    std::vector<UserRecord> records_;
    std::vector<std::uint64_t> tag_use_;
    std::size_t annotation_count_ = 0;
    std::size_t active_users_ = 0;
};

// Undirected social graph. Symmetrized on load; self-loops and duplicate
// edges dropped.
class SocialGraph {
public:
    SocialGraph() = default;

    // Reads userA<TAB>userB lines ('#' and blank lines skipped).
    static SocialGraph load(const std::filesystem::path& path);

    static SocialGraph from_edges(std::span<const std::pair<std::string, std::string>> edges);

    std::size_t user_count() const { return users_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    std::optional<UserId> find_user(std::string_view raw) const { return users_.find(normalize_id(raw)); }
    const std::string& user_name(UserId u) const { return users_.name(u); }

    std::span<const UserId> neighbors(UserId u) const { return adjacency_[u]; }
    std::size_t degree(UserId u) const { return adjacency_[u].size(); }

private:
    StringPool users_;
    std::vector<std::vector<UserId>> adjacency_;  // each list sorted
    std::size_t edge_count_ = 0;
};

// User -> set of groups, with per-group member counts.
class GroupMembership {
public:
    GroupMembership() = default;

    // Reads user<TAB>group lines ('#' and blank lines skipped).
    static GroupMembership load(const std::filesystem::path& path);

    static GroupMembership from_pairs(std::span<const std::pair<std::string, std::string>> pairs);

    std::size_t user_count() const { return users_.size(); }
    std::size_t group_count() const { return groups_.size(); }
    std::size_t membership_count() const { return membership_count_; }

    std::optional<UserId> find_user(std::string_view raw) const { return users_.find(normalize_id(raw)); }
    std::optional<GroupId> find_group(std::string_view raw) const { return groups_.find(normalize_id(raw)); }
    const std::string& user_name(UserId u) const { return users_.name(u); }
    const std::string& group_name(GroupId g) const { return groups_.name(g); }

    std::span<const GroupId> groups_of(UserId u) const { return membership_[u]; }
    std::size_t group_count_of(UserId u) const { return membership_[u].size(); }
    std::size_t group_size(GroupId g) const { return group_size_[g]; }

    // Replaces the user's group set; `groups` must be pairwise distinct and
    // of the same cardinality. Used by the reshuffling null model.
    void replace_user_groups(UserId u, std::span<const GroupId> groups);

private:
    StringPool users_;
    StringPool groups_;
    std::vector<std::vector<GroupId>> membership_;  // each list sorted
    std::vector<std::uint32_t> group_size_;
    std::size_t membership_count_ = 0;
};

// The four per-user activity metrics.
struct ActivityProfile {
    std::string user;
    std::uint32_t degree = 0;        // k
    std::uint32_t distinct_tags = 0; // n_t
    std::uint32_t groups = 0;        // n_g
    std::uint32_t assignments = 0;   // a
};

// Profile for one user; a source that does not know the user contributes 0.
// Throws NotFoundError when the user is unknown to all three stores.
ActivityProfile activity_profile(const Folksonomy& f, const SocialGraph& g,
                                 const GroupMembership& m, std::string_view user);

// Profiles for every user known to at least one store, sorted by user id.
std::vector<ActivityProfile> all_profiles(const Folksonomy& f, const SocialGraph& g,
                                          const GroupMembership& m);

} // namespace tagnet
