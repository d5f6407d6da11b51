#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tagnet/core_model.hpp"

namespace tagnet {

enum class Kernel { cosine, overlap, matching, dice, jaccard, mip };
enum class Aggregation { distributional, collaborative };

// onto_items: aggregate across items, users are compared in tag space.
// onto_tags:  aggregate across tags, users are compared in item space.
enum class Projection { onto_items, onto_tags };

// One of the 6 x 2 x 2 = 24 user-similarity measures.
struct MeasureSpec {
    Kernel kernel = Kernel::cosine;
    Aggregation aggregation = Aggregation::distributional;
    Projection projection = Projection::onto_items;

    // "kernel:aggregation:projection", e.g. "mip:distributional:items"
    static MeasureSpec parse(std::string_view text);
    std::string str() const;

    static std::vector<MeasureSpec> all();            // all 24
    static std::vector<MeasureSpec> collaborative();  // the 12 incremental ones

    friend auto operator<=>(const MeasureSpec&, const MeasureSpec&) = default;
};

// User-fraction probabilities over tags and items plus the conditionals
// p[tag|item] and p[item|tag] restricted to each feature's annotators.
class TagProbabilityTable {
public:
    static TagProbabilityTable build(const Folksonomy& f);

    double p_tag(TagId t) const;
    double p_item(ItemId r) const;
    double p_tag_given_item(TagId t, ItemId r) const;
    double p_item_given_tag(ItemId r, TagId t) const;

    std::uint32_t users_of_tag(TagId t) const { return tag_users_[t]; }
    std::uint32_t users_of_item(ItemId r) const { return item_users_[r]; }
    std::uint32_t users_of_pair(ItemId r, TagId t) const;
    std::size_t user_count() const { return user_count_; }

private:
    std::vector<std::uint32_t> tag_users_;
    std::vector<std::uint32_t> item_users_;
    std::unordered_map<std::uint64_t, std::uint32_t> pair_users_;  // (item << 32 | tag)
    std::size_t user_count_ = 0;
};

TagProbabilityTable tag_probabilities(const Folksonomy& f);

// One measure evaluated on one user pair. Both users must be active.
// Bounded in [0, 1] for every kernel except matching and except all
// collaborative sums, which are nonnegative and unbounded.
double similarity(const MeasureSpec& spec, const Folksonomy& f, const TagProbabilityTable& probs,
                  std::string_view user_a, std::string_view user_b);
double similarity_by_id(const MeasureSpec& spec, const Folksonomy& f,
                        const TagProbabilityTable& probs, UserId a, UserId b);

// Scores for a pair list; order preserved; identical to per-pair calls.
// Per-pair errors are rethrown with the pair index prepended.
std::vector<double> batch_similarity(const MeasureSpec& spec, const Folksonomy& f,
                                     const TagProbabilityTable& probs,
                                     std::span<const std::pair<std::string, std::string>> pairs);

struct AnnotationDelta {
    enum class Op { add, remove };
    Op op = Op::add;
    Annotation annotation;
};

// Incrementally maintained pair scores for one collaborative measure. The
// index owns the mutation path: apply_delta() updates the underlying store
// and the cached per-feature partial sums together (single writer). Reads
// between deltas are safe from any number of threads.
class SimilarityIndex {
public:
    // Throws StateError for a distributional spec.
    SimilarityIndex(Folksonomy& f, const MeasureSpec& spec);

    void apply_delta(const AnnotationDelta& delta);

    double score(std::string_view user_a, std::string_view user_b) const;
    double score_by_id(UserId a, UserId b) const;

    const MeasureSpec& spec() const { return spec_; }
    const Folksonomy& store() const { return folk_; }
    std::size_t pair_count() const { return pairs_.size(); }

private:
    struct PairState {
        std::map<std::uint32_t, double> partial;  // pivot feature -> kernel value
        double total = 0.0;
    };

    std::uint32_t pivot_of(ItemId item, TagId tag) const;
    void rebuild_feature(std::uint32_t feature);
    void recompute_pair(UserId a, UserId b);

    Folksonomy& folk_;
    MeasureSpec spec_;
    // pivot feature -> (user, other-dimension id), sorted
    std::unordered_map<std::uint32_t, std::vector<std::pair<UserId, std::uint32_t>>> inverse_;
    std::unordered_map<std::uint64_t, PairState> pairs_;
};

} // namespace tagnet
