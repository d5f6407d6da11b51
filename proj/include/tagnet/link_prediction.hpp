#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tagnet/core_model.hpp"
#include "tagnet/similarity.hpp"

namespace tagnet {

enum class SampleCriterion { most_active, most_connected, random_order };

SampleCriterion parse_criterion(std::string_view text);
const char* criterion_label(SampleCriterion c);

// Per-user ordered candidate lists with an externally provided affinity
// score (the prediction baseline). Keyed by normalized user id.
struct NeighborEntry {
    std::string candidate;
    double affinity = 0.0;
};
using NeighborLists = std::map<std::string, std::vector<NeighborEntry>>;

// Reads userA<TAB>userB<TAB>affinity lines, keeping at most `cap` candidates
// per user in file order. '#' and blank lines are skipped.
NeighborLists load_neighbor_lists(const std::filesystem::path& path, std::size_t cap = 60);

struct PairSample {
    std::vector<std::pair<std::string, std::string>> pairs;  // (user, candidate)
    SampleCriterion criterion = SampleCriterion::most_active;
    std::size_t target = 0;  // M
    std::uint64_t seed = 0;
    bool short_sample = false;  // fewer than M obtainable pairs
};

// Walks users in criterion order (ties broken by user id) and appends active
// candidates from each list until M pairs are collected. Inactive users and
// candidates are skipped, and no unordered pair is emitted twice.
PairSample sample_pairs(const Folksonomy& f, const SocialGraph& g, const NeighborLists& lists,
                        SampleCriterion criterion, std::size_t m, std::uint64_t seed);

struct ScoredPair {
    std::string user_a;
    std::string user_b;
    double score = 0.0;
    bool label = false;  // true iff the edge exists in the evaluation graph
};

// ROC curve from a threshold sweep over distinct scores (descending), tie
// groups traversed as one diagonal segment. The area equals the
// Mann-Whitney statistic with ties counted 1/2.
struct RocResult {
    std::vector<std::pair<double, double>> points;  // (FPR, TPR), (0,0) .. (1,1)
    double auc = 0.0;
};

// Throws DataError unless both labels are present.
RocResult roc(std::span<const ScoredPair> scored);

// AUC(measure) / AUC(baseline) - 1. Throws DomainError on a zero baseline.
double relative_improvement(double auc_measure, double auc_baseline);

// Affinity scores keyed by unordered user pair.
class BaselineScores {
public:
    static BaselineScores load(const std::filesystem::path& path);

    void set(std::string_view user_a, std::string_view user_b, double affinity);
    std::optional<double> find(std::string_view user_a, std::string_view user_b) const;
    std::size_t size() const { return scores_.size(); }

private:
    std::map<std::pair<std::string, std::string>, double> scores_;
};

struct ComparisonRow {
    std::string spec;  // measure spec string, or "baseline"
    double auc = 0.0;
    double rel_improvement = 0.0;
};

// Scores the sample under every spec plus the baseline, labels pairs against
// the social graph, and reports AUC and improvement over the baseline,
// ordered by improvement (descending, ties by spec string).
std::vector<ComparisonRow> compare_measures(const Folksonomy& f, const SocialGraph& g,
                                            const TagProbabilityTable& probs,
                                            const PairSample& sample,
                                            std::span<const MeasureSpec> specs,
                                            const BaselineScores& baseline);

// Label + score assembly used by compare_measures and the CLI.
std::vector<ScoredPair> label_pairs(const SocialGraph& g,
                                    std::span<const std::pair<std::string, std::string>> pairs,
                                    std::span<const double> scores);

} // namespace tagnet
