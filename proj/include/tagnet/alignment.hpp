#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tagnet/core_model.hpp"
#include "tagnet/net_metrics.hpp"

namespace tagnet {

// Shared-tag / shared-group counts and the two cosine similarities for one
// unordered user pair. A user with no tags (or no groups) yields cosine 0.
struct PairAlignment {
    std::string user_a;
    std::string user_b;
    std::uint32_t shared_tags = 0;    // n_st
    std::uint32_t shared_groups = 0;  // n_sg
    double sigma_tags = 0.0;
    double sigma_groups = 0.0;
};

PairAlignment pair_alignment(const Folksonomy& f, const GroupMembership& m,
                             std::string_view user_a, std::string_view user_b);

struct AlignmentConfig {
    std::size_t sources = 20000;   // BFS source sample size, clamped to user count
    int d_max = 6;                 // maximum stratified distance
    std::uint64_t seed = 0;
    bool exhaustive_d2 = false;    // enumerate every source for strata d <= 2
    double hist_bin_width = 0.02;  // bin width for cosine-valued histograms
};

// Mean alignment per social distance stratum.
struct DistanceProfile {
    std::vector<int> distance;
    std::vector<double> mean_shared_tags;
    std::vector<double> mean_shared_groups;
    std::vector<double> mean_sigma_tags;
    std::vector<double> mean_sigma_groups;
    std::vector<std::uint64_t> pair_count;
    AlignmentConfig config;
    bool sources_clamped = false;
};

// BFS shortest-path distances from one source, capped at d_max; unreachable
// users are absent.
std::unordered_map<std::string, int> bfs_distances(const SocialGraph& g,
                                                   std::string_view source, int d_max);

// Samples cfg.sources BFS sources, stratifies reached users by distance,
// and averages the four alignment quantities per stratum. Each unordered
// pair is counted once across sources. Strata with no pairs are dropped.
DistanceProfile alignment_profile(const Folksonomy& f, const SocialGraph& g,
                                  const GroupMembership& m, const AlignmentConfig& cfg);

enum class AlignmentQuantity { shared_tags, sigma_tags, shared_groups, sigma_groups };

const char* quantity_label(AlignmentQuantity q);

// Empirical distribution of one quantity over sampled pairs at exact
// distance d. Count quantities keep exact support; cosine quantities are
// binned at cfg.hist_bin_width. Throws DataError if the stratum is empty.
Distribution alignment_histogram(const Folksonomy& f, const SocialGraph& g,
                                 const GroupMembership& m, int d, AlignmentQuantity quantity,
                                 const AlignmentConfig& cfg);

} // namespace tagnet
