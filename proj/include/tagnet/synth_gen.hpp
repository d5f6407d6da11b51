#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tagnet/core_model.hpp"

namespace tagnet {

// Synthetic folksonomy generator: users live in interest communities, each
// community owning a block of preferred tags, items, and groups. homophily
// controls how strongly annotations and edges stay inside the community;
// assortativity controls degree-rank locality of edge placement.
struct SynthConfig {
    std::size_t user_count = 500;
    std::size_t tag_universe = 400;
    std::size_t item_universe = 1000;
    std::size_t group_universe = 80;
    std::size_t community_count = 8;

    double activity_exponent = 2.5;  // tail exponent for all activity draws
    double homophily = 0.5;          // lambda in [0, 1]
    double assortativity = 0.0;      // in [0, 1]
    std::uint64_t seed = 0;

    double vocab_scale = 4.0;    // scales the n_t draw
    std::size_t max_vocab = 60;  // cap on n_t
    std::uint32_t max_tag_freq = 12;
    double mean_degree = 8.0;
    std::size_t max_degree = 0;  // 0 = derived from user_count
    std::size_t max_groups = 12;
};

struct SynthData {
    Folksonomy folksonomy;
    SocialGraph graph;
    GroupMembership groups;
    std::vector<std::pair<std::string, std::string>> communities;  // (user, community)
    bool clamped = false;  // a draw hit a universe bound and was degraded
};

SynthData generate(const SynthConfig& cfg);

} // namespace tagnet
