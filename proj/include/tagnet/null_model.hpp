#pragma once

#include <cstdint>
#include <utility>

#include "tagnet/core_model.hpp"

namespace tagnet {

// Outcome of one reshuffle. The preservation flags are recomputed against
// the original store after the shuffle and must all be true.
struct ShuffleReport {
    std::uint64_t seed = 0;
    std::size_t users_shuffled = 0;
    bool vocab_sizes_preserved = false;    // per-user n_t
    bool freq_multisets_preserved = false; // per-user {f_1 .. f_nt}
    bool group_counts_preserved = false;   // per-user n_g

    bool ok() const {
        return vocab_sizes_preserved && freq_multisets_preserved && group_counts_preserved;
    }
};

// Tag-permutation null model: every user receives n_t distinct tags drawn
// without replacement from the global tag list weighted by total usage, and
// keeps its own frequency multiset (frequencies assigned in draw order).
// The original store is left untouched.
std::pair<Folksonomy, ShuffleReport> shuffle_tags(const Folksonomy& f, std::uint64_t seed);

// Group-reassignment null model: every user receives n_g distinct groups
// drawn without replacement weighted by original group size.
std::pair<GroupMembership, ShuffleReport> shuffle_groups(const GroupMembership& m,
                                                         std::uint64_t seed);

} // namespace tagnet
