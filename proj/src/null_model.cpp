#include "tagnet/null_model.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "tagnet/errors.hpp"
#include "tagnet/rng.hpp"

namespace tagnet {

namespace {

// Weighted sampling of n distinct entries without replacement, equivalent to
// successive draws with renormalized weights: key each entry with Exp(1)/w
// and keep the n smallest. Ascending key order is the draw order.
std::vector<std::uint32_t> weighted_sample(std::span<const std::uint32_t> ids,
                                           std::span<const double> weight, std::size_t n,
                                           Rng& rng, std::vector<std::pair<double, std::uint32_t>>& keys) {
    keys.clear();
    keys.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        keys.emplace_back(rng.exponential() / weight[i], ids[i]);
    if (n < keys.size())
        std::nth_element(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(n), keys.end());
    std::sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(std::min(n, keys.size())));
    std::vector<std::uint32_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = keys[i].second;
    return out;
}

} // namespace

std::pair<Folksonomy, ShuffleReport> shuffle_tags(const Folksonomy& f, std::uint64_t seed) {
    if (f.user_count() == 0) throw DomainError("shuffle of empty folksonomy");

    // global tag list with multiplicity = draw weight
    std::vector<std::uint32_t> live;
    std::vector<double> weight;
    for (TagId t = 0; t < f.tag_count(); ++t) {
        if (f.global_tag_use(t) > 0) {
            live.push_back(t);
            weight.push_back(static_cast<double>(f.global_tag_use(t)));
        }
    }

    Folksonomy out = f;
    Rng rng(seed);
    ShuffleReport report;
    report.seed = seed;

    std::vector<std::pair<double, std::uint32_t>> keys;
    for (UserId u = 0; u < f.known_user_count(); ++u) {
        const std::size_t n = f.vocab_size(u);
        if (n == 0) continue;
        if (n > live.size())
            throw DataError("user " + f.user_name(u) + " has " + std::to_string(n) +
                            " distinct tags but only " + std::to_string(live.size()) +
                            " tags exist globally");
        const std::vector<TagId> drawn = weighted_sample(live, weight, n, rng, keys);
        out.remap_user_tags(u, drawn);
        ++report.users_shuffled;
    }

    // exactness audit against the original
    report.vocab_sizes_preserved = true;
    report.freq_multisets_preserved = true;
    report.group_counts_preserved = true;  // groups are not touched by this shuffle
    for (UserId u = 0; u < f.known_user_count(); ++u) {
        if (out.vocab_size(u) != f.vocab_size(u) ||
            out.assignment_count(u) != f.assignment_count(u))
            report.vocab_sizes_preserved = false;
        std::vector<std::uint32_t> before, after;
        for (const auto& [t, n] : f.tag_freq(u)) before.push_back(n);
        for (const auto& [t, n] : out.tag_freq(u)) after.push_back(n);
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
        if (before != after) report.freq_multisets_preserved = false;
    }
    return {std::move(out), report};
}

std::pair<GroupMembership, ShuffleReport> shuffle_groups(const GroupMembership& m,
                                                         std::uint64_t seed) {
    if (m.membership_count() == 0) throw DomainError("shuffle of empty membership");

    std::vector<std::uint32_t> live;
    std::vector<double> weight;
    for (GroupId g = 0; g < m.group_count(); ++g) {
        if (m.group_size(g) > 0) {
            live.push_back(g);
            weight.push_back(static_cast<double>(m.group_size(g)));
        }
    }

    GroupMembership out = m;
    Rng rng(seed);
    ShuffleReport report;
    report.seed = seed;

    std::vector<std::pair<double, std::uint32_t>> keys;
    for (UserId u = 0; u < m.user_count(); ++u) {
        const std::size_t n = m.group_count_of(u);
        if (n == 0) continue;
        if (n > live.size())
            throw DataError("user " + m.user_name(u) + " belongs to " + std::to_string(n) +
                            " groups but only " + std::to_string(live.size()) +
                            " groups exist globally");
        const std::vector<GroupId> drawn = weighted_sample(live, weight, n, rng, keys);
        out.replace_user_groups(u, drawn);
        ++report.users_shuffled;
    }

    report.vocab_sizes_preserved = true;  // tags are not touched by this shuffle
    report.freq_multisets_preserved = true;
    report.group_counts_preserved = true;
    for (UserId u = 0; u < m.user_count(); ++u)
        if (out.group_count_of(u) != m.group_count_of(u)) report.group_counts_preserved = false;
    return {std::move(out), report};
}

} // namespace tagnet
