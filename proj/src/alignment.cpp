#include "tagnet/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tagnet/errors.hpp"
#include "tagnet/rng.hpp"

namespace tagnet {

namespace {

constexpr UserId kNone = 0xffffffffu;

struct PairQuantities {
    std::uint32_t n_st = 0;
    std::uint32_t n_sg = 0;
    double sigma_tags = 0.0;
    double sigma_groups = 0.0;
};

// shared support size and dot product of two sorted (id, freq) vectors
template <typename Seq>
std::pair<std::uint32_t, double> merge_dot(const Seq& a, const Seq& b) {
    std::uint32_t shared = 0;
    double dot = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) {
            ++i;
        } else if (b[j].first < a[i].first) {
            ++j;
        } else {
            ++shared;
            dot += static_cast<double>(a[i].second) * static_cast<double>(b[j].second);
            ++i;
            ++j;
        }
    }
    return {shared, dot};
}

std::uint32_t sorted_intersection_size(std::span<const GroupId> a, std::span<const GroupId> b) {
    std::uint32_t shared = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (b[j] < a[i]) ++j;
        else ++shared, ++i, ++j;
    }
    return shared;
}

PairQuantities quantities_by_id(const Folksonomy& f, const GroupMembership& m, UserId fu,
                                UserId fv, UserId mu, UserId mv) {
    PairQuantities q;
    if (fu != kNone && fv != kNone) {
        const auto [shared, dot] = merge_dot(f.tag_freq(fu), f.tag_freq(fv));
        q.n_st = shared;
        const double nu = static_cast<double>(f.tag_freq_sq_norm(fu));
        const double nv = static_cast<double>(f.tag_freq_sq_norm(fv));
        if (nu > 0.0 && nv > 0.0) q.sigma_tags = dot / std::sqrt(nu * nv);
    }
    if (mu != kNone && mv != kNone) {
        q.n_sg = sorted_intersection_size(m.groups_of(mu), m.groups_of(mv));
        const double nu = static_cast<double>(m.group_count_of(mu));
        const double nv = static_cast<double>(m.group_count_of(mv));
        if (nu > 0.0 && nv > 0.0)
            q.sigma_groups = static_cast<double>(q.n_sg) / std::sqrt(nu * nv);
    }
    return q;
}

// BFS from `source` up to d_max; appends (pair key, d) entries for every
// reached user. dist is scratch sized to the graph, reset on entry.
void bfs_collect(const SocialGraph& g, UserId source, int d_max, std::vector<int>& dist,
                 std::vector<UserId>& queue, std::vector<std::pair<std::uint64_t, int>>* pairs,
                 std::unordered_map<std::string, int>* out_map) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    queue.push_back(source);
    dist[source] = 0;
    std::size_t head = 0;
    while (head < queue.size()) {
        const UserId u = queue[head++];
        if (dist[u] == d_max) continue;
        for (UserId v : g.neighbors(u)) {
            if (dist[v] != -1) continue;
            dist[v] = dist[u] + 1;
            queue.push_back(v);
            if (pairs) {
                const std::uint64_t key =
                    (static_cast<std::uint64_t>(std::min(source, v)) << 32) | std::max(source, v);
                pairs->emplace_back(key, dist[v]);
            }
            if (out_map) (*out_map)[g.user_name(v)] = dist[v];
        }
    }
}

struct StratifiedPairs {
    std::vector<std::pair<std::uint64_t, int>> pairs;  // unique unordered pairs with distance
    bool clamped = false;
};

StratifiedPairs stratified_pairs(const SocialGraph& g, const AlignmentConfig& cfg) {
    if (g.user_count() == 0) throw DomainError("alignment over empty graph");
    if (cfg.sources < 1 || cfg.d_max < 1) throw DomainError("invalid alignment config");

    StratifiedPairs out;
    std::size_t n_sources = cfg.sources;
    if (n_sources > g.user_count()) {
        n_sources = g.user_count();
        out.clamped = true;
    }

    // seeded partial Fisher-Yates for the source sample
    std::vector<UserId> order(g.user_count());
    for (UserId u = 0; u < g.user_count(); ++u) order[u] = u;
    Rng rng(cfg.seed);
    for (std::size_t i = 0; i < n_sources; ++i) {
        const std::size_t j = i + rng.index(order.size() - i);
        std::swap(order[i], order[j]);
    }

    std::vector<int> dist(g.user_count());
    std::vector<UserId> queue;
    queue.reserve(g.user_count());
    for (std::size_t i = 0; i < n_sources; ++i)
        bfs_collect(g, order[i], cfg.d_max, dist, queue, &out.pairs, nullptr);

    if (cfg.exhaustive_d2) {
        const int cap = std::min(cfg.d_max, 2);
        for (UserId u = 0; u < g.user_count(); ++u)
            bfs_collect(g, u, cap, dist, queue, &out.pairs, nullptr);
    }

    std::sort(out.pairs.begin(), out.pairs.end());
    out.pairs.erase(std::unique(out.pairs.begin(), out.pairs.end()), out.pairs.end());
    return out;
}

// graph user -> id in another store, by normalized name
template <typename Store>
std::vector<UserId> cross_index(const SocialGraph& g, const Store& store) {
    std::vector<UserId> map(g.user_count(), kNone);
    for (UserId u = 0; u < g.user_count(); ++u)
        if (auto id = store.find_user(g.user_name(u))) map[u] = *id;
    return map;
}

} // namespace

const char* quantity_label(AlignmentQuantity q) {
    switch (q) {
        case AlignmentQuantity::shared_tags: return "shared_tags";
        case AlignmentQuantity::sigma_tags: return "sigma_tags";
        case AlignmentQuantity::shared_groups: return "shared_groups";
        case AlignmentQuantity::sigma_groups: return "sigma_groups";
    }
    return "?";
}

PairAlignment pair_alignment(const Folksonomy& f, const GroupMembership& m,
                             std::string_view user_a, std::string_view user_b) {
    const std::string a = normalize_id(user_a);
    const std::string b = normalize_id(user_b);
    if (a == b) throw DomainError("pair alignment of a user with itself");
    const auto fa = f.find_user(a), fb = f.find_user(b);
    const auto ma = m.find_user(a), mb = m.find_user(b);
    if (!fa && !ma) throw NotFoundError("unknown user: " + a);
    if (!fb && !mb) throw NotFoundError("unknown user: " + b);

    const PairQuantities q = quantities_by_id(f, m, fa.value_or(kNone), fb.value_or(kNone),
                                              ma.value_or(kNone), mb.value_or(kNone));
    PairAlignment out;
    out.user_a = a;
    out.user_b = b;
    out.shared_tags = q.n_st;
    out.shared_groups = q.n_sg;
    out.sigma_tags = q.sigma_tags;
    out.sigma_groups = q.sigma_groups;
    return out;
}

std::unordered_map<std::string, int> bfs_distances(const SocialGraph& g,
                                                   std::string_view source, int d_max) {
    const auto s = g.find_user(source);
    if (!s) throw NotFoundError("unknown user: " + normalize_id(source));
    if (d_max < 0) throw DomainError("negative distance cap");
    std::unordered_map<std::string, int> out;
    std::vector<int> dist(g.user_count());
    std::vector<UserId> queue;
    bfs_collect(g, *s, d_max, dist, queue, nullptr, &out);
    return out;
}

DistanceProfile alignment_profile(const Folksonomy& f, const SocialGraph& g,
                                  const GroupMembership& m, const AlignmentConfig& cfg) {
    if (f.user_count() == 0) throw DomainError("alignment over empty folksonomy");
    const StratifiedPairs strat = stratified_pairs(g, cfg);

    const std::vector<UserId> to_folk = cross_index(g, f);
    const std::vector<UserId> to_grp = cross_index(g, m);

    struct Acc {
        double n_st = 0, n_sg = 0, sig_t = 0, sig_g = 0;
        std::uint64_t n = 0;
    };
    std::vector<Acc> acc(static_cast<std::size_t>(cfg.d_max) + 1);
    for (const auto& [key, d] : strat.pairs) {
        const UserId a = static_cast<UserId>(key >> 32);
        const UserId b = static_cast<UserId>(key & 0xffffffffu);
        const PairQuantities q =
            quantities_by_id(f, m, to_folk[a], to_folk[b], to_grp[a], to_grp[b]);
        Acc& s = acc[static_cast<std::size_t>(d)];
        s.n_st += q.n_st;
        s.n_sg += q.n_sg;
        s.sig_t += q.sigma_tags;
        s.sig_g += q.sigma_groups;
        ++s.n;
    }

    DistanceProfile profile;
    profile.config = cfg;
    profile.sources_clamped = strat.clamped;
    for (int d = 1; d <= cfg.d_max; ++d) {
        const Acc& s = acc[static_cast<std::size_t>(d)];
        if (s.n == 0) continue;
        const double n = static_cast<double>(s.n);
        profile.distance.push_back(d);
        profile.mean_shared_tags.push_back(s.n_st / n);
        profile.mean_shared_groups.push_back(s.n_sg / n);
        profile.mean_sigma_tags.push_back(s.sig_t / n);
        profile.mean_sigma_groups.push_back(s.sig_g / n);
        profile.pair_count.push_back(s.n);
    }
    return profile;
}

Distribution alignment_histogram(const Folksonomy& f, const SocialGraph& g,
                                 const GroupMembership& m, int d, AlignmentQuantity quantity,
                                 const AlignmentConfig& cfg) {
    if (d < 1) throw DomainError("histogram distance must be >= 1");
    const StratifiedPairs strat = stratified_pairs(g, cfg);
    const std::vector<UserId> to_folk = cross_index(g, f);
    const std::vector<UserId> to_grp = cross_index(g, m);

    const bool binned =
        quantity == AlignmentQuantity::sigma_tags || quantity == AlignmentQuantity::sigma_groups;
    std::map<std::int64_t, std::uint64_t> counts;  // integer value or bin index
    std::uint64_t total = 0;
    for (const auto& [key, pd] : strat.pairs) {
        if (pd != d) continue;
        const UserId a = static_cast<UserId>(key >> 32);
        const UserId b = static_cast<UserId>(key & 0xffffffffu);
        const PairQuantities q =
            quantities_by_id(f, m, to_folk[a], to_folk[b], to_grp[a], to_grp[b]);
        double v = 0.0;
        switch (quantity) {
            case AlignmentQuantity::shared_tags: v = q.n_st; break;
            case AlignmentQuantity::shared_groups: v = q.n_sg; break;
            case AlignmentQuantity::sigma_tags: v = q.sigma_tags; break;
            case AlignmentQuantity::sigma_groups: v = q.sigma_groups; break;
        }
        const std::int64_t slot =
            binned ? static_cast<std::int64_t>(std::floor(v / cfg.hist_bin_width + 1e-12))
                   : static_cast<std::int64_t>(v);
        ++counts[slot];
        ++total;
    }
    if (total == 0) throw DataError("no pairs at distance " + std::to_string(d));

    Distribution out;
    out.sample_count = total;
    for (const auto& [slot, count] : counts) {
        out.support.push_back(binned ? static_cast<double>(slot) * cfg.hist_bin_width
                                     : static_cast<double>(slot));
        out.counts.push_back(count);
        out.mass.push_back(static_cast<double>(count) / static_cast<double>(total));
    }
    return out;
}

} // namespace tagnet
