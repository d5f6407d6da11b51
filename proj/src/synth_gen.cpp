#include "tagnet/synth_gen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "tagnet/errors.hpp"
#include "tagnet/rng.hpp"

namespace tagnet {

namespace {

std::string padded(char prefix, std::size_t index, int width) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%c%0*zu", prefix, std::min(width, 20), index);
    return buf;
}

int width_for(std::size_t n) {
    int w = 1;
    while (n >= 10) {
        n /= 10;
        ++w;
    }
    return w;
}

// floor of a Pareto draw: P(v >= m) = m^-(alpha-1)
std::uint64_t heavy_tail(Rng& rng, double alpha) {
    double u;
    do {
        u = rng.uniform();
    } while (u == 0.0);
    const double v = std::pow(u, -1.0 / (alpha - 1.0));
    if (v > 1e12) return 1000000000000ull;
    return static_cast<std::uint64_t>(v);
}

// rank in [0, n) with weight 1/(rank+1), via harmonic prefix sums
class ZipfPicker {
public:
    explicit ZipfPicker(std::size_t max_n) : prefix_(max_n + 1, 0.0) {
        for (std::size_t r = 0; r < max_n; ++r)
            prefix_[r + 1] = prefix_[r] + 1.0 / static_cast<double>(r + 1);
    }

    std::size_t pick(Rng& rng, std::size_t n) const {
        const double target = rng.uniform() * prefix_[n];
        const auto it = std::upper_bound(prefix_.begin(), prefix_.begin() + static_cast<long>(n) + 1, target);
        const std::size_t r = static_cast<std::size_t>(it - prefix_.begin());
        return r == 0 ? 0 : r - 1;
    }

private:
    std::vector<double> prefix_;
};

} // namespace

SynthData generate(const SynthConfig& cfg) {
    if (cfg.user_count < 1 || cfg.tag_universe < 1 || cfg.item_universe < 1 ||
        cfg.group_universe < 1 || cfg.community_count < 1)
        throw DomainError("synth config counts must be at least 1");
    if (cfg.homophily < 0.0 || cfg.homophily > 1.0) throw DomainError("homophily must be in [0, 1]");
    if (cfg.assortativity < 0.0 || cfg.assortativity > 1.0)
        throw DomainError("assortativity must be in [0, 1]");
    if (cfg.activity_exponent <= 1.0) throw DomainError("activity exponent must exceed 1");

    const std::size_t n = cfg.user_count;
    const std::size_t communities = std::min(cfg.community_count, n);
    Rng rng(cfg.seed);
    SynthData out;

    const int uw = width_for(n - 1);
    const int cw = width_for(communities - 1);
    std::vector<std::string> user_name(n);
    std::vector<std::size_t> community(n);
    for (std::size_t u = 0; u < n; ++u) {
        user_name[u] = padded('u', u, uw);
        community[u] = u % communities;
        out.communities.emplace_back(user_name[u], padded('c', community[u], cw));
    }

    // community blocks over each universe; undersized universes wrap
    auto block = [&](std::size_t universe) {
        std::size_t size = universe / communities;
        if (size == 0) {
            size = 1;
            out.clamped = true;
        }
        return size;
    };
    const std::size_t tag_block = block(cfg.tag_universe);
    const std::size_t item_block = block(cfg.item_universe);
    const std::size_t group_block = block(cfg.group_universe);

    const ZipfPicker zipf(std::max({cfg.tag_universe, cfg.item_universe, cfg.group_universe}));

    // mixture draw: community block with probability lambda, else global
    auto draw_feature = [&](std::size_t universe, std::size_t block_size, std::size_t comm) {
        if (rng.chance(cfg.homophily)) {
            const std::size_t start = (comm * block_size) % universe;
            return (start + zipf.pick(rng, block_size)) % universe;
        }
        return zipf.pick(rng, universe);
    };

    // distinct features via rejection; if the draw stalls, fill from the
    // community block first so pure-homophily configs never leak across blocks
    auto draw_distinct = [&](std::size_t count, std::size_t universe, std::size_t block_size,
                             std::size_t comm, std::vector<std::uint32_t>& dest) {
        dest.clear();
        std::size_t attempts = 0;
        const std::size_t cap = 80 * count + 200;
        while (dest.size() < count && attempts < cap) {
            ++attempts;
            const auto id = static_cast<std::uint32_t>(draw_feature(universe, block_size, comm));
            if (std::find(dest.begin(), dest.end(), id) == dest.end()) dest.push_back(id);
        }
        const std::size_t start = (comm * block_size) % universe;
        for (std::size_t k = 0; dest.size() < count && k < block_size; ++k) {
            const auto id = static_cast<std::uint32_t>((start + k) % universe);
            if (std::find(dest.begin(), dest.end(), id) == dest.end()) dest.push_back(id);
        }
        for (std::uint32_t id = 0; dest.size() < count && id < universe; ++id) {
            if (std::find(dest.begin(), dest.end(), id) == dest.end()) {
                dest.push_back(id);
                out.clamped = true;
            }
        }
    };

    // --- annotations and groups ---------------------------------------

    const int tw = width_for(cfg.tag_universe - 1);
    const int iw = width_for(cfg.item_universe - 1);
    const int gw = width_for(cfg.group_universe - 1);

    const std::size_t vocab_cap = std::min(cfg.max_vocab, cfg.tag_universe);
    const std::size_t group_cap = std::min(cfg.max_groups, cfg.group_universe);

    std::vector<Annotation> annotations;
    annotations.reserve(n * 8);
    std::vector<std::pair<std::string, std::string>> memberships;
    std::vector<double> sociability(n);  // latent shared activity level

    std::vector<std::uint32_t> tags, items, groups;
    for (std::size_t u = 0; u < n; ++u) {
        const std::uint64_t latent = heavy_tail(rng, cfg.activity_exponent);
        sociability[u] = static_cast<double>(latent);

        std::size_t n_t = static_cast<std::size_t>(
            std::llround(cfg.vocab_scale * static_cast<double>(latent)));
        if (n_t < 1) n_t = 1;
        if (n_t > vocab_cap) {
            if (n_t > cfg.tag_universe) out.clamped = true;  // universe bound, not the config cap
            n_t = vocab_cap;
        }
        draw_distinct(n_t, cfg.tag_universe, tag_block, community[u], tags);

        for (std::uint32_t t : tags) {
            std::uint32_t freq = static_cast<std::uint32_t>(
                std::min<std::uint64_t>(heavy_tail(rng, cfg.activity_exponent), cfg.max_tag_freq));
            if (freq > cfg.item_universe) {
                freq = static_cast<std::uint32_t>(cfg.item_universe);
                out.clamped = true;
            }
            draw_distinct(freq, cfg.item_universe, item_block, community[u], items);
            for (std::uint32_t r : items)
                annotations.push_back({user_name[u], padded('i', r, iw), padded('t', t, tw)});
        }

        std::size_t n_g = static_cast<std::size_t>(heavy_tail(rng, cfg.activity_exponent));
        if (n_g > group_cap) {
            if (n_g > cfg.group_universe) out.clamped = true;
            n_g = group_cap;
        }
        if (n_g < 1) n_g = 1;
        draw_distinct(n_g, cfg.group_universe, group_block, community[u], groups);
        for (std::uint32_t g : groups) memberships.emplace_back(user_name[u], padded('g', g, gw));
    }

    // --- social edges ---------------------------------------------------

    std::size_t degree_cap = cfg.max_degree;
    if (degree_cap == 0) degree_cap = std::max<std::size_t>(16, n / 10);

    std::vector<double> k_raw(n);
    double k_sum = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
        const double indep = static_cast<double>(heavy_tail(rng, cfg.activity_exponent));
        k_raw[u] = 0.6 * sociability[u] + 0.4 * indep;
        k_sum += k_raw[u];
    }
    const double k_scale = cfg.mean_degree * static_cast<double>(n) / k_sum;
    std::vector<std::size_t> k_target(n);
    for (std::size_t u = 0; u < n; ++u)
        k_target[u] = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::llround(k_scale * k_raw[u])), 1, degree_cap);

    // users ordered by target degree; positions drive assortative placement
    std::vector<std::uint32_t> by_rank(n);
    for (std::size_t u = 0; u < n; ++u) by_rank[u] = static_cast<std::uint32_t>(u);
    std::sort(by_rank.begin(), by_rank.end(), [&](std::uint32_t a, std::uint32_t b) {
        return k_target[a] != k_target[b] ? k_target[a] > k_target[b] : a < b;
    });
    std::vector<std::size_t> rank_pos(n);
    for (std::size_t i = 0; i < n; ++i) rank_pos[by_rank[i]] = i;

    std::vector<std::vector<std::uint32_t>> comm_by_rank(communities);
    std::vector<std::size_t> comm_pos(n);
    for (std::uint32_t u : by_rank) comm_by_rank[community[u]].push_back(u);
    for (std::size_t c = 0; c < communities; ++c)
        for (std::size_t i = 0; i < comm_by_rank[c].size(); ++i) comm_pos[comm_by_rank[c][i]] = i;

    auto pick_partner = [&](std::size_t u) -> std::uint32_t {
        const bool intra = rng.chance(cfg.homophily) && comm_by_rank[community[u]].size() > 1;
        const auto& pool = intra ? comm_by_rank[community[u]] : by_rank;
        const std::size_t pos = intra ? comm_pos[u] : rank_pos[u];
        if (rng.chance(cfg.assortativity)) {
            const double window = std::max(2.0, static_cast<double>(pool.size()) / 25.0);
            const auto offset = static_cast<long long>(std::llround(rng.normal() * window));
            long long j = static_cast<long long>(pos) + offset;
            j = std::clamp<long long>(j, 0, static_cast<long long>(pool.size()) - 1);
            return pool[static_cast<std::size_t>(j)];
        }
        return pool[rng.index(pool.size())];
    };

    std::unordered_set<std::uint64_t> edge_keys;
    edge_keys.reserve(n * static_cast<std::size_t>(cfg.mean_degree));
    std::vector<std::size_t> degree(n, 0);
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t u = 0; u < n; ++u) {
        std::size_t attempts = 0;
        const std::size_t cap = 20 * k_target[u] + 20;
        while (degree[u] < k_target[u] && attempts < cap) {
            ++attempts;
            const std::uint32_t v = pick_partner(u);
            if (v == u) continue;
            if (degree[v] >= degree_cap) continue;  // max_degree is a hard bound
            const std::uint64_t key =
                (static_cast<std::uint64_t>(std::min<std::uint32_t>(u, v)) << 32) |
                std::max<std::uint32_t>(u, v);
            if (!edge_keys.insert(key).second) continue;
            ++degree[u];
            ++degree[v];
            edges.emplace_back(user_name[u], user_name[v]);
        }
    }

    out.folksonomy = Folksonomy::from_annotations(annotations);
    out.graph = SocialGraph::from_edges(edges);
    out.groups = GroupMembership::from_pairs(memberships);
    return out;
}

} // namespace tagnet
