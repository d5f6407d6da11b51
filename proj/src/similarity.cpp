#include "tagnet/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

#include "tagnet/errors.hpp"

namespace tagnet {

// --- MeasureSpec ---------------------------------------------------------

namespace {

const std::pair<const char*, Kernel> kKernelNames[] = {
    {"cosine", Kernel::cosine},   {"overlap", Kernel::overlap}, {"matching", Kernel::matching},
    {"dice", Kernel::dice},       {"jaccard", Kernel::jaccard}, {"mip", Kernel::mip},
};

const char* kernel_name(Kernel k) {
    for (const auto& [name, kernel] : kKernelNames)
        if (kernel == k) return name;
    return "?";
}

} // namespace

MeasureSpec MeasureSpec::parse(std::string_view text) {
    const std::string lowered = normalize_id(text);
    const std::size_t c1 = lowered.find(':');
    const std::size_t c2 = c1 == std::string::npos ? std::string::npos : lowered.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos || lowered.find(':', c2 + 1) != std::string::npos)
        throw DomainError("measure spec must be kernel:aggregation:projection, got '" + lowered + "'");
    const std::string kernel = lowered.substr(0, c1);
    const std::string agg = lowered.substr(c1 + 1, c2 - c1 - 1);
    const std::string proj = lowered.substr(c2 + 1);

    MeasureSpec spec;
    bool found = false;
    for (const auto& [name, k] : kKernelNames) {
        if (kernel == name) {
            spec.kernel = k;
            found = true;
        }
    }
    if (!found) throw DomainError("unknown kernel '" + kernel + "'");
    if (agg == "distributional") spec.aggregation = Aggregation::distributional;
    else if (agg == "collaborative") spec.aggregation = Aggregation::collaborative;
    else throw DomainError("unknown aggregation '" + agg + "'");
    if (proj == "items") spec.projection = Projection::onto_items;
    else if (proj == "tags") spec.projection = Projection::onto_tags;
    else throw DomainError("unknown projection '" + proj + "'");
    return spec;
}

std::string MeasureSpec::str() const {
    std::string out = kernel_name(kernel);
    out += aggregation == Aggregation::distributional ? ":distributional" : ":collaborative";
    out += projection == Projection::onto_items ? ":items" : ":tags";
    return out;
}

std::vector<MeasureSpec> MeasureSpec::all() {
    std::vector<MeasureSpec> specs;
    for (const auto& [name, k] : kKernelNames)
        for (Aggregation a : {Aggregation::distributional, Aggregation::collaborative})
            for (Projection p : {Projection::onto_items, Projection::onto_tags})
                specs.push_back({k, a, p});
    return specs;
}

std::vector<MeasureSpec> MeasureSpec::collaborative() {
    std::vector<MeasureSpec> specs;
    for (const auto& s : all())
        if (s.aggregation == Aggregation::collaborative) specs.push_back(s);
    return specs;
}

// --- TagProbabilityTable -------------------------------------------------

TagProbabilityTable TagProbabilityTable::build(const Folksonomy& f) {
    if (f.annotation_count() == 0) throw DomainError("probability table of empty folksonomy");
    TagProbabilityTable t;
    t.user_count_ = f.user_count();
    t.tag_users_.assign(f.tag_count(), 0);
    t.item_users_.assign(f.item_count(), 0);
    t.pair_users_.reserve(f.annotation_count());
    for (UserId u = 0; u < f.known_user_count(); ++u) {
        for (const auto& [tag, n] : f.tag_freq(u)) ++t.tag_users_[tag];
        for (const auto& [item, n] : f.item_freq(u)) ++t.item_users_[item];
        for (const Posting& p : f.postings_by_item(u))
            ++t.pair_users_[(static_cast<std::uint64_t>(p.item) << 32) | p.tag];
    }
    return t;
}

TagProbabilityTable tag_probabilities(const Folksonomy& f) { return TagProbabilityTable::build(f); }

std::uint32_t TagProbabilityTable::users_of_pair(ItemId r, TagId t) const {
    auto it = pair_users_.find((static_cast<std::uint64_t>(r) << 32) | t);
    return it == pair_users_.end() ? 0 : it->second;
}

double TagProbabilityTable::p_tag(TagId t) const {
    return static_cast<double>(tag_users_[t]) / static_cast<double>(user_count_);
}

double TagProbabilityTable::p_item(ItemId r) const {
    return static_cast<double>(item_users_[r]) / static_cast<double>(user_count_);
}

double TagProbabilityTable::p_tag_given_item(TagId t, ItemId r) const {
    return static_cast<double>(users_of_pair(r, t)) / static_cast<double>(item_users_[r]);
}

double TagProbabilityTable::p_item_given_tag(ItemId r, TagId t) const {
    return static_cast<double>(users_of_pair(r, t)) / static_cast<double>(tag_users_[t]);
}

// --- kernels -------------------------------------------------------------

namespace {

std::size_t intersection_size(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    std::size_t i = 0, j = 0, n = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) ++i;
        else if (b[j] < a[i]) ++j;
        else ++n, ++i, ++j;
    }
    return n;
}

// Set kernel over sorted element ids; `prob` is consulted only by MIP and
// must map an element id to its probability in (0, 1].
template <typename ProbFn>
double set_kernel(Kernel k, std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                  ProbFn&& prob) {
    if (a.empty() || b.empty()) return 0.0;
    if (k == Kernel::mip) {
        double min_a = std::numeric_limits<double>::infinity();
        double min_b = min_a;
        double min_shared = min_a;
        bool shared = false;
        for (auto e : a) min_a = std::min(min_a, prob(e));
        for (auto e : b) min_b = std::min(min_b, prob(e));
        std::size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] < b[j]) ++i;
            else if (b[j] < a[i]) ++j;
            else {
                min_shared = std::min(min_shared, prob(a[i]));
                shared = true;
                ++i, ++j;
            }
        }
        if (!shared) return 0.0;
        const double den = std::log(min_a) + std::log(min_b);
        if (den == 0.0) return 1.0;  // only universal features on both sides
        return 2.0 * std::log(min_shared) / den;
    }

    const double inter = static_cast<double>(intersection_size(a, b));
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    switch (k) {
        case Kernel::matching: return inter;
        case Kernel::overlap: return inter / std::min(na, nb);
        case Kernel::dice: return 2.0 * inter / (na + nb);
        case Kernel::jaccard: return inter / (na + nb - inter);
        case Kernel::cosine: return inter / std::sqrt(na * nb);
        case Kernel::mip: break;
    }
    return 0.0;
}

template <typename Pair>
std::vector<std::uint32_t> support(std::span<const Pair> freq) {
    std::vector<std::uint32_t> ids;
    ids.reserve(freq.size());
    for (const auto& [id, n] : freq) ids.push_back(id);
    return ids;
}

double frequency_cosine(std::span<const std::pair<std::uint32_t, std::uint32_t>> a,
                        std::span<const std::pair<std::uint32_t, std::uint32_t>> b,
                        std::uint64_t sq_a, std::uint64_t sq_b) {
    if (sq_a == 0 || sq_b == 0) return 0.0;
    double dot = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first) ++i;
        else if (b[j].first < a[i].first) ++j;
        else {
            dot += static_cast<double>(a[i].second) * static_cast<double>(b[j].second);
            ++i, ++j;
        }
    }
    return dot / std::sqrt(static_cast<double>(sq_a) * static_cast<double>(sq_b));
}

double distributional_similarity(const MeasureSpec& spec, const Folksonomy& f,
                                 const TagProbabilityTable& probs, UserId a, UserId b) {
    const bool tag_space = spec.projection == Projection::onto_items;
    const auto va = tag_space ? f.tag_freq(a) : f.item_freq(a);
    const auto vb = tag_space ? f.tag_freq(b) : f.item_freq(b);

    if (spec.kernel == Kernel::cosine) {
        const std::uint64_t sq_a = tag_space ? f.tag_freq_sq_norm(a) : f.item_freq_sq_norm(a);
        const std::uint64_t sq_b = tag_space ? f.tag_freq_sq_norm(b) : f.item_freq_sq_norm(b);
        return frequency_cosine(va, vb, sq_a, sq_b);
    }

    const std::vector<std::uint32_t> sa = support(va);
    const std::vector<std::uint32_t> sb = support(vb);
    auto prob = [&](std::uint32_t e) { return tag_space ? probs.p_tag(e) : probs.p_item(e); };
    return set_kernel(spec.kernel, sa, sb, prob);
}

// Runs of a posting list that share one pivot value, exposed as sorted
// element ids of the other dimension.
struct RunCursor {
    std::span<const Posting> postings;
    bool pivot_is_item;
    std::size_t pos = 0;

    bool done() const { return pos >= postings.size(); }
    std::uint32_t pivot() const {
        return pivot_is_item ? postings[pos].item : postings[pos].tag;
    }
    std::vector<std::uint32_t> take_run() {
        const std::uint32_t p = pivot();
        std::vector<std::uint32_t> elems;
        while (pos < postings.size() && pivot() == p) {
            elems.push_back(pivot_is_item ? postings[pos].tag : postings[pos].item);
            ++pos;
        }
        return elems;
    }
    void skip_run() {
        const std::uint32_t p = pivot();
        while (pos < postings.size() && pivot() == p) ++pos;
    }
};

double collaborative_similarity(const MeasureSpec& spec, const Folksonomy& f,
                                const TagProbabilityTable& probs, UserId a, UserId b) {
    const bool pivot_is_item = spec.projection == Projection::onto_items;
    RunCursor ca{pivot_is_item ? f.postings_by_item(a) : f.postings_by_tag(a), pivot_is_item};
    RunCursor cb{pivot_is_item ? f.postings_by_item(b) : f.postings_by_tag(b), pivot_is_item};

    double total = 0.0;
    while (!ca.done() && !cb.done()) {
        const std::uint32_t pa = ca.pivot();
        const std::uint32_t pb = cb.pivot();
        if (pa < pb) {
            ca.skip_run();
        } else if (pb < pa) {
            cb.skip_run();
        } else {
            const std::vector<std::uint32_t> ea = ca.take_run();
            const std::vector<std::uint32_t> eb = cb.take_run();
            auto prob = [&](std::uint32_t e) {
                return pivot_is_item ? probs.p_tag_given_item(e, pa)
                                     : probs.p_item_given_tag(e, pa);
            };
            total += set_kernel(spec.kernel, ea, eb, prob);
        }
    }
    return total;
}

} // namespace

double similarity_by_id(const MeasureSpec& spec, const Folksonomy& f,
                        const TagProbabilityTable& probs, UserId a, UserId b) {
    if (a == b) throw DomainError("similarity of a user with itself");
    if (!f.is_active(a) || !f.is_active(b)) throw DomainError("similarity of an inactive user");
    return spec.aggregation == Aggregation::distributional
               ? distributional_similarity(spec, f, probs, a, b)
               : collaborative_similarity(spec, f, probs, a, b);
}

double similarity(const MeasureSpec& spec, const Folksonomy& f, const TagProbabilityTable& probs,
                  std::string_view user_a, std::string_view user_b) {
    const auto a = f.find_user(user_a);
    const auto b = f.find_user(user_b);
    if (!a) throw NotFoundError("unknown user: " + normalize_id(user_a));
    if (!b) throw NotFoundError("unknown user: " + normalize_id(user_b));
    return similarity_by_id(spec, f, probs, *a, *b);
}

std::vector<double> batch_similarity(const MeasureSpec& spec, const Folksonomy& f,
                                     const TagProbabilityTable& probs,
                                     std::span<const std::pair<std::string, std::string>> pairs) {
    std::vector<double> scores;
    scores.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        try {
            scores.push_back(similarity(spec, f, probs, pairs[i].first, pairs[i].second));
        } catch (const Error& e) {
            throw DataError("pair " + std::to_string(i) + " (" + pairs[i].first + ", " +
                            pairs[i].second + "): " + e.what());
        }
    }
    return scores;
}

// --- SimilarityIndex -----------------------------------------------------

namespace {

std::uint64_t pair_key(UserId a, UserId b) {
    return (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
}

} // namespace

std::uint32_t SimilarityIndex::pivot_of(ItemId item, TagId tag) const {
    return spec_.projection == Projection::onto_items ? item : tag;
}

SimilarityIndex::SimilarityIndex(Folksonomy& f, const MeasureSpec& spec)
    : folk_(f), spec_(spec) {
    if (spec.aggregation != Aggregation::collaborative)
        throw StateError("incremental index requires a collaborative measure, got " + spec.str());

    const bool pivot_is_item = spec.projection == Projection::onto_items;
    for (UserId u = 0; u < f.known_user_count(); ++u) {
        const auto postings = pivot_is_item ? f.postings_by_item(u) : f.postings_by_tag(u);
        for (const Posting& p : postings) {
            const std::uint32_t pivot = pivot_is_item ? p.item : p.tag;
            const std::uint32_t elem = pivot_is_item ? p.tag : p.item;
            inverse_[pivot].emplace_back(u, elem);
        }
    }
    for (auto& [feature, list] : inverse_) rebuild_feature(feature);
}

// Recomputes every pair term within one pivot feature from the current
// inverse list. Handles construction and MIP probability shifts alike.
void SimilarityIndex::rebuild_feature(std::uint32_t feature) {
    auto it = inverse_.find(feature);
    if (it == inverse_.end()) return;
    const auto& list = it->second;

    // user runs; the list is sorted by (user, element)
    std::vector<std::pair<UserId, std::pair<std::size_t, std::size_t>>> runs;
    std::size_t i = 0;
    while (i < list.size()) {
        std::size_t j = i;
        while (j < list.size() && list[j].first == list[i].first) ++j;
        runs.push_back({list[i].first, {i, j}});
        i = j;
    }

    std::unordered_map<std::uint32_t, std::uint32_t> elem_users;
    if (spec_.kernel == Kernel::mip) {
        for (const auto& [user, elem] : list) ++elem_users[elem];
    }
    const double population = static_cast<double>(runs.size());

    std::vector<std::uint32_t> ea, eb;
    for (std::size_t x = 0; x < runs.size(); ++x) {
        ea.clear();
        for (std::size_t p = runs[x].second.first; p < runs[x].second.second; ++p)
            ea.push_back(list[p].second);
        for (std::size_t y = x + 1; y < runs.size(); ++y) {
            eb.clear();
            for (std::size_t p = runs[y].second.first; p < runs[y].second.second; ++p)
                eb.push_back(list[p].second);
            auto prob = [&](std::uint32_t e) {
                return static_cast<double>(elem_users[e]) / population;
            };
            const double term = set_kernel(spec_.kernel, ea, eb, prob);
            PairState& st = pairs_[pair_key(runs[x].first, runs[y].first)];
            if (term == 0.0) st.partial.erase(feature);
            else st.partial[feature] = term;
        }
    }

    // fold totals of the touched pairs
    for (std::size_t x = 0; x < runs.size(); ++x)
        for (std::size_t y = x + 1; y < runs.size(); ++y)
            recompute_pair(runs[x].first, runs[y].first);
}

// Refolds the pair total from its partial map (kept ordered so the summation
// order is reproducible) and drops empty pair states.
void SimilarityIndex::recompute_pair(UserId a, UserId b) {
    auto it = pairs_.find(pair_key(a, b));
    if (it == pairs_.end()) return;
    PairState& st = it->second;
    if (st.partial.empty()) {
        pairs_.erase(it);
        return;
    }
    double total = 0.0;
    for (const auto& [feature, term] : st.partial) total += term;
    st.total = total;
}

void SimilarityIndex::apply_delta(const AnnotationDelta& delta) {
    const std::string user = normalize_id(delta.annotation.user);
    const std::string item = normalize_id(delta.annotation.item);
    const std::string tag = normalize_id(delta.annotation.tag);
    if (user.empty() || item.empty() || tag.empty())
        throw DomainError("delta with empty identifier");

    UserId u;
    ItemId r;
    TagId t;
    if (delta.op == AnnotationDelta::Op::add) {
        u = folk_.intern_user(user);
        r = folk_.intern_item(item);
        t = folk_.intern_tag(tag);
        folk_.add(u, r, t);  // throws StateError on duplicate
    } else {
        const auto fu = folk_.find_user(user);
        const auto fr = folk_.find_item(item);
        const auto ft = folk_.find_tag(tag);
        if (!fu || !fr || !ft) throw StateError("removing an absent triple");
        u = *fu;
        r = *fr;
        t = *ft;
        folk_.remove(u, r, t);  // throws StateError if absent
    }

    const std::uint32_t feature = pivot_of(r, t);
    const std::uint32_t elem = spec_.projection == Projection::onto_items ? t : r;

    // users previously annotating the feature (for pair zeroing on removal)
    std::vector<UserId> before;
    if (auto it = inverse_.find(feature); it != inverse_.end())
        for (const auto& [usr, e] : it->second)
            if (before.empty() || before.back() != usr) before.push_back(usr);

    auto& list = inverse_[feature];
    const std::pair<UserId, std::uint32_t> entry{u, elem};
    auto pos = std::lower_bound(list.begin(), list.end(), entry);
    if (delta.op == AnnotationDelta::Op::add) {
        list.insert(pos, entry);
    } else {
        list.erase(pos);  // present: the store held the triple
    }

    std::vector<UserId> after;
    for (const auto& [usr, e] : list)
        if (after.empty() || after.back() != usr) after.push_back(usr);

    std::vector<UserId> affected;
    std::set_union(before.begin(), before.end(), after.begin(), after.end(),
                   std::back_inserter(affected));

    if (spec_.kernel == Kernel::mip) {
        // conditional probabilities moved: every pair within the feature
        for (auto a_it = affected.begin(); a_it != affected.end(); ++a_it)
            for (auto b_it = std::next(a_it); b_it != affected.end(); ++b_it)
                if (auto pit = pairs_.find(pair_key(*a_it, *b_it)); pit != pairs_.end())
                    pit->second.partial.erase(feature);
        rebuild_feature(feature);
        // refold pairs that lost the feature entirely
        for (auto a_it = affected.begin(); a_it != affected.end(); ++a_it)
            for (auto b_it = std::next(a_it); b_it != affected.end(); ++b_it)
                recompute_pair(*a_it, *b_it);
    } else {
        // only pairs involving the delta user change
        std::vector<std::uint32_t> eu, ev;
        for (const auto& [usr, e] : list)
            if (usr == u) eu.push_back(e);
        for (UserId v : affected) {
            if (v == u) continue;
            ev.clear();
            for (const auto& [usr, e] : list)
                if (usr == v) ev.push_back(e);
            const double term = set_kernel(spec_.kernel, eu, ev, [](std::uint32_t) { return 1.0; });
            PairState& st = pairs_[pair_key(u, v)];
            if (term == 0.0) st.partial.erase(feature);
            else st.partial[feature] = term;
            recompute_pair(u, v);
        }
    }

    if (list.empty()) inverse_.erase(feature);
}

double SimilarityIndex::score_by_id(UserId a, UserId b) const {
    if (a == b) throw DomainError("similarity of a user with itself");
    auto it = pairs_.find(pair_key(a, b));
    return it == pairs_.end() ? 0.0 : it->second.total;
}

double SimilarityIndex::score(std::string_view user_a, std::string_view user_b) const {
    const auto a = folk_.find_user(user_a);
    const auto b = folk_.find_user(user_b);
    if (!a) throw NotFoundError("unknown user: " + normalize_id(user_a));
    if (!b) throw NotFoundError("unknown user: " + normalize_id(user_b));
    return score_by_id(*a, *b);
}

} // namespace tagnet
