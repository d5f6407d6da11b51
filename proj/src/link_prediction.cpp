#include "tagnet/link_prediction.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <unordered_set>

#include "tagnet/errors.hpp"
#include "tagnet/rng.hpp"

namespace tagnet {

SampleCriterion parse_criterion(std::string_view text) {
    const std::string t = normalize_id(text);
    if (t == "most-active" || t == "most_active" || t == "mostactive") return SampleCriterion::most_active;
    if (t == "most-connected" || t == "most_connected" || t == "mostconnected")
        return SampleCriterion::most_connected;
    if (t == "random") return SampleCriterion::random_order;
    throw DomainError("unknown sampling criterion '" + t + "'");
}

const char* criterion_label(SampleCriterion c) {
    switch (c) {
        case SampleCriterion::most_active: return "most-active";
        case SampleCriterion::most_connected: return "most-connected";
        case SampleCriterion::random_order: return "random";
    }
    return "?";
}

NeighborLists load_neighbor_lists(const std::filesystem::path& path, std::size_t cap) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    NeighborLists lists;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const std::size_t t1 = line.find('\t');
        const std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw ParseError(path.string(), lineno, "expected userA<TAB>userB<TAB>affinity");
        const std::string a = normalize_id(std::string_view(line).substr(0, t1));
        const std::string b = normalize_id(std::string_view(line).substr(t1 + 1, t2 - t1 - 1));
        const std::string raw = normalize_id(std::string_view(line).substr(t2 + 1));
        if (a.empty() && b.empty() && raw.empty()) continue;
        if (a.empty() || b.empty() || raw.empty())
            throw ParseError(path.string(), lineno, "empty field");
        double affinity = 0.0;
        try {
            std::size_t used = 0;
            affinity = std::stod(raw, &used);
            if (used != raw.size()) throw std::invalid_argument(raw);
        } catch (const std::exception&) {
            throw ParseError(path.string(), lineno, "bad affinity value '" + raw + "'");
        }
        auto& entries = lists[a];
        if (entries.size() < cap) entries.push_back({b, affinity});
    }
    return lists;
}

PairSample sample_pairs(const Folksonomy& f, const SocialGraph& g, const NeighborLists& lists,
                        SampleCriterion criterion, std::size_t m, std::uint64_t seed) {
    if (lists.empty()) throw DomainError("empty neighbor lists");
    if (m < 1) throw DomainError("sample size must be at least 1");

    // criterion order over the list owners, ties broken by user id
    std::vector<const std::string*> order;
    order.reserve(lists.size());
    for (const auto& [user, entries] : lists) order.push_back(&user);

    auto activity = [&](const std::string& u) -> std::uint64_t {
        const auto id = f.find_user(u);
        return id ? f.assignment_count(*id) : 0;
    };
    auto degree = [&](const std::string& u) -> std::uint64_t {
        const auto id = g.find_user(u);
        return id ? g.degree(*id) : 0;
    };

    switch (criterion) {
        case SampleCriterion::most_active:
            std::stable_sort(order.begin(), order.end(), [&](const auto* a, const auto* b) {
                const auto aa = activity(*a), ab = activity(*b);
                return aa != ab ? aa > ab : *a < *b;
            });
            break;
        case SampleCriterion::most_connected:
            std::stable_sort(order.begin(), order.end(), [&](const auto* a, const auto* b) {
                const auto da = degree(*a), db = degree(*b);
                return da != db ? da > db : *a < *b;
            });
            break;
        case SampleCriterion::random_order: {
            // keys are already sorted (std::map); shuffle deterministically
            Rng rng(seed);
            rng.shuffle(order);
            break;
        }
    }

    auto is_active = [&](const std::string& u) {
        const auto id = f.find_user(u);
        return id && f.is_active(*id);
    };

    PairSample sample;
    sample.criterion = criterion;
    sample.target = m;
    sample.seed = seed;
    std::unordered_set<std::string> seen;  // "a\tb" with a < b
    for (const auto* user : order) {
        if (sample.pairs.size() >= m) break;
        if (!is_active(*user)) continue;  // similarity needs annotations on both sides
        for (const NeighborEntry& entry : lists.at(*user)) {
            if (sample.pairs.size() >= m) break;
            if (entry.candidate == *user) continue;
            if (!is_active(entry.candidate)) continue;
            const std::string key = std::min(*user, entry.candidate) + '\t' +
                                    std::max(*user, entry.candidate);
            if (!seen.insert(key).second) continue;
            sample.pairs.emplace_back(*user, entry.candidate);
        }
    }
    sample.short_sample = sample.pairs.size() < m;
    return sample;
}

std::vector<ScoredPair> label_pairs(const SocialGraph& g,
                                    std::span<const std::pair<std::string, std::string>> pairs,
                                    std::span<const double> scores) {
    if (pairs.size() != scores.size()) throw DomainError("pair/score length mismatch");
    std::vector<ScoredPair> out;
    out.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        ScoredPair sp;
        sp.user_a = normalize_id(pairs[i].first);
        sp.user_b = normalize_id(pairs[i].second);
        sp.score = scores[i];
        const auto a = g.find_user(sp.user_a);
        const auto b = g.find_user(sp.user_b);
        sp.label = a && b && std::binary_search(g.neighbors(*a).begin(), g.neighbors(*a).end(), *b);
        out.push_back(std::move(sp));
    }
    return out;
}

RocResult roc(std::span<const ScoredPair> scored) {
    std::uint64_t pos = 0, neg = 0;
    for (const auto& sp : scored) (sp.label ? pos : neg)++;
    if (pos == 0 || neg == 0)
        throw DataError("ROC needs both labels, got " + std::to_string(pos) + " positive / " +
                        std::to_string(neg) + " negative");

    std::vector<std::size_t> idx(scored.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return scored[a].score > scored[b].score;
    });

    RocResult out;
    out.points.reserve(scored.size() + 1);
    out.points.emplace_back(0.0, 0.0);

    // trapezoid area accumulated exactly, in half-units of the pos*neg grid
    std::uint64_t tp = 0, fp = 0, area2 = 0;
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        std::uint64_t dp = 0, dn = 0;
        while (j < idx.size() && scored[idx[j]].score == scored[idx[i]].score) {
            (scored[idx[j]].label ? dp : dn)++;
            ++j;
        }
        area2 += dn * (2 * tp + dp);
        tp += dp;
        fp += dn;
        out.points.emplace_back(static_cast<double>(fp) / static_cast<double>(neg),
                                static_cast<double>(tp) / static_cast<double>(pos));
        i = j;
    }
    out.auc = static_cast<double>(area2) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
    return out;
}

double relative_improvement(double auc_measure, double auc_baseline) {
    if (auc_baseline <= 0.0) throw DomainError("baseline AUC must be positive");
    return auc_measure / auc_baseline - 1.0;
}

BaselineScores BaselineScores::load(const std::filesystem::path& path) {
    BaselineScores b;
    const NeighborLists lists = load_neighbor_lists(path, std::numeric_limits<std::size_t>::max());
    for (const auto& [user, entries] : lists)
        for (const NeighborEntry& e : entries) b.set(user, e.candidate, e.affinity);
    return b;
}

void BaselineScores::set(std::string_view user_a, std::string_view user_b, double affinity) {
    std::string a = normalize_id(user_a);
    std::string b = normalize_id(user_b);
    if (b < a) std::swap(a, b);
    scores_.emplace(std::make_pair(std::move(a), std::move(b)), affinity);  // first value wins
}

std::optional<double> BaselineScores::find(std::string_view user_a, std::string_view user_b) const {
    std::string a = normalize_id(user_a);
    std::string b = normalize_id(user_b);
    if (b < a) std::swap(a, b);
    auto it = scores_.find({a, b});
    if (it == scores_.end()) return std::nullopt;
    return it->second;
}

std::vector<ComparisonRow> compare_measures(const Folksonomy& f, const SocialGraph& g,
                                            const TagProbabilityTable& probs,
                                            const PairSample& sample,
                                            std::span<const MeasureSpec> specs,
                                            const BaselineScores& baseline) {
    if (sample.pairs.empty()) throw DomainError("empty pair sample");

    std::vector<double> base_scores;
    base_scores.reserve(sample.pairs.size());
    for (const auto& [a, b] : sample.pairs) {
        const auto s = baseline.find(a, b);
        if (!s) throw DataError("no baseline score for pair (" + a + ", " + b + ")");
        base_scores.push_back(*s);
    }
    const double base_auc = roc(label_pairs(g, sample.pairs, base_scores)).auc;

    std::vector<ComparisonRow> rows;
    rows.push_back({"baseline", base_auc, 0.0});
    for (const MeasureSpec& spec : specs) {
        const std::vector<double> scores = batch_similarity(spec, f, probs, sample.pairs);
        const double auc = roc(label_pairs(g, sample.pairs, scores)).auc;
        rows.push_back({spec.str(), auc, relative_improvement(auc, base_auc)});
    }
    std::sort(rows.begin(), rows.end(), [](const ComparisonRow& a, const ComparisonRow& b) {
        return a.rel_improvement != b.rel_improvement ? a.rel_improvement > b.rel_improvement
                                                      : a.spec < b.spec;
    });
    return rows;
}

} // namespace tagnet
