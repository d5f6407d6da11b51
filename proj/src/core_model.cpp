#include "tagnet/core_model.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <tuple>

#include "tagnet/errors.hpp"

namespace tagnet {

namespace {

// Splits a line into exactly `arity` tab-separated fields, normalizing each.
// Returns false for lines the loaders skip (blank, comment, whitespace-only).
bool split_line(const std::string& path, std::size_t lineno, const std::string& line,
                std::size_t arity, std::vector<std::string>& out) {
    if (line.empty() || line[0] == '#') return false;

    out.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(normalize_id(std::string_view(line).substr(start)));
            break;
        }
        out.push_back(normalize_id(std::string_view(line).substr(start, tab - start)));
        start = tab + 1;
    }

    if (out.size() == 1 && out[0].empty()) return false;  // whitespace-only line
    if (out.size() != arity)
        throw ParseError(path, lineno,
                         "expected " + std::to_string(arity) + " tab-separated fields, got " +
                             std::to_string(out.size()));
    for (const auto& field : out)
        if (field.empty()) throw ParseError(path, lineno, "empty identifier field");
    return true;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

} // namespace

// --- Folksonomy --------------------------------------------------------

Folksonomy Folksonomy::load(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    Folksonomy f;
    std::vector<std::tuple<UserId, ItemId, TagId>> triples;
    std::string line;
    std::vector<std::string> fields;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!split_line(path.string(), lineno, line, 3, fields)) continue;
        triples.emplace_back(f.users_.intern(fields[0]), f.items_.intern(fields[1]),
                             f.tags_.intern(fields[2]));
    }

    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());

    f.records_.resize(f.users_.size());
    f.tag_use_.assign(f.tags_.size(), 0);
    for (const auto& [u, i, t] : triples) {
        f.records_[u].by_item.push_back({i, t});
        ++f.tag_use_[t];
    }
    f.annotation_count_ = triples.size();

    for (auto& rec : f.records_) {
        if (rec.by_item.empty()) continue;
        ++f.active_users_;
        rec.by_tag = rec.by_item;
        std::sort(rec.by_tag.begin(), rec.by_tag.end(),
                  [](const Posting& a, const Posting& b) {
                      return std::tie(a.tag, a.item) < std::tie(b.tag, b.item);
                  });
        for (const Posting& p : rec.by_tag) {
            if (!rec.tag_freq.empty() && rec.tag_freq.back().first == p.tag)
                ++rec.tag_freq.back().second;
            else
                rec.tag_freq.emplace_back(p.tag, 1);
        }
        for (const Posting& p : rec.by_item) {
            if (!rec.item_freq.empty() && rec.item_freq.back().first == p.item)
                ++rec.item_freq.back().second;
            else
                rec.item_freq.emplace_back(p.item, 1);
        }
        for (const auto& [tag, n] : rec.tag_freq)
            rec.tag_sq_norm += static_cast<std::uint64_t>(n) * n;
        for (const auto& [item, n] : rec.item_freq)
            rec.item_sq_norm += static_cast<std::uint64_t>(n) * n;
    }
    return f;
}

Folksonomy Folksonomy::from_annotations(std::span<const Annotation> annotations) {
    Folksonomy f;
    for (const Annotation& a : annotations) {
        const std::string user = normalize_id(a.user);
        const std::string item = normalize_id(a.item);
        const std::string tag = normalize_id(a.tag);
        if (user.empty() || item.empty() || tag.empty())
            throw DomainError("annotation with empty identifier");
        const UserId u = f.intern_user(user);
        const ItemId i = f.intern_item(item);
        const TagId t = f.intern_tag(tag);
        if (!f.contains(u, i, t)) f.add(u, i, t);
    }
    return f;
}

bool Folksonomy::contains(UserId u, ItemId i, TagId t) const {
    if (u >= records_.size()) return false;
    const auto& v = records_[u].by_item;
    return std::binary_search(v.begin(), v.end(), Posting{i, t},
                              [](const Posting& a, const Posting& b) {
                                  return std::tie(a.item, a.tag) < std::tie(b.item, b.tag);
                              });
}

UserId Folksonomy::intern_user(std::string_view raw) {
    const UserId u = users_.intern(normalize_id(raw));
    if (u >= records_.size()) records_.resize(u + 1);
    return u;
}

ItemId Folksonomy::intern_item(std::string_view raw) { return items_.intern(normalize_id(raw)); }

TagId Folksonomy::intern_tag(std::string_view raw) {
    const TagId t = tags_.intern(normalize_id(raw));
    if (t >= tag_use_.size()) tag_use_.resize(t + 1, 0);
    return t;
}

Folksonomy::UserRecord& Folksonomy::record(UserId u) {
    if (u >= records_.size()) records_.resize(u + 1);
    return records_[u];
}

void Folksonomy::add(UserId u, ItemId i, TagId t) {
    if (contains(u, i, t)) throw StateError("triple already present");
    UserRecord& rec = record(u);
    if (rec.by_item.empty()) ++active_users_;

    auto item_key = [](const Posting& a, const Posting& b) {
        return std::tie(a.item, a.tag) < std::tie(b.item, b.tag);
    };
    auto tag_key = [](const Posting& a, const Posting& b) {
        return std::tie(a.tag, a.item) < std::tie(b.tag, b.item);
    };
    const Posting p{i, t};
    rec.by_item.insert(std::lower_bound(rec.by_item.begin(), rec.by_item.end(), p, item_key), p);
    rec.by_tag.insert(std::lower_bound(rec.by_tag.begin(), rec.by_tag.end(), p, tag_key), p);

    auto tf = std::lower_bound(rec.tag_freq.begin(), rec.tag_freq.end(),
                               std::make_pair(t, std::uint32_t{0}));
    if (tf != rec.tag_freq.end() && tf->first == t) {
        rec.tag_sq_norm += 2ull * tf->second + 1;
        ++tf->second;
    } else {
        rec.tag_freq.insert(tf, {t, 1});
        rec.tag_sq_norm += 1;
    }
    auto itf = std::lower_bound(rec.item_freq.begin(), rec.item_freq.end(),
                                std::make_pair(i, std::uint32_t{0}));
    if (itf != rec.item_freq.end() && itf->first == i) {
        rec.item_sq_norm += 2ull * itf->second + 1;
        ++itf->second;
    } else {
        rec.item_freq.insert(itf, {i, 1});
        rec.item_sq_norm += 1;
    }

    if (t >= tag_use_.size()) tag_use_.resize(t + 1, 0);
    ++tag_use_[t];
    ++annotation_count_;
}

void Folksonomy::remove(UserId u, ItemId i, TagId t) {
    if (!contains(u, i, t)) throw StateError("triple not present");
    UserRecord& rec = records_[u];

    auto item_key = [](const Posting& a, const Posting& b) {
        return std::tie(a.item, a.tag) < std::tie(b.item, b.tag);
    };
    auto tag_key = [](const Posting& a, const Posting& b) {
        return std::tie(a.tag, a.item) < std::tie(b.tag, b.item);
    };
    const Posting p{i, t};
    rec.by_item.erase(std::lower_bound(rec.by_item.begin(), rec.by_item.end(), p, item_key));
    rec.by_tag.erase(std::lower_bound(rec.by_tag.begin(), rec.by_tag.end(), p, tag_key));

    auto tf = std::lower_bound(rec.tag_freq.begin(), rec.tag_freq.end(),
                               std::make_pair(t, std::uint32_t{0}));
    rec.tag_sq_norm -= 2ull * tf->second - 1;
    if (--tf->second == 0) rec.tag_freq.erase(tf);
    auto itf = std::lower_bound(rec.item_freq.begin(), rec.item_freq.end(),
                                std::make_pair(i, std::uint32_t{0}));
    rec.item_sq_norm -= 2ull * itf->second - 1;
    if (--itf->second == 0) rec.item_freq.erase(itf);

    --tag_use_[t];
    --annotation_count_;
    if (rec.by_item.empty()) --active_users_;
}

void Folksonomy::remap_user_tags(UserId u, std::span<const TagId> tags) {
    UserRecord& rec = records_[u];
    if (tags.size() != rec.tag_freq.size())
        throw DomainError("tag remap cardinality mismatch");

    // old tag (ascending id order) -> new tag
    std::vector<std::pair<TagId, TagId>> remap(tags.size());
    for (std::size_t i = 0; i < tags.size(); ++i) {
        const TagId nt = tags[i];
        if (nt >= tag_use_.size()) throw DomainError("remap to unknown tag");
        remap[i] = {rec.tag_freq[i].first, nt};
    }

    for (std::size_t i = 0; i < remap.size(); ++i) {
        tag_use_[remap[i].first] -= rec.tag_freq[i].second;
        tag_use_[remap[i].second] += rec.tag_freq[i].second;
    }

    for (Posting& p : rec.by_item) {
        auto it = std::lower_bound(remap.begin(), remap.end(), std::make_pair(p.tag, TagId{0}),
                                   [](const auto& a, const auto& b) { return a.first < b.first; });
        p.tag = it->second;
    }
    std::sort(rec.by_item.begin(), rec.by_item.end(), [](const Posting& a, const Posting& b) {
        return std::tie(a.item, a.tag) < std::tie(b.item, b.tag);
    });
    rec.by_tag = rec.by_item;
    std::sort(rec.by_tag.begin(), rec.by_tag.end(), [](const Posting& a, const Posting& b) {
        return std::tie(a.tag, a.item) < std::tie(b.tag, b.item);
    });

    std::vector<std::pair<TagId, std::uint32_t>> new_freq(remap.size());
    for (std::size_t i = 0; i < remap.size(); ++i)
        new_freq[i] = {remap[i].second, rec.tag_freq[i].second};
    std::sort(new_freq.begin(), new_freq.end());
    rec.tag_freq = std::move(new_freq);
    // item sets and frequency multiset are untouched, so norms are unchanged
}

// --- SocialGraph -------------------------------------------------------

SocialGraph SocialGraph::load(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    SocialGraph g;
    std::vector<std::pair<UserId, UserId>> edges;
    std::string line;
    std::vector<std::string> fields;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!split_line(path.string(), lineno, line, 2, fields)) continue;
        const UserId a = g.users_.intern(fields[0]);
        const UserId b = g.users_.intern(fields[1]);
        if (a == b) continue;
        edges.emplace_back(std::min(a, b), std::max(a, b));
    }

    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    g.adjacency_.resize(g.users_.size());
    for (const auto& [a, b] : edges) {
        g.adjacency_[a].push_back(b);
        g.adjacency_[b].push_back(a);
    }
    for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());
    g.edge_count_ = edges.size();
    return g;
}

SocialGraph SocialGraph::from_edges(std::span<const std::pair<std::string, std::string>> raw) {
    SocialGraph g;
    std::vector<std::pair<UserId, UserId>> edges;
    for (const auto& [ra, rb] : raw) {
        const std::string na = normalize_id(ra);
        const std::string nb = normalize_id(rb);
        if (na.empty() || nb.empty()) throw DomainError("edge with empty endpoint");
        const UserId a = g.users_.intern(na);
        const UserId b = g.users_.intern(nb);
        if (a == b) continue;
        edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    g.adjacency_.resize(g.users_.size());
    for (const auto& [a, b] : edges) {
        g.adjacency_[a].push_back(b);
        g.adjacency_[b].push_back(a);
    }
    for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());
    g.edge_count_ = edges.size();
    return g;
}

// --- GroupMembership ---------------------------------------------------

GroupMembership GroupMembership::load(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    GroupMembership m;
    std::string line;
    std::vector<std::string> fields;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!split_line(path.string(), lineno, line, 2, fields)) continue;
        const UserId u = m.users_.intern(fields[0]);
        const GroupId g = m.groups_.intern(fields[1]);
        if (u >= m.membership_.size()) m.membership_.resize(u + 1);
        if (g >= m.group_size_.size()) m.group_size_.resize(g + 1, 0);
        auto& groups = m.membership_[u];
        auto it = std::lower_bound(groups.begin(), groups.end(), g);
        if (it != groups.end() && *it == g) continue;
        groups.insert(it, g);
        ++m.group_size_[g];
        ++m.membership_count_;
    }
    return m;
}

GroupMembership GroupMembership::from_pairs(
    std::span<const std::pair<std::string, std::string>> pairs) {
    GroupMembership m;
    for (const auto& [ru, rg] : pairs) {
        const std::string nu = normalize_id(ru);
        const std::string ng = normalize_id(rg);
        if (nu.empty() || ng.empty()) throw DomainError("membership with empty identifier");
        const UserId u = m.users_.intern(nu);
        const GroupId g = m.groups_.intern(ng);
        if (u >= m.membership_.size()) m.membership_.resize(u + 1);
        if (g >= m.group_size_.size()) m.group_size_.resize(g + 1, 0);
        auto& groups = m.membership_[u];
        auto it = std::lower_bound(groups.begin(), groups.end(), g);
        if (it != groups.end() && *it == g) continue;
        groups.insert(it, g);
        ++m.group_size_[g];
        ++m.membership_count_;
    }
    return m;
}

void GroupMembership::replace_user_groups(UserId u, std::span<const GroupId> groups) {
    auto& current = membership_[u];
    if (groups.size() != current.size()) throw DomainError("group remap cardinality mismatch");
    for (GroupId g : current) --group_size_[g];
    current.assign(groups.begin(), groups.end());
    std::sort(current.begin(), current.end());
    if (std::adjacent_find(current.begin(), current.end()) != current.end())
        throw DomainError("group remap with duplicate groups");
    for (GroupId g : current) {
        if (g >= group_size_.size()) throw DomainError("remap to unknown group");
        ++group_size_[g];
    }
}

// --- activity profiles --------------------------------------------------

ActivityProfile activity_profile(const Folksonomy& f, const SocialGraph& g,
                                 const GroupMembership& m, std::string_view user) {
    const std::string name = normalize_id(user);
    const auto in_f = f.find_user(name);
    const auto in_g = g.find_user(name);
    const auto in_m = m.find_user(name);
    if (!in_f && !in_g && !in_m) throw NotFoundError("unknown user: " + name);

    ActivityProfile p;
    p.user = name;
    if (in_g) p.degree = static_cast<std::uint32_t>(g.degree(*in_g));
    if (in_f) {
        p.distinct_tags = f.vocab_size(*in_f);
        p.assignments = f.assignment_count(*in_f);
    }
    if (in_m) p.groups = static_cast<std::uint32_t>(m.group_count_of(*in_m));
    return p;
}

std::vector<ActivityProfile> all_profiles(const Folksonomy& f, const SocialGraph& g,
                                          const GroupMembership& m) {
    std::map<std::string, ActivityProfile> by_name;
    for (UserId u = 0; u < f.known_user_count(); ++u) {
        if (!f.is_active(u)) continue;
        ActivityProfile& p = by_name[f.user_name(u)];
        p.user = f.user_name(u);
        p.distinct_tags = f.vocab_size(u);
        p.assignments = f.assignment_count(u);
    }
    for (UserId u = 0; u < g.user_count(); ++u) {
        ActivityProfile& p = by_name[g.user_name(u)];
        p.user = g.user_name(u);
        p.degree = static_cast<std::uint32_t>(g.degree(u));
    }
    for (UserId u = 0; u < m.user_count(); ++u) {
        ActivityProfile& p = by_name[m.user_name(u)];
        p.user = m.user_name(u);
        p.groups = static_cast<std::uint32_t>(m.group_count_of(u));
    }
    std::vector<ActivityProfile> out;
    out.reserve(by_name.size());
    for (auto& [name, p] : by_name) out.push_back(std::move(p));
    return out;
}

} // namespace tagnet
