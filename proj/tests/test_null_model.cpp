#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tagnet/alignment.hpp"
#include "tagnet/errors.hpp"
#include "tagnet/null_model.hpp"
#include "tagnet/synth_gen.hpp"

using namespace tagnet;

TEST_SUITE("null_model") {

TEST_CASE("single user redraws its own tags") {
    const Folksonomy f = Folksonomy::from_annotations(std::vector<Annotation>{
        {"u", "i1", "a"}, {"u", "i2", "a"}, {"u", "i3", "b"}});
    const auto [shuffled, report] = shuffle_tags(f, 42);
    CHECK(report.ok());
    // only tags a and b exist, so the user must hold exactly {a, b} again
    const UserId u = *shuffled.find_user("u");
    REQUIRE(shuffled.vocab_size(u) == 2);
    CHECK(shuffled.find_tag("a").has_value());
    CHECK(shuffled.find_tag("b").has_value());
    std::vector<std::uint32_t> freqs;
    for (const auto& [t, n] : shuffled.tag_freq(u)) freqs.push_back(n);
    std::sort(freqs.begin(), freqs.end());
    CHECK(freqs == std::vector<std::uint32_t>{1, 2});
}

TEST_CASE("original store is untouched") {
    const Folksonomy f = Folksonomy::from_annotations(std::vector<Annotation>{
        {"u", "i1", "a"}, {"v", "i2", "b"}, {"v", "i3", "b"}});
    const auto before = f.annotation_count();
    const UserId v = *f.find_user("v");
    const auto freq_before = std::vector<std::pair<TagId, std::uint32_t>>(
        f.tag_freq(v).begin(), f.tag_freq(v).end());
    const auto [shuffled, report] = shuffle_tags(f, 7);
    CHECK(f.annotation_count() == before);
    const auto freq_after = std::vector<std::pair<TagId, std::uint32_t>>(
        f.tag_freq(v).begin(), f.tag_freq(v).end());
    CHECK(freq_before == freq_after);
}

TEST_CASE("weighted draw follows global multiplicity") {
    // u1 uses tag a three times, u2 uses tag b once; u2's redraw picks a
    // with probability 3/4 over many seeds (binomial 3 sigma band)
    const Folksonomy f = Folksonomy::from_annotations(std::vector<Annotation>{
        {"u1", "i1", "a"}, {"u1", "i2", "a"}, {"u1", "i3", "a"}, {"u2", "i4", "b"}});
    const UserId u2 = *f.find_user("u2");
    const TagId a = *f.find_tag("a");
    const int trials = 10000;
    int hits = 0;
    for (int seed = 0; seed < trials; ++seed) {
        const auto [shuffled, report] = shuffle_tags(f, static_cast<std::uint64_t>(seed));
        REQUIRE(report.ok());
        if (shuffled.tag_freq(u2)[0].first == a) ++hits;
    }
    const double p = 0.75;
    const double sigma = std::sqrt(p * (1 - p) * trials);
    CHECK(std::abs(hits - p * trials) <= 3.0 * sigma);
}

TEST_CASE("shuffle preserves the global frequency multiset") {
    SynthConfig cfg;
    cfg.user_count = 80;
    cfg.seed = 5;
    const SynthData data = generate(cfg);
    const Folksonomy& f = data.folksonomy;
    const auto [shuffled, report] = shuffle_tags(f, 99);
    CHECK(report.ok());

    auto all_freqs = [](const Folksonomy& x) {
        std::vector<std::uint32_t> v;
        for (UserId u = 0; u < x.known_user_count(); ++u)
            for (const auto& [t, n] : x.tag_freq(u)) v.push_back(n);
        std::sort(v.begin(), v.end());
        return v;
    };
    CHECK(all_freqs(f) == all_freqs(shuffled));
    CHECK(f.annotation_count() == shuffled.annotation_count());

    // drawn tags are pairwise distinct per user by construction
    for (UserId u = 0; u < shuffled.known_user_count(); ++u) {
        const auto freq = shuffled.tag_freq(u);
        for (std::size_t i = 1; i < freq.size(); ++i) CHECK(freq[i - 1].first < freq[i].first);
    }
}

TEST_CASE("fixed seed reproduces the shuffle exactly") {
    SynthConfig cfg;
    cfg.user_count = 40;
    cfg.seed = 3;
    const SynthData data = generate(cfg);
    const auto [s1, r1] = shuffle_tags(data.folksonomy, 1234);
    const auto [s2, r2] = shuffle_tags(data.folksonomy, 1234);
    REQUIRE(s1.known_user_count() == s2.known_user_count());
    for (UserId u = 0; u < s1.known_user_count(); ++u) {
        const auto a = s1.postings_by_item(u);
        const auto b = s2.postings_by_item(u);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }
    const auto [s3, r3] = shuffle_tags(data.folksonomy, 1235);
    bool differs = false;
    for (UserId u = 0; u < s1.known_user_count() && !differs; ++u) {
        const auto a = s1.postings_by_item(u);
        const auto b = s3.postings_by_item(u);
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!(a[i] == b[i])) {
                differs = true;
                break;
            }
    }
    CHECK(differs);
}

TEST_CASE("single group forces the draw") {
    const GroupMembership m = GroupMembership::from_pairs(
        std::vector<std::pair<std::string, std::string>>{{"u", "g1"}, {"v", "g1"}});
    const auto [shuffled, report] = shuffle_groups(m, 17);
    CHECK(report.ok());
    CHECK(shuffled.group_count_of(*shuffled.find_user("u")) == 1);
    CHECK(shuffled.group_size(*shuffled.find_group("g1")) == 2);
}

TEST_CASE("group draw follows group size weights") {
    // g1 holds three users, g2 one; a fresh user redraw lands on g1 ~ 3/4
    const GroupMembership m = GroupMembership::from_pairs(
        std::vector<std::pair<std::string, std::string>>{
            {"a", "g1"}, {"b", "g1"}, {"c", "g1"}, {"d", "g2"}});
    const GroupId g1 = *m.find_group("g1");
    const int trials = 10000;
    int hits = 0;
    for (int seed = 0; seed < trials; ++seed) {
        const auto [shuffled, report] = shuffle_groups(m, static_cast<std::uint64_t>(seed));
        REQUIRE(report.ok());
        const UserId d = *shuffled.find_user("d");
        if (shuffled.groups_of(d)[0] == g1) ++hits;
    }
    const double p = 0.75;
    const double sigma = std::sqrt(p * (1 - p) * trials);
    CHECK(std::abs(hits - p * trials) <= 3.0 * sigma);
}

TEST_CASE("group counts preserved on any input") {
    SynthConfig cfg;
    cfg.user_count = 60;
    cfg.seed = 21;
    const SynthData data = generate(cfg);
    const auto [shuffled, report] = shuffle_groups(data.groups, 8);
    CHECK(report.ok());
    for (UserId u = 0; u < data.groups.user_count(); ++u)
        CHECK(shuffled.group_count_of(u) == data.groups.group_count_of(u));
}

TEST_CASE("empty inputs are rejected") {
    CHECK_THROWS_AS(shuffle_tags(Folksonomy{}, 1), DomainError);
    CHECK_THROWS_AS(shuffle_groups(GroupMembership{}, 1), DomainError);
}

TEST_CASE("null keeps the shared-tag count trend but flattens the cosine") {
    // with activity-correlated edges, reshuffled data still shows a raw
    // n_st decay over distance while sigma_tags loses most of its trend
    double nst_1 = 0.0, nst_3 = 0.0, sig_1 = 0.0, sig_3 = 0.0;
    int runs = 0;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        SynthConfig cfg;
        cfg.user_count = 600;
        cfg.community_count = 20;
        cfg.homophily = 0.8;
        cfg.assortativity = 0.7;
        cfg.mean_degree = 6.0;
        cfg.activity_exponent = 2.2;
        cfg.seed = seed;
        const SynthData data = generate(cfg);
        const auto [null_folk, report] = shuffle_tags(data.folksonomy, seed + 99);
        REQUIRE(report.ok());
        AlignmentConfig acfg;
        acfg.sources = 600;
        acfg.d_max = 3;
        const DistanceProfile p = alignment_profile(null_folk, data.graph, data.groups, acfg);
        bool has1 = false, has3 = false;
        for (std::size_t i = 0; i < p.distance.size(); ++i) {
            if (p.distance[i] == 1) {
                nst_1 += p.mean_shared_tags[i];
                sig_1 += p.mean_sigma_tags[i];
                has1 = true;
            }
            if (p.distance[i] == 3) {
                nst_3 += p.mean_shared_tags[i];
                sig_3 += p.mean_sigma_tags[i];
                has3 = true;
            }
        }
        if (has1 && has3) ++runs;
    }
    REQUIRE(runs >= 10);
    // residual activity assortativity shows up strongly in the raw count...
    const double nst_ratio = nst_1 / nst_3;
    const double sig_ratio = sig_1 / sig_3;
    CHECK(nst_ratio > 1.5);
    // ...while the cosine normalizes most of it away
    CHECK(sig_ratio < 0.6 * nst_ratio);
}

} // TEST_SUITE
