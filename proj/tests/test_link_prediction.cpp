#include <doctest.h>

#include <cmath>
#include <vector>

#include "tagnet/errors.hpp"
#include "tagnet/link_prediction.hpp"
#include "tagnet/rng.hpp"

#include "oracles.hpp"

using namespace tagnet;

namespace {

std::vector<ScoredPair> make_scored(const std::vector<std::pair<double, bool>>& rows) {
    std::vector<ScoredPair> out;
    int i = 0;
    for (const auto& [score, label] : rows) {
        ScoredPair sp;
        sp.user_a = "a" + std::to_string(i);
        sp.user_b = "b" + std::to_string(i);
        sp.score = score;
        sp.label = label;
        out.push_back(sp);
        ++i;
    }
    return out;
}

Folksonomy active_users(std::initializer_list<std::string> users) {
    std::vector<Annotation> a;
    int i = 0;
    for (const auto& u : users) a.push_back({u, "i" + std::to_string(i++), "t"});
    return Folksonomy::from_annotations(a);
}

} // namespace

TEST_SUITE("link_prediction") {

TEST_CASE("perfect separation gives AUC exactly 1") {
    const auto scored = make_scored({{0.9, true}, {0.8, true}, {0.2, false}, {0.1, false}});
    const RocResult r = roc(scored);
    CHECK(r.auc == 1.0);
    CHECK(r.points.front() == std::pair<double, double>{0.0, 0.0});
    CHECK(r.points.back() == std::pair<double, double>{1.0, 1.0});
}

TEST_CASE("all scores equal gives AUC exactly one half") {
    const auto scored = make_scored({{0.5, true}, {0.5, false}, {0.5, true}, {0.5, false}});
    const RocResult r = roc(scored);
    CHECK(r.auc == 0.5);
    REQUIRE(r.points.size() == 2);  // one diagonal tie segment
}

TEST_CASE("hand-traced AUC 0.75") {
    const auto scored = make_scored({{0.9, true}, {0.8, false}, {0.7, true}, {0.1, false}});
    CHECK(roc(scored).auc == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("degenerate labels raise") {
    CHECK_THROWS_AS(roc(make_scored({{0.5, true}, {0.4, true}})), DataError);
    CHECK_THROWS_AS(roc(make_scored({{0.5, false}})), DataError);
}

TEST_CASE("roc agrees with brute-force Mann-Whitney on random samples") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<double, bool>> rows;
        const std::size_t n = 2 + rng.index(120);
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            // coarse scores so ties actually occur
            const double score = static_cast<double>(rng.index(12)) / 10.0;
            const bool label = rng.chance(0.4);
            rows.emplace_back(score, label);
            (label ? pos : neg) = true;
        }
        if (!pos || !neg) continue;
        const double mine = roc(make_scored(rows)).auc;
        const double ref = oracle::mann_whitney_auc(rows);
        CHECK(mine == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("negating scores mirrors the AUC") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<double, bool>> rows;
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < 40; ++i) {
            const double score = static_cast<double>(rng.index(8));
            const bool label = rng.chance(0.5);
            rows.emplace_back(score, label);
            (label ? pos : neg) = true;
        }
        if (!pos || !neg) continue;
        auto negated = rows;
        for (auto& [score, label] : negated) score = -score;
        CHECK(roc(make_scored(rows)).auc + roc(make_scored(negated)).auc == 1.0);
    }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
    Rng rng(5);
    std::vector<std::pair<double, bool>> rows;
    for (std::size_t i = 0; i < 60; ++i)
        rows.emplace_back(rng.uniform(), rng.chance(0.5));
    auto warped = rows;
    for (auto& [score, label] : warped) score = std::exp(3.0 * score) + 1.0;
    CHECK(roc(make_scored(rows)).auc == doctest::Approx(roc(make_scored(warped)).auc).epsilon(1e-12));
}

TEST_CASE("relative improvement") {
    CHECK(relative_improvement(0.685, 0.5) == doctest::Approx(0.37));
    CHECK(relative_improvement(0.6, 0.6) == doctest::Approx(0.0));
    CHECK_THROWS_AS(relative_improvement(0.5, 0.0), DomainError);
}

TEST_CASE("sampling walks the list in order and stops at M") {
    const Folksonomy f = active_users({"u", "n1", "n2", "n3"});
    const SocialGraph g = SocialGraph::from_edges(
        std::vector<std::pair<std::string, std::string>>{{"u", "n1"}});
    NeighborLists lists;
    lists["u"] = {{"n1", 0.9}, {"n2", 0.8}, {"n3", 0.7}};
    const PairSample s = sample_pairs(f, g, lists, SampleCriterion::most_active, 2, 0);
    REQUIRE(s.pairs.size() == 2);
    CHECK(s.pairs[0] == std::pair<std::string, std::string>{"u", "n1"});
    CHECK(s.pairs[1] == std::pair<std::string, std::string>{"u", "n2"});
    CHECK_FALSE(s.short_sample);
}

TEST_CASE("inactive candidates are skipped and exhaustion flags a short sample") {
    const Folksonomy f = active_users({"u"});
    const SocialGraph g;
    NeighborLists lists;
    lists["u"] = {{"n1", 0.9}, {"n2", 0.8}};  // both inactive
    const PairSample s = sample_pairs(f, g, lists, SampleCriterion::most_active, 5, 0);
    CHECK(s.pairs.empty());
    CHECK(s.short_sample);
}

TEST_CASE("random criterion is deterministic under a seed") {
    const Folksonomy f = active_users({"a", "b", "c", "d", "e", "f"});
    const SocialGraph g;
    NeighborLists lists;
    for (const std::string u : {"a", "b", "c"})
        lists[u] = {{"d", 0.5}, {"e", 0.4}, {"f", 0.3}};
    const PairSample s1 = sample_pairs(f, g, lists, SampleCriterion::random_order, 4, 99);
    const PairSample s2 = sample_pairs(f, g, lists, SampleCriterion::random_order, 4, 99);
    CHECK(s1.pairs == s2.pairs);
}

TEST_CASE("no unordered pair is emitted twice") {
    const Folksonomy f = active_users({"a", "b"});
    const SocialGraph g;
    NeighborLists lists;
    lists["a"] = {{"b", 0.5}};
    lists["b"] = {{"a", 0.5}};
    const PairSample s = sample_pairs(f, g, lists, SampleCriterion::most_active, 10, 0);
    CHECK(s.pairs.size() == 1);
}

TEST_CASE("most-connected ordering uses the graph") {
    const Folksonomy f = active_users({"lo", "hi", "x", "y", "z"});
    const SocialGraph g = SocialGraph::from_edges(std::vector<std::pair<std::string, std::string>>{
        {"hi", "x"}, {"hi", "y"}, {"hi", "z"}, {"lo", "x"}});
    NeighborLists lists;
    lists["lo"] = {{"x", 0.1}};
    lists["hi"] = {{"y", 0.2}};
    const PairSample s = sample_pairs(f, g, lists, SampleCriterion::most_connected, 1, 0);
    REQUIRE(s.pairs.size() == 1);
    CHECK(s.pairs[0].first == "hi");
}

TEST_CASE("comparison table carries a baseline row and is sorted by improvement") {
    const Folksonomy f = Folksonomy::from_annotations(std::vector<Annotation>{
        {"a", "i1", "t1"}, {"a", "i2", "t2"}, {"b", "i1", "t1"}, {"b", "i2", "t2"},
        {"c", "i3", "t3"}, {"d", "i4", "t4"}});
    const SocialGraph g = SocialGraph::from_edges(
        std::vector<std::pair<std::string, std::string>>{{"a", "b"}});
    const TagProbabilityTable probs = tag_probabilities(f);

    PairSample sample;
    sample.pairs = {{"a", "b"}, {"a", "c"}, {"b", "d"}};
    BaselineScores baseline;
    baseline.set("a", "b", 0.2);
    baseline.set("a", "c", 0.9);  // baseline ranks a non-edge first
    baseline.set("b", "d", 0.1);

    const std::vector<MeasureSpec> specs{MeasureSpec::parse("cosine:distributional:items")};
    const auto rows = compare_measures(f, g, probs, sample, specs, baseline);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].spec == "cosine:distributional:items");
    CHECK(rows[0].auc == doctest::Approx(1.0));
    CHECK(rows[0].rel_improvement > 0.0);
    CHECK(rows[1].spec == "baseline");
    CHECK(rows[1].rel_improvement == 0.0);
}

TEST_CASE("missing baseline score names the pair") {
    const Folksonomy f = active_users({"a", "b"});
    const SocialGraph g = SocialGraph::from_edges(
        std::vector<std::pair<std::string, std::string>>{{"a", "b"}});
    const TagProbabilityTable probs = tag_probabilities(f);
    PairSample sample;
    sample.pairs = {{"a", "b"}};
    const std::vector<MeasureSpec> specs;
    const BaselineScores empty;
    CHECK_THROWS_WITH_AS(compare_measures(f, g, probs, sample, specs, empty),
                         doctest::Contains("(a, b)"), DataError);
}

} // TEST_SUITE
