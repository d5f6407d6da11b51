#include <doctest.h>

#include <cmath>
#include <vector>

#include "tagnet/alignment.hpp"
#include "tagnet/errors.hpp"
#include "tagnet/rng.hpp"
#include "tagnet/similarity.hpp"

#include "oracles.hpp"

using namespace tagnet;

namespace {

// the 4-user fixture used across several cases:
// vocabularies u1={a,c}, u2={a,d}, u3={c}, u4={c,d}, one item per tag use
const std::vector<Annotation> kFixture{
    {"u1", "i1", "a"}, {"u1", "i2", "c"}, {"u2", "i1", "a"}, {"u2", "i3", "d"},
    {"u3", "i2", "c"}, {"u4", "i2", "c"}, {"u4", "i3", "d"},
};

std::vector<oracle::Triple> to_oracle(const std::vector<Annotation>& annotations) {
    std::vector<oracle::Triple> t;
    for (const auto& a : annotations) t.push_back({a.user, a.item, a.tag});
    return t;
}

std::vector<Annotation> random_folksonomy(Rng& rng, std::size_t users, std::size_t tags,
                                          std::size_t items, std::size_t triples) {
    std::vector<Annotation> a;
    for (std::size_t i = 0; i < triples; ++i)
        a.push_back({"u" + std::to_string(rng.index(users)),
                     "i" + std::to_string(rng.index(items)),
                     "t" + std::to_string(rng.index(tags))});
    return a;
}

} // namespace

TEST_SUITE("similarity") {

TEST_CASE("measure spec parsing round-trips") {
    const MeasureSpec spec = MeasureSpec::parse("mip:distributional:items");
    CHECK(spec.kernel == Kernel::mip);
    CHECK(spec.aggregation == Aggregation::distributional);
    CHECK(spec.projection == Projection::onto_items);
    CHECK(spec.str() == "mip:distributional:items");
    CHECK(MeasureSpec::all().size() == 24);
    CHECK(MeasureSpec::collaborative().size() == 12);
    CHECK_THROWS_AS(MeasureSpec::parse("mip:items"), DomainError);
    CHECK_THROWS_AS(MeasureSpec::parse("blend:distributional:items"), DomainError);
}

TEST_CASE("tag probability table") {
    const Folksonomy f = Folksonomy::from_annotations(kFixture);
    const TagProbabilityTable probs = tag_probabilities(f);
    CHECK(probs.p_tag(*f.find_tag("a")) == doctest::Approx(0.5));
    CHECK(probs.p_tag(*f.find_tag("c")) == doctest::Approx(0.75));
    CHECK(probs.p_tag(*f.find_tag("d")) == doctest::Approx(0.5));
    // i1 is annotated by u1 and u2, both with tag a
    CHECK(probs.p_item(*f.find_item("i1")) == doctest::Approx(0.5));
    CHECK(probs.p_tag_given_item(*f.find_tag("a"), *f.find_item("i1")) == doctest::Approx(1.0));
    CHECK_THROWS_AS(tag_probabilities(Folksonomy{}), DomainError);
}

TEST_CASE("identical users score 1 under distributional cosine") {
    const Folksonomy f = Folksonomy::from_annotations(std::vector<Annotation>{
        {"u", "i1", "a"}, {"u", "i2", "b"}, {"v", "i1", "a"}, {"v", "i2", "b"}});
    const TagProbabilityTable probs = tag_probabilities(f);
    for (const char* spec : {"cosine:distributional:items", "cosine:distributional:tags"})
        CHECK(similarity(MeasureSpec::parse(spec), f, probs, "u", "v") == doctest::Approx(1.0));
}

TEST_CASE("distributional MIP on the fixture") {
    const Folksonomy f = Folksonomy::from_annotations(kFixture);
    const TagProbabilityTable probs = tag_probabilities(f);
    const double s =
        similarity(MeasureSpec::parse("mip:distributional:items"), f, probs, "u1", "u2");
    // shared rarest tag has p = 0.5, as rare as each user's own rarest
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("distributional jaccard on the fixture") {
    const Folksonomy f = Folksonomy::from_annotations(kFixture);
    const TagProbabilityTable probs = tag_probabilities(f);
    const double s =
        similarity(MeasureSpec::parse("jaccard:distributional:items"), f, probs, "u1", "u4");
    CHECK(s == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("clone pairs score 1 under the normalized kernels") {
    // u and v carry identical annotations
    const Folksonomy f = Folksonomy::from_annotations(std::vector<Annotation>{
        {"u", "i1", "a"}, {"u", "i2", "a"}, {"u", "i2", "b"},
        {"v", "i1", "a"}, {"v", "i2", "a"}, {"v", "i2", "b"},
        {"w", "i3", "c"}});
    const TagProbabilityTable probs = tag_probabilities(f);
    for (const char* kernel : {"cosine", "overlap", "dice", "jaccard", "mip"})
        for (const char* proj : {"items", "tags"}) {
            const auto spec =
                MeasureSpec::parse(std::string(kernel) + ":distributional:" + proj);
            CHECK(similarity(spec, f, probs, "u", "v") == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("distributional cosine over tag space equals pair alignment sigma") {
    Rng rng(404);
    const auto annotations = random_folksonomy(rng, 8, 10, 10, 50);
    const Folksonomy f = Folksonomy::from_annotations(annotations);
    const TagProbabilityTable probs = tag_probabilities(f);
    const GroupMembership m;
    const MeasureSpec spec = MeasureSpec::parse("cosine:distributional:items");
    for (UserId a = 0; a < f.known_user_count(); ++a)
        for (UserId b = a + 1; b < f.known_user_count(); ++b) {
            if (!f.is_active(a) || !f.is_active(b)) continue;
            const double sim = similarity_by_id(spec, f, probs, a, b);
            const double sigma = pair_alignment(f, m, f.user_name(a), f.user_name(b)).sigma_tags;
            CHECK(sim == doctest::Approx(sigma).epsilon(1e-12));
        }
}

TEST_CASE("set kernel ordering overlap >= dice >= jaccard") {
    Rng rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const auto annotations = random_folksonomy(rng, 6, 10, 10, 30);
        const Folksonomy f = Folksonomy::from_annotations(annotations);
        if (f.user_count() < 2) continue;
        const TagProbabilityTable probs = tag_probabilities(f);
        for (UserId a = 0; a < f.known_user_count(); ++a) {
            for (UserId b = a + 1; b < f.known_user_count(); ++b) {
                if (!f.is_active(a) || !f.is_active(b)) continue;
                for (const char* proj : {"items", "tags"}) {
                    const double ov = similarity_by_id(
                        MeasureSpec::parse(std::string("overlap:distributional:") + proj), f,
                        probs, a, b);
                    const double di = similarity_by_id(
                        MeasureSpec::parse(std::string("dice:distributional:") + proj), f, probs,
                        a, b);
                    const double ja = similarity_by_id(
                        MeasureSpec::parse(std::string("jaccard:distributional:") + proj), f,
                        probs, a, b);
                    CHECK(ov >= di - 1e-15);
                    CHECK(di >= ja - 1e-15);
                }
            }
        }
    }
}

TEST_CASE("all 24 measures are symmetric and zero on disjoint users") {
    const Folksonomy f = Folksonomy::from_annotations(std::vector<Annotation>{
        {"u", "i1", "a"}, {"u", "i2", "b"}, {"v", "i3", "c"}, {"v", "i4", "d"},
        {"w", "i1", "a"}, {"w", "i3", "c"}});
    const TagProbabilityTable probs = tag_probabilities(f);
    for (const MeasureSpec& spec : MeasureSpec::all()) {
        CHECK(similarity(spec, f, probs, "u", "v") == doctest::Approx(0.0));
        CHECK(similarity(spec, f, probs, "u", "w") ==
              doctest::Approx(similarity(spec, f, probs, "w", "u")).epsilon(1e-12));
    }
}

TEST_CASE("inactive or self pairs are rejected") {
    Folksonomy f = Folksonomy::from_annotations(std::vector<Annotation>{{"u", "i", "t"}});
    const UserId ghost = f.intern_user("ghost");  // known but inactive
    const TagProbabilityTable probs = tag_probabilities(f);
    const MeasureSpec spec = MeasureSpec::parse("cosine:distributional:items");
    CHECK_THROWS_AS(similarity(spec, f, probs, "u", "u"), DomainError);
    CHECK_THROWS_AS(similarity_by_id(spec, f, probs, *f.find_user("u"), ghost), DomainError);
    CHECK_THROWS_AS(similarity(spec, f, probs, "u", "nosuch"), NotFoundError);
}

TEST_CASE("measures match the brute-force oracle on random folksonomies") {
    // trimmed version of the acceptance sweep for fast unit feedback
    Rng rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const auto annotations =
            random_folksonomy(rng, 2 + rng.index(8), 2 + rng.index(13), 2 + rng.index(13),
                              5 + rng.index(40));
        const Folksonomy f = Folksonomy::from_annotations(annotations);
        if (f.user_count() < 2) continue;
        const TagProbabilityTable probs = tag_probabilities(f);
        const auto triples = to_oracle(annotations);

        std::vector<UserId> active;
        for (UserId u = 0; u < f.known_user_count(); ++u)
            if (f.is_active(u)) active.push_back(u);
        const UserId a = active[rng.index(active.size())];
        UserId b = a;
        while (b == a) b = active[rng.index(active.size())];

        for (const MeasureSpec& spec : MeasureSpec::all()) {
            const double mine = similarity_by_id(spec, f, probs, a, b);
            const double ref = oracle::similarity(
                std::string(spec.str()).substr(0, spec.str().find(':')),
                spec.aggregation == Aggregation::distributional ? "distributional"
                                                                : "collaborative",
                spec.projection == Projection::onto_items ? "items" : "tags", triples,
                f.user_name(a), f.user_name(b));
            CHECK(mine == doctest::Approx(ref).epsilon(1e-12));
        }
    }
}

TEST_CASE("batch scores equal per-pair calls and preserve order") {
    const Folksonomy f = Folksonomy::from_annotations(kFixture);
    const TagProbabilityTable probs = tag_probabilities(f);
    const MeasureSpec spec = MeasureSpec::parse("dice:collaborative:items");
    const std::vector<std::pair<std::string, std::string>> pairs{
        {"u1", "u2"}, {"u1", "u4"}, {"u3", "u4"}};
    const auto scores = batch_similarity(spec, f, probs, pairs);
    REQUIRE(scores.size() == 3);
    for (std::size_t i = 0; i < pairs.size(); ++i)
        CHECK(scores[i] == similarity(spec, f, probs, pairs[i].first, pairs[i].second));
    CHECK(batch_similarity(spec, f, probs, {}).empty());

    const std::vector<std::pair<std::string, std::string>> bad{{"u1", "nosuch"}};
    CHECK_THROWS_AS(batch_similarity(spec, f, probs, bad), DataError);
}

TEST_CASE("index construction matches direct scores") {
    Folksonomy f = Folksonomy::from_annotations(kFixture);
    const TagProbabilityTable probs = tag_probabilities(f);
    for (const MeasureSpec& spec : MeasureSpec::collaborative()) {
        Folksonomy copy = f;
        const SimilarityIndex index(copy, spec);
        for (UserId a = 0; a < f.known_user_count(); ++a)
            for (UserId b = a + 1; b < f.known_user_count(); ++b)
                CHECK(index.score_by_id(a, b) ==
                      doctest::Approx(similarity_by_id(spec, f, probs, a, b)).epsilon(1e-12));
    }
}

TEST_CASE("index rejects distributional specs") {
    Folksonomy f = Folksonomy::from_annotations(kFixture);
    CHECK_THROWS_AS(SimilarityIndex(f, MeasureSpec::parse("mip:distributional:items")),
                    StateError);
}

TEST_CASE("add then remove restores the original index state") {
    for (const char* spec_text : {"matching:collaborative:items", "mip:collaborative:tags"}) {
        Folksonomy f = Folksonomy::from_annotations(kFixture);
        SimilarityIndex index(f, MeasureSpec::parse(spec_text));
        std::vector<std::vector<double>> before;
        for (UserId a = 0; a < f.known_user_count(); ++a)
            for (UserId b = a + 1; b < f.known_user_count(); ++b)
                before.push_back({static_cast<double>(a), static_cast<double>(b),
                                  index.score_by_id(a, b)});

        const AnnotationDelta add{AnnotationDelta::Op::add, {"u3", "i1", "a"}};
        const AnnotationDelta rem{AnnotationDelta::Op::remove, {"u3", "i1", "a"}};
        index.apply_delta(add);
        index.apply_delta(rem);

        std::size_t row = 0;
        for (UserId a = 0; a < f.known_user_count(); ++a)
            for (UserId b = a + 1; b < f.known_user_count(); ++b)
                CHECK(index.score_by_id(a, b) == before[row++][2]);
    }
}

TEST_CASE("deltas keep the index equal to a rebuild") {
    Rng rng(501);
    const auto annotations = random_folksonomy(rng, 8, 8, 8, 40);
    for (const MeasureSpec& spec : MeasureSpec::collaborative()) {
        Folksonomy f = Folksonomy::from_annotations(annotations);
        SimilarityIndex index(f, spec);
        Rng drng(900 + static_cast<std::uint64_t>(spec.kernel));
        for (int step = 0; step < 60; ++step) {
            // draw a random consistent delta
            const std::string user = "u" + std::to_string(drng.index(8));
            const std::string item = "i" + std::to_string(drng.index(8));
            const std::string tag = "t" + std::to_string(drng.index(8));
            const auto uid = f.find_user(user);
            const auto iid = f.find_item(item);
            const auto tid = f.find_tag(tag);
            const bool present =
                uid && iid && tid && f.contains(*uid, *iid, *tid);
            const AnnotationDelta delta{
                present ? AnnotationDelta::Op::remove : AnnotationDelta::Op::add,
                {user, item, tag}};
            index.apply_delta(delta);

            const TagProbabilityTable probs = tag_probabilities(f);
            for (UserId a = 0; a < f.known_user_count(); ++a) {
                for (UserId b = a + 1; b < f.known_user_count(); ++b) {
                    if (!f.is_active(a) || !f.is_active(b)) {
                        CHECK(index.score_by_id(a, b) == doctest::Approx(0.0));
                        continue;
                    }
                    CHECK(index.score_by_id(a, b) ==
                          doctest::Approx(similarity_by_id(spec, f, probs, a, b))
                              .epsilon(1e-9));
                }
            }
        }
    }
}

TEST_CASE("locality: unrelated pairs keep their totals") {
    Folksonomy f = Folksonomy::from_annotations(kFixture);
    SimilarityIndex index(f, MeasureSpec::parse("matching:collaborative:items"));
    const UserId u1 = *f.find_user("u1");
    const UserId u4 = *f.find_user("u4");
    const double before = index.score_by_id(u1, u4);
    // i9 is not annotated by u1 or u4
    index.apply_delta({AnnotationDelta::Op::add, {"u2", "i9", "a"}});
    CHECK(index.score_by_id(u1, u4) == before);
}

TEST_CASE("inconsistent deltas raise") {
    Folksonomy f = Folksonomy::from_annotations(kFixture);
    SimilarityIndex index(f, MeasureSpec::parse("overlap:collaborative:items"));
    CHECK_THROWS_AS(index.apply_delta({AnnotationDelta::Op::remove, {"u1", "i9", "zz"}}),
                    StateError);
    CHECK_THROWS_AS(index.apply_delta({AnnotationDelta::Op::add, {"u1", "i1", "a"}}), StateError);
}

} // TEST_SUITE
