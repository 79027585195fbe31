#include "facet/metrics.h"

#include <algorithm>
#include <random>

#include "doctest.h"
#include "facet/error.h"
#include "support/fixtures.h"

using namespace facet;
using metrics::FacetScope;

namespace {

// Every subset of {0..doc_len-1} with size <= k.
std::vector<std::vector<int>> all_subsets(int doc_len, int k) {
    std::vector<std::vector<int>> out;
    for (unsigned mask = 0; mask < (1u << doc_len); ++mask) {
        if (__builtin_popcount(mask) > k) continue;
        std::vector<int> subset;
        for (int i = 0; i < doc_len; ++i)
            if (mask & (1u << i)) subset.push_back(i);
        out.push_back(std::move(subset));
    }
    return out;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("worked example: FAR 1/2, SAR 3/4") {
    corpus::Sample s = testsupport::two_facet_sample();
    std::vector<int> e = {0, 1, 2};
    CHECK(metrics::far(s, e, FacetScope::MappableOnly) == doctest::Approx(0.5));
    CHECK(metrics::sar(s, e) == doctest::Approx(0.75));

    // full extraction is perfect under the mappable scope
    std::vector<int> all = {0, 1, 2, 3};
    CHECK(metrics::far(s, all, FacetScope::MappableOnly) == doctest::Approx(1.0));
    CHECK(metrics::sar(s, all) == doctest::Approx(1.0));
    CHECK(metrics::sar(s, {}) == doctest::Approx(0.0));

    CHECK_THROWS_AS(metrics::far(s, {9}, FacetScope::MappableOnly), ValidationError);
}

TEST_CASE("scope handling for unmappable facets") {
    corpus::Sample s = corpus::make_sample("x", {"a b", "c d"}, {"a b", "zz"},
                                           {{{0}}, {}});
    CHECK(metrics::far(s, {0}, FacetScope::MappableOnly) == doctest::Approx(1.0));
    CHECK(metrics::far(s, {0}, FacetScope::AllFacets) == doctest::Approx(0.5));

    corpus::Sample only_high = corpus::make_sample("y", {"a"}, {"zz"}, {{}});
    CHECK(metrics::far(only_high, {0}, FacetScope::MappableOnly) == doctest::Approx(0.0));
    CHECK_THROWS_AS(metrics::sar(only_high, {0}), ValidationError);
}

TEST_CASE("redundancy") {
    corpus::Sample s = testsupport::two_facet_sample();
    CHECK(metrics::redundancy(s, {0, 1, 2}));   // groups {0} and {2} of facet 0
    CHECK(!metrics::redundancy(s, {0, 1}));     // only {0} covered for facet 0

    corpus::Sample one_group = corpus::make_sample("x", {"a", "b"}, {"a"}, {{{0, 1}}});
    CHECK(!metrics::redundancy(one_group, {0, 1}));
}

TEST_CASE("oracle_extract on the worked example") {
    corpus::Sample s = testsupport::two_facet_sample();
    auto [set1, far1] = metrics::oracle_extract(s, 1, FacetScope::MappableOnly);
    CHECK(far1 == doctest::Approx(0.5));
    CHECK(set1 == std::vector<int>{0});  // lexicographic tie-break

    auto [set2, far2] = metrics::oracle_extract(s, 2, FacetScope::MappableOnly);
    CHECK(far2 == doctest::Approx(1.0));
    CHECK(set2 == std::vector<int>{1, 3});

    auto [set9, far9] = metrics::oracle_extract(s, 9, FacetScope::MappableOnly);
    CHECK(far9 == doctest::Approx(1.0));

    corpus::Sample empty = corpus::make_sample("e", {"a"}, {"zz"}, {{}});
    auto [set0, far0] = metrics::oracle_extract(empty, 3, FacetScope::MappableOnly);
    CHECK(set0.empty());
    CHECK(far0 == doctest::Approx(0.0));
}

TEST_CASE("oracle dominance against brute force") {
    std::mt19937 rng(12345);
    for (int iter = 0; iter < 150; ++iter) {
        corpus::Sample s = testsupport::random_sample(rng, 10);
        int doc_len = static_cast<int>(s.document.size());
        for (int k = 1; k <= 3; ++k) {
            auto [best_set, best_far] = metrics::oracle_extract(s, k, FacetScope::MappableOnly);
            CHECK(static_cast<int>(best_set.size()) <= k);
            double brute_best = 0.0;
            for (const auto& subset : all_subsets(doc_len, k))
                brute_best = std::max(
                    brute_best, metrics::far(s, subset, FacetScope::MappableOnly));
            CHECK(best_far == doctest::Approx(brute_best));
        }
    }
}

TEST_CASE("lead_k") {
    corpus::Sample s = testsupport::two_facet_sample();
    CHECK(metrics::lead_k(s, 3) == std::vector<int>{0, 1, 2});
    CHECK(metrics::lead_k(s, 9) == std::vector<int>{0, 1, 2, 3});
    CHECK_THROWS_AS(metrics::lead_k(s, 0), ValidationError);
}

TEST_CASE("support_prf") {
    corpus::Sample s = testsupport::two_facet_sample();  // gold union {0,1,2,3}
    metrics::Prf prf = metrics::support_prf({{"s1", {0, 0, 0}}}, {s});
    // duplicate predictions collapse to the single index 0
    CHECK(prf.precision == doctest::Approx(1.0));
    CHECK(prf.recall == doctest::Approx(0.25));

    corpus::Sample wide = corpus::make_sample(
        "w", {"a", "b", "c", "d", "e"}, {"a"}, {{{0}, {1}, {2}, {3}}});
    metrics::Prf hand = metrics::support_prf({{"w", {0, 4}}}, {wide});
    CHECK(hand.precision == doctest::Approx(0.5));
    CHECK(hand.recall == doctest::Approx(0.25));
    CHECK(hand.f1 == doctest::Approx(1.0 / 3.0));

    metrics::Prf perfect = metrics::support_prf({{"s1", {0, 1, 2, 3}}}, {s});
    CHECK(perfect.precision == doctest::Approx(1.0));
    CHECK(perfect.recall == doctest::Approx(1.0));
    CHECK(perfect.f1 == doctest::Approx(1.0));

    CHECK_THROWS_AS(metrics::support_prf({{"nope", {0}}}, {s}), ValidationError);
}

TEST_CASE("fam_jaccard") {
    corpus::Sample s = testsupport::two_facet_sample();
    CHECK(metrics::fam_jaccard(s.fams, s.fams) == doctest::Approx(1.0));

    std::vector<corpus::Fam> a = {{{corpus::SupportGroup{{0, 1}}}, corpus::FacetCategory::Low}};
    std::vector<corpus::Fam> b = {{{corpus::SupportGroup{{1, 2}}}, corpus::FacetCategory::Low}};
    CHECK(metrics::fam_jaccard(a, b) == doctest::Approx(1.0 / 3.0));

    std::vector<corpus::Fam> disjoint = {
        {{corpus::SupportGroup{{5}}}, corpus::FacetCategory::Low}};
    CHECK(metrics::fam_jaccard(a, disjoint) == doctest::Approx(0.0));

    CHECK_THROWS_AS(metrics::fam_jaccard(a, s.fams), ValidationError);
}

TEST_CASE("monotonicity and support locality") {
    std::mt19937 rng(777);
    for (int iter = 0; iter < 300; ++iter) {
        corpus::Sample s = testsupport::random_sample(rng, 12);
        int doc_len = static_cast<int>(s.document.size());
        std::vector<int> e = testsupport::random_extraction(rng, doc_len, doc_len);
        std::vector<int> bigger = e;
        for (int i = 0; i < doc_len; ++i)
            if (std::find(bigger.begin(), bigger.end(), i) == bigger.end() &&
                (rng() & 1)) {
                bigger.push_back(i);
            }
        std::sort(bigger.begin(), bigger.end());

        for (FacetScope scope : {FacetScope::MappableOnly, FacetScope::AllFacets}) {
            CHECK(metrics::far(s, e, scope) <= metrics::far(s, bigger, scope) + 1e-12);
        }
        auto cov_small = metrics::coverage(s, e, FacetScope::MappableOnly);
        auto cov_big = metrics::coverage(s, bigger, FacetScope::MappableOnly);
        CHECK(cov_small.sar <= cov_big.sar + 1e-12);

        // adding a non-support sentence changes neither FAR nor SAR
        std::vector<int> support = s.support_union();
        for (int i = 0; i < doc_len; ++i) {
            if (std::binary_search(support.begin(), support.end(), i)) continue;
            if (std::find(e.begin(), e.end(), i) != e.end()) continue;
            std::vector<int> extended = e;
            extended.push_back(i);
            auto cov_ext = metrics::coverage(s, extended, FacetScope::MappableOnly);
            CHECK(cov_ext.far == doctest::Approx(cov_small.far));
            CHECK(cov_ext.sar == doctest::Approx(cov_small.sar));
            break;
        }
    }
}

TEST_CASE("support_prf recall equals pooled SAR") {
    std::mt19937 rng(909);
    std::vector<corpus::Sample> dataset;
    std::map<std::string, std::vector<int>> predictions;
    long hit = 0, total = 0;
    for (int i = 0; i < 40; ++i) {
        corpus::Sample s = testsupport::random_sample(rng, 10);
        if (s.support_union().empty()) continue;
        std::vector<int> e = testsupport::random_extraction(
            rng, static_cast<int>(s.document.size()), 4);
        auto cov = metrics::coverage(s, e, metrics::FacetScope::MappableOnly);
        hit += cov.support_hit;
        total += cov.support_total;
        predictions[s.id] = e;
        dataset.push_back(std::move(s));
    }
    REQUIRE(total > 0);
    metrics::Prf prf = metrics::support_prf(predictions, dataset);
    CHECK(prf.recall == doctest::Approx(static_cast<double>(hit) / total));
}

TEST_CASE("evaluate_system") {
    corpus::Sample s = testsupport::two_facet_sample();
    corpus::Sample t = corpus::make_sample("s2", {"alpha beta", "gamma delta"},
                                           {"alpha beta"}, {{{0}}});
    std::vector<corpus::Sample> dataset = {s, t};

    corpus::SystemOutput everything;
    everything.name = "all";
    everything.extractions["s1"] = {0, 1, 2, 3};
    everything.extractions["s2"] = {0, 1};
    metrics::ScoreReport report = metrics::evaluate_system(dataset, everything);
    CHECK(report.aggregate.far == doctest::Approx(1.0));
    CHECK(report.aggregate.sar == doctest::Approx(1.0));
    CHECK(report.per_sample[0].coverage.redundant);
    CHECK(report.aggregate.redundancy_rate == doctest::Approx(0.5));

    // jobs must not change anything
    metrics::EvalOptions parallel;
    parallel.jobs = 8;
    metrics::ScoreReport report8 = metrics::evaluate_system(dataset, everything, parallel);
    CHECK(report8.aggregate.far == doctest::Approx(report.aggregate.far));
    CHECK(report8.aggregate.rouge1.f1 == doctest::Approx(report.aggregate.rouge1.f1));

    // truncation to the first k indices
    metrics::EvalOptions trunc;
    trunc.truncate_k = 2;
    metrics::ScoreReport t2 = metrics::evaluate_system(dataset, everything, trunc);
    CHECK(t2.per_sample[0].extracted_count == 2);
    CHECK(t2.per_sample[0].coverage.far == doctest::Approx(0.5));  // E = {0,1}

    corpus::SystemOutput incomplete;
    incomplete.name = "partial";
    incomplete.extractions["s1"] = {0};
    CHECK_THROWS_AS(metrics::evaluate_system(dataset, incomplete), ValidationError);

    // a system extracting the reference verbatim has ROUGE F1 = 1 on s2
    corpus::SystemOutput exact;
    exact.name = "exact";
    exact.extractions["s1"] = {0};
    exact.extractions["s2"] = {0};
    metrics::ScoreReport re = metrics::evaluate_system(dataset, exact);
    CHECK(re.per_sample[1].rouge1.f1 == doctest::Approx(1.0));
    CHECK(re.per_sample[1].rougeL.f1 == doctest::Approx(1.0));
}

}  // TEST_SUITE
