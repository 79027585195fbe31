#include "facet/similarity.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "facet/error.h"
#include "support/fixtures.h"

using namespace facet;
using rouge::TokenSeq;

TEST_SUITE("similarity") {

TEST_CASE("fit_tfidf idf formula") {
    similarity::TfIdfModel model = similarity::fit_tfidf({{"a", "b"}, {"a", "c"}});
    // idf(a) = ln(3/3)+1, idf(b) = idf(c) = ln(3/2)+1
    CHECK(model.idf[model.vocabulary.at("a")] == doctest::Approx(1.0));
    CHECK(model.idf[model.vocabulary.at("b")] ==
          doctest::Approx(std::log(1.5) + 1.0).epsilon(1e-9));
    CHECK(model.idf[model.vocabulary.at("c")] ==
          doctest::Approx(std::log(1.5) + 1.0).epsilon(1e-9));

    // a token in every sentence carries the smallest idf
    double min_idf = *std::min_element(model.idf.begin(), model.idf.end());
    CHECK(model.idf[model.vocabulary.at("a")] == doctest::Approx(min_idf));

    CHECK_THROWS_AS(similarity::fit_tfidf({}), ValidationError);
    CHECK_THROWS_AS(similarity::fit_tfidf({{}, {}}), ValidationError);
}

TEST_CASE("tfidf_cosine") {
    similarity::TfIdfModel model =
        similarity::fit_tfidf({{"a", "b"}, {"a", "c"}, {"d", "e"}});
    CHECK(similarity::tfidf_cosine(model, {"a", "b"}, {"a", "b"}) == doctest::Approx(1.0));
    CHECK(similarity::tfidf_cosine(model, {"a", "b"}, {"d", "e"}) == doctest::Approx(0.0));
    // out-of-vocabulary tokens contribute nothing
    CHECK(similarity::tfidf_cosine(model, {"a", "zzz"}, {"a"}) == doctest::Approx(1.0));
    // all-OOV vector scores 0
    CHECK(similarity::tfidf_cosine(model, {"zzz"}, {"a"}) == doctest::Approx(0.0));

    // doubling the token counts leaves the cosine unchanged
    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
        TokenSeq a = testsupport::random_tokens(rng, 6, 4);
        TokenSeq b = testsupport::random_tokens(rng, 6, 4);
        if (a.empty() || b.empty()) continue;
        similarity::TfIdfModel m = similarity::fit_tfidf({a, b});
        TokenSeq doubled = a;
        doubled.insert(doubled.end(), a.begin(), a.end());
        CHECK(similarity::tfidf_cosine(m, a, b) ==
              doctest::Approx(similarity::tfidf_cosine(m, doubled, b)).epsilon(1e-9));
        CHECK(similarity::tfidf_cosine(m, a, b) ==
              doctest::Approx(similarity::tfidf_cosine(m, b, a)).epsilon(1e-12));
    }
}

TEST_CASE("score dispatch") {
    TokenSeq ref = rouge::tokenize("Three people in Kansas have died from a listeria outbreak.");
    TokenSeq cand = rouge::tokenize(
        "But they did not appear identical to listeria samples taken from patients "
        "infected in the Kansas outbreak.");
    CHECK(similarity::score(similarity::Measure::Rouge1F1, cand, ref) ==
          doctest::Approx(0.370).epsilon(0.01));

    TokenSeq same = {"x", "y", "z"};
    CHECK(similarity::score(similarity::Measure::RougeLRecall, same, same) ==
          doctest::Approx(1.0));
    CHECK(similarity::score(similarity::Measure::RougeAvgF1, same, same) ==
          doctest::Approx(1.0));

    CHECK_THROWS_AS(similarity::score(similarity::Measure::TfIdfCosine, same, same),
                    ValidationError);
    similarity::TfIdfModel model = similarity::fit_tfidf({same, {"q"}});
    CHECK(similarity::score(similarity::Measure::TfIdfCosine, same, {"q"}, &model) ==
          doctest::Approx(0.0));
}

TEST_CASE("measure names round trip") {
    using similarity::Measure;
    for (Measure m : {Measure::Rouge1F1, Measure::Rouge2F1, Measure::RougeLRecall,
                      Measure::RougeLPrecision, Measure::RougeLF1, Measure::RougeAvgF1,
                      Measure::TfIdfCosine})
        CHECK(similarity::measure_from_string(similarity::to_string(m)) == m);
    CHECK(similarity::measure_from_string("rouge_avg_f1") == Measure::RougeAvgF1);
    CHECK_THROWS_AS(similarity::measure_from_string("bleu"), ValidationError);
}

TEST_CASE("all scores stay in range on random input") {
    std::mt19937 rng(99);
    for (int i = 0; i < 100; ++i) {
        TokenSeq a = testsupport::random_tokens(rng, 8, 5);
        TokenSeq b = testsupport::random_tokens(rng, 8, 5);
        std::vector<rouge::TokenSeq> corpus_sents = {a, b, {"pad"}};
        similarity::TfIdfModel model = similarity::fit_tfidf(corpus_sents);
        for (auto m : {similarity::Measure::Rouge1F1, similarity::Measure::Rouge2F1,
                       similarity::Measure::RougeLRecall,
                       similarity::Measure::RougeLPrecision,
                       similarity::Measure::RougeLF1, similarity::Measure::RougeAvgF1,
                       similarity::Measure::TfIdfCosine}) {
            double v = similarity::score(m, a, b, &model);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

}  // TEST_SUITE
