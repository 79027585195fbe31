#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "facet/rouge.h"

namespace facet::similarity {

// Sentence-level TF-IDF: each sentence of the fitted corpus counts as one
// pseudo-document. idf(t) = ln((1 + S) / (1 + df(t))) + 1.
struct TfIdfModel {
    std::unordered_map<std::string, int> vocabulary;  // token -> dense index
    std::vector<double> idf;
};

enum class Measure {
    Rouge1F1,
    Rouge2F1,
    RougeLRecall,
    RougeLPrecision,
    RougeLF1,
    RougeAvgF1,
    TfIdfCosine,
};

Measure measure_from_string(std::string_view name);
std::string to_string(Measure m);

TfIdfModel fit_tfidf(const std::vector<rouge::TokenSeq>& sentences);

// Cosine of the two raw-count x idf vectors; 0 if either vector is all zero.
// Out-of-vocabulary tokens contribute nothing.
double tfidf_cosine(const TfIdfModel& model, const rouge::TokenSeq& a,
                    const rouge::TokenSeq& b);

// Uniform dispatch over every similarity used by the labelers. The model is
// required only for Measure::TfIdfCosine.
double score(Measure measure, const rouge::TokenSeq& candidate,
             const rouge::TokenSeq& reference, const TfIdfModel* model = nullptr);

}  // namespace facet::similarity
