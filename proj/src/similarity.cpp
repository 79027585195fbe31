#include "facet/similarity.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "facet/error.h"

namespace facet::similarity {

namespace {

std::string canonical(std::string_view name) {
    std::string out;
    for (char c : name) {
        if (c == '_' || c == '-') continue;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

}  // namespace

Measure measure_from_string(std::string_view name) {
    std::string c = canonical(name);
    if (c == "rouge1f1" || c == "rouge1") return Measure::Rouge1F1;
    if (c == "rouge2f1" || c == "rouge2") return Measure::Rouge2F1;
    if (c == "rougelrecall") return Measure::RougeLRecall;
    if (c == "rougelprecision") return Measure::RougeLPrecision;
    if (c == "rougelf1" || c == "rougel") return Measure::RougeLF1;
    if (c == "rougeavgf1" || c == "rougeavg") return Measure::RougeAvgF1;
    if (c == "tfidf" || c == "tfidfcosine") return Measure::TfIdfCosine;
    throw ValidationError("unknown similarity measure: \"" + std::string(name) + "\"");
}

std::string to_string(Measure m) {
    switch (m) {
        case Measure::Rouge1F1: return "rouge1-f1";
        case Measure::Rouge2F1: return "rouge2-f1";
        case Measure::RougeLRecall: return "rougeL-recall";
        case Measure::RougeLPrecision: return "rougeL-precision";
        case Measure::RougeLF1: return "rougeL-f1";
        case Measure::RougeAvgF1: return "rouge-avg-f1";
        case Measure::TfIdfCosine: return "tfidf";
    }
    return "rouge1-f1";
}

TfIdfModel fit_tfidf(const std::vector<rouge::TokenSeq>& sentences) {
    TfIdfModel model;
    std::vector<int> df;
    bool any_token = false;
    for (const auto& sentence : sentences) {
        // document frequency counts each sentence once per token type
        std::vector<int> seen_here;
        for (const auto& token : sentence) {
            any_token = true;
            auto [it, inserted] =
                model.vocabulary.emplace(token, static_cast<int>(df.size()));
            if (inserted) df.push_back(0);
            int dim = it->second;
            if (std::find(seen_here.begin(), seen_here.end(), dim) == seen_here.end()) {
                seen_here.push_back(dim);
                ++df[dim];
            }
        }
    }
    if (!any_token) throw ValidationError("tf-idf corpus has no non-empty sentence");
    double s = static_cast<double>(sentences.size());
    model.idf.resize(df.size());
    for (size_t i = 0; i < df.size(); ++i)
        model.idf[i] = std::log((1.0 + s) / (1.0 + df[i])) + 1.0;
    return model;
}

namespace {

std::unordered_map<int, double> weighted_counts(const TfIdfModel& model,
                                                const rouge::TokenSeq& tokens) {
    std::unordered_map<int, double> vec;
    for (const auto& token : tokens) {
        auto it = model.vocabulary.find(token);
        if (it != model.vocabulary.end()) vec[it->second] += model.idf[it->second];
    }
    return vec;
}

}  // namespace

double tfidf_cosine(const TfIdfModel& model, const rouge::TokenSeq& a,
                    const rouge::TokenSeq& b) {
    auto va = weighted_counts(model, a);
    auto vb = weighted_counts(model, b);
    double dot = 0, na = 0, nb = 0;
    for (const auto& [dim, w] : va) {
        na += w * w;
        auto it = vb.find(dim);
        if (it != vb.end()) dot += w * it->second;
    }
    for (const auto& [dim, w] : vb) nb += w * w;
    if (na == 0 || nb == 0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

double score(Measure measure, const rouge::TokenSeq& candidate,
             const rouge::TokenSeq& reference, const TfIdfModel* model) {
    switch (measure) {
        case Measure::Rouge1F1:
            return rouge::rouge_n(candidate, reference, 1).f1;
        case Measure::Rouge2F1:
            return rouge::rouge_n(candidate, reference, 2).f1;
        case Measure::RougeLRecall:
            return rouge::rouge_l_sentence(candidate, reference).recall;
        case Measure::RougeLPrecision:
            return rouge::rouge_l_sentence(candidate, reference).precision;
        case Measure::RougeLF1:
            return rouge::rouge_l_sentence(candidate, reference).f1;
        case Measure::RougeAvgF1:
            return rouge::rouge_avg({candidate}, {reference});
        case Measure::TfIdfCosine:
            if (!model)
                throw ValidationError("tfidf similarity requires a fitted model");
            return tfidf_cosine(*model, candidate, reference);
    }
    return 0.0;
}

}  // namespace facet::similarity
