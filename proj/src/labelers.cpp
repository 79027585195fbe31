#include "facet/labelers.h"

#include <algorithm>
#include <cctype>

#include "facet/error.h"
#include "facet/parallel.h"

namespace facet::labelers {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::GreedyRouge1: return "greedy-rouge1";
        case Strategy::PerFacetTopN: return "per-facet-topn";
        case Strategy::LeadK: return "lead";
    }
    return "per-facet-topn";
}

Config config_from_method(std::string_view method, int top_n, int k, bool stemming) {
    if (top_n < 1) throw ValidationError("top_n must be >= 1");
    if (k < 1) throw ValidationError("k must be >= 1");
    Config config;
    config.top_n = top_n;
    config.k = k;
    config.stemming = stemming;
    std::string m;
    for (char c : method) m += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (m == "lead" || m == "lead-k" || m == "lead-3" || m == "lead3") {
        config.strategy = Strategy::LeadK;
    } else if (m == "greedy-rouge1" || m == "greedy_rouge1" || m == "greedy") {
        config.strategy = Strategy::GreedyRouge1;
    } else {
        config.strategy = Strategy::PerFacetTopN;
        config.measure = similarity::measure_from_string(method);
    }
    return config;
}

std::string method_name(const Config& config) {
    switch (config.strategy) {
        case Strategy::GreedyRouge1: return "greedy-rouge1";
        case Strategy::LeadK: return "lead-" + std::to_string(config.k);
        case Strategy::PerFacetTopN: return similarity::to_string(config.measure);
    }
    return "per-facet-topn";
}

std::vector<int> greedy_select(const std::vector<rouge::TokenSeq>& document,
                               const std::vector<rouge::TokenSeq>& reference) {
    rouge::TokenSeq reference_concat;
    for (const auto& s : reference)
        reference_concat.insert(reference_concat.end(), s.begin(), s.end());

    std::vector<int> selection;
    std::vector<char> used(document.size(), 0);
    rouge::TokenSeq current;
    double current_score = 0.0;

    for (size_t step = 0; step < document.size(); ++step) {
        int best_idx = -1;
        double best_score = current_score;
        for (size_t i = 0; i < document.size(); ++i) {
            if (used[i]) continue;
            rouge::TokenSeq candidate = current;
            candidate.insert(candidate.end(), document[i].begin(), document[i].end());
            double score = rouge::rouge_n(candidate, reference_concat, 1).f1;
            if (score > best_score) {  // strict improvement; ties keep the earlier index
                best_score = score;
                best_idx = static_cast<int>(i);
            }
        }
        if (best_idx < 0) break;
        used[best_idx] = 1;
        selection.push_back(best_idx);
        current.insert(current.end(), document[best_idx].begin(), document[best_idx].end());
        current_score = best_score;
    }
    return selection;
}

std::vector<int> per_facet_rank(const std::vector<rouge::TokenSeq>& document,
                                const rouge::TokenSeq& facet,
                                similarity::Measure measure,
                                const similarity::TfIdfModel* model) {
    std::vector<double> scores(document.size());
    for (size_t i = 0; i < document.size(); ++i)
        scores[i] = similarity::score(measure, document[i], facet, model);
    std::vector<int> order(document.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return scores[a] > scores[b]; });
    return order;
}

namespace {

std::vector<corpus::Fam> fams_from_groups(size_t facet_count,
                                          const std::vector<std::vector<int>>& groups) {
    std::vector<corpus::Fam> fams(facet_count);
    for (auto& fam : fams) {
        for (const auto& g : groups)
            if (!g.empty()) fam.groups.push_back(corpus::SupportGroup{g});
        fam.category = fam.groups.empty() ? corpus::FacetCategory::High
                                          : corpus::FacetCategory::Low;
    }
    return fams;
}

}  // namespace

std::vector<corpus::Fam> make_machine_fams(const corpus::Sample& sample,
                                           const Config& config) {
    std::vector<rouge::TokenSeq> document, reference;
    document.reserve(sample.document.size());
    for (const auto& s : sample.document)
        document.push_back(rouge::tokenize(s.raw, config.stemming));
    reference.reserve(sample.reference.size());
    for (const auto& s : sample.reference)
        reference.push_back(rouge::tokenize(s.raw, config.stemming));

    switch (config.strategy) {
        case Strategy::LeadK: {
            std::vector<int> lead;
            for (int i = 0; i < std::min<int>(config.k, document.size()); ++i)
                lead.push_back(i);
            return fams_from_groups(reference.size(), {lead});
        }
        case Strategy::GreedyRouge1: {
            std::vector<int> selection = greedy_select(document, reference);
            std::sort(selection.begin(), selection.end());
            return fams_from_groups(reference.size(), {selection});
        }
        case Strategy::PerFacetTopN:
            break;
    }

    similarity::TfIdfModel model;
    if (config.measure == similarity::Measure::TfIdfCosine) {
        std::vector<rouge::TokenSeq> corpus_sentences = document;
        if (config.tfidf_scope == TfIdfScope::DocumentAndReference)
            corpus_sentences.insert(corpus_sentences.end(), reference.begin(),
                                    reference.end());
        model = similarity::fit_tfidf(corpus_sentences);
    }

    std::vector<corpus::Fam> fams;
    fams.reserve(reference.size());
    for (const auto& facet : reference) {
        std::vector<int> ranked = per_facet_rank(document, facet, config.measure, &model);
        corpus::Fam fam;
        int n = std::min<int>(config.top_n, static_cast<int>(ranked.size()));
        for (int i = 0; i < n; ++i)
            fam.groups.push_back(corpus::SupportGroup{{ranked[i]}});
        fam.category = fam.groups.empty() ? corpus::FacetCategory::High
                                          : corpus::FacetCategory::Low;
        fams.push_back(std::move(fam));
    }
    return fams;
}

std::vector<std::vector<corpus::Fam>> make_machine_fams_batch(
    const std::vector<corpus::Sample>& dataset, const Config& config, int jobs) {
    std::vector<std::vector<corpus::Fam>> out(dataset.size());
    parallel_for(dataset.size(), jobs,
                 [&](std::size_t i) { out[i] = make_machine_fams(dataset[i], config); });
    return out;
}

std::vector<int> predicted_support_set(const std::vector<corpus::Fam>& fams) {
    std::vector<int> out;
    for (const auto& fam : fams)
        for (const auto& g : fam.groups)
            out.insert(out.end(), g.indices.begin(), g.indices.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace facet::labelers
