#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "facet/corpus.h"
#include "facet/rouge.h"
#include "facet/similarity.h"

namespace facet::labelers {

enum class Strategy { GreedyRouge1, PerFacetTopN, LeadK };

// Which sentences the per-sample TF-IDF model is fitted on.
enum class TfIdfScope { DocumentAndReference, DocumentOnly };

struct Config {
    Strategy strategy = Strategy::PerFacetTopN;
    similarity::Measure measure = similarity::Measure::RougeAvgF1;
    int top_n = 1;  // support groups created per facet
    int k = 3;      // lead_k strategy only
    bool stemming = false;
    TfIdfScope tfidf_scope = TfIdfScope::DocumentAndReference;
};

std::string to_string(Strategy s);

// Maps a CLI method name (lead, greedy-rouge1, or any similarity measure
// name) onto a full labeler configuration.
Config config_from_method(std::string_view method, int top_n, int k, bool stemming);
std::string method_name(const Config& config);

// Whole-summary greedy selection: repeatedly add the document sentence that
// maximizes ROUGE-1 F1 of the concatenated selection against the concatenated
// reference; stop when no sentence strictly improves the score. Ties break to
// the lowest index. Returns indices in selection order.
std::vector<int> greedy_select(const std::vector<rouge::TokenSeq>& document,
                               const std::vector<rouge::TokenSeq>& reference);

// All document indices sorted by similarity to the facet, descending; ties
// break to the lowest index.
std::vector<int> per_facet_rank(const std::vector<rouge::TokenSeq>& document,
                                const rouge::TokenSeq& facet,
                                similarity::Measure measure,
                                const similarity::TfIdfModel* model = nullptr);

// Machine FAMs in the same shape as gold fams: per_facet_topn emits top_n
// singleton groups per facet, greedy_rouge1 one shared group for every facet,
// lead_k the first k indices as one group per facet. Gold categories are
// never consulted.
std::vector<corpus::Fam> make_machine_fams(const corpus::Sample& sample,
                                           const Config& config);

std::vector<std::vector<corpus::Fam>> make_machine_fams_batch(
    const std::vector<corpus::Sample>& dataset, const Config& config, int jobs = 1);

// Union of all support indices across facets and groups, sorted.
std::vector<int> predicted_support_set(const std::vector<corpus::Fam>& fams);

}  // namespace facet::labelers
