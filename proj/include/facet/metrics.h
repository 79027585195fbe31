#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "facet/corpus.h"
#include "facet/rouge.h"

namespace facet::metrics {

// mappable_only excludes facets without support groups from the denominator;
// extracting everything then yields FAR = 1. all_facets keeps them and counts
// them as uncovered.
enum class FacetScope { MappableOnly, AllFacets };

FacetScope scope_from_string(std::string_view s);
std::string to_string(FacetScope s);

struct CoverageResult {
    double far = 0.0;
    double sar = 0.0;
    int covered_facets = 0;
    int scoped_facets = 0;
    int support_hit = 0;
    int support_total = 0;
    bool redundant = false;
};

// A facet counts as covered when any of its support groups is a (non-strict)
// subset of the extraction.
double far(const corpus::Sample& sample, const std::vector<int>& extracted,
           FacetScope scope);

// |pooled support sentences ∩ extracted| / |pooled support sentences|.
// Throws ValidationError when the sample has no support sentences at all.
double sar(const corpus::Sample& sample, const std::vector<int>& extracted);

// Everything at once; SAR falls back to 0 when the sample has no support
// sentences so batch runs never crash.
CoverageResult coverage(const corpus::Sample& sample, const std::vector<int>& extracted,
                        FacetScope scope);

// True iff some facet has two or more distinct support groups fully contained
// in the extraction.
bool redundancy(const corpus::Sample& sample, const std::vector<int>& extracted);

// Exhaustive search over subsets (size <= k) of the sample's support-sentence
// union; sentences outside that union can never raise FAR. Ties on FAR break
// to the lexicographically smallest index set.
std::pair<std::vector<int>, double> oracle_extract(const corpus::Sample& sample, int k,
                                                   FacetScope scope);

std::vector<int> lead_k(const corpus::Sample& sample, int k);

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Micro-averaged support-sentence discovery scores: gold per sample is the
// union of its support sentences; sums pool over every sample present in
// `predictions`.
Prf support_prf(const std::map<std::string, std::vector<int>>& predictions,
                const std::vector<corpus::Sample>& dataset);

// Average per-facet Jaccard of support-index unions; facets where both unions
// are empty are skipped (1.0 if every facet is skipped).
double fam_jaccard(const std::vector<corpus::Fam>& a, const std::vector<corpus::Fam>& b);

struct SampleScore {
    std::string id;
    CoverageResult coverage;
    rouge::Score rouge1, rouge2, rougeL;
    double far_normalized = 0.0;  // FAR / |E|
    int extracted_count = 0;
};

struct Aggregate {
    int samples = 0;
    double far = 0.0;
    double sar = 0.0;
    double far_normalized = 0.0;
    double redundancy_rate = 0.0;
    rouge::Score rouge1, rouge2, rougeL;
};

struct EvalOptions {
    FacetScope scope = FacetScope::MappableOnly;
    bool stemming = false;
    int truncate_k = 0;  // 0 = keep extractions as-is
    int jobs = 1;
};

struct ScoreReport {
    std::string system;
    std::vector<SampleScore> per_sample;  // dataset order
    Aggregate aggregate;
};

// Per-sample coverage + summary-level ROUGE-1/2/L against the reference,
// aggregated as unweighted means over samples. The system must provide an
// extraction for every dataset sample. Results are identical for any jobs
// value.
ScoreReport evaluate_system(const std::vector<corpus::Sample>& dataset,
                            const corpus::SystemOutput& system,
                            const EvalOptions& options = {});

}  // namespace facet::metrics
