#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace facet::corpus {

struct Sentence {
    std::string raw;  // non-empty after trimming
    bool operator==(const Sentence&) const = default;
};

enum class FacetCategory { Noise, Low, High };
enum class SampleCategory { N, L, H };

// A set of document sentences that jointly cover one facet.
struct SupportGroup {
    std::vector<int> indices;  // sorted, unique, all < document size
    bool operator==(const SupportGroup&) const = default;
};

// Mapping from one facet (reference sentence) to its support groups.
// groups may be empty (the facet cannot be covered by extraction).
struct Fam {
    std::vector<SupportGroup> groups;
    FacetCategory category = FacetCategory::Low;
    bool operator==(const Fam&) const = default;
};

struct Sample {
    std::string id;
    std::vector<Sentence> document;
    std::vector<Sentence> reference;
    std::vector<Fam> fams;  // one per reference sentence
    // Derived at load: noise beats high beats low.
    SampleCategory category = SampleCategory::L;

    // Sorted unique indices over all facets and groups.
    std::vector<int> support_union() const;
    bool operator==(const Sample&) const = default;
};

struct SystemOutput {
    std::string name;
    // sample id -> extracted indices, input order preserved, duplicates removed
    std::map<std::string, std::vector<int>> extractions;
};

struct DatasetStats {
    int samples = 0;
    std::map<SampleCategory, int> samples_per_category;
    int facets = 0;
    std::map<FacetCategory, int> facets_per_category;
    int facets_with_groups = 0;
    double avg_support_unique = 0.0;     // per-sample union size, averaged
    double avg_support_nonunique = 0.0;  // per-sample sum of group sizes, averaged
    double avg_groups_per_facet = 0.0;   // over facets with at least one group
    std::map<int, int> mbar_histogram;   // rounded mean group size -> facet count
};

std::string to_string(FacetCategory c);
std::string to_string(SampleCategory c);
FacetCategory facet_category_from_string(std::string_view s);
SampleCategory sample_category_from_string(std::string_view s);
SampleCategory derive_sample_category(const std::vector<Fam>& fams);

// One JSON object per line: id, document, reference, fams, facet_categories.
std::vector<Sample> load_dataset(const std::string& path);
void save_dataset(const std::vector<Sample>& dataset, std::ostream& out);
void save_dataset(const std::vector<Sample>& dataset, const std::string& path);

// Builds a validated sample; every loader funnels through this.
Sample make_sample(std::string id, std::vector<std::string> document,
                   std::vector<std::string> reference,
                   std::vector<std::vector<std::vector<int>>> fams,
                   const std::vector<std::string>& facet_categories = {});

// Lowercased, punctuation-stripped, whitespace-collapsed form used for
// text-to-index resolution.
std::string normalize_for_match(std::string_view text);

// First-match resolution of sentence texts to document indices under
// normalized equality. Unmatched texts raise ValidationError.
std::vector<int> match_text_to_indices(const std::vector<std::string>& texts,
                                       const std::vector<Sentence>& document);

// One JSON object per line: id plus either indices or sentences.
SystemOutput load_system_output(const std::string& path, const std::string& name,
                                const std::vector<Sample>& dataset);

// Same file format, but keeps outputs as raw sentence texts (indices are
// mapped to their document sentences). For text-only (abstractive) systems.
std::map<std::string, std::vector<std::string>> load_text_output(
    const std::string& path, const std::vector<Sample>& dataset);

DatasetStats dataset_stats(const std::vector<Sample>& dataset);

std::vector<Sample> filter_by_category(const std::vector<Sample>& dataset,
                                       const std::set<SampleCategory>& categories);

// Best-effort mapping of third-party annotation layouts (JSON array or JSONL,
// aliased field names, text-valued support groups) onto the canonical model.
// See the README for the field mapping table.
std::vector<Sample> convert_external(const std::string& path);

}  // namespace facet::corpus
