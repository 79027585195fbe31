#include "facet/metrics.h"

#include <algorithm>
#include <functional>
#include <numeric>

#include "facet/error.h"
#include "facet/parallel.h"

namespace facet::metrics {

FacetScope scope_from_string(std::string_view s) {
    if (s == "mappable" || s == "mappable_only") return FacetScope::MappableOnly;
    if (s == "all" || s == "all_facets") return FacetScope::AllFacets;
    throw ValidationError("unknown facet scope: \"" + std::string(s) + "\"");
}

std::string to_string(FacetScope s) {
    return s == FacetScope::MappableOnly ? "mappable" : "all";
}

namespace {

std::vector<char> membership(const corpus::Sample& sample,
                             const std::vector<int>& extracted) {
    int doc_len = static_cast<int>(sample.document.size());
    std::vector<char> in(doc_len, 0);
    for (int idx : extracted) {
        if (idx < 0 || idx >= doc_len)
            throw ValidationError("sample " + sample.id + ": extracted index " +
                                  std::to_string(idx) + " out of range [0," +
                                  std::to_string(doc_len) + ")");
        in[idx] = 1;
    }
    return in;
}

bool group_covered(const corpus::SupportGroup& group, const std::vector<char>& in) {
    return std::all_of(group.indices.begin(), group.indices.end(),
                       [&](int idx) { return in[idx]; });
}

}  // namespace

CoverageResult coverage(const corpus::Sample& sample, const std::vector<int>& extracted,
                        FacetScope scope) {
    std::vector<char> in = membership(sample, extracted);
    CoverageResult r;
    std::vector<char> support(sample.document.size(), 0);
    for (const auto& fam : sample.fams) {
        bool mappable = !fam.groups.empty();
        if (mappable || scope == FacetScope::AllFacets) ++r.scoped_facets;
        int covered_groups = 0;
        for (const auto& group : fam.groups) {
            for (int idx : group.indices) support[idx] = 1;
            if (group_covered(group, in)) ++covered_groups;
        }
        if (covered_groups > 0) ++r.covered_facets;
        if (covered_groups >= 2) r.redundant = true;
    }
    for (size_t i = 0; i < support.size(); ++i) {
        if (!support[i]) continue;
        ++r.support_total;
        if (in[i]) ++r.support_hit;
    }
    r.far = r.scoped_facets > 0
                ? static_cast<double>(r.covered_facets) / r.scoped_facets
                : 0.0;
    r.sar = r.support_total > 0
                ? static_cast<double>(r.support_hit) / r.support_total
                : 0.0;
    return r;
}

double far(const corpus::Sample& sample, const std::vector<int>& extracted,
           FacetScope scope) {
    return coverage(sample, extracted, scope).far;
}

double sar(const corpus::Sample& sample, const std::vector<int>& extracted) {
    CoverageResult r = coverage(sample, extracted, FacetScope::MappableOnly);
    if (r.support_total == 0)
        throw ValidationError("sample " + sample.id + " has no support sentences");
    return r.sar;
}

bool redundancy(const corpus::Sample& sample, const std::vector<int>& extracted) {
    return coverage(sample, extracted, FacetScope::MappableOnly).redundant;
}

std::pair<std::vector<int>, double> oracle_extract(const corpus::Sample& sample, int k,
                                                   FacetScope scope) {
    if (k < 1) throw ValidationError("oracle extraction needs k >= 1");
    std::vector<int> universe = sample.support_union();
    int u = static_cast<int>(universe.size());
    int kk = std::min(k, u);

    int scoped = 0;
    for (const auto& fam : sample.fams)
        if (!fam.groups.empty() || scope == FacetScope::AllFacets) ++scoped;

    std::vector<int> best;
    int best_covered = -1;
    std::vector<char> in(sample.document.size(), 0);
    std::vector<int> combo;

    auto evaluate_combo = [&]() {
        int covered = 0;
        for (const auto& fam : sample.fams) {
            for (const auto& group : fam.groups) {
                if (group_covered(group, in)) {
                    ++covered;
                    break;
                }
            }
        }
        if (covered > best_covered ||
            (covered == best_covered &&
             std::lexicographical_compare(combo.begin(), combo.end(), best.begin(),
                                          best.end()))) {
            best_covered = covered;
            best = combo;
        }
    };

    // Subsets of the support union in increasing size; the tie rule compares
    // the sorted index sets lexicographically across all sizes.
    std::function<void(int, int)> recurse = [&](int start, int remaining) {
        evaluate_combo();
        if (remaining == 0) return;
        for (int i = start; i < u; ++i) {
            combo.push_back(universe[i]);
            in[universe[i]] = 1;
            recurse(i + 1, remaining - 1);
            in[universe[i]] = 0;
            combo.pop_back();
        }
    };
    recurse(0, kk);

    double value = scoped > 0 ? static_cast<double>(best_covered) / scoped : 0.0;
    return {best, value};
}

std::vector<int> lead_k(const corpus::Sample& sample, int k) {
    if (k < 1) throw ValidationError("lead extraction needs k >= 1");
    int n = std::min<int>(k, static_cast<int>(sample.document.size()));
    std::vector<int> out(n);
    std::iota(out.begin(), out.end(), 0);
    return out;
}

Prf support_prf(const std::map<std::string, std::vector<int>>& predictions,
                const std::vector<corpus::Sample>& dataset) {
    std::map<std::string, const corpus::Sample*> index;
    for (const auto& s : dataset) index.emplace(s.id, &s);

    long hit = 0, predicted = 0, gold = 0;
    for (const auto& [id, pred_raw] : predictions) {
        auto it = index.find(id);
        if (it == index.end()) throw ValidationError("unknown sample id " + id);
        const corpus::Sample& sample = *it->second;
        std::vector<int> pred = pred_raw;  // set semantics
        std::sort(pred.begin(), pred.end());
        pred.erase(std::unique(pred.begin(), pred.end()), pred.end());
        std::vector<char> in = membership(sample, pred);
        std::vector<int> gold_set = sample.support_union();
        predicted += static_cast<long>(pred.size());
        gold += static_cast<long>(gold_set.size());
        for (int idx : gold_set)
            if (in[idx]) ++hit;
    }
    if (gold == 0) throw ValidationError("dataset has no gold support sentences");
    Prf out;
    out.precision = predicted > 0 ? static_cast<double>(hit) / predicted : 0.0;
    out.recall = static_cast<double>(hit) / gold;
    double pr = out.precision + out.recall;
    out.f1 = pr > 0 ? 2.0 * out.precision * out.recall / pr : 0.0;
    return out;
}

double fam_jaccard(const std::vector<corpus::Fam>& a, const std::vector<corpus::Fam>& b) {
    if (a.size() != b.size())
        throw ValidationError("fam_jaccard: facet counts differ (" +
                              std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    auto facet_union = [](const corpus::Fam& fam) {
        std::vector<int> out;
        for (const auto& g : fam.groups)
            out.insert(out.end(), g.indices.begin(), g.indices.end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    double sum = 0.0;
    int counted = 0;
    for (size_t f = 0; f < a.size(); ++f) {
        std::vector<int> ua = facet_union(a[f]);
        std::vector<int> ub = facet_union(b[f]);
        if (ua.empty() && ub.empty()) continue;
        std::vector<int> inter, uni;
        std::set_intersection(ua.begin(), ua.end(), ub.begin(), ub.end(),
                              std::back_inserter(inter));
        std::set_union(ua.begin(), ua.end(), ub.begin(), ub.end(),
                       std::back_inserter(uni));
        sum += static_cast<double>(inter.size()) / static_cast<double>(uni.size());
        ++counted;
    }
    return counted > 0 ? sum / counted : 1.0;
}

ScoreReport evaluate_system(const std::vector<corpus::Sample>& dataset,
                            const corpus::SystemOutput& system,
                            const EvalOptions& options) {
    for (const auto& sample : dataset)
        if (!system.extractions.count(sample.id))
            throw ValidationError("system " + system.name +
                                  " has no extraction for sample " + sample.id);

    ScoreReport report;
    report.system = system.name;
    report.per_sample.resize(dataset.size());

    parallel_for(dataset.size(), options.jobs, [&](std::size_t i) {
        const corpus::Sample& sample = dataset[i];
        std::vector<int> extraction = system.extractions.at(sample.id);
        if (options.truncate_k > 0 &&
            static_cast<int>(extraction.size()) > options.truncate_k)
            extraction.resize(options.truncate_k);

        SampleScore& score = report.per_sample[i];
        score.id = sample.id;
        score.extracted_count = static_cast<int>(extraction.size());
        score.coverage = coverage(sample, extraction, options.scope);
        score.far_normalized =
            extraction.empty() ? 0.0 : score.coverage.far / extraction.size();

        std::vector<rouge::TokenSeq> candidate, reference;
        candidate.reserve(extraction.size());
        for (int idx : extraction)
            candidate.push_back(rouge::tokenize(sample.document[idx].raw, options.stemming));
        reference.reserve(sample.reference.size());
        for (const auto& sentence : sample.reference)
            reference.push_back(rouge::tokenize(sentence.raw, options.stemming));

        score.rouge1 = rouge::rouge_n(candidate, reference, 1);
        score.rouge2 = rouge::rouge_n(candidate, reference, 2);
        score.rougeL = rouge::rouge_l_summary(candidate, reference);
    });

    Aggregate& agg = report.aggregate;
    agg.samples = static_cast<int>(dataset.size());
    if (agg.samples == 0) return report;
    auto add_score = [](rouge::Score& acc, const rouge::Score& s) {
        acc.precision += s.precision;
        acc.recall += s.recall;
        acc.f1 += s.f1;
    };
    for (const auto& s : report.per_sample) {
        agg.far += s.coverage.far;
        agg.sar += s.coverage.sar;
        agg.far_normalized += s.far_normalized;
        agg.redundancy_rate += s.coverage.redundant ? 1.0 : 0.0;
        add_score(agg.rouge1, s.rouge1);
        add_score(agg.rouge2, s.rouge2);
        add_score(agg.rougeL, s.rougeL);
    }
    double n = static_cast<double>(agg.samples);
    agg.far /= n;
    agg.sar /= n;
    agg.far_normalized /= n;
    agg.redundancy_rate /= n;
    for (rouge::Score* s : {&agg.rouge1, &agg.rouge2, &agg.rougeL}) {
        s->precision /= n;
        s->recall /= n;
        s->f1 /= n;
    }
    return report;
}

}  // namespace facet::metrics
