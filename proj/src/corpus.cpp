#include "facet/corpus.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "facet/error.h"
#include "json.hpp"

namespace facet::corpus {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(FacetCategory c) {
    switch (c) {
        case FacetCategory::Noise: return "noise";
        case FacetCategory::Low: return "low";
        case FacetCategory::High: return "high";
    }
    return "low";
}

std::string to_string(SampleCategory c) {
    switch (c) {
        case SampleCategory::N: return "N";
        case SampleCategory::L: return "L";
        case SampleCategory::H: return "H";
    }
    return "L";
}

namespace {

std::string lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace

FacetCategory facet_category_from_string(std::string_view s) {
    std::string t = lower(s);
    if (t == "noise" || t == "n") return FacetCategory::Noise;
    if (t == "low" || t == "l" || t == "low abstraction") return FacetCategory::Low;
    if (t == "high" || t == "h" || t == "high abstraction") return FacetCategory::High;
    throw ValidationError("unknown facet category: \"" + std::string(s) + "\"");
}

SampleCategory sample_category_from_string(std::string_view s) {
    std::string t = lower(s);
    if (t == "n" || t == "noise") return SampleCategory::N;
    if (t == "l" || t == "low" || t == "low abstraction") return SampleCategory::L;
    if (t == "h" || t == "high" || t == "high abstraction") return SampleCategory::H;
    throw ValidationError("unknown sample category: \"" + std::string(s) + "\"");
}

SampleCategory derive_sample_category(const std::vector<Fam>& fams) {
    bool any_high = false;
    for (const auto& fam : fams) {
        if (fam.category == FacetCategory::Noise) return SampleCategory::N;
        if (fam.category == FacetCategory::High) any_high = true;
    }
    return any_high ? SampleCategory::H : SampleCategory::L;
}

std::vector<int> Sample::support_union() const {
    std::vector<int> out;
    for (const auto& fam : fams)
        for (const auto& group : fam.groups)
            out.insert(out.end(), group.indices.begin(), group.indices.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Sample make_sample(std::string id, std::vector<std::string> document,
                   std::vector<std::string> reference,
                   std::vector<std::vector<std::vector<int>>> fams,
                   const std::vector<std::string>& facet_categories) {
    if (id.empty()) throw ValidationError("sample with empty id");
    Sample s;
    s.id = std::move(id);
    auto add_sentences = [&](std::vector<std::string>& texts, const char* field,
                             std::vector<Sentence>& out) {
        for (auto& t : texts) {
            std::string trimmed = trim(t);
            if (trimmed.empty())
                throw ValidationError("sample " + s.id + ": empty sentence in " + field);
            out.push_back(Sentence{std::move(trimmed)});
        }
        if (out.empty())
            throw ValidationError("sample " + s.id + ": " + field + " is empty");
    };
    add_sentences(document, "document", s.document);
    add_sentences(reference, "reference", s.reference);

    if (fams.size() != s.reference.size())
        throw ValidationError("sample " + s.id + ": fams count " +
                              std::to_string(fams.size()) + " != reference count " +
                              std::to_string(s.reference.size()));
    if (!facet_categories.empty() && facet_categories.size() != fams.size())
        throw ValidationError("sample " + s.id +
                              ": facet_categories length != facet count");

    int doc_len = static_cast<int>(s.document.size());
    for (size_t f = 0; f < fams.size(); ++f) {
        Fam fam;
        for (auto& raw_group : fams[f]) {
            if (raw_group.empty())
                throw ValidationError("sample " + s.id + ": facet " + std::to_string(f) +
                                      " has an empty support group");
            std::vector<int> idx = raw_group;
            std::sort(idx.begin(), idx.end());
            if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
                throw ValidationError("sample " + s.id + ": facet " + std::to_string(f) +
                                      " has a duplicate index in a support group");
            if (idx.front() < 0 || idx.back() >= doc_len)
                throw ValidationError("sample " + s.id + ": facet " + std::to_string(f) +
                                      " has a support index out of range [0," +
                                      std::to_string(doc_len) + ")");
            fam.groups.push_back(SupportGroup{std::move(idx)});
        }
        if (!facet_categories.empty()) {
            fam.category = facet_category_from_string(facet_categories[f]);
            if (fam.category == FacetCategory::High && !fam.groups.empty())
                throw ValidationError("sample " + s.id + ": facet " + std::to_string(f) +
                                      " is high-abstraction but has support groups");
            if (fam.category == FacetCategory::Low && fam.groups.empty())
                throw ValidationError("sample " + s.id + ": facet " + std::to_string(f) +
                                      " is low-abstraction but has no support groups");
        } else {
            fam.category = fam.groups.empty() ? FacetCategory::High : FacetCategory::Low;
        }
        s.fams.push_back(std::move(fam));
    }
    s.category = derive_sample_category(s.fams);
    return s;
}

namespace {

std::vector<std::string> string_list(const json& j, const std::string& context,
                                     const char* field) {
    if (!j.is_array())
        throw ValidationError(context + ": field " + field + " must be a list of strings");
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string())
            throw ValidationError(context + ": field " + field + " must be a list of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::vector<std::vector<std::vector<int>>> fams_from_json(const json& j,
                                                          const std::string& context) {
    if (!j.is_array()) throw ValidationError(context + ": fams must be a list");
    std::vector<std::vector<std::vector<int>>> out;
    for (const auto& facet : j) {
        if (!facet.is_array())
            throw ValidationError(context + ": each facet entry must be a list of groups");
        std::vector<std::vector<int>> groups;
        for (const auto& group : facet) {
            if (!group.is_array())
                throw ValidationError(context + ": each support group must be a list of indices");
            std::vector<int> idx;
            for (const auto& v : group) {
                if (!v.is_number_integer())
                    throw ValidationError(context + ": support indices must be integers");
                idx.push_back(v.get<int>());
            }
            groups.push_back(std::move(idx));
        }
        out.push_back(std::move(groups));
    }
    return out;
}

Sample sample_from_json(const json& j, const std::string& context) {
    if (!j.is_object()) throw ValidationError(context + ": record is not an object");
    if (!j.contains("id") || !j.at("id").is_string())
        throw ValidationError(context + ": missing string field id");
    std::string id = j.at("id").get<std::string>();
    if (!j.contains("document") || !j.contains("reference") || !j.contains("fams"))
        throw ValidationError(context + ": sample " + id +
                              " needs document, reference and fams");
    std::vector<std::string> categories;
    if (j.contains("facet_categories"))
        categories = string_list(j.at("facet_categories"), context, "facet_categories");
    return make_sample(std::move(id), string_list(j.at("document"), context, "document"),
                       string_list(j.at("reference"), context, "reference"),
                       fams_from_json(j.at("fams"), context), categories);
}

// Reads one JSON value per non-blank line, reporting the line number on error.
template <typename Fn>
void for_each_jsonl(const std::string& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::string context = path + ":" + std::to_string(lineno);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(context + ": " + e.what());
        }
        fn(j, context);
    }
}

}  // namespace

std::vector<Sample> load_dataset(const std::string& path) {
    std::vector<Sample> out;
    std::unordered_set<std::string> seen;
    for_each_jsonl(path, [&](const json& j, const std::string& context) {
        Sample s = sample_from_json(j, context);
        if (!seen.insert(s.id).second)
            throw ValidationError(context + ": duplicate sample id " + s.id);
        out.push_back(std::move(s));
    });
    return out;
}

void save_dataset(const std::vector<Sample>& dataset, std::ostream& out) {
    for (const auto& s : dataset) {
        ordered_json j;
        j["id"] = s.id;
        auto texts = [](const std::vector<Sentence>& sents) {
            std::vector<std::string> t;
            for (const auto& x : sents) t.push_back(x.raw);
            return t;
        };
        j["document"] = texts(s.document);
        j["reference"] = texts(s.reference);
        json fams = json::array();
        for (const auto& fam : s.fams) {
            json groups = json::array();
            for (const auto& g : fam.groups) groups.push_back(g.indices);
            fams.push_back(groups);
        }
        j["fams"] = fams;
        std::vector<std::string> cats;
        for (const auto& fam : s.fams) cats.push_back(to_string(fam.category));
        j["facet_categories"] = cats;
        out << j.dump() << '\n';
    }
}

void save_dataset(const std::vector<Sample>& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open file for writing: " + path);
    save_dataset(dataset, out);
}

std::string normalize_for_match(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char raw : text) {
        unsigned char c = static_cast<unsigned char>(raw);
        if (std::isspace(c)) {
            pending_space = true;
        } else if (std::isalnum(c) || c >= 0x80) {
            if (pending_space && !out.empty()) out += ' ';
            pending_space = false;
            out += static_cast<char>(std::tolower(c));
        }
        // remaining (punctuation) characters are dropped
    }
    return out;
}

std::vector<int> match_text_to_indices(const std::vector<std::string>& texts,
                                       const std::vector<Sentence>& document) {
    std::unordered_map<std::string, int> first_index;
    for (size_t i = 0; i < document.size(); ++i)
        first_index.emplace(normalize_for_match(document[i].raw), static_cast<int>(i));

    std::vector<int> out;
    std::unordered_set<int> used;
    std::vector<std::string> unmatched;
    for (const auto& text : texts) {
        auto it = first_index.find(normalize_for_match(text));
        if (it == first_index.end()) {
            unmatched.push_back(text);
        } else if (used.insert(it->second).second) {
            out.push_back(it->second);
        }
    }
    if (!unmatched.empty()) {
        std::string msg = "no document sentence matches:";
        for (const auto& t : unmatched) msg += " \"" + t + "\"";
        throw ValidationError(msg);
    }
    return out;
}

namespace {

std::vector<int> int_list(const json& j, const std::string& context) {
    std::vector<int> out;
    for (const auto& v : j) {
        if (!v.is_number_integer())
            throw ValidationError(context + ": indices must be integers");
        out.push_back(v.get<int>());
    }
    return out;
}

const Sample& sample_by_id(const std::unordered_map<std::string, const Sample*>& index,
                           const std::string& id, const std::string& context) {
    auto it = index.find(id);
    if (it == index.end())
        throw ValidationError(context + ": unknown sample id " + id);
    return *it->second;
}

std::unordered_map<std::string, const Sample*> index_dataset(
    const std::vector<Sample>& dataset) {
    std::unordered_map<std::string, const Sample*> index;
    for (const auto& s : dataset) index.emplace(s.id, &s);
    return index;
}

}  // namespace

SystemOutput load_system_output(const std::string& path, const std::string& name,
                                const std::vector<Sample>& dataset) {
    auto index = index_dataset(dataset);
    SystemOutput out;
    out.name = name;
    for_each_jsonl(path, [&](const json& j, const std::string& context) {
        if (!j.is_object() || !j.contains("id") || !j.at("id").is_string())
            throw ValidationError(context + ": record needs a string id");
        std::string id = j.at("id").get<std::string>();
        const Sample& sample = sample_by_id(index, id, context);
        if (out.extractions.count(id))
            throw ValidationError(context + ": duplicate record for sample " + id);

        bool has_idx = j.contains("indices");
        bool has_txt = j.contains("sentences");
        if (has_idx == has_txt)
            throw ValidationError(context + ": sample " + id +
                                  " needs exactly one of indices or sentences");
        std::vector<int> extraction;
        if (has_idx) {
            int doc_len = static_cast<int>(sample.document.size());
            std::unordered_set<int> seen;
            for (int v : int_list(j.at("indices"), context)) {
                if (v < 0 || v >= doc_len)
                    throw ValidationError(context + ": sample " + id + " index " +
                                          std::to_string(v) + " out of range [0," +
                                          std::to_string(doc_len) + ")");
                if (seen.insert(v).second) extraction.push_back(v);
            }
        } else {
            std::vector<std::string> texts;
            for (const auto& v : j.at("sentences")) {
                if (!v.is_string())
                    throw ValidationError(context + ": sentences must be strings");
                texts.push_back(v.get<std::string>());
            }
            try {
                extraction = match_text_to_indices(texts, sample.document);
            } catch (const ValidationError& e) {
                throw ValidationError(context + ": sample " + id + ": " + e.what());
            }
        }
        out.extractions.emplace(std::move(id), std::move(extraction));
    });
    return out;
}

std::map<std::string, std::vector<std::string>> load_text_output(
    const std::string& path, const std::vector<Sample>& dataset) {
    auto index = index_dataset(dataset);
    std::map<std::string, std::vector<std::string>> out;
    for_each_jsonl(path, [&](const json& j, const std::string& context) {
        if (!j.is_object() || !j.contains("id") || !j.at("id").is_string())
            throw ValidationError(context + ": record needs a string id");
        std::string id = j.at("id").get<std::string>();
        const Sample& sample = sample_by_id(index, id, context);
        if (out.count(id))
            throw ValidationError(context + ": duplicate record for sample " + id);

        std::vector<std::string> texts;
        if (j.contains("sentences")) {
            for (const auto& v : j.at("sentences")) {
                if (!v.is_string())
                    throw ValidationError(context + ": sentences must be strings");
                texts.push_back(v.get<std::string>());
            }
        } else if (j.contains("indices")) {
            int doc_len = static_cast<int>(sample.document.size());
            for (int v : int_list(j.at("indices"), context)) {
                if (v < 0 || v >= doc_len)
                    throw ValidationError(context + ": sample " + id + " index " +
                                          std::to_string(v) + " out of range");
                texts.push_back(sample.document[v].raw);
            }
        } else {
            throw ValidationError(context + ": sample " + id +
                                  " needs indices or sentences");
        }
        out.emplace(std::move(id), std::move(texts));
    });
    return out;
}

DatasetStats dataset_stats(const std::vector<Sample>& dataset) {
    if (dataset.empty()) throw ValidationError("dataset is empty");
    DatasetStats st;
    st.samples = static_cast<int>(dataset.size());
    long unique_total = 0, nonunique_total = 0, group_total = 0;
    for (const auto& s : dataset) {
        ++st.samples_per_category[s.category];
        unique_total += static_cast<long>(s.support_union().size());
        for (const auto& fam : s.fams) {
            ++st.facets;
            ++st.facets_per_category[fam.category];
            if (fam.groups.empty()) continue;
            ++st.facets_with_groups;
            group_total += static_cast<long>(fam.groups.size());
            long member_total = 0;
            for (const auto& g : fam.groups) {
                nonunique_total += static_cast<long>(g.indices.size());
                member_total += static_cast<long>(g.indices.size());
            }
            double mbar = static_cast<double>(member_total) /
                          static_cast<double>(fam.groups.size());
            ++st.mbar_histogram[static_cast<int>(std::lround(mbar))];
        }
    }
    st.avg_support_unique = static_cast<double>(unique_total) / st.samples;
    st.avg_support_nonunique = static_cast<double>(nonunique_total) / st.samples;
    st.avg_groups_per_facet =
        st.facets_with_groups > 0
            ? static_cast<double>(group_total) / st.facets_with_groups
            : 0.0;
    return st;
}

std::vector<Sample> filter_by_category(const std::vector<Sample>& dataset,
                                       const std::set<SampleCategory>& categories) {
    std::vector<Sample> out;
    std::copy_if(dataset.begin(), dataset.end(), std::back_inserter(out),
                 [&](const Sample& s) { return categories.count(s.category) > 0; });
    return out;
}

// --------------------------------------------------------------------------
// External-format conversion
// --------------------------------------------------------------------------

namespace {

const json* find_field(const json& j, std::initializer_list<const char*> names) {
    for (const char* name : names)
        if (j.contains(name)) return &j.at(name);
    return nullptr;
}

std::vector<std::string> external_sentences(const json& j, const std::string& context,
                                            const char* what) {
    if (!j.is_array())
        throw ValidationError(context + ": " + what + " must be a list of sentences");
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string())
            throw ValidationError(context + ": " + what + " must be a list of sentences");
        out.push_back(v.get<std::string>());
    }
    return out;
}

Sample convert_record(const json& j, const std::string& context) {
    const json* idj = find_field(j, {"id", "ID", "guid", "name"});
    if (!idj || !idj->is_string())
        throw ValidationError(context + ": record has no usable id field");
    std::string id = idj->get<std::string>();

    const json* doc = find_field(j, {"document", "article", "doc", "src"});
    const json* ref = find_field(j, {"reference", "summary", "abstract", "highlights", "tgt"});
    if (!doc || !ref)
        throw ValidationError(context + ": sample " + id +
                              " lacks document/reference sentence lists");
    std::vector<std::string> document = external_sentences(*doc, context, "document");
    std::vector<std::string> reference = external_sentences(*ref, context, "reference");

    std::vector<Sentence> doc_sentences;
    for (const auto& t : document) doc_sentences.push_back(Sentence{t});

    // Support groups may be integer indices or verbatim sentence texts.
    std::vector<std::vector<std::vector<int>>> fams(reference.size());
    if (const json* fj = find_field(j, {"fams", "FAMs", "mappings", "labels"});
        fj && !fj->is_null()) {
        if (!fj->is_array() || fj->size() != reference.size())
            throw ValidationError(context + ": sample " + id +
                                  " fams must list one entry per reference sentence");
        for (size_t f = 0; f < fj->size(); ++f) {
            for (const auto& group : fj->at(f)) {
                if (!group.is_array())
                    throw ValidationError(context + ": sample " + id +
                                          " support groups must be lists");
                std::vector<int> indices;
                std::vector<std::string> texts;
                for (const auto& member : group) {
                    if (member.is_number_integer())
                        indices.push_back(member.get<int>());
                    else if (member.is_string())
                        texts.push_back(member.get<std::string>());
                    else
                        throw ValidationError(context + ": sample " + id +
                                              " support entries must be ints or strings");
                }
                if (!texts.empty()) {
                    try {
                        for (int v : match_text_to_indices(texts, doc_sentences))
                            indices.push_back(v);
                    } catch (const ValidationError& e) {
                        throw ValidationError(context + ": sample " + id + ": " + e.what());
                    }
                }
                std::sort(indices.begin(), indices.end());
                indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
                fams[f].push_back(std::move(indices));
            }
        }
    }

    // A sample-level category label cannot say which facet is noisy; the
    // unmappable facets of a noisy sample are taken as the noisy ones.
    std::vector<std::string> categories;
    if (const json* cj = find_field(j, {"facet_categories"}); cj && cj->is_array()) {
        for (const auto& v : *cj) categories.push_back(v.get<std::string>());
    } else if (const json* sj = find_field(j, {"category", "Category", "sample_category"});
               sj && sj->is_string()) {
        SampleCategory sc = sample_category_from_string(sj->get<std::string>());
        for (const auto& facet : fams) {
            if (!facet.empty())
                categories.push_back("low");
            else
                categories.push_back(sc == SampleCategory::N ? "noise" : "high");
        }
    }
    return make_sample(std::move(id), std::move(document), std::move(reference),
                       std::move(fams), categories);
}

}  // namespace

std::vector<Sample> convert_external(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string content = buffer.str();

    std::vector<Sample> out;
    std::unordered_set<std::string> seen;
    auto add = [&](const json& j, const std::string& context) {
        Sample s = convert_record(j, context);
        if (!seen.insert(s.id).second)
            throw ValidationError(context + ": duplicate sample id " + s.id);
        out.push_back(std::move(s));
    };

    size_t first = content.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && content[first] == '[') {
        json root;
        try {
            root = json::parse(content);
        } catch (const json::parse_error& e) {
            throw ParseError(path + ": " + e.what());
        }
        int i = 0;
        for (const auto& j : root)
            add(j, path + "[" + std::to_string(i++) + "]");
    } else {
        for_each_jsonl(path, add);
    }
    return out;
}

}  // namespace facet::corpus
