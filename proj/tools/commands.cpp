#include "commands.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "facet/corpus.h"
#include "facet/error.h"
#include "facet/labelers.h"
#include "facet/metrics.h"
#include "facet/rouge.h"
#include "facet/stats.h"
#include "json.hpp"

namespace facetcli {

using facet::MathError;
using facet::ParseError;
using facet::ValidationError;
using nlohmann::ordered_json;
namespace corpus = facet::corpus;
namespace metrics = facet::metrics;
namespace labelers = facet::labelers;
namespace rouge = facet::rouge;
namespace stats = facet::stats;
namespace similarity = facet::similarity;

namespace {

// ---------------------------------------------------------------------------
// Formatting and output plumbing
// ---------------------------------------------------------------------------

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_tsv(const Table& table, std::ostream& os) {
    auto write_row = [&](const std::vector<std::string>& row) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) os << '\t';
            os << row[i];
        }
        os << '\n';
    };
    write_row(table.header);
    for (const auto& row : table.rows) write_row(row);
}

// Paper-style points: ratio scaled to 0-100, one decimal.
std::string pts(double ratio) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", ratio * 100.0);
    return buf;
}

std::string num4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

ordered_json json_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return round4(v);
}

void emit(const std::string& format, const std::string& out_path, const Table& table,
          const ordered_json& j) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw ParseError("cannot open output file: " + out_path);
        os = &file;
    }
    if (format == "json")
        *os << j.dump(2) << '\n';
    else
        write_tsv(table, *os);
}

// ---------------------------------------------------------------------------
// Shared loading helpers
// ---------------------------------------------------------------------------

std::set<corpus::SampleCategory> parse_categories(const std::string& spec) {
    std::set<corpus::SampleCategory> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.insert(corpus::sample_category_from_string(item));
    return out;
}

std::vector<corpus::Sample> apply_category_filter(const std::vector<corpus::Sample>& dataset,
                                                  const std::string& spec) {
    if (spec.empty()) return dataset;
    auto filtered = corpus::filter_by_category(dataset, parse_categories(spec));
    if (filtered.empty())
        throw ValidationError("no samples match category filter \"" + spec + "\"");
    return filtered;
}

std::pair<std::string, std::string> split_system_spec(const std::string& spec) {
    size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
        throw ValidationError("system must be given as NAME=PATH, got \"" + spec + "\"");
    return {spec.substr(0, eq), spec.substr(eq + 1)};
}

std::vector<corpus::SystemOutput> load_systems(const std::vector<std::string>& specs,
                                               const std::vector<corpus::Sample>& dataset) {
    std::vector<corpus::SystemOutput> out;
    std::set<std::string> names;
    for (const auto& spec : specs) {
        auto [name, path] = split_system_spec(spec);
        if (!names.insert(name).second)
            throw ValidationError("duplicate system name " + name);
        out.push_back(corpus::load_system_output(path, name, dataset));
    }
    return out;
}

corpus::Sample with_fams(const corpus::Sample& sample, std::vector<corpus::Fam> fams) {
    corpus::Sample out = sample;
    out.fams = std::move(fams);
    out.category = corpus::derive_sample_category(out.fams);
    return out;
}

metrics::EvalOptions eval_options(const CommonArgs& args) {
    metrics::EvalOptions opt;
    opt.scope = metrics::scope_from_string(args.scope);
    opt.stemming = args.stemming;
    opt.truncate_k = args.k;
    opt.jobs = args.jobs;
    return opt;
}

std::string config_note(const labelers::Config& config) {
    switch (config.strategy) {
        case labelers::Strategy::LeadK: return "k=" + std::to_string(config.k);
        case labelers::Strategy::GreedyRouge1: return "greedy";
        case labelers::Strategy::PerFacetTopN:
            return "topn=" + std::to_string(config.top_n);
    }
    return "-";
}

ordered_json aggregate_json(const metrics::Aggregate& a, bool normalize_far) {
    ordered_json j;
    j["samples"] = a.samples;
    j["far"] = round4(a.far);
    j["sar"] = round4(a.sar);
    if (normalize_far) j["far_normalized"] = round4(a.far_normalized);
    j["redundancy_rate"] = round4(a.redundancy_rate);
    auto score = [](const rouge::Score& s) {
        ordered_json o;
        o["precision"] = round4(s.precision);
        o["recall"] = round4(s.recall);
        o["f1"] = round4(s.f1);
        return o;
    };
    j["rouge1"] = score(a.rouge1);
    j["rouge2"] = score(a.rouge2);
    j["rougeL"] = score(a.rougeL);
    return j;
}

ordered_json sample_score_json(const metrics::SampleScore& s, bool normalize_far) {
    ordered_json j;
    j["far"] = round4(s.coverage.far);
    j["sar"] = round4(s.coverage.sar);
    if (normalize_far) j["far_normalized"] = round4(s.far_normalized);
    j["covered_facets"] = s.coverage.covered_facets;
    j["scoped_facets"] = s.coverage.scoped_facets;
    j["support_hit"] = s.coverage.support_hit;
    j["support_total"] = s.coverage.support_total;
    j["redundant"] = s.coverage.redundant;
    j["extracted"] = s.extracted_count;
    j["rouge1_f1"] = round4(s.rouge1.f1);
    j["rouge2_f1"] = round4(s.rouge2.f1);
    j["rougeL_f1"] = round4(s.rougeL.f1);
    return j;
}

std::map<std::string, std::map<std::string, int>> load_human_ranks(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::map<std::string, std::map<std::string, int>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::string context = path + ":" + std::to_string(lineno);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(context + ": " + e.what());
        }
        if (!j.contains("id") || !j.contains("ranking") || !j.at("ranking").is_object())
            throw ValidationError(context + ": record needs id and ranking object");
        std::string id = j.at("id").get<std::string>();
        if (out.count(id)) throw ValidationError(context + ": duplicate ranking for " + id);
        std::map<std::string, int> ranks;
        for (const auto& [system, rank] : j.at("ranking").items()) {
            if (!rank.is_number_integer())
                throw ValidationError(context + ": ranks must be integers");
            ranks[system] = rank.get<int>();
        }
        out.emplace(std::move(id), std::move(ranks));
    }
    return out;
}

double safe_correlation(double (*fn)(const stats::PairedSeries&),
                        const std::vector<double>& x, const std::vector<double>& y,
                        bool& degenerate) {
    try {
        return fn(stats::PairedSeries(x, y));
    } catch (const MathError&) {
        degenerate = true;
        return std::numeric_limits<double>::quiet_NaN();
    }
}

std::string corr_pts(double v) { return std::isnan(v) ? "nan" : pts(v); }

}  // namespace

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

int run_eval(const EvalArgs& args) {
    auto full_dataset = corpus::load_dataset(args.fams_path);
    auto systems = load_systems(args.systems, full_dataset);
    auto dataset = apply_category_filter(full_dataset, args.categories);
    if (dataset.empty()) throw ValidationError("dataset is empty");

    int target_k = args.k > 0 ? args.k : 3;
    if (args.lead > 0) {
        corpus::SystemOutput lead;
        lead.name = "Lead-" + std::to_string(args.lead);
        for (const auto& sample : dataset)
            lead.extractions[sample.id] = metrics::lead_k(sample, args.lead);
        systems.push_back(std::move(lead));
    }
    metrics::EvalOptions opt = eval_options(args);
    if (args.oracle) {
        corpus::SystemOutput oracle;
        oracle.name = "Oracle";
        for (const auto& sample : dataset)
            oracle.extractions[sample.id] =
                metrics::oracle_extract(sample, target_k, opt.scope).first;
        systems.push_back(std::move(oracle));
    }
    if (systems.empty())
        throw ValidationError("eval needs at least one --system, --lead or --oracle");

    std::vector<metrics::ScoreReport> reports;
    reports.reserve(systems.size());
    for (const auto& system : systems)
        reports.push_back(metrics::evaluate_system(dataset, system, opt));

    Table table;
    if (args.per_sample) {
        table.header = {"system", "id",          "far",        "sar",
                        "covered", "scoped",     "support_hit", "support_total",
                        "redundant", "extracted", "rouge1_f1",  "rouge2_f1",
                        "rougeL_f1"};
        for (const auto& report : reports)
            for (const auto& s : report.per_sample)
                table.rows.push_back({report.system, s.id, pts(s.coverage.far),
                                      pts(s.coverage.sar),
                                      std::to_string(s.coverage.covered_facets),
                                      std::to_string(s.coverage.scoped_facets),
                                      std::to_string(s.coverage.support_hit),
                                      std::to_string(s.coverage.support_total),
                                      s.coverage.redundant ? "1" : "0",
                                      std::to_string(s.extracted_count), pts(s.rouge1.f1),
                                      pts(s.rouge2.f1), pts(s.rougeL.f1)});
    } else {
        table.header = {"system",     "samples",   "categories", "scope",
                        "k",          "far",       "sar",        "redundancy_rate",
                        "rouge1_p",   "rouge1_r",  "rouge1_f1",  "rouge2_p",
                        "rouge2_r",   "rouge2_f1", "rougeL_p",   "rougeL_r",
                        "rougeL_f1"};
        if (args.normalize_far) table.header.push_back("far_normalized");
        for (const auto& report : reports) {
            const auto& a = report.aggregate;
            std::vector<std::string> row = {
                report.system,
                std::to_string(a.samples),
                args.categories.empty() ? "all" : args.categories,
                args.scope,
                args.k > 0 ? std::to_string(args.k) : "-",
                pts(a.far),
                pts(a.sar),
                pts(a.redundancy_rate),
                pts(a.rouge1.precision),
                pts(a.rouge1.recall),
                pts(a.rouge1.f1),
                pts(a.rouge2.precision),
                pts(a.rouge2.recall),
                pts(a.rouge2.f1),
                pts(a.rougeL.precision),
                pts(a.rougeL.recall),
                pts(a.rougeL.f1)};
            if (args.normalize_far) row.push_back(pts(a.far_normalized));
            table.rows.push_back(std::move(row));
        }
    }

    ordered_json j;
    j["command"] = "eval";
    j["config"] = {{"fams", args.fams_path},
                   {"categories", args.categories.empty() ? "all" : args.categories},
                   {"scope", args.scope},
                   {"k", args.k},
                   {"stemming", args.stemming}};
    j["systems"] = ordered_json::array();
    for (const auto& report : reports) {
        ordered_json sj;
        sj["name"] = report.system;
        sj["aggregate"] = aggregate_json(report.aggregate, args.normalize_far);
        ordered_json per_sample = ordered_json::object();
        for (const auto& s : report.per_sample)
            per_sample[s.id] = sample_score_json(s, args.normalize_far);
        sj["per_sample"] = per_sample;
        j["systems"].push_back(std::move(sj));
    }

    Table agreement_table;
    bool have_agreement = false;
    if (!args.human_ranks.empty()) {
        auto ranks = load_human_ranks(args.human_ranks);
        // per-sample metric scores keyed sample -> system
        auto scores_for = [&](auto getter) {
            std::map<std::string, std::map<std::string, double>> scores;
            for (const auto& report : reports)
                for (const auto& s : report.per_sample)
                    scores[s.id][report.system] = getter(s);
            return scores;
        };
        std::vector<std::pair<std::string,
                              std::map<std::string, std::map<std::string, double>>>>
            metric_scores;
        metric_scores.emplace_back("far", scores_for([](const metrics::SampleScore& s) {
                                       return s.coverage.far;
                                   }));
        metric_scores.emplace_back("sar", scores_for([](const metrics::SampleScore& s) {
                                       return s.coverage.sar;
                                   }));
        metric_scores.emplace_back("rouge1_f1",
                                   scores_for([](const metrics::SampleScore& s) {
                                       return s.rouge1.f1;
                                   }));

        size_t max_positions = 0;
        std::vector<std::pair<std::string, stats::RankAgreement>> agreements;
        for (const auto& [metric, scores] : metric_scores) {
            stats::RankAgreement agreement = stats::human_rank_agreement(scores, ranks);
            for (const auto& [system, fractions] : agreement.position_fractions)
                max_positions = std::max(max_positions, fractions.size());
            agreements.emplace_back(metric, std::move(agreement));
        }

        agreement_table.header = {"metric", "avg_spearman", "samples_used",
                                  "samples_skipped", "system"};
        for (size_t p = 1; p <= max_positions; ++p)
            agreement_table.header.push_back("rank" + std::to_string(p));
        ordered_json ja = ordered_json::object();
        for (const auto& [metric, agreement] : agreements) {
            ordered_json positions = ordered_json::object();
            for (const auto& [system, fractions] : agreement.position_fractions) {
                std::vector<std::string> row = {metric, num4(agreement.avg_spearman),
                                                std::to_string(agreement.samples_used),
                                                std::to_string(agreement.samples_skipped),
                                                system};
                ordered_json fracs = ordered_json::array();
                for (size_t p = 0; p < max_positions; ++p) {
                    double f = p < fractions.size() ? fractions[p] : 0.0;
                    row.push_back(pts(f));
                    fracs.push_back(round4(f));
                }
                agreement_table.rows.push_back(std::move(row));
                positions[system] = fracs;
            }
            ja[metric] = {{"avg_spearman", round4(agreement.avg_spearman)},
                          {"samples_used", agreement.samples_used},
                          {"samples_skipped", agreement.samples_skipped},
                          {"rank_fractions", positions}};
        }
        j["human_agreement"] = ja;
        have_agreement = true;
    }

    emit(args.format, args.out, table, j);
    if (have_agreement && args.format == "tsv") {
        if (args.out.empty()) {
            std::cout << '\n';
            write_tsv(agreement_table, std::cout);
        } else {
            std::ofstream file(args.out + ".agreement.tsv");
            if (!file)
                throw ParseError("cannot open output file: " + args.out + ".agreement.tsv");
            write_tsv(agreement_table, file);
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// label
// ---------------------------------------------------------------------------

int run_label(const LabelArgs& args) {
    auto dataset = corpus::load_dataset(args.fams_path);
    auto filtered = apply_category_filter(dataset, args.categories);
    labelers::Config config =
        labelers::config_from_method(args.method, args.topn, args.k > 0 ? args.k : 3,
                                     args.stemming);
    if (args.tfidf_scope == "document")
        config.tfidf_scope = labelers::TfIdfScope::DocumentOnly;
    else if (args.tfidf_scope != "sample")
        throw ValidationError("tfidf scope must be sample or document");

    auto machine = labelers::make_machine_fams_batch(filtered, config, args.jobs);
    std::vector<corpus::Sample> labeled;
    labeled.reserve(filtered.size());
    for (size_t i = 0; i < filtered.size(); ++i)
        labeled.push_back(with_fams(filtered[i], std::move(machine[i])));

    if (args.out.empty())
        corpus::save_dataset(labeled, std::cout);
    else
        corpus::save_dataset(labeled, args.out);
    return 0;
}

// ---------------------------------------------------------------------------
// bench-labelers
// ---------------------------------------------------------------------------

int run_bench(const BenchArgs& args) {
    auto dataset =
        apply_category_filter(corpus::load_dataset(args.fams_path), args.categories);
    std::vector<std::string> methods = args.methods;
    if (methods.empty())
        methods = {"lead",          "greedy-rouge1",    "tfidf",
                   "rouge1-f1",     "rouge2-f1",        "rougeL-recall",
                   "rougeL-precision", "rougeL-f1",     "rouge-avg-f1"};

    Table table;
    table.header = {"method", "config", "categories", "precision", "recall", "f1"};
    ordered_json j;
    j["command"] = "bench-labelers";
    j["config"] = {{"fams", args.fams_path},
                   {"categories", args.categories.empty() ? "all" : args.categories},
                   {"topn", args.topn},
                   {"stemming", args.stemming}};
    j["rows"] = ordered_json::array();

    for (const auto& method : methods) {
        labelers::Config config = labelers::config_from_method(
            method, args.topn, args.k > 0 ? args.k : 3, args.stemming);
        auto machine = labelers::make_machine_fams_batch(dataset, config, args.jobs);
        std::map<std::string, std::vector<int>> predictions;
        for (size_t i = 0; i < dataset.size(); ++i)
            predictions[dataset[i].id] = labelers::predicted_support_set(machine[i]);
        metrics::Prf prf = metrics::support_prf(predictions, dataset);
        table.rows.push_back({method, config_note(config),
                              args.categories.empty() ? "all" : args.categories,
                              pts(prf.precision), pts(prf.recall), pts(prf.f1)});
        j["rows"].push_back({{"method", method},
                             {"config", config_note(config)},
                             {"precision", round4(prf.precision)},
                             {"recall", round4(prf.recall)},
                             {"f1", round4(prf.f1)}});
    }
    emit(args.format, args.out, table, j);
    return 0;
}

// ---------------------------------------------------------------------------
// correlate
// ---------------------------------------------------------------------------

int run_correlate(const CorrelateArgs& args) {
    auto full_dataset = corpus::load_dataset(args.fams_path);
    auto systems = load_systems(args.systems, full_dataset);
    if (systems.size() < 2)
        throw ValidationError("correlate needs at least 2 systems");
    auto dataset = apply_category_filter(full_dataset, args.categories);
    metrics::FacetScope scope = metrics::scope_from_string(args.scope);

    std::vector<std::string> methods = args.methods;
    if (methods.empty())
        methods = {"rouge1-f1", "rouge2-f1", "rougeL-f1", "rouge-avg-f1"};

    // ground-truth FAR per (system, sample), and per-system means
    auto truncate = [&](std::vector<int> extraction) {
        if (args.k > 0 && static_cast<int>(extraction.size()) > args.k)
            extraction.resize(args.k);
        return extraction;
    };
    std::vector<std::vector<double>> truth(systems.size());
    std::vector<double> truth_mean(systems.size(), 0.0);
    for (size_t s = 0; s < systems.size(); ++s) {
        truth[s].reserve(dataset.size());
        for (const auto& sample : dataset) {
            auto it = systems[s].extractions.find(sample.id);
            if (it == systems[s].extractions.end())
                throw ValidationError("system " + systems[s].name +
                                      " has no extraction for sample " + sample.id);
            truth[s].push_back(metrics::far(sample, truncate(it->second), scope));
        }
        for (double v : truth[s]) truth_mean[s] += v;
        truth_mean[s] /= dataset.size();
    }

    Table table;
    table.header = {"method",         "topn",            "categories",
                    "scope",          "pearson_system",  "spearman_system",
                    "kendall_system", "pearson_sample",  "spearman_sample",
                    "kendall_sample"};
    ordered_json j;
    j["command"] = "correlate";
    j["config"] = {{"fams", args.fams_path},
                   {"categories", args.categories.empty() ? "all" : args.categories},
                   {"scope", args.scope},
                   {"k", args.k},
                   {"stemming", args.stemming}};
    j["rows"] = ordered_json::array();

    bool degenerate = false;
    for (const auto& method : methods) {
        for (int topn = 1; topn <= args.topn_max; ++topn) {
            labelers::Config config = labelers::config_from_method(
                method, topn, args.k > 0 ? args.k : 3, args.stemming);
            auto machine = labelers::make_machine_fams_batch(dataset, config, args.jobs);
            std::vector<corpus::Sample> estimated;
            estimated.reserve(dataset.size());
            for (size_t i = 0; i < dataset.size(); ++i)
                estimated.push_back(with_fams(dataset[i], machine[i]));

            std::vector<double> est_mean(systems.size(), 0.0);
            std::vector<double> pooled_est, pooled_truth;
            for (size_t s = 0; s < systems.size(); ++s) {
                for (size_t i = 0; i < estimated.size(); ++i) {
                    double est = metrics::far(
                        estimated[i],
                        truncate(systems[s].extractions.at(estimated[i].id)), scope);
                    est_mean[s] += est;
                    pooled_est.push_back(est);
                    pooled_truth.push_back(truth[s][i]);
                }
                est_mean[s] /= estimated.size();
            }

            double r_sys = safe_correlation(stats::pearson, est_mean, truth_mean, degenerate);
            double rho_sys = safe_correlation(stats::spearman, est_mean, truth_mean, degenerate);
            double tau_sys =
                safe_correlation(stats::kendall_tau_b, est_mean, truth_mean, degenerate);
            double r_smp =
                safe_correlation(stats::pearson, pooled_est, pooled_truth, degenerate);
            double rho_smp =
                safe_correlation(stats::spearman, pooled_est, pooled_truth, degenerate);
            double tau_smp =
                safe_correlation(stats::kendall_tau_b, pooled_est, pooled_truth, degenerate);

            table.rows.push_back({method, std::to_string(topn),
                                  args.categories.empty() ? "all" : args.categories,
                                  args.scope, corr_pts(r_sys), corr_pts(rho_sys),
                                  corr_pts(tau_sys), corr_pts(r_smp), corr_pts(rho_smp),
                                  corr_pts(tau_smp)});
            ordered_json row;
            row["method"] = method;
            row["topn"] = topn;
            ordered_json est_json = ordered_json::object();
            for (size_t s = 0; s < systems.size(); ++s)
                est_json[systems[s].name] = round4(est_mean[s]);
            row["estimated_far"] = est_json;
            ordered_json truth_json = ordered_json::object();
            for (size_t s = 0; s < systems.size(); ++s)
                truth_json[systems[s].name] = round4(truth_mean[s]);
            row["truth_far"] = truth_json;
            row["system_level"] = {{"pearson", json_or_null(r_sys)},
                                   {"spearman", json_or_null(rho_sys)},
                                   {"kendall", json_or_null(tau_sys)}};
            row["sample_level"] = {{"pearson", json_or_null(r_smp)},
                                   {"spearman", json_or_null(rho_smp)},
                                   {"kendall", json_or_null(tau_smp)}};
            j["rows"].push_back(std::move(row));
        }
    }
    emit(args.format, args.out, table, j);
    return degenerate ? 1 : 0;
}

// ---------------------------------------------------------------------------
// autofar
// ---------------------------------------------------------------------------

int run_autofar(const AutofarArgs& args) {
    auto train = apply_category_filter(corpus::load_dataset(args.fams_path),
                                       args.categories);
    auto systems = load_systems(args.systems, train);
    if (systems.empty()) throw ValidationError("autofar needs at least one system");
    metrics::FacetScope scope = metrics::scope_from_string(args.scope);

    std::vector<std::string> features = args.features;
    if (features.empty())
        features = {"rouge1-f1", "rouge2-f1", "rougeL-f1", "rouge-avg-f1"};

    auto truncate = [&](std::vector<int> extraction) {
        if (args.k > 0 && static_cast<int>(extraction.size()) > args.k)
            extraction.resize(args.k);
        return extraction;
    };

    // estimated-FAR feature datasets, one per labeler
    auto estimate_sets = [&](const std::vector<corpus::Sample>& data) {
        std::vector<std::vector<corpus::Sample>> sets;
        for (const auto& method : features) {
            labelers::Config config = labelers::config_from_method(
                method, args.topn, args.k > 0 ? args.k : 3, args.stemming);
            auto machine = labelers::make_machine_fams_batch(data, config, args.jobs);
            std::vector<corpus::Sample> estimated;
            estimated.reserve(data.size());
            for (size_t i = 0; i < data.size(); ++i)
                estimated.push_back(with_fams(data[i], machine[i]));
            sets.push_back(std::move(estimated));
        }
        return sets;
    };

    auto feature_rows = [&](const std::vector<std::vector<corpus::Sample>>& sets,
                            const corpus::SystemOutput& system) {
        std::vector<std::vector<double>> rows(sets.front().size(),
                                              std::vector<double>(sets.size()));
        for (size_t f = 0; f < sets.size(); ++f)
            for (size_t i = 0; i < sets[f].size(); ++i) {
                auto it = system.extractions.find(sets[f][i].id);
                if (it == system.extractions.end())
                    throw ValidationError("system " + system.name +
                                          " has no extraction for sample " +
                                          sets[f][i].id);
                rows[i][f] = metrics::far(sets[f][i], truncate(it->second), scope);
            }
        return rows;
    };

    auto train_sets = estimate_sets(train);
    std::vector<std::vector<double>> design;
    std::vector<double> target;
    std::vector<std::vector<std::vector<double>>> per_system_rows;
    std::vector<std::vector<double>> per_system_truth;
    for (const auto& system : systems) {
        auto rows = feature_rows(train_sets, system);
        std::vector<double> truth;
        truth.reserve(train.size());
        for (const auto& sample : train)
            truth.push_back(
                metrics::far(sample, truncate(system.extractions.at(sample.id)), scope));
        design.insert(design.end(), rows.begin(), rows.end());
        target.insert(target.end(), truth.begin(), truth.end());
        per_system_rows.push_back(std::move(rows));
        per_system_truth.push_back(std::move(truth));
    }

    stats::OlsModel model = stats::ols_fit(design, target);

    std::vector<double> far_mean(systems.size(), 0.0), autofar_mean(systems.size(), 0.0);
    for (size_t s = 0; s < systems.size(); ++s) {
        std::vector<double> pred = stats::ols_predict(model, per_system_rows[s]);
        for (size_t i = 0; i < pred.size(); ++i) {
            autofar_mean[s] += pred[i];
            far_mean[s] += per_system_truth[s][i];
        }
        autofar_mean[s] /= pred.size();
        far_mean[s] /= pred.size();
    }

    bool degenerate = false;
    double nan = std::numeric_limits<double>::quiet_NaN();
    double r_fit = nan, rho_fit = nan, tau_fit = nan;
    if (systems.size() >= 2) {
        r_fit = safe_correlation(stats::pearson, far_mean, autofar_mean, degenerate);
        rho_fit = safe_correlation(stats::spearman, far_mean, autofar_mean, degenerate);
        tau_fit = safe_correlation(stats::kendall_tau_b, far_mean, autofar_mean, degenerate);
    }

    std::vector<double> autofar_l(systems.size(), nan);
    double r_large = nan, rho_large = nan, tau_large = nan;
    if (!args.predict_path.empty()) {
        auto predict_data = corpus::load_dataset(args.predict_path);
        auto predict_systems = load_systems(args.systems, predict_data);
        auto predict_sets = estimate_sets(predict_data);
        for (size_t s = 0; s < systems.size(); ++s) {
            auto rows = feature_rows(predict_sets, predict_systems[s]);
            std::vector<double> pred = stats::ols_predict(model, rows);
            double mean = 0.0;
            for (double v : pred) mean += v;
            autofar_l[s] = mean / pred.size();
        }
        if (systems.size() >= 2) {
            r_large = safe_correlation(stats::pearson, far_mean, autofar_l, degenerate);
            rho_large = safe_correlation(stats::spearman, far_mean, autofar_l, degenerate);
            tau_large =
                safe_correlation(stats::kendall_tau_b, far_mean, autofar_l, degenerate);
        }
    }

    Table table;
    table.header = {"system",  "categories", "scope",     "far",
                    "autofar", "autofar_l",  "r_fit",     "rho_fit",
                    "tau_fit", "r_large",    "rho_large", "tau_large"};
    for (size_t s = 0; s < systems.size(); ++s)
        table.rows.push_back({systems[s].name,
                              args.categories.empty() ? "all" : args.categories,
                              args.scope, pts(far_mean[s]), pts(autofar_mean[s]),
                              std::isnan(autofar_l[s]) ? "na" : pts(autofar_l[s]),
                              corr_pts(r_fit), corr_pts(rho_fit), corr_pts(tau_fit),
                              corr_pts(r_large), corr_pts(rho_large),
                              corr_pts(tau_large)});

    ordered_json j;
    j["command"] = "autofar";
    j["config"] = {{"fams", args.fams_path},
                   {"predict", args.predict_path},
                   {"features", features},
                   {"topn", args.topn},
                   {"scope", args.scope},
                   {"k", args.k}};
    ordered_json coeffs = ordered_json::object();
    for (size_t f = 0; f < features.size(); ++f)
        coeffs[features[f]] = round4(model.coefficients[f]);
    j["model"] = {{"intercept", round4(model.intercept)}, {"coefficients", coeffs}};
    j["systems"] = ordered_json::array();
    for (size_t s = 0; s < systems.size(); ++s)
        j["systems"].push_back(
            {{"name", systems[s].name},
             {"far", round4(far_mean[s])},
             {"autofar", round4(autofar_mean[s])},
             {"autofar_l", std::isnan(autofar_l[s]) ? ordered_json(nullptr)
                                                    : ordered_json(round4(autofar_l[s]))}});
    j["correlation"] = {{"fit",
                         {{"pearson", json_or_null(r_fit)},
                          {"spearman", json_or_null(rho_fit)},
                          {"kendall", json_or_null(tau_fit)}}},
                        {"large",
                         {{"pearson", json_or_null(r_large)},
                          {"spearman", json_or_null(rho_large)},
                          {"kendall", json_or_null(tau_large)}}}};
    emit(args.format, args.out, table, j);
    return degenerate ? 1 : 0;
}

// ---------------------------------------------------------------------------
// breakdown
// ---------------------------------------------------------------------------

int run_breakdown(const BreakdownArgs& args) {
    auto dataset = corpus::load_dataset(args.fams_path);
    if (args.systems.empty()) throw ValidationError("breakdown needs at least one system");
    metrics::FacetScope scope = metrics::scope_from_string(args.scope);

    std::string metric = args.metric;
    bool coverage_metric = metric == "far" || metric == "sar";
    if (!coverage_metric && metric != "rouge1-f1" && metric != "rouge2-f1" &&
        metric != "rougeL-f1")
        throw ValidationError("breakdown metric must be one of rouge1-f1, rouge2-f1, "
                              "rougeL-f1, far, sar");

    struct Subset {
        std::string name;
        std::set<corpus::SampleCategory> categories;
    };
    std::vector<Subset> subsets = {
        {"N", {corpus::SampleCategory::N}},
        {"L", {corpus::SampleCategory::L}},
        {"H", {corpus::SampleCategory::H}},
        {"L+H", {corpus::SampleCategory::L, corpus::SampleCategory::H}},
    };

    std::map<std::string, size_t> sample_index;
    for (size_t i = 0; i < dataset.size(); ++i) sample_index[dataset[i].id] = i;

    // reference token cache
    std::vector<std::vector<rouge::TokenSeq>> references(dataset.size());
    for (size_t i = 0; i < dataset.size(); ++i)
        for (const auto& sentence : dataset[i].reference)
            references[i].push_back(rouge::tokenize(sentence.raw, args.stemming));

    Table table;
    table.header = {"system", "metric"};
    for (const auto& subset : subsets) {
        table.header.push_back("n_" + subset.name);
        table.header.push_back("score_" + subset.name);
    }
    ordered_json j;
    j["command"] = "breakdown";
    j["config"] = {{"fams", args.fams_path},
                   {"metric", metric},
                   {"scope", args.scope},
                   {"k", args.k},
                   {"stemming", args.stemming}};
    j["rows"] = ordered_json::array();

    for (const auto& spec : args.systems) {
        auto [name, path] = split_system_spec(spec);

        // per-sample metric values; text-only systems have no FAR/SAR
        std::vector<double> values(dataset.size(),
                                   std::numeric_limits<double>::quiet_NaN());
        bool applicable = true;
        if (coverage_metric) {
            try {
                corpus::SystemOutput system = corpus::load_system_output(path, name, dataset);
                for (size_t i = 0; i < dataset.size(); ++i) {
                    auto it = system.extractions.find(dataset[i].id);
                    if (it == system.extractions.end())
                        throw ValidationError("system " + name +
                                              " has no extraction for sample " +
                                              dataset[i].id);
                    std::vector<int> extraction = it->second;
                    if (args.k > 0 && static_cast<int>(extraction.size()) > args.k)
                        extraction.resize(args.k);
                    auto cov = metrics::coverage(dataset[i], extraction, scope);
                    values[i] = metric == "far" ? cov.far : cov.sar;
                }
            } catch (const ValidationError&) {
                applicable = false;  // abstractive output: indices unresolvable
            }
        } else {
            auto texts = corpus::load_text_output(path, dataset);
            for (size_t i = 0; i < dataset.size(); ++i) {
                auto it = texts.find(dataset[i].id);
                if (it == texts.end())
                    throw ValidationError("system " + name + " has no output for sample " +
                                          dataset[i].id);
                std::vector<rouge::TokenSeq> candidate;
                size_t limit = it->second.size();
                if (args.k > 0) limit = std::min<size_t>(limit, args.k);
                for (size_t t = 0; t < limit; ++t)
                    candidate.push_back(rouge::tokenize(it->second[t], args.stemming));
                if (metric == "rouge1-f1")
                    values[i] = rouge::rouge_n(candidate, references[i], 1).f1;
                else if (metric == "rouge2-f1")
                    values[i] = rouge::rouge_n(candidate, references[i], 2).f1;
                else
                    values[i] = rouge::rouge_l_summary(candidate, references[i]).f1;
            }
        }

        std::vector<std::string> row = {name, metric};
        ordered_json row_json;
        row_json["system"] = name;
        row_json["metric"] = metric;
        for (const auto& subset : subsets) {
            int count = 0;
            double sum = 0.0;
            for (size_t i = 0; i < dataset.size(); ++i) {
                if (!subset.categories.count(dataset[i].category)) continue;
                ++count;
                if (applicable) sum += values[i];
            }
            row.push_back(std::to_string(count));
            std::string cell =
                !applicable ? "na" : (count > 0 ? pts(sum / count) : "na");
            row.push_back(cell);
            std::string key = subset.name == "L+H" ? "LH" : subset.name;
            row_json["n_" + key] = count;
            row_json["score_" + key] =
                (!applicable || count == 0) ? ordered_json(nullptr)
                                            : ordered_json(round4(sum / count));
        }
        table.rows.push_back(std::move(row));
        j["rows"].push_back(std::move(row_json));
    }
    emit(args.format, args.out, table, j);
    return 0;
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

int run_stats(const StatsArgs& args) {
    auto dataset =
        apply_category_filter(corpus::load_dataset(args.fams_path), args.categories);
    corpus::DatasetStats st = corpus::dataset_stats(dataset);

    auto category_count = [&](corpus::SampleCategory c) {
        auto it = st.samples_per_category.find(c);
        return it == st.samples_per_category.end() ? 0 : it->second;
    };
    auto facet_count = [&](corpus::FacetCategory c) {
        auto it = st.facets_per_category.find(c);
        return it == st.facets_per_category.end() ? 0 : it->second;
    };

    Table table;
    table.header = {"field", "value"};
    auto add = [&](const std::string& field, const std::string& value) {
        table.rows.push_back({field, value});
    };
    add("categories_filter", args.categories.empty() ? "all" : args.categories);
    add("samples", std::to_string(st.samples));
    add("samples_N", std::to_string(category_count(corpus::SampleCategory::N)));
    add("samples_L", std::to_string(category_count(corpus::SampleCategory::L)));
    add("samples_H", std::to_string(category_count(corpus::SampleCategory::H)));
    add("facets", std::to_string(st.facets));
    add("facets_noise", std::to_string(facet_count(corpus::FacetCategory::Noise)));
    add("facets_low", std::to_string(facet_count(corpus::FacetCategory::Low)));
    add("facets_high", std::to_string(facet_count(corpus::FacetCategory::High)));
    add("facets_with_groups", std::to_string(st.facets_with_groups));
    add("avg_support_unique", num4(st.avg_support_unique));
    add("avg_support_nonunique", num4(st.avg_support_nonunique));
    add("avg_groups_per_facet", num4(st.avg_groups_per_facet));
    for (const auto& [mbar, count] : st.mbar_histogram)
        add("facets_mbar_" + std::to_string(mbar), std::to_string(count));

    ordered_json j;
    j["command"] = "stats";
    j["config"] = {{"fams", args.fams_path},
                   {"categories", args.categories.empty() ? "all" : args.categories}};
    j["samples"] = st.samples;
    j["samples_per_category"] = {{"N", category_count(corpus::SampleCategory::N)},
                                 {"L", category_count(corpus::SampleCategory::L)},
                                 {"H", category_count(corpus::SampleCategory::H)}};
    j["facets"] = st.facets;
    j["facets_per_category"] = {{"noise", facet_count(corpus::FacetCategory::Noise)},
                                {"low", facet_count(corpus::FacetCategory::Low)},
                                {"high", facet_count(corpus::FacetCategory::High)}};
    j["facets_with_groups"] = st.facets_with_groups;
    j["avg_support_unique"] = round4(st.avg_support_unique);
    j["avg_support_nonunique"] = round4(st.avg_support_nonunique);
    j["avg_groups_per_facet"] = round4(st.avg_groups_per_facet);
    ordered_json hist = ordered_json::object();
    for (const auto& [mbar, count] : st.mbar_histogram)
        hist[std::to_string(mbar)] = count;
    j["mbar_histogram"] = hist;

    emit(args.format, args.out, table, j);
    return 0;
}

// ---------------------------------------------------------------------------
// convert
// ---------------------------------------------------------------------------

int run_convert(const ConvertArgs& args) {
    auto dataset = corpus::convert_external(args.in_path);
    if (args.out_path.empty())
        corpus::save_dataset(dataset, std::cout);
    else
        corpus::save_dataset(dataset, args.out_path);
    return 0;
}

}  // namespace facetcli
