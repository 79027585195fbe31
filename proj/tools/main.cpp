#include <iostream>

#include "CLI11.hpp"
#include "commands.h"
#include "facet/error.h"

namespace {

void add_common(CLI::App* cmd, facetcli::CommonArgs& args, bool fams_required = true) {
    auto* fams = cmd->add_option("--fams", args.fams_path, "dataset file (JSONL)");
    if (fams_required) fams->required();
    cmd->add_option("--system", args.systems, "system output as NAME=PATH (repeatable)");
    cmd->add_option("--categories", args.categories,
                    "comma-separated sample categories to keep (N,L,H)");
    cmd->add_option("--scope", args.scope, "facet scope: mappable | all")
        ->check(CLI::IsMember({"mappable", "all"}));
    cmd->add_option("--k", args.k, "truncate every extraction to its first k indices");
    cmd->add_option("--format", args.format, "output format: tsv | json")
        ->check(CLI::IsMember({"tsv", "json"}));
    cmd->add_option("--out", args.out, "output path (default: stdout)");
    cmd->add_option("--jobs", args.jobs, "worker threads (results are identical)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--stemming", args.stemming, "apply Porter stemming when tokenizing");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"faceteval: facet-aware evaluation for extractive summarization"};
    app.require_subcommand(1);

    facetcli::EvalArgs eval_args;
    facetcli::LabelArgs label_args;
    facetcli::BenchArgs bench_args;
    facetcli::CorrelateArgs correlate_args;
    facetcli::AutofarArgs autofar_args;
    facetcli::BreakdownArgs breakdown_args;
    facetcli::StatsArgs stats_args;
    facetcli::ConvertArgs convert_args;
    int rc = 0;

    auto* eval = app.add_subcommand("eval", "score systems with FAR, SAR and ROUGE");
    add_common(eval, eval_args);
    eval->add_option("--lead", eval_args.lead, "add a Lead-k baseline row");
    eval->add_flag("--oracle", eval_args.oracle,
                   "add the exhaustive-search FAR upper bound row");
    eval->add_flag("--normalize-far", eval_args.normalize_far,
                   "also report FAR divided by the extraction size");
    eval->add_flag("--per-sample", eval_args.per_sample,
                   "TSV: one row per (system, sample) instead of aggregates");
    eval->add_option("--human-ranks", eval_args.human_ranks,
                     "ranking file for human-agreement reporting");
    eval->callback([&] { rc = facetcli::run_eval(eval_args); });

    auto* label = app.add_subcommand("label", "create machine FAMs with a sentence labeler");
    add_common(label, label_args);
    label->add_option("--method", label_args.method,
                      "lead | greedy-rouge1 | rouge1-f1 | rouge2-f1 | rougeL-recall | "
                      "rougeL-precision | rougeL-f1 | rouge-avg-f1 | tfidf");
    label->add_option("--topn", label_args.topn, "support groups per facet")
        ->check(CLI::PositiveNumber);
    label->add_option("--tfidf-scope", label_args.tfidf_scope,
                      "tf-idf fitting corpus: sample | document")
        ->check(CLI::IsMember({"sample", "document"}));
    label->callback([&] { rc = facetcli::run_label(label_args); });

    auto* bench = app.add_subcommand("bench-labelers",
                                     "support-discovery precision/recall/F1 per labeler");
    add_common(bench, bench_args);
    bench->add_option("--methods", bench_args.methods, "labelers to benchmark")
        ->delimiter(',');
    bench->add_option("--topn", bench_args.topn, "support sentences per facet")
        ->check(CLI::PositiveNumber);
    bench->callback([&] { rc = facetcli::run_bench(bench_args); });

    auto* correlate = app.add_subcommand(
        "correlate", "correlation between estimated and ground-truth FAR");
    add_common(correlate, correlate_args);
    correlate->add_option("--methods", correlate_args.methods, "labelers to test")
        ->delimiter(',');
    correlate->add_option("--topn-max", correlate_args.topn_max,
                          "evaluate top-n labels for n = 1..topn-max")
        ->check(CLI::PositiveNumber);
    correlate->callback([&] { rc = facetcli::run_correlate(correlate_args); });

    auto* autofar = app.add_subcommand(
        "autofar", "fit FAR from labeler estimates by least squares");
    add_common(autofar, autofar_args);
    autofar->add_option("--features", autofar_args.features,
                        "labelers whose estimated FAR becomes a feature")
        ->delimiter(',');
    autofar->add_option("--topn", autofar_args.topn, "support groups per facet")
        ->check(CLI::PositiveNumber);
    autofar->add_option("--predict", autofar_args.predict_path,
                        "unannotated dataset to extrapolate to");
    autofar->callback([&] { rc = facetcli::run_autofar(autofar_args); });

    auto* breakdown = app.add_subcommand(
        "breakdown", "per-category scores (N / L / H / L+H) per system");
    add_common(breakdown, breakdown_args);
    breakdown->add_option("--metric", breakdown_args.metric,
                          "rouge1-f1 | rouge2-f1 | rougeL-f1 | far | sar");
    breakdown->callback([&] { rc = facetcli::run_breakdown(breakdown_args); });

    auto* stats = app.add_subcommand("stats", "dataset statistics report");
    add_common(stats, stats_args);
    stats->callback([&] { rc = facetcli::run_stats(stats_args); });

    auto* convert = app.add_subcommand(
        "convert", "map a third-party annotation file to the canonical format");
    convert->add_option("--in", convert_args.in_path, "annotation file")->required();
    convert->add_option("--out", convert_args.out_path, "output path (default: stdout)");
    convert->callback([&] { rc = facetcli::run_convert(convert_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const facet::MathError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const facet::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const facet::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return rc;
}
