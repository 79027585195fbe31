#pragma once

#include <string>
#include <vector>

namespace facetcli {

struct CommonArgs {
    std::string fams_path;
    std::vector<std::string> systems;  // NAME=PATH
    std::string categories;           // comma-separated subset of N,L,H; empty = all
    std::string scope = "mappable";   // mappable | all
    int k = 0;                        // truncate extractions; 0 = off
    std::string format = "tsv";       // tsv | json
    std::string out;                  // empty = stdout
    int jobs = 1;
    bool stemming = false;
};

struct EvalArgs : CommonArgs {
    int lead = 0;        // add a Lead-k row
    bool oracle = false; // add the Oracle row
    bool normalize_far = false;
    bool per_sample = false;   // TSV: per-sample rows instead of aggregates
    std::string human_ranks;   // optional ranking file
};

struct LabelArgs : CommonArgs {
    std::string method = "rouge-avg-f1";
    int topn = 1;
    std::string tfidf_scope = "sample";  // sample | document
};

struct BenchArgs : CommonArgs {
    std::vector<std::string> methods;
    int topn = 1;
};

struct CorrelateArgs : CommonArgs {
    std::vector<std::string> methods;
    int topn_max = 3;
};

struct AutofarArgs : CommonArgs {
    std::vector<std::string> features;
    int topn = 3;
    std::string predict_path;  // optional unannotated split
};

struct BreakdownArgs : CommonArgs {
    std::string metric = "rouge1-f1";
};

struct StatsArgs : CommonArgs {};

struct ConvertArgs {
    std::string in_path;
    std::string out_path;  // empty = stdout
};

int run_eval(const EvalArgs& args);
int run_label(const LabelArgs& args);
int run_bench(const BenchArgs& args);
int run_correlate(const CorrelateArgs& args);
int run_autofar(const AutofarArgs& args);
int run_breakdown(const BreakdownArgs& args);
int run_stats(const StatsArgs& args);
int run_convert(const ConvertArgs& args);

}  // namespace facetcli
