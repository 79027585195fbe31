#pragma once

#include <map>
#include <string>
#include <vector>

namespace facet::stats {

// Two aligned samples of finite reals, length >= 2.
struct PairedSeries {
    std::vector<double> x, y;
    PairedSeries(std::vector<double> x, std::vector<double> y);  // validates
    std::size_t size() const { return x.size(); }
};

// Sample Pearson correlation. Throws MathError when either side has zero
// variance.
double pearson(const PairedSeries& series);

// Pearson correlation of fractional (average-for-ties) ranks.
double spearman(const PairedSeries& series);

// Tau-b: (concordant - discordant) / sqrt((pairs - ties_x)(pairs - ties_y)),
// computed with a merge-sort discordance count. Throws MathError when either
// series is fully tied.
double kendall_tau_b(const PairedSeries& series);

struct OlsModel {
    std::vector<double> coefficients;
    double intercept = 0.0;
};

// Least squares via the normal equations. Requires points >= features + 1 and
// a full-rank design matrix (intercept column included); a rank-deficient
// design raises MathError.
OlsModel ols_fit(const std::vector<std::vector<double>>& features,
                 const std::vector<double>& target);

std::vector<double> ols_predict(const OlsModel& model,
                                const std::vector<std::vector<double>>& features);

struct RankAgreement {
    double avg_spearman = 0.0;
    int samples_used = 0;
    int samples_skipped = 0;  // fully tied on either side
    // system -> fraction of its samples at metric-rank position 1..P
    // (index 0 = ranked first)
    std::map<std::string, std::vector<double>> position_fractions;
};

// Per-sample Spearman between metric scores and negated human ranks (1 =
// best), averaged over samples; fully tied samples are skipped and counted.
// Also tabulates, per system, how often the metric puts it at each rank
// position (competition ranking).
RankAgreement human_rank_agreement(
    const std::map<std::string, std::map<std::string, double>>& metric_scores,
    const std::map<std::string, std::map<std::string, int>>& human_ranks);

}  // namespace facet::stats
