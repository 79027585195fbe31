#include "facet/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "facet/error.h"

namespace facet::stats {

PairedSeries::PairedSeries(std::vector<double> x_in, std::vector<double> y_in)
    : x(std::move(x_in)), y(std::move(y_in)) {
    if (x.size() != y.size())
        throw ValidationError("paired series length mismatch (" +
                              std::to_string(x.size()) + " vs " +
                              std::to_string(y.size()) + ")");
    if (x.size() < 2) throw ValidationError("paired series needs at least 2 points");
    for (double v : x)
        if (!std::isfinite(v)) throw ValidationError("non-finite value in series x");
    for (double v : y)
        if (!std::isfinite(v)) throw ValidationError("non-finite value in series y");
}

double pearson(const PairedSeries& series) {
    size_t n = series.size();
    double mx = std::accumulate(series.x.begin(), series.x.end(), 0.0) / n;
    double my = std::accumulate(series.y.begin(), series.y.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        double dx = series.x[i] - mx;
        double dy = series.y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0)
        throw MathError("pearson: zero variance in a series");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

// Fractional ranks, ties averaged. rank 1 = smallest value.
std::vector<double> fractional_ranks(const std::vector<double>& values) {
    size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

// Number of strictly-decreasing crossings, counted during a merge sort.
long long count_inversions(std::vector<double>& values) {
    size_t n = values.size();
    if (n < 2) return 0;
    std::vector<double> buffer(n);
    long long inversions = 0;
    for (size_t width = 1; width < n; width *= 2) {
        for (size_t lo = 0; lo + width < n; lo += 2 * width) {
            size_t mid = lo + width;
            size_t hi = std::min(lo + 2 * width, n);
            size_t a = lo, b = mid, out = lo;
            while (a < mid && b < hi) {
                if (values[b] < values[a]) {
                    inversions += static_cast<long long>(mid - a);
                    buffer[out++] = values[b++];
                } else {
                    buffer[out++] = values[a++];
                }
            }
            while (a < mid) buffer[out++] = values[a++];
            while (b < hi) buffer[out++] = values[b++];
            std::copy(buffer.begin() + lo, buffer.begin() + hi, values.begin() + lo);
        }
    }
    return inversions;
}

long long tie_pairs(const std::vector<double>& sorted) {
    long long pairs = 0;
    size_t i = 0;
    while (i < sorted.size()) {
        size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        long long t = static_cast<long long>(j - i + 1);
        pairs += t * (t - 1) / 2;
        i = j + 1;
    }
    return pairs;
}

}  // namespace

double spearman(const PairedSeries& series) {
    PairedSeries ranked(fractional_ranks(series.x), fractional_ranks(series.y));
    try {
        return pearson(ranked);
    } catch (const MathError&) {
        throw MathError("spearman: a series is fully tied");
    }
}

double kendall_tau_b(const PairedSeries& series) {
    size_t n = series.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (series.x[a] != series.x[b]) return series.x[a] < series.x[b];
        return series.y[a] < series.y[b];
    });

    long long n0 = static_cast<long long>(n) * (n - 1) / 2;

    // ties in x, and pairs tied in both x and y
    long long n1 = 0, n3 = 0;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && series.x[order[j + 1]] == series.x[order[i]]) ++j;
        long long t = static_cast<long long>(j - i + 1);
        n1 += t * (t - 1) / 2;
        size_t a = i;
        while (a <= j) {
            size_t b = a;
            while (b + 1 <= j && series.y[order[b + 1]] == series.y[order[a]]) ++b;
            long long u = static_cast<long long>(b - a + 1);
            n3 += u * (u - 1) / 2;
            a = b + 1;
        }
        i = j + 1;
    }

    std::vector<double> y_by_x(n);
    for (size_t k = 0; k < n; ++k) y_by_x[k] = series.y[order[k]];
    std::vector<double> y_sorted = y_by_x;
    long long swaps = count_inversions(y_by_x);
    std::sort(y_sorted.begin(), y_sorted.end());
    long long n2 = tie_pairs(y_sorted);

    long long numerator = n0 - n1 - n2 + n3 - 2 * swaps;
    double denom_x = static_cast<double>(n0 - n1);
    double denom_y = static_cast<double>(n0 - n2);
    if (denom_x <= 0 || denom_y <= 0)
        throw MathError("kendall: a series is fully tied");
    return std::clamp(numerator / std::sqrt(denom_x * denom_y), -1.0, 1.0);
}

namespace {

// Gaussian elimination with partial pivoting; throws on rank deficiency.
std::vector<double> solve_linear(std::vector<std::vector<double>> a,
                                 std::vector<double> b) {
    size_t n = b.size();
    double scale = 1.0;
    for (const auto& row : a)
        for (double v : row) scale = std::max(scale, std::fabs(v));
    double tolerance = 1e-9 * scale;

    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) <= tolerance)
            throw MathError("ols: design matrix is rank deficient");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (size_t r = col + 1; r < n; ++r) {
            double factor = a[r][col] / a[col][col];
            for (size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (size_t r = n; r-- > 0;) {
        double sum = b[r];
        for (size_t c = r + 1; c < n; ++c) sum -= a[r][c] * x[c];
        x[r] = sum / a[r][r];
    }
    return x;
}

}  // namespace

OlsModel ols_fit(const std::vector<std::vector<double>>& features,
                 const std::vector<double>& target) {
    size_t m = features.size();
    if (m != target.size())
        throw ValidationError("ols: feature rows and target length differ");
    if (m == 0) throw ValidationError("ols: no training points");
    size_t k = features[0].size();
    for (const auto& row : features)
        if (row.size() != k) throw ValidationError("ols: ragged feature matrix");
    if (m < k + 1)
        throw ValidationError("ols: needs at least features + 1 points (" +
                              std::to_string(m) + " given for " + std::to_string(k) +
                              " features)");

    // normal equations over [1, x1..xk]
    size_t d = k + 1;
    std::vector<std::vector<double>> ata(d, std::vector<double>(d, 0.0));
    std::vector<double> atb(d, 0.0);
    for (size_t i = 0; i < m; ++i) {
        std::vector<double> row(d);
        row[0] = 1.0;
        for (size_t j = 0; j < k; ++j) row[j + 1] = features[i][j];
        for (size_t a = 0; a < d; ++a) {
            atb[a] += row[a] * target[i];
            for (size_t b = 0; b < d; ++b) ata[a][b] += row[a] * row[b];
        }
    }
    std::vector<double> beta = solve_linear(std::move(ata), std::move(atb));
    OlsModel model;
    model.intercept = beta[0];
    model.coefficients.assign(beta.begin() + 1, beta.end());
    return model;
}

std::vector<double> ols_predict(const OlsModel& model,
                                const std::vector<std::vector<double>>& features) {
    std::vector<double> out;
    out.reserve(features.size());
    for (const auto& row : features) {
        if (row.size() != model.coefficients.size())
            throw ValidationError("ols: feature count " + std::to_string(row.size()) +
                                  " does not match model (" +
                                  std::to_string(model.coefficients.size()) + ")");
        double y = model.intercept;
        for (size_t j = 0; j < row.size(); ++j) y += model.coefficients[j] * row[j];
        out.push_back(y);
    }
    return out;
}

RankAgreement human_rank_agreement(
    const std::map<std::string, std::map<std::string, double>>& metric_scores,
    const std::map<std::string, std::map<std::string, int>>& human_ranks) {
    RankAgreement out;
    double spearman_sum = 0.0;
    size_t max_positions = 0;
    std::map<std::string, std::map<size_t, int>> position_counts;
    std::map<std::string, int> appearances;

    for (const auto& [sample_id, ranks] : human_ranks) {
        auto scores_it = metric_scores.find(sample_id);
        if (scores_it == metric_scores.end()) continue;
        const auto& scores = scores_it->second;

        std::vector<std::string> systems;
        for (const auto& [system, rank] : ranks) {
            (void)rank;
            if (scores.count(system)) systems.push_back(system);
        }
        if (systems.size() < 2)
            throw ValidationError("sample " + sample_id +
                                  " has fewer than 2 systems with both score and rank");
        max_positions = std::max(max_positions, systems.size());

        std::vector<double> xs, ys;
        for (const auto& system : systems) {
            xs.push_back(scores.at(system));
            ys.push_back(-static_cast<double>(ranks.at(system)));  // rank 1 = best
        }
        try {
            spearman_sum += spearman(PairedSeries(xs, ys));
            ++out.samples_used;
        } catch (const MathError&) {
            ++out.samples_skipped;
        }

        // competition ranking under the metric: 1 + number of strictly better
        for (const auto& system : systems) {
            double score = scores.at(system);
            size_t position = 1;
            for (const auto& other : systems)
                if (scores.at(other) > score) ++position;
            ++position_counts[system][position];
            ++appearances[system];
        }
    }

    if (out.samples_used == 0)
        throw MathError("human_rank_agreement: no sample with untied rankings");
    out.avg_spearman = spearman_sum / out.samples_used;
    for (const auto& [system, counts] : position_counts) {
        std::vector<double> fractions(max_positions, 0.0);
        for (const auto& [position, count] : counts)
            fractions[position - 1] =
                static_cast<double>(count) / appearances.at(system);
        out.position_fractions.emplace(system, std::move(fractions));
    }
    return out;
}

}  // namespace facet::stats
