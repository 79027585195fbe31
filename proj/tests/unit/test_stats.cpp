#include "facet/stats.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "facet/error.h"

using namespace facet;
using stats::PairedSeries;

namespace {

// Direct pair-counting tau-b, the oracle for the merge-sort implementation.
double kendall_brute_force(const std::vector<double>& x, const std::vector<double>& y) {
    size_t n = x.size();
    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            double dx = x[i] - x[j], dy = y[i] - y[j];
            if (dx == 0 && dy == 0) {
                ++ties_x;
                ++ties_y;
            } else if (dx == 0) {
                ++ties_x;
            } else if (dy == 0) {
                ++ties_y;
            } else if (dx * dy > 0) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    long long n0 = static_cast<long long>(n) * (n - 1) / 2;
    double denom = std::sqrt(static_cast<double>(n0 - ties_x)) *
                   std::sqrt(static_cast<double>(n0 - ties_y));
    return (concordant - discordant) / denom;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("pearson") {
    CHECK(stats::pearson(PairedSeries({0, 1, 2, 3}, {1, 3, 5, 7})) == doctest::Approx(1.0));
    CHECK(stats::pearson(PairedSeries({0, 1, 2}, {0, -1, -2})) == doctest::Approx(-1.0));
    CHECK(stats::pearson(PairedSeries({1, 2, 3}, {1, 3, 2})) == doctest::Approx(0.5));
    CHECK_THROWS_AS(stats::pearson(PairedSeries({1, 1, 1}, {1, 2, 3})), MathError);
    CHECK_THROWS_AS(PairedSeries({1}, {2}), ValidationError);
    CHECK_THROWS_AS(PairedSeries({1, 2}, {1, 2, 3}), ValidationError);
    CHECK_THROWS_AS(PairedSeries({1, std::nan("")}, {1, 2}), ValidationError);

    // pearson(x, a x + b) = sign(a)
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> val(-5, 5);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> x;
        for (int j = 0; j < 8; ++j) x.push_back(val(rng));
        double a = val(rng);
        if (std::fabs(a) < 0.1) continue;
        std::vector<double> y;
        for (double v : x) y.push_back(a * v + 2.5);
        if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) continue;
        CHECK(stats::pearson(PairedSeries(x, y)) ==
              doctest::Approx(a > 0 ? 1.0 : -1.0).epsilon(1e-9));
    }
}

TEST_CASE("spearman") {
    CHECK(stats::spearman(PairedSeries({1, 2, 3}, {3, 2, 1})) == doctest::Approx(-1.0));
    CHECK(stats::spearman(PairedSeries({4, 5, 6}, {4, 5, 6})) == doctest::Approx(1.0));
    CHECK(stats::spearman(PairedSeries({1, 2, 3, 4}, {1, 2, 4, 3})) ==
          doctest::Approx(0.8));
    CHECK_THROWS_AS(stats::spearman(PairedSeries({2, 2, 2}, {1, 2, 3})), MathError);

    // invariance under strictly increasing transforms
    std::vector<double> x = {0.1, 0.7, 0.3, 0.9, 0.5};
    std::vector<double> y = {1.0, 0.2, 0.8, 0.4, 0.6};
    double base = stats::spearman(PairedSeries(x, y));
    std::vector<double> xt, yt;
    for (double v : x) xt.push_back(std::exp(3 * v));
    for (double v : y) yt.push_back(v * v * v + 10);
    CHECK(stats::spearman(PairedSeries(xt, yt)) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("kendall tau-b hand values") {
    CHECK(stats::kendall_tau_b(PairedSeries({1, 2, 3}, {1, 3, 2})) ==
          doctest::Approx(1.0 / 3.0));
    CHECK(stats::kendall_tau_b(PairedSeries({1, 2, 3}, {1, 2, 3})) == doctest::Approx(1.0));
    CHECK(stats::kendall_tau_b(PairedSeries({1, 2, 3, 4}, {4, 3, 2, 1})) ==
          doctest::Approx(-1.0));
    CHECK_THROWS_AS(stats::kendall_tau_b(PairedSeries({7, 7, 7}, {1, 2, 3})), MathError);
}

TEST_CASE("kendall tau-b equals pair counting on sampled integer series") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> len_dist(2, 7);
    std::uniform_int_distribution<int> val_dist(0, 4);  // small range forces ties
    int checked = 0;
    for (int iter = 0; iter < 5000; ++iter) {
        int n = len_dist(rng);
        std::vector<double> x, y;
        for (int i = 0; i < n; ++i) {
            x.push_back(val_dist(rng));
            y.push_back(val_dist(rng));
        }
        bool x_tied = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
        bool y_tied = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
        if (x_tied || y_tied) continue;
        double expected = kendall_brute_force(x, y);
        double actual = stats::kendall_tau_b(PairedSeries(x, y));
        CHECK(actual == doctest::Approx(expected).epsilon(1e-12));
        CHECK(actual >= -1.0);
        CHECK(actual <= 1.0);
        ++checked;
    }
    CHECK(checked > 3000);
}

TEST_CASE("spearman and kendall invariant under monotone transforms") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> val_dist(0, 9);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<double> x, y;
        for (int i = 0; i < 6; ++i) {
            x.push_back(val_dist(rng));
            y.push_back(val_dist(rng));
        }
        auto tied = [](const std::vector<double>& v) {
            return std::all_of(v.begin(), v.end(), [&](double a) { return a == v[0]; });
        };
        if (tied(x) || tied(y)) continue;
        std::vector<double> xt;
        for (double v : x) xt.push_back(2.0 * v + 7.0);  // strictly increasing
        CHECK(stats::kendall_tau_b(PairedSeries(xt, y)) ==
              doctest::Approx(stats::kendall_tau_b(PairedSeries(x, y))).epsilon(1e-12));
        CHECK(stats::spearman(PairedSeries(xt, y)) ==
              doctest::Approx(stats::spearman(PairedSeries(x, y))).epsilon(1e-12));
    }
}

TEST_CASE("ols exact fit and errors") {
    stats::OlsModel model = stats::ols_fit({{0}, {1}, {2}}, {1, 3, 5});
    CHECK(model.intercept == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(model.coefficients[0] == doctest::Approx(2.0).epsilon(1e-9));
    auto pred = stats::ols_predict(model, {{3}});
    CHECK(pred[0] == doctest::Approx(7.0).epsilon(1e-9));

    stats::OlsModel constant = stats::ols_fit({{1}, {2}, {3}}, {4, 4, 4});
    CHECK(constant.intercept == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(constant.coefficients[0] == doctest::Approx(0.0).epsilon(1e-9));

    CHECK_THROWS_AS(stats::ols_fit({{1, 1}, {2, 2}, {3, 3}}, {1, 2, 3}), MathError);
    CHECK_THROWS_AS(stats::ols_fit({{1}, {2}}, {1, 2, 3}), ValidationError);
    CHECK_THROWS_AS(stats::ols_fit({{1, 2}, {2, 3}}, {1, 2}), ValidationError);
    CHECK_THROWS_AS(stats::ols_predict(stats::OlsModel{{1.0, 2.0}, 0.0}, {{1}}),
                    ValidationError);

    // identity feature recovers slope 1, intercept 0
    stats::OlsModel identity = stats::ols_fit({{0.2}, {0.5}, {0.9}}, {0.2, 0.5, 0.9});
    CHECK(identity.intercept == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(identity.coefficients[0] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ols residuals orthogonal to design columns") {
    std::mt19937 rng(31415);
    std::uniform_real_distribution<double> val(-2, 2);
    for (int iter = 0; iter < 40; ++iter) {
        size_t m = 12, k = 3;
        std::vector<std::vector<double>> features(m, std::vector<double>(k));
        std::vector<double> target(m);
        for (size_t i = 0; i < m; ++i) {
            for (size_t j = 0; j < k; ++j) features[i][j] = val(rng);
            target[i] = val(rng);
        }
        stats::OlsModel model = stats::ols_fit(features, target);
        std::vector<double> pred = stats::ols_predict(model, features);
        std::vector<double> residual(m);
        for (size_t i = 0; i < m; ++i) residual[i] = target[i] - pred[i];

        auto norm = [](const std::vector<double>& v) {
            double s = 0;
            for (double x : v) s += x * x;
            return std::sqrt(s);
        };
        for (size_t j = 0; j <= k; ++j) {
            double dot = 0, col_norm_sq = 0;
            for (size_t i = 0; i < m; ++i) {
                double col = j == 0 ? 1.0 : features[i][j - 1];
                dot += residual[i] * col;
                col_norm_sq += col * col;
            }
            double scale = norm(residual) * std::sqrt(col_norm_sq) + 1.0;
            CHECK(std::fabs(dot) / scale <= 1e-9);
        }
    }
}

TEST_CASE("human_rank_agreement") {
    using Scores = std::map<std::string, std::map<std::string, double>>;
    using Ranks = std::map<std::string, std::map<std::string, int>>;

    Scores agreeing = {
        {"d1", {{"A", 0.9}, {"B", 0.5}, {"C", 0.1}}},
        {"d2", {{"A", 0.8}, {"B", 0.6}, {"C", 0.2}}},
    };
    Ranks ranks = {
        {"d1", {{"A", 1}, {"B", 2}, {"C", 3}}},
        {"d2", {{"A", 1}, {"B", 2}, {"C", 3}}},
    };
    stats::RankAgreement agree = stats::human_rank_agreement(agreeing, ranks);
    CHECK(agree.avg_spearman == doctest::Approx(1.0));
    CHECK(agree.samples_used == 2);
    CHECK(agree.position_fractions.at("A")[0] == doctest::Approx(1.0));
    CHECK(agree.position_fractions.at("C")[2] == doctest::Approx(1.0));

    Scores reversed = {
        {"d1", {{"A", 0.1}, {"B", 0.5}, {"C", 0.9}}},
        {"d2", {{"A", 0.2}, {"B", 0.6}, {"C", 0.8}}},
    };
    stats::RankAgreement anti = stats::human_rank_agreement(reversed, ranks);
    CHECK(anti.avg_spearman == doctest::Approx(-1.0));

    // fully tied metric scores are skipped and counted
    Scores tied = {
        {"d1", {{"A", 0.5}, {"B", 0.5}, {"C", 0.5}}},
        {"d2", {{"A", 0.8}, {"B", 0.6}, {"C", 0.2}}},
    };
    stats::RankAgreement skipped = stats::human_rank_agreement(tied, ranks);
    CHECK(skipped.samples_used == 1);
    CHECK(skipped.samples_skipped == 1);

    Scores all_tied = {{"d1", {{"A", 0.5}, {"B", 0.5}}}};
    Ranks two = {{"d1", {{"A", 1}, {"B", 2}}}};
    CHECK_THROWS_AS(stats::human_rank_agreement(all_tied, two), MathError);

    Scores missing = {{"d1", {{"A", 0.5}}}};
    CHECK_THROWS_AS(stats::human_rank_agreement(missing, two), ValidationError);
}

}  // TEST_SUITE
