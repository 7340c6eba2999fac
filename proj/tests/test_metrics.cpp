#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "regimecast/metrics.hpp"

using namespace regimecast;

namespace {

// Pair-counting ARI oracle: walks every pair of points and tallies agreement
// directly, with no contingency table.
double ari_oracle(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t n = a.size();
    double both = 0, in_a = 0, in_b = 0;
    double pairs = double(n) * double(n - 1) / 2.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            bool same_a = a[i] == a[j], same_b = b[i] == b[j];
            if (same_a && same_b) ++both;
            if (same_a) ++in_a;
            if (same_b) ++in_b;
        }
    double expected = in_a * in_b / pairs;
    double max_index = (in_a + in_b) / 2.0;
    if (max_index == expected) return 1.0;
    return (both - expected) / (max_index - expected);
}

}  // namespace

TEST_CASE("contingency table from labels") {
    std::vector<int> clusters{0, 0, 1, 1, 1};
    std::vector<int> classes{0, 1, 1, 1, 1};
    auto t = ContingencyTable::from_labels(clusters, classes);
    CHECK(t.n == 5.0);
    REQUIRE(t.n_ij.size() == 2);
    CHECK(t.n_ij[0][0] == 1.0);
    CHECK(t.n_ij[0][1] == 1.0);
    CHECK(t.n_ij[1][1] == 3.0);
    CHECK(t.row_sums[1] == 3.0);
    CHECK(t.col_sums[1] == 4.0);
    CHECK_THROWS(ContingencyTable::from_labels({0}, {0, 1}));
}

TEST_CASE("purity and inverse purity with a worked example") {
    // clusters x classes counts
    auto t = ContingencyTable::from_counts({{5.0, 1.0}, {2.0, 4.0}});
    auto rep = purity_fmeasure(t);
    CHECK(rep.purity == doctest::Approx((5.0 + 4.0) / 12.0).epsilon(1e-12));
    CHECK(rep.inverse_purity == doctest::Approx((5.0 + 4.0) / 12.0).epsilon(1e-12));
    CHECK(rep.f_measure ==
          doctest::Approx(2.0 * rep.purity * rep.inverse_purity / (rep.purity + rep.inverse_purity))
              .epsilon(1e-12));

    // perfect clustering
    auto perfect = purity_fmeasure(ContingencyTable::from_counts({{4.0, 0.0}, {0.0, 6.0}}));
    CHECK(perfect.purity == 1.0);
    CHECK(perfect.f_measure == 1.0);
}

TEST_CASE("adjusted_rand_index matches the pair-counting oracle") {
    std::mt19937 rng(13);
    std::uniform_int_distribution<int> label(0, 3);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 8 + trial;
        std::vector<int> a(n), b(n);
        for (auto& x : a) x = label(rng);
        for (auto& x : b) x = label(rng);
        double got = adjusted_rand_index(ContingencyTable::from_labels(a, b));
        CHECK(got == doctest::Approx(ari_oracle(a, b)).epsilon(1e-10));
    }
}

TEST_CASE("adjusted_rand_index extremes") {
    std::vector<int> truth{0, 0, 1, 1, 2, 2};
    CHECK(adjusted_rand_index(ContingencyTable::from_labels(truth, truth)) == doctest::Approx(1.0));
    // a permuted relabeling is still a perfect match
    std::vector<int> renamed{5, 5, 3, 3, 9, 9};
    CHECK(adjusted_rand_index(ContingencyTable::from_labels(renamed, truth)) ==
          doctest::Approx(1.0));
    // all points in one cluster vs. split truth is not rewarded
    std::vector<int> lump(6, 0);
    CHECK(adjusted_rand_index(ContingencyTable::from_labels(lump, truth)) <= 0.0 + 1e-12);
}

TEST_CASE("regression_metrics matches the closed forms to 1e-12") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t n = 5 + trial;
        std::vector<double> y(n), yhat(n);
        for (auto& v : y) v = u(rng);
        for (auto& v : yhat) v = u(rng);
        auto r = regression_metrics(y, yhat);

        double mae = 0.0, mse = 0.0, mean_y = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mae += std::abs(y[i] - yhat[i]);
            mse += (y[i] - yhat[i]) * (y[i] - yhat[i]);
            mean_y += y[i];
        }
        mae /= n;
        mse /= n;
        mean_y /= n;
        double ss_tot = 0.0;
        for (double v : y) ss_tot += (v - mean_y) * (v - mean_y);
        CHECK(r.mae == doctest::Approx(mae).epsilon(1e-12));
        CHECK(r.mse == doctest::Approx(mse).epsilon(1e-12));
        CHECK(r.rmse == doctest::Approx(std::sqrt(mse)).epsilon(1e-12));
        CHECK(r.r2 == doctest::Approx(1.0 - mse * n / ss_tot).epsilon(1e-12));
        CHECK(r.r2_defined);
    }
    CHECK_THROWS(regression_metrics({1.0}, {1.0, 2.0}));
    CHECK_THROWS(regression_metrics({}, {}));
}

TEST_CASE("regression_metrics flags zero-variance targets") {
    auto r = regression_metrics({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0});
    CHECK_FALSE(r.r2_defined);
    CHECK(r.mae == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("ablate_topics reports the MSE change per withheld topic") {
    std::mt19937 rng(33);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Date> train, test;
    for (int i = 0; i < 120; ++i) train.push_back(Date(i));
    for (int i = 120; i < 160; ++i) test.push_back(Date(i));

    TopicSeries important, irrelevant;
    important.topic = "important";
    irrelevant.topic = "irrelevant";
    std::vector<double> y_train, y_test;
    std::map<std::string, std::vector<double>> future;
    for (const auto* dates : {&train, &test}) {
        for (Date d : *dates) {
            double x1 = gauss(rng), x2 = gauss(rng);
            double y = 3.0 * x1 + 0.1 * gauss(rng);
            if (dates == &train) {
                important.dates.push_back(d);
                important.counts.push_back(x1);
                irrelevant.dates.push_back(d);
                irrelevant.counts.push_back(x2);
                y_train.push_back(y);
            } else {
                future["important"].push_back(x1);
                future["irrelevant"].push_back(x2);
                y_test.push_back(y);
            }
        }
    }
    ForecastConfig cfg;
    cfg.yearly_order = 0;
    cfg.weekly_order = 0;
    cfg.auto_seasonality = false;
    cfg.n_changepoints = 0;
    cfg.ridge_lambda = 1e-6;

    RegressionReport all;
    auto results = ablate_topics(train, y_train, {important, irrelevant}, cfg, test, y_test,
                                 future, &all);
    REQUIRE(results.size() == 2);
    const auto* imp = &results[0];
    const auto* irr = &results[1];
    if (imp->topic != "important") std::swap(imp, irr);
    // removing the driving topic must hurt much more
    CHECK(imp->mse_percent_change > 100.0);
    CHECK(std::abs(irr->mse_percent_change) < 50.0);
    CHECK(imp->mse_percent_change ==
          doctest::Approx(100.0 * (imp->report.mse - all.mse) / all.mse).epsilon(1e-9));
}

TEST_CASE("detect_error_fixes applies the strict median rule") {
    std::vector<Date> dates{Date(0), Date(1), Date(2), Date(3), Date(4)};
    std::vector<double> y{0.0, 0.0, 0.0, 0.0, 0.0};
    // baseline residuals: 1 2 3 4 5 -> median 3; errors where residual > 3
    std::vector<double> base{1.0, 2.0, 3.0, 4.0, 5.0};
    // topic residuals: 5 1 1 1 2 -> median 1; errors where residual > 1
    std::vector<double> topic{5.0, 1.0, 1.0, 1.0, 2.0};
    auto fixes = detect_error_fixes(dates, base, topic, y);
    // only baseline errors are reported: dates 3 and 4 (residual > median 3)
    REQUIRE(fixes.size() == 2);
    // date 3: topic residual 1 is not above the topic median 1 -> fixed
    CHECK(fixes[0].date == Date(3));
    CHECK(fixes[0].fixed);
    // date 4: error under both (5 > 3, 2 > 1) -> not fixed
    CHECK(fixes[1].date == Date(4));
    CHECK_FALSE(fixes[1].fixed);

    std::map<Date, int> counter;
    accumulate_error_fixes(counter, fixes);
    accumulate_error_fixes(counter, fixes);
    CHECK(counter[Date(3)] == 2);
    CHECK(counter.count(Date(4)) == 0);
}
