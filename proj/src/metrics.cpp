#include "regimecast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace regimecast {

ContingencyTable ContingencyTable::from_labels(const std::vector<int>& clusters,
                                               const std::vector<int>& classes) {
    if (clusters.size() != classes.size())
        throw std::invalid_argument("contingency table: label length mismatch");
    std::map<int, std::size_t> row_ids, col_ids;
    for (int c : clusters) row_ids.emplace(c, row_ids.size());
    for (int g : classes) col_ids.emplace(g, col_ids.size());
    std::vector<std::vector<double>> counts(row_ids.size(),
                                            std::vector<double>(col_ids.size(), 0.0));
    for (std::size_t i = 0; i < clusters.size(); ++i)
        counts[row_ids.at(clusters[i])][col_ids.at(classes[i])] += 1.0;
    return from_counts(std::move(counts));
}

ContingencyTable ContingencyTable::from_counts(std::vector<std::vector<double>> counts) {
    ContingencyTable t;
    t.n_ij = std::move(counts);
    t.row_sums.assign(t.n_ij.size(), 0.0);
    t.col_sums.assign(t.n_ij.empty() ? 0 : t.n_ij[0].size(), 0.0);
    for (std::size_t i = 0; i < t.n_ij.size(); ++i) {
        if (t.n_ij[i].size() != t.col_sums.size())
            throw std::invalid_argument("contingency table: ragged rows");
        for (std::size_t j = 0; j < t.n_ij[i].size(); ++j) {
            t.row_sums[i] += t.n_ij[i][j];
            t.col_sums[j] += t.n_ij[i][j];
            t.n += t.n_ij[i][j];
        }
    }
    return t;
}

PurityReport purity_fmeasure(const ContingencyTable& table) {
    if (table.n < 1.0) throw std::invalid_argument("purity: empty table");
    PurityReport rep;
    for (const auto& row : table.n_ij)
        rep.purity += *std::max_element(row.begin(), row.end());
    for (std::size_t j = 0; j < table.col_sums.size(); ++j) {
        double best = 0.0;
        for (std::size_t i = 0; i < table.n_ij.size(); ++i) best = std::max(best, table.n_ij[i][j]);
        rep.inverse_purity += best;
    }
    rep.purity /= table.n;
    rep.inverse_purity /= table.n;
    double denom = rep.purity + rep.inverse_purity;
    rep.f_measure = denom > 0.0 ? 2.0 * rep.purity * rep.inverse_purity / denom : 0.0;
    return rep;
}

double adjusted_rand_index(const ContingencyTable& table) {
    if (table.n < 2.0) throw std::invalid_argument("ARI: need at least 2 elements");
    auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
    double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (const auto& row : table.n_ij)
        for (double v : row) sum_ij += choose2(v);
    for (double a : table.row_sums) sum_a += choose2(a);
    for (double b : table.col_sums) sum_b += choose2(b);
    double expected = sum_a * sum_b / choose2(table.n);
    double max_index = 0.5 * (sum_a + sum_b);
    double denom = max_index - expected;
    if (denom == 0.0) return 1.0;  // both partitions trivial and identical in structure
    return (sum_ij - expected) / denom;
}

RegressionReport regression_metrics(const std::vector<double>& y,
                                    const std::vector<double>& yhat) {
    if (y.empty() || y.size() != yhat.size())
        throw std::invalid_argument("regression_metrics: need equal nonzero lengths");
    RegressionReport rep;
    const double n = static_cast<double>(y.size());
    double mean_y = 0.0;
    for (double v : y) mean_y += v;
    mean_y /= n;
    double sse = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double e = y[i] - yhat[i];
        rep.mae += std::abs(e);
        rep.mse += e * e;
        sse += e * e;
        sst += (y[i] - mean_y) * (y[i] - mean_y);
    }
    rep.mae /= n;
    rep.mse /= n;
    rep.rmse = std::sqrt(rep.mse);
    if (sst > 0.0) {
        rep.r2 = 1.0 - sse / sst;
    } else {
        rep.r2 = 0.0;
        rep.r2_defined = false;
    }
    return rep;
}

std::vector<AblationResult> ablate_topics(
    const std::vector<Date>& train_dates, const std::vector<double>& train_y,
    const std::vector<TopicSeries>& regressors, const ForecastConfig& config,
    const std::vector<Date>& test_dates, const std::vector<double>& test_y,
    const std::map<std::string, std::vector<double>>& future_regressors,
    RegressionReport* all_topics_report) {
    auto run = [&](const std::vector<TopicSeries>& regs) {
        AdditiveModel m = fit(train_dates, train_y, regs, config);
        ForecastSeries f = predict(m, test_dates, &future_regressors);
        return regression_metrics(test_y, f.yhat);
    };
    RegressionReport base = run(regressors);
    if (all_topics_report) *all_topics_report = base;

    std::vector<AblationResult> out;
    for (std::size_t i = 0; i < regressors.size(); ++i) {
        std::vector<TopicSeries> withheld;
        for (std::size_t j = 0; j < regressors.size(); ++j)
            if (j != i) withheld.push_back(regressors[j]);
        AblationResult res;
        res.topic = regressors[i].topic;
        res.report = run(withheld);
        res.mse_percent_change = base.mse > 0.0
                                     ? 100.0 * (res.report.mse - base.mse) / base.mse
                                     : 0.0;
        out.push_back(std::move(res));
    }
    return out;
}

std::vector<ErrorFix> detect_error_fixes(const std::vector<Date>& dates,
                                         const std::vector<double>& baseline_pred,
                                         const std::vector<double>& topic_pred,
                                         const std::vector<double>& y) {
    const std::size_t n = dates.size();
    if (n == 0) throw std::invalid_argument("detect_error_fixes: empty intersection");
    if (baseline_pred.size() != n || topic_pred.size() != n || y.size() != n)
        throw std::invalid_argument("detect_error_fixes: length mismatch");

    auto residuals = [&](const std::vector<double>& pred) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = std::abs(y[i] - pred[i]);
        return r;
    };
    auto median = [](std::vector<double> v) {
        std::size_t mid = v.size() / 2;
        std::nth_element(v.begin(), v.begin() + mid, v.end());
        double hi = v[mid];
        if (v.size() % 2 == 0) {
            double lo = *std::max_element(v.begin(), v.begin() + mid);
            return (hi + lo) / 2.0;
        }
        return hi;
    };
    std::vector<double> rb = residuals(baseline_pred);
    std::vector<double> rt = residuals(topic_pred);
    double mb = median(rb);
    double mt = median(rt);

    std::vector<ErrorFix> out;
    for (std::size_t i = 0; i < n; ++i) {
        bool base_error = rb[i] > mb;  // strict: ties at the median are non-errors
        if (!base_error) continue;
        bool topic_error = rt[i] > mt;
        out.push_back({dates[i], !topic_error});
    }
    return out;
}

void accumulate_error_fixes(std::map<Date, int>& counter, const std::vector<ErrorFix>& fixes) {
    for (const auto& f : fixes)
        if (f.fixed) ++counter[f.date];
}

}  // namespace regimecast
