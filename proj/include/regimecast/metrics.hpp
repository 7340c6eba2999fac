#pragma once

#include <map>
#include <string>
#include <vector>

#include "regimecast/date.hpp"
#include "regimecast/forecast.hpp"

namespace regimecast {

struct ContingencyTable {
    std::vector<std::vector<double>> n_ij;  // cluster i x class j
    std::vector<double> row_sums;
    std::vector<double> col_sums;
    double n = 0.0;

    static ContingencyTable from_labels(const std::vector<int>& clusters,
                                        const std::vector<int>& classes);
    static ContingencyTable from_counts(std::vector<std::vector<double>> counts);
};

struct PurityReport {
    double purity = 0.0;
    double inverse_purity = 0.0;
    double f_measure = 0.0;
};

/// purity = (1/n) sum_i max_j n_ij; inverse purity transposed; f is their
/// harmonic mean.
PurityReport purity_fmeasure(const ContingencyTable& table);

double adjusted_rand_index(const ContingencyTable& table);

struct RegressionReport {
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double r2 = 0.0;
    bool r2_defined = true;  // false when y has zero variance
};

RegressionReport regression_metrics(const std::vector<double>& y,
                                    const std::vector<double>& yhat);

struct AblationResult {
    std::string topic;
    RegressionReport report;
    double mse_percent_change = 0.0;  // vs. the all-topics run
};

/// Withholds one topic regressor at a time, refits, and reports the MSE
/// percent change against the all-topics baseline on the test window.
/// Future regressor values for the test window come from `future_regressors`.
std::vector<AblationResult> ablate_topics(
    const std::vector<Date>& train_dates, const std::vector<double>& train_y,
    const std::vector<TopicSeries>& regressors, const ForecastConfig& config,
    const std::vector<Date>& test_dates, const std::vector<double>& test_y,
    const std::map<std::string, std::vector<double>>& future_regressors,
    RegressionReport* all_topics_report = nullptr);

struct ErrorFix {
    Date date;
    bool fixed = false;  // error under baseline, not under the topic prediction
};

/// A date is an error under a prediction when |y - yhat| strictly exceeds the
/// median of |y - yhat| over the window for that prediction.
std::vector<ErrorFix> detect_error_fixes(const std::vector<Date>& dates,
                                         const std::vector<double>& baseline_pred,
                                         const std::vector<double>& topic_pred,
                                         const std::vector<double>& y);

/// Accumulates fix frequencies across configurations.
void accumulate_error_fixes(std::map<Date, int>& counter, const std::vector<ErrorFix>& fixes);

}  // namespace regimecast
