#pragma once

#include <map>
#include <string>
#include <vector>

#include "regimecast/date.hpp"
#include "regimecast/topics.hpp"

namespace regimecast {

struct ForecastConfig {
    std::size_t n_changepoints = 25;
    int yearly_order = 10;
    int weekly_order = 3;
    double ridge_lambda = 1e-4;
    bool auto_seasonality = true;  // drop seasonal terms when history is too short
};

/// y(t) = g(t) + s(t) + sum_j rho_j x_j(t).
/// g is a piecewise-linear trend with changepoints evenly spaced over the
/// first 80% of history; s is a Fourier expansion (yearly + weekly);
/// regressors are standardized before fitting. Everything is solved jointly
/// by ridge-regularized least squares, so fits are deterministic.
struct AdditiveModel {
    Date t0;
    double t_scale = 1.0;               // days spanned by the fitted range
    std::vector<double> changepoints;   // normalized positions in (0, 1)
    double offset = 0.0;
    double slope = 0.0;
    std::vector<double> cp_deltas;      // per-changepoint slope changes
    int yearly_order = 0;
    int weekly_order = 0;
    std::vector<double> seasonal_coeffs;  // yearly sin/cos pairs, then weekly
    std::vector<std::string> regressor_names;
    std::vector<double> regressor_coeffs;  // standardized units
    std::vector<double> regressor_mean;
    std::vector<double> regressor_std;
    double ridge_lambda = 0.0;
    DateRange fitted_range;
};

struct ForecastSeries {
    std::vector<Date> dates;
    std::vector<double> yhat;
    std::vector<double> trend;
    std::vector<double> seasonal;
    std::vector<double> regressor;
};

AdditiveModel fit(const std::vector<Date>& dates, const std::vector<double>& target,
                  const std::vector<TopicSeries>& regressors, const ForecastConfig& config);

/// Trend extrapolates the last segment's slope beyond the fitted range.
/// `future_regressors` maps regressor name to values aligned with
/// `horizon_dates`; required whenever the model has regressors.
ForecastSeries predict(const AdditiveModel& model, const std::vector<Date>& horizon_dates,
                       const std::map<std::string, std::vector<double>>* future_regressors = nullptr);

struct TopicForecasts {
    std::vector<ForecastSeries> forecasts;  // one per topic, aligned with input order
    std::vector<std::string> warnings;      // topics whose fit failed or was degraded
};

/// One regressor-free additive model per topic, predicted over `horizon`.
TopicForecasts forecast_topic_trends(const std::vector<TopicSeries>& topics,
                                     const std::vector<Date>& horizon,
                                     const ForecastConfig& config);

void save_model(const AdditiveModel& model, const std::string& path);
AdditiveModel load_model(const std::string& path);

void save_forecast(const ForecastSeries& forecast, const std::string& path);

}  // namespace regimecast
