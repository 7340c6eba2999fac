#include "regimecast/forecast.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Dense>

namespace regimecast {

namespace {

constexpr double kYearDays = 365.25;
constexpr double kWeekDays = 7.0;

struct Design {
    Eigen::MatrixXd X;
    std::vector<bool> penalized;  // per column
};

double normalized_time(const AdditiveModel& m, Date d) {
    return static_cast<double>(d - m.t0) / m.t_scale;
}

// Fourier features use absolute days so weekly phase stays tied to the real
// calendar.
void seasonal_row(const AdditiveModel& m, Date d, std::vector<double>& out) {
    out.clear();
    double days = static_cast<double>(d.days());
    for (int k = 1; k <= m.yearly_order; ++k) {
        double w = 2.0 * M_PI * k * days / kYearDays;
        out.push_back(std::sin(w));
        out.push_back(std::cos(w));
    }
    for (int k = 1; k <= m.weekly_order; ++k) {
        double w = 2.0 * M_PI * k * days / kWeekDays;
        out.push_back(std::sin(w));
        out.push_back(std::cos(w));
    }
}

Design build_design(const AdditiveModel& m, const std::vector<Date>& dates,
                    const std::vector<std::vector<double>>& std_regressors) {
    const std::size_t n = dates.size();
    const std::size_t n_seasonal = 2 * (m.yearly_order + m.weekly_order);
    const std::size_t p = 2 + m.changepoints.size() + n_seasonal + std_regressors.size();
    Design d;
    d.X.resize(n, p);
    d.penalized.assign(p, true);
    d.penalized[0] = d.penalized[1] = false;  // intercept and base slope
    std::vector<double> srow;
    for (std::size_t i = 0; i < n; ++i) {
        double tn = normalized_time(m, dates[i]);
        std::size_t c = 0;
        d.X(i, c++) = 1.0;
        d.X(i, c++) = tn;
        for (double s : m.changepoints) d.X(i, c++) = tn > s ? tn - s : 0.0;
        seasonal_row(m, dates[i], srow);
        for (double v : srow) d.X(i, c++) = v;
        for (const auto& reg : std_regressors) d.X(i, c++) = reg[i];
    }
    return d;
}

}  // namespace

AdditiveModel fit(const std::vector<Date>& dates, const std::vector<double>& target,
                  const std::vector<TopicSeries>& regressors, const ForecastConfig& config) {
    const std::size_t n = dates.size();
    if (n < 2) throw std::invalid_argument("fit: need at least 2 samples");
    if (target.size() != n) throw std::invalid_argument("fit: target/dates length mismatch");
    for (double y : target)
        if (!std::isfinite(y)) throw std::invalid_argument("fit: NaN/Inf in target");

    AdditiveModel m;
    m.t0 = dates.front();
    m.fitted_range = {dates.front(), dates.back()};
    m.t_scale = std::max<std::int64_t>(1, dates.back() - dates.front());
    m.ridge_lambda = config.ridge_lambda;

    const std::int64_t span_days = dates.back() - dates.front();
    m.yearly_order = config.yearly_order;
    m.weekly_order = config.weekly_order;
    if (config.auto_seasonality) {
        if (span_days < 2 * static_cast<std::int64_t>(kYearDays)) m.yearly_order = 0;
        if (span_days < 2 * static_cast<std::int64_t>(kWeekDays)) m.weekly_order = 0;
    }

    // changepoints evenly spaced over the first 80% of (normalized) history
    std::size_t n_cp = config.n_changepoints;
    if (n >= 4) n_cp = std::min(n_cp, (n - 2) / 2);
    else n_cp = 0;
    for (std::size_t j = 1; j <= n_cp; ++j)
        m.changepoints.push_back(0.8 * static_cast<double>(j) / static_cast<double>(n_cp + 1));

    // standardized regressor matrix, aligned to the target dates
    std::vector<std::vector<double>> std_regressors;
    for (const auto& reg : regressors) {
        std::unordered_map<std::int64_t, double> by_date;
        for (std::size_t i = 0; i < reg.dates.size(); ++i)
            by_date.emplace(reg.dates[i].days(), reg.counts[i]);
        std::vector<double> vals(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto it = by_date.find(dates[i].days());
            if (it == by_date.end())
                throw std::invalid_argument("regressor '" + reg.topic + "' missing value for " +
                                            dates[i].to_string());
            if (!std::isfinite(it->second))
                throw std::invalid_argument("regressor '" + reg.topic + "' has NaN/Inf values");
            vals[i] = it->second;
        }
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        double sd = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
        if (sd == 0.0) sd = 1.0;
        for (double& v : vals) v = (v - mean) / sd;
        m.regressor_names.push_back(reg.topic);
        m.regressor_mean.push_back(mean);
        m.regressor_std.push_back(sd);
        std_regressors.push_back(std::move(vals));
    }

    Design d = build_design(m, dates, std_regressors);
    const Eigen::Index p = d.X.cols();
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(target.data(), n);
    Eigen::MatrixXd normal = d.X.transpose() * d.X;
    for (Eigen::Index c = 0; c < p; ++c)
        if (d.penalized[c]) normal(c, c) += config.ridge_lambda;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(normal);
    if (config.ridge_lambda <= 0.0 && qr.rank() < p)
        throw std::runtime_error("fit: singular design; set ridge_lambda > 0");
    Eigen::VectorXd beta = qr.solve(d.X.transpose() * y);

    std::size_t c = 0;
    m.offset = beta(c++);
    m.slope = beta(c++);
    for (std::size_t j = 0; j < m.changepoints.size(); ++j) m.cp_deltas.push_back(beta(c++));
    for (int j = 0; j < 2 * (m.yearly_order + m.weekly_order); ++j)
        m.seasonal_coeffs.push_back(beta(c++));
    for (std::size_t j = 0; j < std_regressors.size(); ++j) m.regressor_coeffs.push_back(beta(c++));
    return m;
}

ForecastSeries predict(const AdditiveModel& m, const std::vector<Date>& horizon_dates,
                       const std::map<std::string, std::vector<double>>* future_regressors) {
    ForecastSeries out;
    out.dates = horizon_dates;
    const std::size_t n = horizon_dates.size();
    if (n == 0) return out;
    if (!m.regressor_names.empty() && !future_regressors)
        throw std::invalid_argument("predict: model has regressors; supply future values");

    std::vector<const std::vector<double>*> regs;
    for (const auto& name : m.regressor_names) {
        auto it = future_regressors->find(name);
        if (it == future_regressors->end())
            throw std::invalid_argument("predict: missing future regressor '" + name + "'");
        if (it->second.size() != n)
            throw std::invalid_argument("predict: regressor '" + name + "' length mismatch");
        regs.push_back(&it->second);
    }

    out.yhat.resize(n);
    out.trend.resize(n);
    out.seasonal.resize(n);
    out.regressor.resize(n);
    std::vector<double> srow;
    for (std::size_t i = 0; i < n; ++i) {
        double tn = normalized_time(m, horizon_dates[i]);
        double trend = m.offset + m.slope * tn;
        for (std::size_t j = 0; j < m.changepoints.size(); ++j)
            if (tn > m.changepoints[j]) trend += m.cp_deltas[j] * (tn - m.changepoints[j]);
        double seasonal = 0.0;
        seasonal_row(m, horizon_dates[i], srow);
        for (std::size_t j = 0; j < srow.size(); ++j) seasonal += m.seasonal_coeffs[j] * srow[j];
        double regressor = 0.0;
        for (std::size_t j = 0; j < regs.size(); ++j)
            regressor += m.regressor_coeffs[j] * (((*regs[j])[i] - m.regressor_mean[j]) / m.regressor_std[j]);
        out.trend[i] = trend;
        out.seasonal[i] = seasonal;
        out.regressor[i] = regressor;
        out.yhat[i] = trend + seasonal + regressor;
    }
    return out;
}

TopicForecasts forecast_topic_trends(const std::vector<TopicSeries>& topics,
                                     const std::vector<Date>& horizon,
                                     const ForecastConfig& config) {
    TopicForecasts out;
    for (const auto& topic : topics) {
        try {
            AdditiveModel m = fit(topic.dates, topic.counts, {}, config);
            out.forecasts.push_back(predict(m, horizon));
        } catch (const std::exception& e) {
            out.forecasts.emplace_back();  // flagged empty forecast
            out.warnings.push_back("topic '" + topic.topic + "': " + e.what());
        }
    }
    return out;
}

namespace {

void write_vec(std::ostream& os, const std::string& key, const std::vector<double>& v) {
    os << key;
    for (double x : v) os << ' ' << x;
    os << '\n';
}

std::vector<double> read_vec(const std::string& line) {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    std::vector<double> out;
    double v;
    while (ss >> v) out.push_back(v);
    return out;
}

}  // namespace

void save_model(const AdditiveModel& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model: " + path);
    out.precision(17);
    out << "regimecast-model v1\n";
    out << "t0 " << m.t0.to_string() << "\n";
    out << "t_scale " << m.t_scale << "\n";
    out << "fitted_range " << m.fitted_range.start.to_string() << ' '
        << m.fitted_range.end.to_string() << "\n";
    out << "orders " << m.yearly_order << ' ' << m.weekly_order << "\n";
    out << "ridge_lambda " << m.ridge_lambda << "\n";
    out << "offset_slope " << m.offset << ' ' << m.slope << "\n";
    write_vec(out, "changepoints", m.changepoints);
    write_vec(out, "cp_deltas", m.cp_deltas);
    write_vec(out, "seasonal_coeffs", m.seasonal_coeffs);
    write_vec(out, "regressor_coeffs", m.regressor_coeffs);
    write_vec(out, "regressor_mean", m.regressor_mean);
    write_vec(out, "regressor_std", m.regressor_std);
    out << "regressor_names " << m.regressor_names.size() << "\n";
    for (const auto& n : m.regressor_names) out << n << "\n";
}

AdditiveModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model: " + path);
    std::string line;
    std::getline(in, line);
    if (line != "regimecast-model v1") throw std::runtime_error("unknown model format: " + line);
    AdditiveModel m;
    std::string key, a, b;
    std::getline(in, line);
    {
        std::istringstream ss(line);
        ss >> key >> a;
        m.t0 = Date::parse(a);
    }
    std::getline(in, line);
    m.t_scale = read_vec(line)[0];
    std::getline(in, line);
    {
        std::istringstream ss(line);
        ss >> key >> a >> b;
        m.fitted_range = {Date::parse(a), Date::parse(b)};
    }
    std::getline(in, line);
    {
        auto v = read_vec(line);
        m.yearly_order = static_cast<int>(v[0]);
        m.weekly_order = static_cast<int>(v[1]);
    }
    std::getline(in, line);
    m.ridge_lambda = read_vec(line)[0];
    std::getline(in, line);
    {
        auto v = read_vec(line);
        m.offset = v[0];
        m.slope = v[1];
    }
    std::getline(in, line);
    m.changepoints = read_vec(line);
    std::getline(in, line);
    m.cp_deltas = read_vec(line);
    std::getline(in, line);
    m.seasonal_coeffs = read_vec(line);
    std::getline(in, line);
    m.regressor_coeffs = read_vec(line);
    std::getline(in, line);
    m.regressor_mean = read_vec(line);
    std::getline(in, line);
    m.regressor_std = read_vec(line);
    std::getline(in, line);
    std::size_t count = 0;
    {
        std::istringstream ss(line);
        ss >> key >> count;
    }
    for (std::size_t i = 0; i < count; ++i) {
        std::getline(in, line);
        m.regressor_names.push_back(line);
    }
    return m;
}

void save_forecast(const ForecastSeries& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write forecast: " + path);
    out << "date\tyhat\ttrend\tseasonal\tregressors\n";
    out.precision(10);
    for (std::size_t i = 0; i < f.dates.size(); ++i)
        out << f.dates[i].to_string() << '\t' << f.yhat[i] << '\t' << f.trend[i] << '\t'
            << f.seasonal[i] << '\t' << f.regressor[i] << '\n';
}

}  // namespace regimecast
