#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "regimecast/changepoint.hpp"
#include "regimecast/clustering.hpp"
#include "regimecast/forecast.hpp"
#include "regimecast/ingest.hpp"
#include "regimecast/metrics.hpp"
#include "regimecast/segsel.hpp"
#include "regimecast/vectors.hpp"

namespace py = pybind11;
using namespace regimecast;

namespace {

std::string date_str(const Date& d) { return d.to_string(); }

}  // namespace

PYBIND11_MODULE(_regimecast, m) {
    m.doc() = "topic-regime stock forecasting primitives";

    m.def("parse_keyword_field", &parse_keyword_field, py::arg("raw"));

    m.def(
        "compute_pct_change",
        [](const std::vector<std::string>& dates, const std::vector<double>& closes) {
            std::vector<Date> d;
            d.reserve(dates.size());
            for (const auto& s : dates) d.push_back(Date::parse(s));
            StockSeries out = compute_pct_change(d, closes);
            std::vector<std::string> out_dates;
            for (const auto& dd : out.dates) out_dates.push_back(date_str(dd));
            return py::make_tuple(out_dates, out.pct_change);
        },
        py::arg("dates"), py::arg("closes"));

    m.def(
        "pca_reduce",
        [](const std::map<std::string, std::vector<double>>& rows, std::size_t m_components) {
            VectorTable t;
            t.rows = rows;
            t.dim = rows.empty() ? 0 : rows.begin()->second.size();
            return pca_reduce(t, m_components).rows;
        },
        py::arg("rows"), py::arg("n_components"));

    m.def(
        "hdbscan",
        [](const std::map<std::string, std::vector<double>>& rows, std::size_t min_cluster_size,
           std::size_t min_samples) {
            VectorTable t;
            t.rows = rows;
            t.dim = rows.empty() ? 0 : rows.begin()->second.size();
            auto result = hdbscan(t, HdbscanParams{min_cluster_size, min_samples});
            return py::make_tuple(result.labels, result.cluster_count, result.probabilities);
        },
        py::arg("rows"), py::arg("min_cluster_size") = 200, py::arg("min_samples") = 18);

    m.def(
        "pelt",
        [](const std::vector<double>& series, double penalty, std::size_t min_segment_length,
           double kernel_bandwidth) {
            auto bp = pelt(series, PeltConfig{penalty, min_segment_length, kernel_bandwidth});
            return py::make_tuple(bp.indices, bp.objective);
        },
        py::arg("series"), py::arg("penalty") = -1.0, py::arg("min_segment_length") = 2,
        py::arg("kernel_bandwidth") = 0.0);

    m.def("rbf_cost", &rbf_cost, py::arg("series"), py::arg("a"), py::arg("b"),
          py::arg("bandwidth"));

    m.def(
        "dtw",
        [](const std::vector<double>& a, const std::vector<double>& b, py::object band) {
            std::optional<std::size_t> w;
            if (!band.is_none()) w = band.cast<std::size_t>();
            return dtw(a, b, w);
        },
        py::arg("a"), py::arg("b"), py::arg("band") = py::none());

    m.def(
        "pearson_weight",
        [](const std::vector<double>& t, const std::vector<double>& s) {
            auto w = pearson_weight(t, s);
            return py::make_tuple(w.pw, w.r, w.p, w.zero_variance);
        },
        py::arg("t_series"), py::arg("s_series"));

    m.def("cosine_distance", &cosine_distance, py::arg("t_series"), py::arg("s_series"));

    m.def(
        "normalized_dtw",
        [](const std::vector<double>& f, const std::vector<double>& s, const std::string& mode) {
            return normalized_dtw(f, s, mode == "path-length" ? NdMode::PathLength : NdMode::Paper);
        },
        py::arg("forecast"), py::arg("segment"), py::arg("mode") = "paper");

    m.def(
        "solve_coefficients",
        [](double size, double volatility, double noise, double trend_strength,
           double periodicity) {
            auto cs = solve_coefficients(
                DatasetCharacteristics{size, volatility, noise, trend_strength, periodicity});
            return py::make_tuple(cs.alpha, cs.beta, cs.gamma);
        },
        py::arg("size"), py::arg("volatility") = 0.5, py::arg("noise") = 0.5,
        py::arg("trend_strength") = 0.5, py::arg("periodicity") = 0.0);

    m.def(
        "fit_predict",
        [](const std::vector<std::string>& train_dates, const std::vector<double>& y,
           const std::map<std::string, std::vector<double>>& regressors,
           const std::vector<std::string>& horizon_dates,
           const std::map<std::string, std::vector<double>>& future_regressors,
           std::size_t n_changepoints, double ridge_lambda, bool auto_seasonality) {
            std::vector<Date> td, hd;
            for (const auto& s : train_dates) td.push_back(Date::parse(s));
            for (const auto& s : horizon_dates) hd.push_back(Date::parse(s));
            std::vector<TopicSeries> regs;
            for (const auto& [name, values] : regressors) {
                TopicSeries t;
                t.topic = name;
                t.dates = td;
                t.counts = values;
                regs.push_back(std::move(t));
            }
            ForecastConfig cfg;
            cfg.n_changepoints = n_changepoints;
            cfg.ridge_lambda = ridge_lambda;
            cfg.auto_seasonality = auto_seasonality;
            auto model = fit(td, y, regs, cfg);
            auto fc = predict(model, hd, regs.empty() ? nullptr : &future_regressors);
            return py::make_tuple(fc.yhat, fc.trend, fc.seasonal, fc.regressor);
        },
        py::arg("train_dates"), py::arg("y"), py::arg("regressors"), py::arg("horizon_dates"),
        py::arg("future_regressors") = std::map<std::string, std::vector<double>>{},
        py::arg("n_changepoints") = 25, py::arg("ridge_lambda") = 1e-4,
        py::arg("auto_seasonality") = true);

    m.def(
        "regression_metrics",
        [](const std::vector<double>& y, const std::vector<double>& yhat) {
            auto r = regression_metrics(y, yhat);
            return py::make_tuple(r.mae, r.mse, r.rmse, r.r2);
        },
        py::arg("y"), py::arg("yhat"));

    m.def(
        "purity_fmeasure",
        [](const std::vector<int>& clusters, const std::vector<int>& classes) {
            auto rep = purity_fmeasure(ContingencyTable::from_labels(clusters, classes));
            return py::make_tuple(rep.purity, rep.inverse_purity, rep.f_measure);
        },
        py::arg("clusters"), py::arg("classes"));

    m.def(
        "adjusted_rand_index",
        [](const std::vector<int>& clusters, const std::vector<int>& classes) {
            return adjusted_rand_index(ContingencyTable::from_labels(clusters, classes));
        },
        py::arg("clusters"), py::arg("classes"));
}
