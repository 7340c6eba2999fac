#include "regimecast/segsel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <boost/math/distributions/students_t.hpp>

namespace regimecast {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

std::vector<Segment> midpoint_segments(const BreakpointSet& breakpoints, DateRange range,
                                       std::int64_t min_span_days, SegmentationMode mode) {
    for (const auto& d : breakpoints.dates)
        if (!range.contains(d))
            throw std::invalid_argument("breakpoint " + d.to_string() + " outside range");

    std::vector<Date> boundaries{range.start};
    const auto& bp = breakpoints.dates;
    if (mode == SegmentationMode::Midpoint) {
        for (std::size_t k = 0; k + 1 < bp.size(); ++k)
            boundaries.push_back(bp[k] + (bp[k + 1] - bp[k]) / 2);
    } else {
        for (const auto& d : bp) boundaries.push_back(d);
    }
    boundaries.push_back(range.end + 1);  // exclusive sentinel
    std::sort(boundaries.begin(), boundaries.end());
    boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());

    std::vector<Segment> segments;
    for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
        Segment s{boundaries[i], boundaries[i + 1] - 1, {}};
        if (s.end < s.start) continue;
        segments.push_back(s);
    }
    // merge short segments into their predecessor (the first into its successor)
    for (std::size_t i = 0; i < segments.size();) {
        std::int64_t span = segments[i].end - segments[i].start + 1;
        if (span >= min_span_days || segments.size() == 1) {
            ++i;
            continue;
        }
        if (i == 0) {
            segments[1].start = segments[0].start;
            segments.erase(segments.begin());
        } else {
            segments[i - 1].end = segments[i].end;
            segments.erase(segments.begin() + i);
        }
    }
    return segments;
}

PearsonWeight pearson_weight(const std::vector<double>& t_series,
                             const std::vector<double>& s_series) {
    if (t_series.size() != s_series.size())
        throw std::invalid_argument("pearson_weight: length mismatch");
    const std::size_t n = t_series.size();
    if (n < 3) throw std::invalid_argument("pearson_weight: need at least 3 samples");

    PearsonWeight out;
    double mt = mean(t_series), ms = mean(s_series);
    double stt = 0.0, sss = 0.0, sts = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dt = t_series[i] - mt, ds = s_series[i] - ms;
        stt += dt * dt;
        sss += ds * ds;
        sts += dt * ds;
    }
    if (stt == 0.0 || sss == 0.0) {
        out.zero_variance = true;
        return out;  // pw = 0
    }
    double r = sts / std::sqrt(stt * sss);
    r = std::clamp(r, -1.0, 1.0);
    out.r = r;
    double denom = 1.0 - r * r;
    if (denom <= 0.0) {
        out.p = 0.0;
    } else {
        double t_stat = r * std::sqrt(static_cast<double>(n - 2) / denom);
        boost::math::students_t dist(static_cast<double>(n - 2));
        out.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t_stat)));
    }
    out.pw = std::abs(r) * (1.0 - out.p);
    return out;
}

double cosine_distance(const std::vector<double>& t_series, const std::vector<double>& s_series) {
    if (t_series.size() != s_series.size())
        throw std::invalid_argument("cosine_distance: length mismatch");
    double dot = 0.0, nt = 0.0, ns = 0.0;
    for (std::size_t i = 0; i < t_series.size(); ++i) {
        dot += t_series[i] * s_series[i];
        nt += t_series[i] * t_series[i];
        ns += s_series[i] * s_series[i];
    }
    if (nt == 0.0 || ns == 0.0) throw std::domain_error("cosine_distance: zero vector");
    return 1.0 - dot / (std::sqrt(nt) * std::sqrt(ns));
}

double dtw(const std::vector<double>& a, const std::vector<double>& b,
           std::optional<std::size_t> band) {
    const std::size_t n = a.size(), m = b.size();
    if (n == 0 || m == 0) throw std::invalid_argument("dtw: empty series");
    const std::size_t diff = n > m ? n - m : m - n;
    if (band && *band < diff)
        throw std::invalid_argument("dtw: band too narrow to connect the corners");
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        std::fill(cur.begin(), cur.end(), inf);
        for (std::size_t j = 1; j <= m; ++j) {
            if (band) {
                std::int64_t off = static_cast<std::int64_t>(i) - static_cast<std::int64_t>(j);
                if (std::llabs(off) > static_cast<std::int64_t>(*band)) continue;
            }
            double cost = std::abs(a[i - 1] - b[j - 1]);
            double best = std::min({prev[j - 1], prev[j], cur[j - 1]});
            if (best < inf) cur[j] = cost + best;
        }
        prev.swap(cur);
    }
    return prev[m];
}

double normalized_dtw(const std::vector<double>& forecast, const std::vector<double>& segment,
                      NdMode mode) {
    double d = dtw(forecast, segment);
    if (mode == NdMode::PathLength) d /= static_cast<double>(std::max(forecast.size(), segment.size()));
    return 1.0 - d / std::max(d, 1.0);
}

CoefficientSet solve_coefficients(const DatasetCharacteristics& c) {
    if (c.size < 3) throw std::invalid_argument("solve_coefficients: size must be >= 3");
    for (double v : {c.size, c.volatility, c.noise, c.trend_strength, c.periodicity})
        if (!std::isfinite(v))
            throw std::invalid_argument("solve_coefficients: non-finite characteristic");

    CoefficientSet out;
    out.characteristics = c;
    out.alpha = 0.6 * logistic(7.8 * (std::log10(c.size) - 3.2));
    constexpr double kRatioCap = 1e9;
    double ratio = c.trend_strength > 0.0 ? c.noise / c.trend_strength : kRatioCap;
    out.beta = (1.0 - out.alpha) * logistic(2.4 * (ratio - 1.0));
    out.gamma = 1.0 - out.alpha - out.beta;
    return out;
}

DatasetCharacteristics dataset_characteristics(const std::vector<double>& pct_change) {
    const std::size_t n = pct_change.size();
    if (n < 3) throw std::invalid_argument("dataset_characteristics: need at least 3 samples");
    DatasetCharacteristics c;
    c.size = static_cast<double>(n);

    double sd = std::sqrt(variance(pct_change));
    c.volatility = logistic(sd);

    // centered 30-day moving-average detrend
    const std::size_t window = std::min<std::size_t>(30, n);
    const std::size_t half = window / 2;
    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = i >= half ? i - half : 0;
        std::size_t hi = std::min(n - 1, i + (window - 1 - half));
        double s = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) s += pct_change[j];
        resid[i] = pct_change[i] - s / static_cast<double>(hi - lo + 1);
    }
    double var_all = variance(pct_change);
    double var_res = variance(resid);
    c.noise = var_all > 0.0 ? std::sqrt(var_res) / std::sqrt(var_all) : 0.0;
    c.trend_strength = var_all > 0.0 ? std::max(0.0, 1.0 - var_res / var_all) : 0.0;

    // largest periodogram peak share, zero frequency excluded
    double m = mean(pct_change);
    double total = 0.0, peak = 0.0;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        double re = 0.0, im = 0.0;
        double w = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        for (std::size_t t = 0; t < n; ++t) {
            double x = pct_change[t] - m;
            re += x * std::cos(w * static_cast<double>(t));
            im -= x * std::sin(w * static_cast<double>(t));
        }
        double power = re * re + im * im;
        total += power;
        peak = std::max(peak, power);
    }
    c.periodicity = total > 0.0 ? peak / total : 0.0;
    return c;
}

std::vector<double> min_max_normalize(const std::vector<double>& values) {
    if (values.empty()) return {};
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    std::vector<double> out(values.size(), 0.0);
    if (*hi > *lo)
        for (std::size_t i = 0; i < values.size(); ++i)
            out[i] = (values[i] - *lo) / (*hi - *lo);
    return out;
}

SegmentScore score_segment(const Segment& segment, const std::vector<TopicSeries>& topics,
                           const StockSeries& stock,
                           const std::vector<std::vector<double>>& forecasts,
                           const CoefficientSet& coeffs) {
    if (topics.empty()) throw std::invalid_argument("score_segment: empty topic list");
    if (forecasts.size() != topics.size())
        throw std::invalid_argument("score_segment: one forecast per topic required");

    // stock dates inside the segment drive the intersection
    std::vector<std::size_t> stock_idx;
    for (std::size_t i = 0; i < stock.dates.size(); ++i)
        if (segment.start <= stock.dates[i] && stock.dates[i] <= segment.end)
            stock_idx.push_back(i);
    if (stock_idx.size() < 3)
        throw std::invalid_argument("score_segment: fewer than 3 stock samples in segment " +
                                    segment.start.to_string() + ".." + segment.end.to_string());
    std::vector<double> s_vals;
    for (auto i : stock_idx) s_vals.push_back(stock.pct_change[i]);
    std::vector<double> s_norm = min_max_normalize(s_vals);

    SegmentScore score;
    score.segment = segment;
    for (std::size_t t = 0; t < topics.size(); ++t) {
        const auto& topic = topics[t];
        std::unordered_map<std::int64_t, double> by_date;
        by_date.reserve(topic.dates.size());
        for (std::size_t i = 0; i < topic.dates.size(); ++i)
            by_date.emplace(topic.dates[i].days(), topic.counts[i]);
        std::vector<double> t_vals;
        t_vals.reserve(stock_idx.size());
        for (auto i : stock_idx) {
            auto it = by_date.find(stock.dates[i].days());
            if (it == by_date.end())
                throw std::invalid_argument("topic '" + topic.topic + "' has no value for " +
                                            stock.dates[i].to_string());
            t_vals.push_back(it->second);
        }
        std::vector<double> t_norm = min_max_normalize(t_vals);
        std::vector<double> p_norm = min_max_normalize(forecasts[t]);

        SimilarityBreakdown b;
        b.topic = topic.topic;
        auto pw = pearson_weight(t_norm, s_norm);
        b.pw = pw.pw;
        b.pearson_r = pw.r;
        b.pearson_p = pw.p;
        b.zero_variance = pw.zero_variance;

        auto norm_sq = [](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x * x;
            return s;
        };
        if (norm_sq(t_norm) == 0.0 || norm_sq(s_norm) == 0.0) {
            b.cs = 1.0;  // degenerate constant series, flagged via zero_variance
            b.zero_variance = true;
        } else {
            b.cs = cosine_distance(t_norm, s_norm);
        }
        if (p_norm.empty()) throw std::invalid_argument("empty forecast for topic '" + topic.topic + "'");
        b.dtw_raw = dtw(p_norm, t_norm);
        b.nd = normalized_dtw(p_norm, t_norm);
        b.w = coeffs.alpha * b.pw + coeffs.beta * b.nd + coeffs.gamma * b.cs;
        score.total += b.w;
        score.per_topic.push_back(std::move(b));
    }
    return score;
}

std::vector<SegmentScore> rank_segments(std::vector<SegmentScore> scores,
                                        ScoreDirection direction) {
    if (scores.empty()) throw std::invalid_argument("rank_segments: no scores");
    std::stable_sort(scores.begin(), scores.end(), [&](const SegmentScore& a, const SegmentScore& b) {
        if (a.total != b.total)
            return direction == ScoreDirection::Paper ? a.total < b.total : a.total > b.total;
        return a.segment.start > b.segment.start;  // recency wins ties
    });
    for (std::size_t i = 0; i < scores.size(); ++i) scores[i].rank = static_cast<int>(i + 1);
    return scores;
}

void save_segment_scores(const std::vector<SegmentScore>& ranked, const std::string& score_path,
                         const std::string& breakdown_path) {
    std::ofstream score_out(score_path);
    if (!score_out) throw std::runtime_error("cannot write " + score_path);
    score_out << "segment_index\tstart\tend\ttotal\trank\n";
    char buf[64];
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.3f", ranked[i].total);
        score_out << (i + 1) << '\t' << ranked[i].segment.start.to_string() << '\t'
                  << ranked[i].segment.end.to_string() << '\t' << buf << '\t' << ranked[i].rank
                  << '\n';
    }
    std::ofstream bd_out(breakdown_path);
    if (!bd_out) throw std::runtime_error("cannot write " + breakdown_path);
    bd_out << "segment_index\ttopic\tpw\tcs\tnd\tw\n";
    for (std::size_t i = 0; i < ranked.size(); ++i)
        for (const auto& b : ranked[i].per_topic) {
            std::snprintf(buf, sizeof(buf), "%.6f\t%.6f\t%.6f\t%.6f", b.pw, b.cs, b.nd, b.w);
            bd_out << (i + 1) << '\t' << b.topic << '\t' << buf << '\n';
        }
}

}  // namespace regimecast
