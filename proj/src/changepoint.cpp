#include "regimecast/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace regimecast {

double auto_bandwidth(const std::vector<double>& series) {
    const std::size_t n = series.size();
    if (n < 2) throw std::invalid_argument("auto_bandwidth needs at least 2 samples");
    std::vector<double> sq;
    sq.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = series[i] - series[j];
            sq.push_back(d * d);
        }
    std::size_t mid = sq.size() / 2;
    std::nth_element(sq.begin(), sq.begin() + mid, sq.end());
    double median = sq[mid];
    if (sq.size() % 2 == 0) {
        double lo = *std::max_element(sq.begin(), sq.begin() + mid);
        median = (median + lo) / 2.0;
    }
    return median > 0.0 ? 1.0 / median : 1.0;
}

double rbf_cost(const std::vector<double>& series, std::size_t a, std::size_t b,
                double bandwidth) {
    if (a >= b || b > series.size()) throw std::invalid_argument("rbf_cost: empty segment");
    const double len = static_cast<double>(b - a);
    double total = 0.0;
    for (std::size_t s = a; s < b; ++s)
        for (std::size_t t = a; t < b; ++t) {
            double d = series[s] - series[t];
            total += std::exp(-bandwidth * d * d);
        }
    return len - total / len;
}

double default_penalty(const std::vector<double>& series, double bandwidth) {
    const std::size_t n = series.size();
    double scale = rbf_cost(series, 0, n, bandwidth) / static_cast<double>(n);
    return 2.0 * std::log(static_cast<double>(n)) * scale;
}

BreakpointSet pelt(const std::vector<double>& series, const PeltConfig& config,
                   const std::vector<Date>* calendar) {
    const std::size_t n = series.size();
    const std::size_t min_len = std::max<std::size_t>(config.min_segment_length, 1);
    if (n < 2 * min_len)
        throw std::invalid_argument("series too short: need at least 2*min_segment_length samples");
    if (calendar && calendar->size() != n)
        throw std::invalid_argument("calendar length must match series length");
    const double bw = config.kernel_bandwidth > 0.0 ? config.kernel_bandwidth
                                                    : auto_bandwidth(series);
    const double pen = config.penalty >= 0.0 ? config.penalty : default_penalty(series, bw);

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> F(n + 1, inf);
    std::vector<std::size_t> prev(n + 1, 0);
    F[0] = -pen;

    // v[s] = sum of kernel values over the block [s, t) x [s, t); maintained
    // incrementally as t advances so each cost lookup is O(1).
    std::vector<double> v(n + 1, 0.0);
    std::vector<double> row(n, 0.0);
    std::vector<std::size_t> admissible;

    for (std::size_t t = 1; t <= n; ++t) {
        // fold sample t-1 into v
        const std::size_t idx = t - 1;
        for (std::size_t i = 0; i < idx; ++i) {
            double d = series[i] - series[idx];
            row[i] = std::exp(-bw * d * d);
        }
        double suffix = 0.0;
        for (std::size_t s = idx; s-- > 0;) {
            suffix += row[s];
            v[s] += 2.0 * suffix + 1.0;
        }
        v[idx] = 1.0;

        if (t >= min_len) admissible.push_back(t - min_len);

        auto cost = [&](std::size_t s) {
            double len = static_cast<double>(t - s);
            return len - v[s] / len;
        };

        double best = inf;
        std::size_t arg = 0;
        for (std::size_t s : admissible) {
            if (F[s] == inf) continue;
            double cand = F[s] + cost(s) + pen;
            if (cand < best) {
                best = cand;
                arg = s;
            }
        }
        F[t] = best;
        prev[t] = arg;

        if (best < inf) {
            std::vector<std::size_t> kept;
            kept.reserve(admissible.size());
            for (std::size_t s : admissible)
                if (F[s] == inf || F[s] + cost(s) <= F[t]) kept.push_back(s);
            admissible.swap(kept);
        }
    }

    BreakpointSet out;
    out.objective = F[n];
    for (std::size_t t = n; t > 0; t = prev[t])
        if (prev[t] != 0) out.indices.push_back(prev[t]);
    std::reverse(out.indices.begin(), out.indices.end());
    if (calendar)
        for (auto i : out.indices) out.dates.push_back((*calendar)[i]);
    return out;
}

BreakpointEval evaluate_breakpoints(const std::vector<Date>& detected,
                                    const std::vector<Date>& reference,
                                    std::int64_t tolerance_days) {
    if (tolerance_days < 0) throw std::invalid_argument("tolerance must be >= 0");
    BreakpointEval eval;
    if (reference.empty()) {
        eval.degenerate = !detected.empty();
        return eval;  // precision and recall both reported as 0
    }
    std::vector<std::tuple<std::int64_t, std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < detected.size(); ++i)
        for (std::size_t j = 0; j < reference.size(); ++j) {
            std::int64_t gap = std::llabs(detected[i] - reference[j]);
            if (gap <= tolerance_days) pairs.emplace_back(gap, i, j);
        }
    std::sort(pairs.begin(), pairs.end());
    std::vector<bool> det_used(detected.size(), false), ref_used(reference.size(), false);
    for (auto& [gap, i, j] : pairs) {
        if (det_used[i] || ref_used[j]) continue;
        det_used[i] = ref_used[j] = true;
        ++eval.true_positives;
    }
    eval.precision = detected.empty()
                         ? 0.0
                         : static_cast<double>(eval.true_positives) / detected.size();
    eval.recall = static_cast<double>(eval.true_positives) / reference.size();
    eval.f_score = (eval.precision + eval.recall) > 0.0
                       ? 2.0 * eval.precision * eval.recall / (eval.precision + eval.recall)
                       : 0.0;
    return eval;
}

std::vector<Date> load_reference_events(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open reference events: " + path);
    std::vector<Date> out;
    std::string line;
    while (std::getline(in, line)) {
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        auto e = line.find_last_not_of(" \t\r");
        out.push_back(Date::parse(line.substr(b, e - b + 1)));
    }
    return out;
}

}  // namespace regimecast
