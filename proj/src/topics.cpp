#include "regimecast/topics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace regimecast {

std::string label_cluster_stub(const std::vector<std::string>& top_keywords) {
    if (top_keywords.empty()) throw std::invalid_argument("cannot label an empty keyword list");
    std::string out;
    const std::size_t take = std::min<std::size_t>(3, top_keywords.size());
    for (std::size_t i = 0; i < take; ++i) {
        std::string word = top_keywords[i];
        if (!word.empty()) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
        if (i) out += '/';
        out += word;
    }
    return out;
}

std::vector<TopicSeries> build_topic_series(const std::vector<Article>& corpus,
                                            const std::vector<TopicCluster>& clusters,
                                            const std::vector<Date>& calendar,
                                            bool count_keyword_occurrences) {
    if (calendar.empty()) throw std::invalid_argument("empty calendar");
    std::unordered_map<std::int64_t, std::size_t> date_index;
    date_index.reserve(calendar.size());
    for (std::size_t i = 0; i < calendar.size(); ++i) date_index.emplace(calendar[i].days(), i);

    // keyword -> topic indexes that contain it
    std::unordered_map<std::string, std::vector<std::size_t>> keyword_topics;
    for (std::size_t t = 0; t < clusters.size(); ++t)
        for (const auto& kw : clusters[t].member_keywords) keyword_topics[kw].push_back(t);

    std::vector<TopicSeries> out(clusters.size());
    for (std::size_t t = 0; t < clusters.size(); ++t) {
        out[t].topic = clusters[t].label;
        out[t].dates = calendar;
        out[t].counts.assign(calendar.size(), 0.0);
    }

    std::vector<bool> hit(clusters.size());
    for (const auto& a : corpus) {
        auto it = date_index.find(a.date.days());
        if (it == date_index.end()) continue;
        std::fill(hit.begin(), hit.end(), false);
        for (const auto& kw : a.keywords) {
            auto kt = keyword_topics.find(kw);
            if (kt == keyword_topics.end()) continue;
            for (auto t : kt->second) {
                if (count_keyword_occurrences)
                    out[t].counts[it->second] += 1.0;
                else
                    hit[t] = true;
            }
        }
        if (!count_keyword_occurrences)
            for (std::size_t t = 0; t < clusters.size(); ++t)
                if (hit[t]) out[t].counts[it->second] += 1.0;
    }
    return out;
}

TopicSeries align_topic_to_dates(const TopicSeries& series, const std::vector<Date>& target_dates,
                                 bool roll_forward) {
    TopicSeries out;
    out.topic = series.topic;
    out.dates = target_dates;
    out.counts.assign(target_dates.size(), 0.0);
    if (target_dates.empty()) return out;
    if (roll_forward) {
        std::size_t k = 0;
        double pending = 0.0;
        for (std::size_t i = 0; i < series.dates.size() && k < target_dates.size(); ++i) {
            if (series.dates[i] > target_dates[k]) {
                out.counts[k] += pending;
                pending = 0.0;
                ++k;
                if (k >= target_dates.size()) break;
                --i;  // re-test this sample against the next target date
                continue;
            }
            pending += series.counts[i];
        }
        if (k < target_dates.size()) out.counts[k] += pending;
    } else {
        std::unordered_map<std::int64_t, double> by_date;
        for (std::size_t i = 0; i < series.dates.size(); ++i)
            by_date.emplace(series.dates[i].days(), series.counts[i]);
        for (std::size_t k = 0; k < target_dates.size(); ++k) {
            auto it = by_date.find(target_dates[k].days());
            if (it != by_date.end()) out.counts[k] = it->second;
        }
    }
    return out;
}

TopicSeries smooth_series(const TopicSeries& series, std::size_t window) {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    if (window > series.counts.size())
        throw std::invalid_argument("window longer than series");
    if (window == 1) return series;
    TopicSeries out = series;
    const std::size_t n = series.counts.size();
    const std::size_t half = window / 2;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = i >= half ? i - half : 0;
        std::size_t hi = std::min(n - 1, i + (window - 1 - half));
        double s = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) s += series.counts[j];
        out.counts[i] = s / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::vector<TopicCluster> make_topic_clusters(
    const ClusterResult& clusters, const std::vector<Article>& corpus, std::size_t top_k,
    const std::function<std::string(const std::vector<std::string>&)>& labeler) {
    std::vector<TopicCluster> out;
    for (int id = 0; id < clusters.cluster_count; ++id) {
        TopicCluster tc;
        tc.cluster_id = id;
        for (const auto& [kw, cid] : clusters.labels)
            if (cid == id) tc.member_keywords.insert(kw);
        tc.top_keywords = top_keywords(clusters, corpus, id, top_k);
        tc.label = labeler(tc.top_keywords);
        out.push_back(std::move(tc));
    }
    return out;
}

void save_topic_series(const std::vector<TopicSeries>& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write topic series: " + path);
    out << "topic\tdate\tcount\n";
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.dates.size(); ++i)
            out << s.topic << '\t' << s.dates[i].to_string() << '\t' << s.counts[i] << '\n';
}

std::vector<TopicSeries> load_topic_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open topic series: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "topic\tdate\tcount")
        throw std::runtime_error("topic series header must be 'topic\\tdate\\tcount'");
    std::vector<TopicSeries> out;
    std::unordered_map<std::string, std::size_t> index;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw std::runtime_error("malformed topic series row: " + line);
        std::string topic = line.substr(0, t1);
        auto [it, inserted] = index.try_emplace(topic, out.size());
        if (inserted) {
            out.emplace_back();
            out.back().topic = topic;
        }
        auto& s = out[it->second];
        s.dates.push_back(Date::parse(line.substr(t1 + 1, t2 - t1 - 1)));
        s.counts.push_back(std::stod(line.substr(t2 + 1)));
    }
    return out;
}

}  // namespace regimecast
