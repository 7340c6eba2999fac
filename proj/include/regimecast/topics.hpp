#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "regimecast/clustering.hpp"
#include "regimecast/date.hpp"
#include "regimecast/ingest.hpp"

namespace regimecast {

struct TopicCluster {
    int cluster_id = 0;
    std::string label;
    std::vector<std::string> top_keywords;
    std::set<std::string> member_keywords;
};

/// Daily count of articles mentioning at least one member keyword.
struct TopicSeries {
    std::string topic;
    std::vector<Date> dates;
    std::vector<double> counts;
};

/// Deterministic offline labeler: first three keywords joined by "/",
/// title-cased.
std::string label_cluster_stub(const std::vector<std::string>& top_keywords);

/// An article is counted once per topic whose member set intersects its
/// keywords; it may contribute to several topics. Dates with no articles are
/// kept with count 0.
/// With count_keyword_occurrences an article contributes one count per
/// matching member keyword instead of one per topic.
std::vector<TopicSeries> build_topic_series(const std::vector<Article>& corpus,
                                            const std::vector<TopicCluster>& clusters,
                                            const std::vector<Date>& calendar,
                                            bool count_keyword_occurrences = false);

/// Re-indexes a daily topic series onto `target_dates` (typically trading
/// days). With roll_forward, counts on skipped days (weekends, holidays) are
/// added to the next target date; otherwise they are dropped.
TopicSeries align_topic_to_dates(const TopicSeries& series, const std::vector<Date>& target_dates,
                                 bool roll_forward);

/// Centered rolling mean; window 1 is the identity.
TopicSeries smooth_series(const TopicSeries& series, std::size_t window);

/// Builds TopicCluster records for every non-noise cluster, labeling each
/// with `labeler` applied to its top-k keywords.
std::vector<TopicCluster> make_topic_clusters(
    const ClusterResult& clusters, const std::vector<Article>& corpus, std::size_t top_k,
    const std::function<std::string(const std::vector<std::string>&)>& labeler);

void save_topic_series(const std::vector<TopicSeries>& series, const std::string& path);
std::vector<TopicSeries> load_topic_series(const std::string& path);

}  // namespace regimecast
