#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "regimecast/topics.hpp"

using namespace regimecast;

namespace {

TopicCluster cluster_of(int id, const std::string& label,
                        std::initializer_list<const char*> members) {
    TopicCluster t;
    t.cluster_id = id;
    t.label = label;
    for (auto* m : members) t.member_keywords.insert(m);
    return t;
}

}  // namespace

TEST_CASE("label_cluster_stub title-cases and joins the first three keywords") {
    CHECK(label_cluster_stub({"fed", "rates", "bonds", "extra"}) == "Fed/Rates/Bonds");
    CHECK(label_cluster_stub({"solo"}) == "Solo");
    CHECK_THROWS(label_cluster_stub({}));
}

TEST_CASE("build_topic_series counts an article once per matching topic") {
    auto calendar = daily_calendar({Date::parse("2020-01-01"), Date::parse("2020-01-03")});
    std::vector<TopicCluster> topics{cluster_of(0, "T0", {"a", "b"}),
                                     cluster_of(1, "T1", {"b", "c"})};
    std::vector<Article> corpus{
        // matches both topics via 'b', and T0 twice via 'a'+'b'
        {Date::parse("2020-01-01"), "x", {"a", "b"}, "s"},
        {Date::parse("2020-01-02"), "y", {"c"}, "s"},
        {Date::parse("2020-01-05"), "off-calendar", {"a"}, "s"},
    };
    auto series = build_topic_series(corpus, topics, calendar);
    REQUIRE(series.size() == 2);
    CHECK(series[0].counts == std::vector<double>{1.0, 0.0, 0.0});
    CHECK(series[1].counts == std::vector<double>{1.0, 1.0, 0.0});

    // keyword-occurrence mode counts each matching member keyword
    auto per_kw = build_topic_series(corpus, topics, calendar, true);
    CHECK(per_kw[0].counts == std::vector<double>{2.0, 0.0, 0.0});
    CHECK(per_kw[1].counts == std::vector<double>{1.0, 1.0, 0.0});
}

TEST_CASE("align_topic_to_dates rolls skipped days forward") {
    TopicSeries daily;
    daily.topic = "T";
    daily.dates = daily_calendar({Date::parse("2020-01-03"), Date::parse("2020-01-07")});
    daily.counts = {1.0, 2.0, 3.0, 4.0, 5.0};  // Fri..Tue

    // trading days: Friday, Monday, Tuesday
    std::vector<Date> trading{Date::parse("2020-01-03"), Date::parse("2020-01-06"),
                              Date::parse("2020-01-07")};
    auto rolled = align_topic_to_dates(daily, trading, true);
    CHECK(rolled.counts == std::vector<double>{1.0, 2.0 + 3.0 + 4.0, 5.0});

    auto dropped = align_topic_to_dates(daily, trading, false);
    CHECK(dropped.counts == std::vector<double>{1.0, 4.0, 5.0});
}

TEST_CASE("align_topic_to_dates flushes a trailing accumulation") {
    TopicSeries daily;
    daily.topic = "T";
    daily.dates = daily_calendar({Date::parse("2020-01-01"), Date::parse("2020-01-04")});
    daily.counts = {1.0, 1.0, 1.0, 1.0};
    std::vector<Date> targets{Date::parse("2020-01-02")};
    auto rolled = align_topic_to_dates(daily, targets, true);
    // everything up to and including the single target lands on it
    CHECK(rolled.counts == std::vector<double>{2.0});
}

TEST_CASE("smooth_series is a centered rolling mean") {
    TopicSeries s;
    s.topic = "T";
    s.dates = daily_calendar({Date::parse("2020-01-01"), Date::parse("2020-01-05")});
    s.counts = {0.0, 3.0, 6.0, 9.0, 12.0};

    CHECK(smooth_series(s, 1).counts == s.counts);
    auto sm = smooth_series(s, 3);
    CHECK(sm.counts[1] == doctest::Approx(3.0));
    CHECK(sm.counts[2] == doctest::Approx(6.0));
    CHECK(sm.counts[0] == doctest::Approx(1.5));  // truncated edge window
    CHECK_THROWS(smooth_series(s, 6));
    CHECK_THROWS(smooth_series(s, 0));
}

TEST_CASE("topic series file round-trip") {
    std::vector<TopicSeries> series(2);
    series[0].topic = "Alpha";
    series[0].dates = {Date::parse("2020-01-01"), Date::parse("2020-01-02")};
    series[0].counts = {1.5, 0.0};
    series[1].topic = "Beta";
    series[1].dates = {Date::parse("2020-01-01")};
    series[1].counts = {7.0};

    const std::string path = "test_topic_series.tsv";
    save_topic_series(series, path);
    auto back = load_topic_series(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].topic == "Alpha");
    CHECK(back[0].counts == series[0].counts);
    CHECK(back[1].dates[0] == series[1].dates[0]);
    std::remove(path.c_str());
}

TEST_CASE("make_topic_clusters labels every non-noise cluster") {
    ClusterResult clusters;
    clusters.cluster_count = 2;
    clusters.labels = {{"a", 0}, {"b", 0}, {"c", 1}, {"noise", kNoise}};
    std::vector<Article> corpus{{Date(0), "h", {"a", "b", "c"}, "s"}};
    auto topics = make_topic_clusters(clusters, corpus, 5, label_cluster_stub);
    REQUIRE(topics.size() == 2);
    CHECK(topics[0].member_keywords == std::set<std::string>{"a", "b"});
    CHECK(topics[1].label == "C");
    for (const auto& t : topics) CHECK(t.member_keywords.count("noise") == 0);
}
