#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "regimecast/date.hpp"
#include "regimecast/ingest.hpp"

using namespace regimecast;

TEST_CASE("date parse and format round-trip") {
    for (const char* iso : {"1970-01-01", "2000-02-29", "2015-01-01", "2024-12-31"}) {
        Date d = Date::parse(iso);
        CHECK(d.to_string() == iso);
    }
    CHECK(Date::parse("1970-01-01").days() == 0);
    CHECK(Date::parse("1970-01-02").days() == 1);
    CHECK(Date::parse("2015-03-02") - Date::parse("2015-02-28") == 2);
    CHECK_THROWS(Date::parse("2015-13-01"));
    CHECK_THROWS(Date::parse("2015-02-30"));
    CHECK_THROWS(Date::parse("not-a-date"));
}

TEST_CASE("daily_calendar covers the inclusive range") {
    auto days = daily_calendar({Date::parse("2020-02-27"), Date::parse("2020-03-02")});
    REQUIRE(days.size() == 5);
    CHECK(days.front().to_string() == "2020-02-27");
    CHECK(days[2].to_string() == "2020-02-29");
    CHECK(days.back().to_string() == "2020-03-02");
}

TEST_CASE("parse_keyword_field handles the bracketed quoted list") {
    auto kws = parse_keyword_field("['bankruptcies', 'exciteathome', 'amerco']");
    REQUIRE(kws.size() == 3);
    CHECK(kws[0] == "bankruptcies");
    CHECK(kws[2] == "amerco");

    CHECK(parse_keyword_field("[]").empty());
    CHECK(parse_keyword_field("['Single']") == std::vector<std::string>{"single"});
    CHECK(parse_keyword_field("[' padded ']") == std::vector<std::string>{"padded"});
    // duplicates are preserved
    CHECK(parse_keyword_field("['a', 'a']").size() == 2);
}

TEST_CASE("parse_keyword_field reports the byte offset of the problem") {
    CHECK_THROWS_AS(parse_keyword_field("'a', 'b'"), ParseError);
    try {
        parse_keyword_field("['a', b]");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 6);
        CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
}

TEST_CASE("preprocess_corpus drops empty-keyword and off-section articles") {
    std::vector<Article> in{
        {Date::parse("2020-01-01"), "a", {"x"}, "Politics"},
        {Date::parse("2020-01-02"), "b", {}, "politics"},
        {Date::parse("2020-01-03"), "c", {"y"}, "sports"},
        {Date::parse("2020-01-04"), "d", {"z"}, "ECONOMY"},
    };
    PreprocessReport rep;
    auto out = preprocess_corpus(in, default_section_whitelist(), &rep);
    REQUIRE(out.size() == 2);
    CHECK(out[0].headline == "a");
    CHECK(out[1].headline == "d");
    CHECK(rep.removed_empty_keywords == 1);
    CHECK(rep.removed_by_section == 1);
    CHECK(rep.kept == 2);

    // empty whitelist disables the section filter
    auto all = preprocess_corpus(in, {});
    CHECK(all.size() == 3);
}

TEST_CASE("compute_pct_change drops the first date and checks closes") {
    std::vector<Date> dates{Date::parse("2020-01-01"), Date::parse("2020-01-02"),
                            Date::parse("2020-01-03")};
    auto s = compute_pct_change(dates, {100.0, 110.0, 99.0});
    REQUIRE(s.dates.size() == 2);
    CHECK(s.dates[0].to_string() == "2020-01-02");
    CHECK(s.pct_change[0] == doctest::Approx(10.0));
    CHECK(s.pct_change[1] == doctest::Approx(100.0 * (99.0 - 110.0) / 110.0));

    CHECK_THROWS_AS(compute_pct_change(dates, {100.0, 0.0, 99.0}), std::domain_error);
    CHECK_THROWS_AS(compute_pct_change(dates, {100.0, -1.0, 99.0}), std::domain_error);
    CHECK_THROWS(compute_pct_change(dates, {100.0}));
}

TEST_CASE("make_splits uses the fixed boundaries when the range covers them") {
    DateRange full{Date::parse("2010-01-01"), Date::parse("2024-12-31")};
    auto s = make_splits(full);
    CHECK(s.train.end.to_string() == "2018-05-10");
    CHECK(s.train_val.end.to_string() == "2019-05-05");
    CHECK(s.test.end.to_string() == "2024-05-01");
    CHECK(s.test_val.end.to_string() == "2024-11-01");
    CHECK(s.train.start == full.start);
    CHECK(s.train_val.start - s.train.end == 1);
    // a range that does not cover the boundaries is rejected
    CHECK_THROWS(make_splits({Date::parse("2015-01-01"), Date::parse("2016-01-01")}));
}

TEST_CASE("make_splits with proportions partitions every day exactly once") {
    DateRange full{Date::parse("2013-01-01"), Date::parse("2016-12-31")};
    auto s = make_splits(full, SplitProportions{});
    CHECK(s.train.start == full.start);
    CHECK(s.test_val.end == full.end);
    CHECK(s.train_val.start - s.train.end == 1);
    CHECK(s.test.start - s.train_val.end == 1);
    CHECK(s.test_val.start - s.test.end == 1);

    auto shares = split_shares(s);
    REQUIRE(shares.size() == 4);
    double sum = shares[0] + shares[1] + shares[2] + shares[3];
    CHECK(sum == doctest::Approx(1.0));
    CHECK(shares[0] == doctest::Approx(0.74).epsilon(0.01));
    CHECK(shares[2] == doctest::Approx(0.20).epsilon(0.01));
}

TEST_CASE("read_corpus checks the header and deduplicates") {
    std::istringstream in(
        "date\theadline\tsection\tkeywords\n"
        "2020-01-01\tSame\tpolitics\t['a']\n"
        "2020-01-01\tSame\tpolitics\t['b']\n"
        "2020-01-02\tOther\teconomy\t['c', 'd']\n");
    PreprocessReport rep;
    auto articles = read_corpus(in, &rep);
    REQUIRE(articles.size() == 2);
    CHECK(rep.removed_duplicates == 1);
    CHECK(articles[1].keywords == std::vector<std::string>{"c", "d"});

    std::istringstream bad("wrong\theader\n2020-01-01\tx\ty\t[]\n");
    CHECK_THROWS(read_corpus(bad));
}

TEST_CASE("load_stock_closes flags duplicate dates by name") {
    const std::string path = "test_dup_stock.csv";
    {
        std::ofstream out(path);
        out << "date,close\n2020-01-02,10\n2020-01-01,9\n2020-01-02,11\n";
    }
    std::vector<Date> dates;
    std::vector<double> closes;
    try {
        load_stock_closes(path, dates, closes);
        FAIL("expected duplicate-date error");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("2020-01-02") != std::string::npos);
    }
    std::remove(path.c_str());
}

TEST_CASE("load_stock_closes sorts by date") {
    const std::string path = "test_sort_stock.csv";
    {
        std::ofstream out(path);
        out << "date,close\n2020-01-03,12\n2020-01-01,9\n2020-01-02,11\n";
    }
    std::vector<Date> dates;
    std::vector<double> closes;
    load_stock_closes(path, dates, closes);
    REQUIRE(dates.size() == 3);
    CHECK(dates[0].to_string() == "2020-01-01");
    CHECK(closes[0] == 9.0);
    CHECK(closes[2] == 12.0);
    std::remove(path.c_str());
}
