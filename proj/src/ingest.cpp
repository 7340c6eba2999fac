#include "regimecast/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <utility>

namespace regimecast {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> parse_keyword_field(const std::string& raw) {
    std::vector<std::string> out;
    std::size_t i = 0;
    const std::size_t n = raw.size();
    auto skip_ws = [&] { while (i < n && std::isspace(static_cast<unsigned char>(raw[i]))) ++i; };

    skip_ws();
    if (i == n) return out;  // empty field
    if (raw[i] != '[') throw ParseError("expected '['", i);
    ++i;
    skip_ws();
    if (i < n && raw[i] == ']') {
        ++i;
        skip_ws();
        if (i != n) throw ParseError("trailing characters after ']'", i);
        return out;
    }
    while (true) {
        skip_ws();
        if (i >= n || (raw[i] != '\'' && raw[i] != '"'))
            throw ParseError("expected quoted keyword", i);
        const char quote = raw[i++];
        std::string value;
        while (i < n && raw[i] != quote) value += raw[i++];
        if (i >= n) throw ParseError("unterminated quote", i);
        ++i;  // closing quote
        out.push_back(lower(trim(value)));
        skip_ws();
        if (i >= n) throw ParseError("missing ']'", i);
        if (raw[i] == ',') {
            ++i;
            continue;
        }
        if (raw[i] == ']') {
            ++i;
            break;
        }
        throw ParseError("expected ',' or ']'", i);
    }
    skip_ws();
    if (i != n) throw ParseError("trailing characters after ']'", i);
    return out;
}

const std::set<std::string>& default_section_whitelist() {
    static const std::set<std::string> wl = {"politics", "economy",  "business", "washington",
                                             "world",    "national", "u.s."};
    return wl;
}

std::vector<Article> preprocess_corpus(const std::vector<Article>& articles,
                                       const std::set<std::string>& section_whitelist,
                                       PreprocessReport* report) {
    PreprocessReport rep;
    std::vector<Article> out;
    out.reserve(articles.size());
    for (const auto& a : articles) {
        if (a.keywords.empty()) {
            ++rep.removed_empty_keywords;
            continue;
        }
        if (!section_whitelist.empty() && !section_whitelist.count(lower(a.section))) {
            ++rep.removed_by_section;
            continue;
        }
        out.push_back(a);
    }
    rep.kept = out.size();
    if (report) *report = rep;
    return out;
}

StockSeries compute_pct_change(const std::vector<Date>& dates, const std::vector<double>& closes) {
    if (closes.size() < 2) throw std::invalid_argument("need at least 2 closes");
    if (dates.size() != closes.size())
        throw std::invalid_argument("dates/closes length mismatch");
    StockSeries s;
    s.dates.reserve(closes.size() - 1);
    s.pct_change.reserve(closes.size() - 1);
    s.closes.reserve(closes.size() - 1);
    for (std::size_t i = 0; i < closes.size(); ++i) {
        if (!(closes[i] > 0.0))
            throw std::domain_error("non-positive close at " + dates[i].to_string());
        if (i == 0) continue;
        s.dates.push_back(dates[i]);
        s.pct_change.push_back(100.0 * (closes[i] - closes[i - 1]) / closes[i - 1]);
        s.closes.push_back(closes[i]);
    }
    return s;
}

SplitSpec make_splits(DateRange full_range, std::optional<SplitProportions> proportions) {
    if (full_range.end <= full_range.start)
        throw std::invalid_argument("degenerate range for splitting");
    SplitSpec spec;
    if (!proportions) {
        const Date train_end(2018, 5, 10);
        const Date val_end(2019, 5, 5);
        const Date test_end(2024, 5, 1);
        const Date test_val_end(2024, 11, 1);
        if (full_range.start >= train_end || full_range.end < test_val_end)
            throw std::invalid_argument(
                "range does not cover the default split boundaries; pass explicit proportions");
        spec.train = {full_range.start, train_end};
        spec.train_val = {train_end + 1, val_end};
        spec.test = {val_end + 1, test_end};
        spec.test_val = {test_end + 1, test_val_end};
        return spec;
    }
    const SplitProportions& p = *proportions;
    const double total = p.train + p.train_val + p.test + p.test_val;
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("split proportions must sum to 1");
    const std::int64_t n = full_range.end - full_range.start + 1;
    if (n < 4) throw std::invalid_argument("range too short to split four ways");
    auto boundary = [&](double frac) {
        return full_range.start + static_cast<std::int64_t>(std::llround(frac * n)) - 1;
    };
    Date b1 = boundary(p.train);
    Date b2 = boundary(p.train + p.train_val);
    Date b3 = boundary(p.train + p.train_val + p.test);
    spec.train = {full_range.start, b1};
    spec.train_val = {b1 + 1, b2};
    spec.test = {b2 + 1, b3};
    spec.test_val = {b3 + 1, full_range.end};
    return spec;
}

std::vector<double> split_shares(const SplitSpec& spec) {
    const double n = static_cast<double>(spec.test_val.end - spec.train.start + 1);
    auto len = [](DateRange r) { return static_cast<double>(r.end - r.start + 1); };
    return {len(spec.train) / n, len(spec.train_val) / n, len(spec.test) / n,
            len(spec.test_val) / n};
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::vector<Article> read_corpus(std::istream& in, PreprocessReport* report) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty corpus file");
    if (split_tabs(trim(line)) != std::vector<std::string>{"date", "headline", "section", "keywords"})
        throw std::runtime_error("corpus header must be 'date\\theadline\\tsection\\tkeywords'");
    std::vector<Article> out;
    std::set<std::pair<std::int64_t, std::string>> seen;
    std::size_t dups = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cols = split_tabs(line);
        if (cols.size() != 4)
            throw std::runtime_error("corpus line " + std::to_string(lineno) + ": expected 4 columns, got " +
                                     std::to_string(cols.size()));
        Article a;
        a.date = Date::parse(trim(cols[0]));
        a.headline = trim(cols[1]);
        a.section = trim(cols[2]);
        a.keywords = parse_keyword_field(cols[3]);
        if (!seen.insert({a.date.days(), a.headline}).second) {
            ++dups;
            continue;
        }
        out.push_back(std::move(a));
    }
    if (report) report->removed_duplicates = dups;
    return out;
}

std::vector<Article> load_corpus(const std::string& path, PreprocessReport* report) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    return read_corpus(in, report);
}

void load_stock_closes(const std::string& path, std::vector<Date>& dates,
                       std::vector<double>& closes) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stock file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty stock file: " + path);
    std::vector<std::pair<Date, double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        auto sep = t.find_first_of(",\t");
        if (sep == std::string::npos)
            throw std::runtime_error("stock line " + std::to_string(lineno) + ": expected 'date,close'");
        rows.emplace_back(Date::parse(trim(t.substr(0, sep))), std::stod(t.substr(sep + 1)));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].first == rows[i - 1].first)
            throw std::runtime_error("duplicate stock date " + rows[i].first.to_string());
    dates.clear();
    closes.clear();
    for (auto& [d, c] : rows) {
        dates.push_back(d);
        closes.push_back(c);
    }
}

}  // namespace regimecast
