#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "regimecast/date.hpp"

namespace regimecast {

struct Article {
    Date date;
    std::string headline;
    std::vector<std::string> keywords;  // lowercased
    std::string section;
};

/// Daily percentage change derived from closing prices.
/// pct_change[t] = 100 * (close_t - close_{t-1}) / close_{t-1}; the first
/// close's date is dropped.
struct StockSeries {
    std::vector<Date> dates;
    std::vector<double> pct_change;
    std::vector<double> closes;  // optional, aligned with dates when present
};

struct SplitSpec {
    DateRange train;
    DateRange train_val;
    DateRange test;
    DateRange test_val;
};

struct PreprocessReport {
    std::size_t removed_empty_keywords = 0;
    std::size_t removed_by_section = 0;
    std::size_t removed_duplicates = 0;
    std::size_t kept = 0;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Parses the corpus's bracketed quoted-list keyword field, e.g.
/// "['bankruptcies', 'exciteathome', 'amerco']". Values are trimmed and
/// lowercased; duplicates are preserved.
std::vector<std::string> parse_keyword_field(const std::string& raw);

/// Default desk/section whitelist; see README for the rationale.
const std::set<std::string>& default_section_whitelist();

/// Drops articles with no keywords or with a section outside the whitelist
/// (case-insensitive match). An empty whitelist disables the section filter.
std::vector<Article> preprocess_corpus(const std::vector<Article>& articles,
                                       const std::set<std::string>& section_whitelist,
                                       PreprocessReport* report = nullptr);

StockSeries compute_pct_change(const std::vector<Date>& dates, const std::vector<double>& closes);

struct SplitProportions {
    double train = 0.74, train_val = 0.04, test = 0.20, test_val = 0.02;
};

/// Splits a full date range into train / train-val / test / test-val.
/// Without `proportions`, the fixed historical boundaries are used
/// (train through 2018-05-10, validation through 2019-05-05, testing through
/// 2024-05-01, test-val through 2024-11-01) and the range must cover them.
/// With `proportions`, boundaries are placed by day-count share.
SplitSpec make_splits(DateRange full_range,
                      std::optional<SplitProportions> proportions = std::nullopt);

/// Reported share of days per split, in order train/train_val/test/test_val.
std::vector<double> split_shares(const SplitSpec& spec);

/// Corpus file: tab-delimited, header "date\theadline\tsection\tkeywords",
/// keywords in the bracketed quoted-list format. Duplicate (date, headline)
/// rows are dropped.
std::vector<Article> load_corpus(const std::string& path, PreprocessReport* report = nullptr);
std::vector<Article> read_corpus(std::istream& in, PreprocessReport* report = nullptr);

/// Stock file: delimited text with header "date,close" (comma or tab).
void load_stock_closes(const std::string& path, std::vector<Date>& dates,
                       std::vector<double>& closes);

}  // namespace regimecast
