#pragma once

#include <string>
#include <vector>

#include "regimecast/date.hpp"

namespace regimecast {

struct PriceHistory {
    std::string symbol;
    std::vector<Date> dates;   // strictly increasing
    std::vector<double> closes;
};

class UpstreamError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fetches a close-price history for `symbol` restricted to `range`.
/// `source` is either an http(s) base URL (the client GETs
/// <base>/history?symbol=<symbol>) or a path to a fixture file holding the
/// same JSON payload:
///   {"symbol": "SPX", "prices": [{"date": "2020-01-02", "close": 3257.85}, ...]}
/// Rows are sorted by date; a duplicate date is an error.
PriceHistory fetch_stock_history(const std::string& symbol, DateRange range,
                                 const std::string& source);

/// Parses the JSON payload; exposed separately for testing.
PriceHistory parse_price_payload(const std::string& json, const std::string& symbol,
                                 DateRange range);

}  // namespace regimecast
