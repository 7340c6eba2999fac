#include "regimecast/stock_client.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

namespace regimecast {

PriceHistory parse_price_payload(const std::string& json, const std::string& symbol,
                                 DateRange range) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw UpstreamError(std::string("unparseable price payload: ") + e.what());
    }
    if (!doc.contains("prices") || !doc["prices"].is_array())
        throw UpstreamError("price payload missing 'prices' array");

    std::vector<std::pair<Date, double>> rows;
    for (const auto& row : doc["prices"]) {
        Date d = Date::parse(row.at("date").get<std::string>());
        if (!range.contains(d)) continue;
        rows.emplace_back(d, row.at("close").get<double>());
    }
    if (rows.empty())
        throw UpstreamError("empty price history for symbol '" + symbol + "' in range " +
                            range.start.to_string() + ".." + range.end.to_string());
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].first == rows[i - 1].first)
            throw UpstreamError("duplicate price date " + rows[i].first.to_string());

    PriceHistory out;
    out.symbol = doc.value("symbol", symbol);
    for (auto& [d, c] : rows) {
        out.dates.push_back(d);
        out.closes.push_back(c);
    }
    return out;
}

PriceHistory fetch_stock_history(const std::string& symbol, DateRange range,
                                 const std::string& source) {
    if (symbol.empty()) throw std::invalid_argument("empty symbol");
    std::string payload;
    if (source.rfind("http://", 0) == 0 || source.rfind("https://", 0) == 0) {
        // split scheme://host[:port] from any path prefix
        auto scheme_end = source.find("://") + 3;
        auto path_start = source.find('/', scheme_end);
        std::string base = path_start == std::string::npos ? source : source.substr(0, path_start);
        std::string prefix = path_start == std::string::npos ? "" : source.substr(path_start);
        httplib::Client client(base);
        client.set_connection_timeout(10);
        auto res = client.Get(prefix + "/history?symbol=" + symbol);
        if (!res)
            throw UpstreamError("network failure contacting " + base + ": " +
                                httplib::to_string(res.error()));
        if (res->status != 200)
            throw UpstreamError("price endpoint returned status " + std::to_string(res->status));
        payload = res->body;
    } else {
        std::ifstream in(source);
        if (!in) throw UpstreamError("cannot open price fixture: " + source);
        std::ostringstream ss;
        ss << in.rdbuf();
        payload = ss.str();
    }
    return parse_price_payload(payload, symbol, range);
}

}  // namespace regimecast
