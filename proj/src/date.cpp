#include "regimecast/date.hpp"

#include <charconv>

namespace regimecast {

Date::Date(int year, unsigned month, unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok())
        throw std::invalid_argument("invalid calendar date: " + std::to_string(year) + "-" +
                                    std::to_string(month) + "-" + std::to_string(day));
    days_ = std::chrono::sys_days{ymd}.time_since_epoch().count();
}

Date Date::parse(const std::string& iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-')
        throw std::invalid_argument("expected YYYY-MM-DD, got '" + iso + "'");
    auto field = [&](int pos, int len) {
        int v = 0;
        auto [p, ec] = std::from_chars(iso.data() + pos, iso.data() + pos + len, v);
        if (ec != std::errc{} || p != iso.data() + pos + len)
            throw std::invalid_argument("expected YYYY-MM-DD, got '" + iso + "'");
        return v;
    };
    return Date(field(0, 4), static_cast<unsigned>(field(5, 2)),
                static_cast<unsigned>(field(8, 2)));
}

std::string Date::to_string() const {
    std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days_}}};
    char buf[11];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::vector<Date> daily_calendar(DateRange range) {
    if (range.end < range.start) throw std::invalid_argument("calendar range end before start");
    std::vector<Date> out;
    out.reserve(static_cast<std::size_t>(range.end - range.start) + 1);
    for (Date d = range.start; d <= range.end; ++d) out.push_back(d);
    return out;
}

}  // namespace regimecast
