#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace regimecast {

/// Calendar date stored as days since 1970-01-01.
class Date {
public:
    Date() : days_(0) {}
    explicit Date(std::int64_t days_since_epoch) : days_(days_since_epoch) {}
    Date(int year, unsigned month, unsigned day);

    static Date parse(const std::string& iso);  // "YYYY-MM-DD"

    std::int64_t days() const { return days_; }
    std::string to_string() const;

    Date operator+(std::int64_t d) const { return Date(days_ + d); }
    Date operator-(std::int64_t d) const { return Date(days_ - d); }
    std::int64_t operator-(Date other) const { return days_ - other.days_; }
    Date& operator++() { ++days_; return *this; }

    auto operator<=>(const Date&) const = default;

private:
    std::int64_t days_;
};

/// Half-open-in-spirit inclusive date range [start, end], start <= end.
struct DateRange {
    Date start;
    Date end;

    std::int64_t length_days() const { return end - start; }
    bool contains(Date d) const { return d >= start && d <= end; }
    Date midpoint() const { return start + (end - start) / 2; }
};

/// All calendar days in [start, end], inclusive.
std::vector<Date> daily_calendar(DateRange range);

}  // namespace regimecast
