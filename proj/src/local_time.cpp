#include "intentlab/local_time.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "intentlab/error.hpp"

namespace intentlab {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

bool read_int(std::string_view text, std::size_t pos, std::size_t width, int& out) {
    if (pos + width > text.size()) return false;
    const char* first = text.data() + pos;
    const char* last = first + width;
    for (const char* p = first; p != last; ++p) {
        if (*p < '0' || *p > '9') return false;
    }
    return std::from_chars(first, last, out).ec == std::errc{};
}

}  // namespace

std::int64_t day_index(LocalTime t) { return floor_div(t.minutes, kMinutesPerDay); }

int minute_of_day(LocalTime t) { return static_cast<int>(floor_mod(t.minutes, kMinutesPerDay)); }

int minute_of_week(LocalTime t) {
    // 1970-01-01 was a Thursday, four days after Sunday.
    const std::int64_t since_sunday = t.minutes + 4LL * kMinutesPerDay;
    return static_cast<int>(floor_mod(since_sunday, kMinutesPerWeek));
}

LocalTime make_local_time(int year, unsigned month, unsigned day, int hour, int minute) {
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
    if (!ymd.ok()) throw RangeError("invalid calendar date");
    if (hour < 0 || hour > 23 || minute < 0 || minute > 59) throw RangeError("invalid clock time");
    const auto days = sys_days{ymd}.time_since_epoch().count();
    return LocalTime{static_cast<std::int64_t>(days) * kMinutesPerDay + hour * 60 + minute};
}

LocalTime parse_local_time(std::string_view text) {
    int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    const bool shape_ok = text.size() >= 16 && read_int(text, 0, 4, year) && text[4] == '-' &&
                          read_int(text, 5, 2, month) && text[7] == '-' && read_int(text, 8, 2, day) &&
                          (text[10] == 'T' || text[10] == ' ') && read_int(text, 11, 2, hour) &&
                          text[13] == ':' && read_int(text, 14, 2, minute);
    if (!shape_ok) throw ValidationError("timestamp '" + std::string(text) + "' is not YYYY-MM-DDTHH:MM");
    if (text.size() != 16) {
        if (text.size() != 19 || text[16] != ':' || !read_int(text, 17, 2, second) || second > 59) {
            throw ValidationError("timestamp '" + std::string(text) + "' has trailing characters");
        }
    }
    try {
        return make_local_time(year, static_cast<unsigned>(month), static_cast<unsigned>(day), hour, minute);
    } catch (const RangeError& e) {
        throw ValidationError("timestamp '" + std::string(text) + "': " + e.what());
    }
}

std::string format_local_time(LocalTime t) {
    using namespace std::chrono;
    const sys_days days{std::chrono::days{day_index(t)}};
    const year_month_day ymd{days};
    const int mod = minute_of_day(t);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), mod / 60, mod % 60);
    return buf;
}

}  // namespace intentlab
