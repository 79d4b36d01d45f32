#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace intentlab {

inline constexpr int kMinutesPerDay = 1440;
inline constexpr int kMinutesPerWeek = 7 * kMinutesPerDay;

/// Wall-clock instant on the user's local clock, in whole minutes since
/// 1970-01-01 00:00. No timezone is attached: routines are local-clock
/// phenomena and the engine never converts.
struct LocalTime {
    std::int64_t minutes = 0;

    friend constexpr auto operator<=>(LocalTime, LocalTime) = default;
};

constexpr LocalTime operator+(LocalTime t, std::int64_t delta) { return LocalTime{t.minutes + delta}; }
constexpr std::int64_t operator-(LocalTime a, LocalTime b) { return a.minutes - b.minutes; }

/// Day index: floor(minutes / 1440). Negative instants floor toward -inf.
std::int64_t day_index(LocalTime t);

/// Minutes past local midnight, in [0, 1440).
int minute_of_day(LocalTime t);

/// Minutes past Sunday 00:00, in [0, 10080).
int minute_of_week(LocalTime t);

/// Throws RangeError on an invalid calendar date or clock time.
LocalTime make_local_time(int year, unsigned month, unsigned day, int hour, int minute);

/// Accepts `YYYY-MM-DDTHH:MM`, optionally followed by `:SS` (seconds are
/// truncated). A space may replace the `T`. Throws ValidationError.
LocalTime parse_local_time(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM`.
std::string format_local_time(LocalTime t);

}  // namespace intentlab
