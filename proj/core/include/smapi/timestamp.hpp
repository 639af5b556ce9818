#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace smapi {

// Instant plus serialization offset. The instant is UTC epoch milliseconds;
// the offset is only used when rendering, so two timestamps are equal iff
// both instant and offset agree (round-trips preserve the original text).
struct Timestamp {
    std::int64_t epoch_ms = 0;
    std::int32_t offset_minutes = 0;

    bool operator==(const Timestamp&) const = default;
    auto operator<=>(const Timestamp&) const = default;

    // "2017-02-01T10:30:47.000+01:00" (milliseconds always printed, offset
    // zero renders as "+00:00")
    std::string to_iso8601() const;

    static Timestamp from_civil(int year, int month, int day, int hour, int minute,
                                int second, int millis, int offset_minutes);

    // Accepts ISO-8601 with 'T' or ' ' separator, optional fractional seconds
    // (truncated to ms), and offset "Z", "+HH:MM", "+HHMM" or "+HH".
    static std::optional<Timestamp> parse_iso8601(std::string_view text);

    static Timestamp from_epoch_seconds(std::int64_t seconds, std::int32_t offset_minutes = 0) {
        return Timestamp{seconds * 1000, offset_minutes};
    }
};

namespace civil {
// Days between 1970-01-01 and year/month/day in the proleptic Gregorian
// calendar (negative before the epoch).
std::int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(std::int64_t days, int& year, unsigned& month, unsigned& day);
} // namespace civil

} // namespace smapi
