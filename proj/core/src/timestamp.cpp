#include "smapi/timestamp.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace smapi {

namespace civil {

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, unsigned& month, unsigned& day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = doy - (153 * mp + 2) / 5 + 1;
    month = mp + (mp < 10 ? 3 : -9);
    year = static_cast<int>(y + (month <= 2));
}

} // namespace civil

Timestamp Timestamp::from_civil(int year, int month, int day, int hour, int minute,
                                int second, int millis, int offset_minutes) {
    std::int64_t days = civil::days_from_civil(year, static_cast<unsigned>(month),
                                               static_cast<unsigned>(day));
    std::int64_t local_ms = ((days * 24 + hour) * 60 + minute) * 60'000 +
                            static_cast<std::int64_t>(second) * 1000 + millis;
    return Timestamp{local_ms - static_cast<std::int64_t>(offset_minutes) * 60'000,
                     offset_minutes};
}

std::string Timestamp::to_iso8601() const {
    std::int64_t local_ms = epoch_ms + static_cast<std::int64_t>(offset_minutes) * 60'000;
    std::int64_t days = local_ms / 86'400'000;
    std::int64_t rem = local_ms % 86'400'000;
    if (rem < 0) {
        rem += 86'400'000;
        days -= 1;
    }
    int year = 0;
    unsigned month = 0, day = 0;
    civil::civil_from_days(days, year, month, day);
    int ms = static_cast<int>(rem % 1000);
    int total_s = static_cast<int>(rem / 1000);
    int hour = total_s / 3600;
    int minute = (total_s / 60) % 60;
    int second = total_s % 60;

    char sign = offset_minutes < 0 ? '-' : '+';
    int off = offset_minutes < 0 ? -offset_minutes : offset_minutes;

    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d.%03d%c%02d:%02d",
                  year, month, day, hour, minute, second, ms, sign, off / 60, off % 60);
    return buf;
}

namespace {

bool read_digits(std::string_view s, std::size_t& pos, int count, int& out) {
    if (pos + count > s.size()) return false;
    int v = 0;
    for (int i = 0; i < count; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    pos += count;
    out = v;
    return true;
}

} // namespace

std::optional<Timestamp> Timestamp::parse_iso8601(std::string_view s) {
    std::size_t pos = 0;
    int year, month, day, hour, minute, second;
    if (!read_digits(s, pos, 4, year)) return std::nullopt;
    if (pos >= s.size() || s[pos] != '-') return std::nullopt;
    ++pos;
    if (!read_digits(s, pos, 2, month)) return std::nullopt;
    if (pos >= s.size() || s[pos] != '-') return std::nullopt;
    ++pos;
    if (!read_digits(s, pos, 2, day)) return std::nullopt;
    if (pos >= s.size() || (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ')) return std::nullopt;
    ++pos;
    if (!read_digits(s, pos, 2, hour)) return std::nullopt;
    if (pos >= s.size() || s[pos] != ':') return std::nullopt;
    ++pos;
    if (!read_digits(s, pos, 2, minute)) return std::nullopt;
    if (pos >= s.size() || s[pos] != ':') return std::nullopt;
    ++pos;
    if (!read_digits(s, pos, 2, second)) return std::nullopt;

    int millis = 0;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        int scale = 100;
        std::size_t digits = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            if (digits < 3) {
                millis += (s[pos] - '0') * scale;
                scale /= 10;
            }
            ++digits;
            ++pos;
        }
        if (digits == 0) return std::nullopt;
    }

    int offset_minutes = 0;
    if (pos >= s.size()) return std::nullopt; // offset is required
    char c = s[pos];
    if (c == 'Z' || c == 'z') {
        ++pos;
    } else if (c == '+' || c == '-') {
        ++pos;
        int oh = 0, om = 0;
        if (!read_digits(s, pos, 2, oh)) return std::nullopt;
        if (pos < s.size() && s[pos] == ':') ++pos;
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            if (!read_digits(s, pos, 2, om)) return std::nullopt;
        }
        offset_minutes = oh * 60 + om;
        if (c == '-') offset_minutes = -offset_minutes;
    } else {
        return std::nullopt;
    }
    if (pos != s.size()) return std::nullopt;

    if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;
    if (hour > 23 || minute > 59 || second > 60) return std::nullopt;

    return from_civil(year, month, day, hour, minute, second, millis, offset_minutes);
}

} // namespace smapi
