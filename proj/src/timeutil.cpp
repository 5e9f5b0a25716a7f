#include "sramlab/timeutil.hpp"

#include <cstdio>
#include <cstdlib>

#include "sramlab/errors.hpp"

namespace sramlab {

// Howard Hinnant's days_from_civil / civil_from_days (public domain).
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                         static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

namespace {

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

} // namespace

InstantMs civil_to_ms(const CivilDate& date, std::int64_t ms_of_day) {
    return days_from_civil(date.year, date.month, date.day) * 86400000LL + ms_of_day;
}

CivilDate add_months(CivilDate date, int count) {
    int zero_based = date.year * 12 + (date.month - 1) + count;
    date.year = zero_based / 12;
    date.month = zero_based % 12 + 1;
    if (date.month < 1) { // negative wrap
        date.month += 12;
        date.year -= 1;
    }
    return date;
}

std::string format_iso8601(InstantMs ms) {
    std::int64_t days = ms / 86400000LL;
    std::int64_t rem = ms % 86400000LL;
    if (rem < 0) {
        rem += 86400000LL;
        days -= 1;
    }
    int y, mo, d;
    civil_from_days(days, y, mo, d);
    const int hh = static_cast<int>(rem / 3600000);
    const int mi = static_cast<int>(rem / 60000 % 60);
    const int ss = static_cast<int>(rem / 1000 % 60);
    const int mil = static_cast<int>(rem % 1000);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", y, mo, d, hh, mi, ss, mil);
    return buf;
}

namespace {

int parse_digits(const std::string& s, std::size_t pos, std::size_t count) {
    int v = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        if (i >= s.size() || s[i] < '0' || s[i] > '9')
            throw ParseError("bad timestamp '" + s + "'");
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

} // namespace

InstantMs parse_iso8601(const std::string& text) {
    // YYYY-MM-DDTHH:MM:SS[.fff]Z
    if (text.size() < 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
        text[13] != ':' || text[16] != ':')
        throw ParseError("bad timestamp '" + text + "'");
    const int y = parse_digits(text, 0, 4);
    const int mo = parse_digits(text, 5, 2);
    const int d = parse_digits(text, 8, 2);
    const int hh = parse_digits(text, 11, 2);
    const int mi = parse_digits(text, 14, 2);
    const int ss = parse_digits(text, 17, 2);
    std::size_t pos = 19;
    int millis = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t digits = 0;
        int frac = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9' && digits < 3) {
            frac = frac * 10 + (text[pos] - '0');
            ++pos;
            ++digits;
        }
        if (digits == 0) throw ParseError("bad timestamp '" + text + "'");
        for (std::size_t i = digits; i < 3; ++i) frac *= 10;
        millis = frac;
    }
    if (pos + 1 != text.size() || text[pos] != 'Z')
        throw ParseError("bad timestamp '" + text + "' (UTC 'Z' required)");
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || hh > 23 || mi > 59 || ss > 59)
        throw ParseError("bad timestamp '" + text + "'");
    return civil_to_ms({y, mo, d},
                       (static_cast<std::int64_t>(hh) * 3600 + mi * 60 + ss) * 1000 + millis);
}

CivilDate parse_civil_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw ParseError("bad date '" + text + "' (expected YYYY-MM-DD)");
    CivilDate d;
    d.year = parse_digits(text, 0, 4);
    d.month = parse_digits(text, 5, 2);
    d.day = parse_digits(text, 8, 2);
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
        throw ParseError("bad date '" + text + "'");
    return d;
}

std::string format_civil_date(const CivilDate& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", date.year, date.month, date.day);
    return buf;
}

} // namespace sramlab
