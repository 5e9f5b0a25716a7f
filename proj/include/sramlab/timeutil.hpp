#pragma once

#include <cstdint>
#include <string>

namespace sramlab {

/// Simulated wall-clock instants are UTC milliseconds since the Unix epoch.
using InstantMs = std::int64_t;

struct CivilDate {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..31
};

/// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, int month, int day);

InstantMs civil_to_ms(const CivilDate& date, std::int64_t ms_of_day = 0);

/// date advanced by `count` calendar months; the day is kept as-is
/// (campaign anchors use day <= 28, so no clamping situation arises).
CivilDate add_months(CivilDate date, int count);

/// "2017-02-08T00:00:05.400Z" (always milliseconds, always Z).
std::string format_iso8601(InstantMs ms);

/// Accepts the format produced by format_iso8601, with optional
/// fractional seconds of 1-3 digits. Throws ParseError otherwise.
InstantMs parse_iso8601(const std::string& text);

/// Parses "YYYY-MM-DD". Throws ParseError otherwise.
CivilDate parse_civil_date(const std::string& text);

std::string format_civil_date(const CivilDate& date);

} // namespace sramlab
