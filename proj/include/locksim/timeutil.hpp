#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace locksim::timeutil {

// Proleptic-Gregorian day count relative to 1970-01-01 (Hinnant's algorithm).
std::int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(std::int64_t days, int& year, unsigned& month, unsigned& day);

// Parses "YYYY-MM-DDTHH:MM:SS" with optional fractional seconds and an
// optional "Z" or "+HH:MM"/"-HH:MM" offset. A missing offset means UTC.
// Throws std::invalid_argument on malformed input.
double parse_iso8601(std::string_view text);

// "YYYY-MM-DDTHH:MM:SSZ"; the input is truncated toward negative infinity
// to whole seconds.
std::string format_iso8601_utc(double unix_seconds);

// Same instant rendered at fixed UTC+1 ("YYYY-MM-DDTHH:MM:SS BST").
// British Summer Time is applied unconditionally; callers choose when a
// BST rendering makes sense.
std::string format_bst(double unix_seconds);

} // namespace locksim::timeutil
