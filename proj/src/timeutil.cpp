#include "locksim/timeutil.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace locksim::timeutil {

std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);            // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;  // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;           // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
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

namespace {

bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len, unsigned& out) {
    if (pos + len > s.size()) return false;
    unsigned v = 0;
    for (std::size_t i = 0; i < len; ++i) {
        const char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + static_cast<unsigned>(c - '0');
    }
    out = v;
    return true;
}

} // namespace

double parse_iso8601(std::string_view s) {
    const auto fail = [&] { throw std::invalid_argument("bad ISO-8601 timestamp: " + std::string(s)); };

    bool neg_year = false;
    std::size_t p = 0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg_year = s[0] == '-';
        p = 1;
    }
    unsigned y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (!parse_fixed_uint(s, p, 4, y)) fail();
    p += 4;
    if (p >= s.size() || s[p] != '-') fail();
    if (!parse_fixed_uint(s, ++p, 2, mo)) fail();
    p += 2;
    if (p >= s.size() || s[p] != '-') fail();
    if (!parse_fixed_uint(s, ++p, 2, d)) fail();
    p += 2;
    if (mo < 1 || mo > 12 || d < 1 || d > 31) fail();

    double frac = 0.0;
    if (p < s.size()) {
        if (s[p] != 'T' && s[p] != ' ') fail();
        if (!parse_fixed_uint(s, ++p, 2, h)) fail();
        p += 2;
        if (p >= s.size() || s[p] != ':') fail();
        if (!parse_fixed_uint(s, ++p, 2, mi)) fail();
        p += 2;
        if (p < s.size() && s[p] == ':') {
            if (!parse_fixed_uint(s, ++p, 2, sec)) fail();
            p += 2;
            if (p < s.size() && s[p] == '.') {
                ++p;
                double scale = 0.1;
                bool any = false;
                while (p < s.size() && s[p] >= '0' && s[p] <= '9') {
                    frac += scale * (s[p] - '0');
                    scale *= 0.1;
                    ++p;
                    any = true;
                }
                if (!any) fail();
            }
        }
        if (h > 23 || mi > 59 || sec > 60) fail();
    }

    std::int64_t offset = 0;
    if (p < s.size()) {
        if (s[p] == 'Z') {
            ++p;
        } else if (s[p] == '+' || s[p] == '-') {
            const bool neg = s[p] == '-';
            unsigned oh = 0, om = 0;
            if (!parse_fixed_uint(s, ++p, 2, oh)) fail();
            p += 2;
            if (p < s.size() && s[p] == ':') ++p;
            if (p < s.size()) {
                if (!parse_fixed_uint(s, p, 2, om)) fail();
                p += 2;
            }
            offset = static_cast<std::int64_t>(oh) * 3600 + om * 60;
            if (neg) offset = -offset;
        } else {
            fail();
        }
    }
    if (p != s.size()) fail();

    const std::int64_t days = days_from_civil(neg_year ? -static_cast<int>(y) : static_cast<int>(y), mo, d);
    const std::int64_t whole = days * 86400 + h * 3600 + mi * 60 + sec - offset;
    return static_cast<double>(whole) + frac;
}

namespace {

std::string format_with_suffix(double unix_seconds, std::int64_t shift, const char* suffix) {
    const double shifted = unix_seconds + static_cast<double>(shift);
    const std::int64_t whole = static_cast<std::int64_t>(std::floor(shifted));
    std::int64_t days = whole / 86400;
    std::int64_t rem = whole % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    int y;
    unsigned mo, d;
    civil_from_days(days, y, mo, d);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld%s", y, mo, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60), suffix);
    return buf;
}

} // namespace

std::string format_iso8601_utc(double unix_seconds) {
    return format_with_suffix(unix_seconds, 0, "Z");
}

std::string format_bst(double unix_seconds) {
    return format_with_suffix(unix_seconds, 3600, " BST");
}

} // namespace locksim::timeutil
