#include "dnsobs/time.hpp"

#include <cstdio>

#include "dnsobs/errors.hpp"

namespace dnsobs {

namespace {

// Civil-date conversions after Howard Hinnant's chrono algorithms.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);             // [0, 399]
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;            // [0, 146096]
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool all_digits(std::string_view s) {
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return !s.empty();
}

unsigned to_uint(std::string_view s) {
  unsigned v = 0;
  for (char c : s) v = v * 10 + static_cast<unsigned>(c - '0');
  return v;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return lengths[m - 1];
}

}  // namespace

Instant parse_rfc3339(std::string_view text) {
  // YYYY-MM-DDThh:mm:ssZ, exactly 20 characters; 'T'/'Z' accepted in either case.
  if (text.size() != 20) fail(Errc::bad_timestamp, "expected YYYY-MM-DDThh:mm:ssZ, got \"" + std::string(text) + "\"");
  const char tsep = text[10];
  const char zone = text[19];
  if ((tsep != 'T' && tsep != 't') || (zone != 'Z' && zone != 'z') || text[4] != '-' || text[7] != '-' ||
      text[13] != ':' || text[16] != ':')
    fail(Errc::bad_timestamp, "malformed timestamp \"" + std::string(text) + "\"");

  const auto year_s = text.substr(0, 4), month_s = text.substr(5, 2), day_s = text.substr(8, 2);
  const auto hour_s = text.substr(11, 2), min_s = text.substr(14, 2), sec_s = text.substr(17, 2);
  for (auto part : {year_s, month_s, day_s, hour_s, min_s, sec_s})
    if (!all_digits(part)) fail(Errc::bad_timestamp, "non-digit in timestamp \"" + std::string(text) + "\"");

  const std::int64_t year = to_uint(year_s);
  const unsigned month = to_uint(month_s), day = to_uint(day_s);
  const unsigned hour = to_uint(hour_s), minute = to_uint(min_s), second = to_uint(sec_s);
  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) || hour > 23 || minute > 59 ||
      second > 60)
    fail(Errc::bad_timestamp, "out-of-range field in timestamp \"" + std::string(text) + "\"");

  const std::int64_t days = days_from_civil(year, month, day);
  return Instant{days * 86400 + hour * 3600 + minute * 60 + second};
}

std::string format_rfc3339(Instant t) {
  std::int64_t days = t.seconds / 86400;
  std::int64_t rem = t.seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  const unsigned hour = static_cast<unsigned>(rem / 3600);
  const unsigned minute = static_cast<unsigned>((rem / 60) % 60);
  const unsigned second = static_cast<unsigned>(rem % 60);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02u:%02u:%02uZ", static_cast<long long>(y), m, d, hour, minute,
                second);
  return std::string(buf);
}

Instant floor_to_utc_day(Instant t) {
  std::int64_t days = t.seconds / 86400;
  if (t.seconds % 86400 < 0) days -= 1;
  return Instant{days * 86400};
}

}  // namespace dnsobs
