#ifndef DNSOBS_TIME_HPP
#define DNSOBS_TIME_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace dnsobs {

/// A UTC instant with second resolution, stored as seconds since the Unix epoch.
struct Instant {
  std::int64_t seconds = 0;

  friend auto operator<=>(const Instant&, const Instant&) = default;
};

inline Instant operator+(Instant t, std::int64_t s) { return Instant{t.seconds + s}; }
inline std::int64_t operator-(Instant a, Instant b) { return a.seconds - b.seconds; }

/// Parses "YYYY-MM-DDThh:mm:ssZ" (RFC 3339, UTC only). Throws Errc::bad_timestamp.
Instant parse_rfc3339(std::string_view text);

std::string format_rfc3339(Instant t);

/// Largest midnight-UTC instant not after t.
Instant floor_to_utc_day(Instant t);

}  // namespace dnsobs

#endif
