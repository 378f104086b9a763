#ifndef DNSOBS_MODEL_HPP
#define DNSOBS_MODEL_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dnsobs/time.hpp"

namespace dnsobs {

/// A normalized DNS name: lowercase, dot-separated, no trailing dot, no empty
/// labels. Construct through normalize_domain.
struct DomainName {
  std::string value;

  DomainName() = default;
  explicit DomainName(std::string v) : value(std::move(v)) {}

  friend auto operator<=>(const DomainName&, const DomainName&) = default;
};

/// Lowercases, strips one trailing dot, validates label structure.
/// Throws Errc::empty_input, Errc::whitespace_in_domain or Errc::empty_label.
DomainName normalize_domain(std::string_view raw);

/// One observed resolution event at the resolver: who asked what, when.
/// Users are opaque pseudonyms; no addresses are handled anywhere.
struct DnsQuery {
  Instant time;
  std::string user;
  DomainName domain;
};

/// Fixed-duration time slices anchored at a global origin (epoch index 0).
struct EpochSpec {
  std::int64_t duration_seconds = 86400;
  Instant origin;

  std::int64_t index_of(Instant t) const { return (t - origin) / duration_seconds; }
  Instant epoch_start(std::int64_t index) const { return origin + index * duration_seconds; }

  friend bool operator==(const EpochSpec&, const EpochSpec&) = default;
};

using DomainCounts = std::map<DomainName, std::uint64_t>;

std::uint64_t total_count(const DomainCounts& counts);

struct SessionKey {
  std::string user;
  std::int64_t epoch_index = 0;

  friend auto operator<=>(const SessionKey&, const SessionKey&) = default;
};

/// One user's activity in one epoch, as a domain -> request-count multiset.
struct Session {
  std::string user;
  std::int64_t epoch_index = 0;
  DomainCounts counts;
};

/// All sessions of a query stream under one EpochSpec. At most one session per
/// (user, epoch); empty sessions are never stored.
class SessionStore {
 public:
  SessionStore() = default;
  explicit SessionStore(EpochSpec spec) : spec_(spec) {}

  const EpochSpec& epoch_spec() const { return spec_; }
  const std::map<SessionKey, DomainCounts>& sessions() const { return sessions_; }
  bool empty() const { return sessions_.empty(); }
  std::size_t session_count() const { return sessions_.size(); }

  /// Adds count to (user, epoch, domain). count must be >= 1.
  void add(const std::string& user, std::int64_t epoch_index, const DomainName& domain, std::uint64_t count = 1);

  /// Inserts a whole session; throws Errc::bad_format on duplicate key or empty counts.
  void insert_session(SessionKey key, DomainCounts counts);

  std::uint64_t total_requests() const;
  std::vector<std::string> users() const;
  std::vector<std::int64_t> epochs() const;

  /// Sessions of one epoch as user -> counts (empty map if epoch absent).
  std::map<std::string, const DomainCounts*> epoch_sessions(std::int64_t epoch_index) const;

  /// One-pass index of the whole store: epoch -> user -> counts.
  std::map<std::int64_t, std::map<std::string, const DomainCounts*>> grouped_by_epoch() const;

  friend bool operator==(const SessionStore&, const SessionStore&) = default;

 private:
  EpochSpec spec_;
  std::map<SessionKey, DomainCounts> sessions_;
};

/// Buckets queries into per-user per-epoch sessions. Every query lands in
/// exactly one session; a query before spec.origin throws Errc::out_of_range.
SessionStore sessionize(std::span<const DnsQuery> queries, const EpochSpec& spec);

}  // namespace dnsobs

template <>
struct std::hash<dnsobs::DomainName> {
  std::size_t operator()(const dnsobs::DomainName& d) const noexcept {
    return std::hash<std::string>{}(d.value);
  }
};

#endif
