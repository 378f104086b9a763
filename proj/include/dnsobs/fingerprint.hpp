#ifndef DNSOBS_FINGERPRINT_HPP
#define DNSOBS_FINGERPRINT_HPP

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dnsobs/model.hpp"

namespace dnsobs {

/// The set of domains one web page resolves when loaded. Order, timing and
/// multiplicity are deliberately not represented.
struct AccessPattern {
  std::string page_id;
  std::set<DomainName> domains;
};

/// Collapses a single page-load trace to its access pattern.
/// Throws Errc::empty_trace on an empty trace.
AccessPattern extract_pattern(std::string page_id, std::span<const DnsQuery> trace);

/// Immutable-after-build pattern database with an inverted domain index, so a
/// lookup touches only the pages that share a domain with the observation.
class PatternDB {
 public:
  PatternDB() = default;
  static PatternDB from_patterns(std::vector<AccessPattern> patterns);

  void add(AccessPattern pattern);  // throws Errc::duplicate_page / invalid_argument

  std::size_t size() const { return patterns_.size(); }
  bool empty() const { return patterns_.empty(); }
  const std::vector<AccessPattern>& patterns() const { return patterns_; }
  const AccessPattern& pattern(std::size_t index) const { return patterns_[index]; }
  const AccessPattern* find(const std::string& page_id) const;

  /// All distinct domains across all patterns, sorted.
  std::vector<DomainName> domain_universe() const;

  /// Complete-pattern matching: page_ids whose whole pattern is contained in
  /// observed, sorted. Partially covered patterns never match.
  std::vector<std::string> match(const std::set<DomainName>& observed) const;

 private:
  std::vector<AccessPattern> patterns_;
  std::map<std::string, std::size_t> index_by_id_;
  std::unordered_map<DomainName, std::vector<std::size_t>> domain_index_;
};

struct UniquenessReport {
  std::size_t unique_count = 0;
  std::size_t total = 0;
  double fraction_unique = 0.0;
  std::vector<std::vector<std::string>> duplicate_groups;  // classes of identical patterns, size >= 2
};

/// Counts patterns whose domain set no other pattern duplicates.
/// Throws Errc::empty_db on an empty database.
UniquenessReport uniqueness_report(const PatternDB& db);

struct DetectionEvent {
  Instant time;
  std::string user;
  std::vector<std::string> page_ids;  // sorted; empty when a match ages out
};

/// Slides a per-user window of window_seconds over the stream and emits an
/// event whenever that user's matched page set changes. Queries must be
/// time-ordered per user (Errc::unsorted_input otherwise).
std::vector<DetectionEvent> detect_stream(const PatternDB& db, std::span<const DnsQuery> queries,
                                          std::int64_t window_seconds);

inline constexpr std::int64_t kDefaultDetectWindowSeconds = 30;

}  // namespace dnsobs

#endif
