#ifndef DNSOBS_PUSHDNS_HPP
#define DNSOBS_PUSHDNS_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dnsobs/model.hpp"

namespace dnsobs {

/// Domains ordered by total request count, descending; count ties broken by
/// lexicographic domain order.
struct PopularityRanking {
  std::vector<std::pair<DomainName, std::uint64_t>> entries;
};

/// Aggregates over all users and epochs. Throws Errc::empty_store.
PopularityRanking rank_domains(const SessionStore& store);

struct CoverageResult {
  double aggregate = 0.0;      // covered requests / all requests
  double per_user_mean = 0.0;  // mean over users of each user's covered fraction
};

/// Fraction of requests answerable from the top-k of the ranking. k beyond the
/// ranking saturates at full coverage; k = 0 is rejected.
CoverageResult coverage(const PopularityRanking& ranking, const SessionStore& store, std::size_t k);

std::vector<std::pair<std::size_t, CoverageResult>> coverage_curve(const PopularityRanking& ranking,
                                                                   const SessionStore& store,
                                                                   std::span<const std::size_t> ks);

/// Steady-state push traffic model: every subscriber receives each of the k
/// records again whenever it changes.
struct PushConfig {
  std::uint64_t top_k = 10000;
  std::uint64_t record_size_bytes = 80;
  double mean_change_interval_seconds = 1000.0;
};

/// Bytes per second per subscriber: k * record_size / change_interval.
double bandwidth_estimate(const PushConfig& config);

/// Mean resolver round trip observed over the anonymizing cascade; reported
/// alongside push estimates for context, never simulated.
inline constexpr double kMixLatencyReferenceSeconds = 0.17;

}  // namespace dnsobs

#endif
