#ifndef DNSOBS_RANGEQUERY_HPP
#define DNSOBS_RANGEQUERY_HPP

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dnsobs/fingerprint.hpp"

namespace dnsobs {

enum class DummyStrategy {
  random,            // n individually random dummy domains
  pattern_complete,  // n whole decoy access patterns
};

const char* dummy_strategy_name(DummyStrategy s);
DummyStrategy parse_dummy_strategy(const std::string& name);  // throws Errc::invalid_argument

/// What the resolver sees for one defended page load: the true pattern plus
/// dummy cover. true_page is kept for evaluation only.
struct RangeQueryObservation {
  std::set<DomainName> observed;
  std::string true_page;
  DummyStrategy strategy = DummyStrategy::random;
  std::size_t n_dummies = 0;  // domains for random, decoy patterns for pattern_complete
};

/// Adds n distinct dummy domains sampled uniformly from pool minus the true
/// pattern. Throws Errc::pool_exhausted if the pool cannot supply n.
RangeQueryObservation random_dummies(const AccessPattern& pattern, std::size_t n,
                                     std::span<const DomainName> pool, std::uint64_t seed);

/// Adds n whole decoy patterns sampled uniformly from the database (the true
/// page excluded). Throws Errc::not_enough_patterns if the database is too small.
RangeQueryObservation pattern_dummies(const AccessPattern& pattern, std::size_t n_patterns, const PatternDB& db,
                                      std::uint64_t seed);

struct AttackResult {
  std::vector<std::string> candidates;  // pages whose full pattern is contained in the observation
  bool identified = false;              // candidates == {true_page}
  std::size_t candidate_count = 0;
};

/// Complete-pattern filtering of the observation against the database.
AttackResult range_attack(const PatternDB& db, const RangeQueryObservation& observation);

struct BenchmarkReport {
  DummyStrategy strategy = DummyStrategy::random;
  std::size_t n_dummies = 0;
  std::size_t trials = 0;
  double identification_rate = 0.0;
  double mean_candidate_count = 0.0;
  std::uint64_t seed = 0;
};

/// Repeats defend-then-attack over uniformly drawn true pages. Per-trial seeds
/// derive from the master seed, so results are independent of thread count.
BenchmarkReport defense_benchmark(const PatternDB& db, DummyStrategy strategy, std::size_t n_dummies,
                                  std::size_t trials, std::span<const DomainName> pool, std::uint64_t seed,
                                  int threads = 1);

}  // namespace dnsobs

#endif
