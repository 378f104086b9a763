#ifndef DNSOBS_SYNTH_HPP
#define DNSOBS_SYNTH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dnsobs/fingerprint.hpp"
#include "dnsobs/model.hpp"
#include "dnsobs/rng.hpp"

namespace dnsobs {

/// Rank-weighted sampler: rank r in [0, n) drawn with probability
/// proportional to (r+1)^-exponent. exponent 0 degrades to uniform.
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double exponent);
  std::size_t pick(DetRng& rng) const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;
};

/// How one synthetic user behaves: a personal interest set visited with
/// rank-skewed frequencies, diluted by uniform noise from the global pool.
struct UserBehaviorProfile {
  std::string user;
  std::vector<DomainName> personal_domains;  // position = interest rank
  double zipf_exponent = 0.9;
  std::uint64_t daily_volume_mean = 300;
  std::uint64_t daily_volume_dispersion = 60;  // volume uniform in mean +/- dispersion
  double stability = 0.9;                      // chance a request follows the profile
};

struct PopulationConfig {
  std::size_t num_users = 100;
  std::size_t num_epochs = 10;
  std::size_t global_pool_size = 10000;
  std::size_t profile_size_min = 50;
  std::size_t profile_size_max = 200;
  double zipf_exponent = 0.9;
  std::uint64_t daily_volume_mean = 300;
  std::uint64_t daily_volume_dispersion = 60;
  double stability = 0.9;
  bool disjoint_profiles = false;  // partition the pool so interest sets never overlap
  std::int64_t epoch_duration_seconds = 86400;
  Instant origin{1425168000};  // 2015-03-01T00:00:00Z
  std::uint64_t seed = 1;
  std::string rng_algorithm = kRngAlgorithm;

  void validate() const;  // throws Errc::bad_config
};

struct SyntheticPopulation {
  std::vector<UserBehaviorProfile> profiles;
  SessionStore store;
  std::vector<DnsQuery> queries;  // the same traffic as a raw stream, time-ordered
};

/// Draws every user's profile and per-epoch traffic. Fully determined by the
/// config; per-user per-epoch seeds derive from config.seed.
SyntheticPopulation generate_population(const PopulationConfig& config);

struct PatternDbConfig {
  std::size_t num_pages = 500;
  std::size_t pattern_size_min = 10;
  std::size_t pattern_size_max = 20;
  std::size_t pool_size = 5000;
  /// Fraction of each pattern drawn from a shared head of the pool. 0 switches
  /// to disjoint pool partitions; 1 with equal sizes yields identical patterns.
  double overlap_rate = 0.3;
  std::uint64_t seed = 1;
  std::string rng_algorithm = kRngAlgorithm;

  void validate() const;
};

PatternDB generate_pattern_db(const PatternDbConfig& config);

/// Single-epoch store of i.i.d. rank-skewed traffic, requests spread
/// round-robin over num_users pseudonyms. Used for popularity analyses.
SessionStore generate_zipf_store(std::size_t num_domains, std::uint64_t num_requests, double exponent,
                                 std::size_t num_users, std::uint64_t seed);

/// Canonical synthetic names: pool index -> "d<index>.st", page index -> "p<index>".
DomainName synth_domain(std::size_t pool_index);
std::string synth_page_id(std::size_t page_index);

}  // namespace dnsobs

#endif
