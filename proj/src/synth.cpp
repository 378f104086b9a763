#include "dnsobs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "dnsobs/errors.hpp"

namespace dnsobs {

ZipfSampler::ZipfSampler(std::size_t n, double exponent) {
  if (n == 0) fail(Errc::invalid_argument, "sampler needs at least one rank");
  if (exponent < 0.0) fail(Errc::invalid_argument, "exponent must be non-negative");
  cumulative_.resize(n);
  double running = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    running += std::pow(static_cast<double>(r + 1), -exponent);
    cumulative_[r] = running;
  }
}

std::size_t ZipfSampler::pick(DetRng& rng) const {
  const double u = rng.unit() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
}

DomainName synth_domain(std::size_t pool_index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "d%06zu.st", pool_index);
  return DomainName{buf};
}

std::string synth_page_id(std::size_t page_index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%05zu", page_index);
  return buf;
}

void PopulationConfig::validate() const {
  if (rng_algorithm != kRngAlgorithm)
    fail(Errc::bad_config, "rng_algorithm must be \"" + std::string(kRngAlgorithm) + "\"");
  if (num_users == 0 || num_epochs == 0 || global_pool_size == 0)
    fail(Errc::bad_config, "num_users, num_epochs and global_pool_size must be >= 1");
  if (profile_size_min == 0 || profile_size_min > profile_size_max)
    fail(Errc::bad_config, "profile_size_range must satisfy 1 <= min <= max");
  if (profile_size_max > global_pool_size) fail(Errc::pool_exhausted, "profile size exceeds the global pool");
  if (disjoint_profiles && num_users * profile_size_max > global_pool_size)
    fail(Errc::pool_exhausted, "disjoint profiles need num_users * profile_size_max <= pool size");
  if (zipf_exponent < 0.0) fail(Errc::bad_config, "zipf_exponent must be non-negative");
  if (daily_volume_mean == 0) fail(Errc::bad_config, "daily_volume mean must be >= 1");
  if (stability < 0.0 || stability > 1.0) fail(Errc::bad_config, "stability must lie in [0, 1]");
  if (epoch_duration_seconds <= 0) fail(Errc::bad_config, "epoch duration must be positive");
}

namespace {

std::uint64_t draw_volume(DetRng& rng, std::uint64_t mean, std::uint64_t dispersion) {
  const std::uint64_t lo = mean > dispersion ? mean - dispersion : 1;
  const std::uint64_t hi = mean + dispersion;
  return lo + rng.below(hi - lo + 1);
}

}  // namespace

SyntheticPopulation generate_population(const PopulationConfig& config) {
  config.validate();

  SyntheticPopulation population;
  population.profiles.reserve(config.num_users);

  // Profile assignment. Disjoint mode slices the pool into per-user blocks;
  // otherwise each user samples their interest set from the whole pool.
  std::size_t disjoint_offset = 0;
  for (std::size_t u = 0; u < config.num_users; ++u) {
    DetRng rng(derive_seed(config.seed, u, 0xA11CE));
    const std::size_t span = config.profile_size_max - config.profile_size_min + 1;
    const std::size_t size = config.profile_size_min + static_cast<std::size_t>(rng.below(span));

    UserBehaviorProfile profile;
    char name[32];
    std::snprintf(name, sizeof name, "u%05zu", u);
    profile.user = name;
    profile.zipf_exponent = config.zipf_exponent;
    profile.daily_volume_mean = config.daily_volume_mean;
    profile.daily_volume_dispersion = config.daily_volume_dispersion;
    profile.stability = config.stability;
    profile.personal_domains.reserve(size);
    if (config.disjoint_profiles) {
      for (std::size_t i = 0; i < size; ++i) profile.personal_domains.push_back(synth_domain(disjoint_offset + i));
      disjoint_offset += size;
    } else {
      for (std::size_t idx : rng.sample_distinct(config.global_pool_size, size))
        profile.personal_domains.push_back(synth_domain(idx));
    }
    population.profiles.push_back(std::move(profile));
  }

  // Traffic. Each (user, epoch) stream is seeded independently.
  population.store = SessionStore(EpochSpec{config.epoch_duration_seconds, config.origin});
  for (std::size_t u = 0; u < config.num_users; ++u) {
    const auto& profile = population.profiles[u];
    const ZipfSampler interest(profile.personal_domains.size(), profile.zipf_exponent);
    for (std::size_t e = 0; e < config.num_epochs; ++e) {
      DetRng rng(derive_seed(config.seed, u, e + 1));
      const std::uint64_t volume = draw_volume(rng, profile.daily_volume_mean, profile.daily_volume_dispersion);
      const Instant epoch_start = config.origin + static_cast<std::int64_t>(e) * config.epoch_duration_seconds;
      for (std::uint64_t i = 0; i < volume; ++i) {
        const DomainName domain = rng.bernoulli(profile.stability)
                                      ? profile.personal_domains[interest.pick(rng)]
                                      : synth_domain(static_cast<std::size_t>(rng.below(config.global_pool_size)));
        const Instant t = epoch_start + static_cast<std::int64_t>(rng.below(
                              static_cast<std::uint64_t>(config.epoch_duration_seconds)));
        population.queries.push_back(DnsQuery{t, profile.user, domain});
      }
    }
  }

  std::sort(population.queries.begin(), population.queries.end(), [](const DnsQuery& a, const DnsQuery& b) {
    return std::tie(a.time.seconds, a.user, a.domain.value) < std::tie(b.time.seconds, b.user, b.domain.value);
  });
  for (const auto& q : population.queries)
    population.store.add(q.user, population.store.epoch_spec().index_of(q.time), q.domain);
  return population;
}

void PatternDbConfig::validate() const {
  if (rng_algorithm != kRngAlgorithm)
    fail(Errc::bad_config, "rng_algorithm must be \"" + std::string(kRngAlgorithm) + "\"");
  if (num_pages == 0) fail(Errc::bad_config, "num_pages must be >= 1");
  if (pattern_size_min == 0 || pattern_size_min > pattern_size_max)
    fail(Errc::bad_config, "pattern_size_range must satisfy 1 <= min <= max");
  if (overlap_rate < 0.0 || overlap_rate > 1.0) fail(Errc::bad_config, "overlap_rate must lie in [0, 1]");
  if (pool_size < pattern_size_max) fail(Errc::pool_exhausted, "pool smaller than the largest pattern");
}

PatternDB generate_pattern_db(const PatternDbConfig& config) {
  config.validate();

  DetRng rng(derive_seed(config.seed, 0xDB));
  std::vector<std::size_t> pool(config.pool_size);
  std::iota(pool.begin(), pool.end(), 0);
  rng.shuffle(pool);

  std::vector<std::size_t> sizes(config.num_pages);
  const std::size_t span = config.pattern_size_max - config.pattern_size_min + 1;
  for (auto& s : sizes) s = config.pattern_size_min + static_cast<std::size_t>(rng.below(span));

  std::vector<AccessPattern> patterns;
  patterns.reserve(config.num_pages);

  if (config.overlap_rate == 0.0) {
    // Disjoint partition of the shuffled pool, one contiguous block per page.
    const std::size_t needed = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
    if (needed > config.pool_size)
      fail(Errc::pool_exhausted, "disjoint patterns need " + std::to_string(needed) + " pool domains, have " +
                                     std::to_string(config.pool_size));
    std::size_t offset = 0;
    for (std::size_t p = 0; p < config.num_pages; ++p) {
      AccessPattern pattern{synth_page_id(p), {}};
      for (std::size_t i = 0; i < sizes[p]; ++i) pattern.domains.insert(synth_domain(pool[offset + i]));
      offset += sizes[p];
      patterns.push_back(std::move(pattern));
    }
  } else {
    // Every pattern takes a prefix of the shared head (its length set by the
    // overlap rate) and draws the rest from the remainder of the pool.
    const std::size_t head = config.pattern_size_max;
    const std::size_t tail = config.pool_size - head;
    for (std::size_t p = 0; p < config.num_pages; ++p) {
      const auto shared = std::min<std::size_t>(
          sizes[p], static_cast<std::size_t>(std::llround(config.overlap_rate * static_cast<double>(sizes[p]))));
      const std::size_t rest = sizes[p] - shared;
      if (rest > tail)
        fail(Errc::pool_exhausted, "pool too small for " + std::to_string(rest) + " non-shared domains");
      AccessPattern pattern{synth_page_id(p), {}};
      for (std::size_t i = 0; i < shared; ++i) pattern.domains.insert(synth_domain(pool[i]));
      for (std::size_t idx : rng.sample_distinct(tail, rest)) pattern.domains.insert(synth_domain(pool[head + idx]));
      patterns.push_back(std::move(pattern));
    }
  }
  return PatternDB::from_patterns(std::move(patterns));
}

SessionStore generate_zipf_store(std::size_t num_domains, std::uint64_t num_requests, double exponent,
                                 std::size_t num_users, std::uint64_t seed) {
  if (num_domains == 0 || num_requests == 0 || num_users == 0)
    fail(Errc::invalid_argument, "domains, requests and users must be >= 1");

  const ZipfSampler sampler(num_domains, exponent);
  DetRng rng(derive_seed(seed, 0x21BF));

  // rank -> per-user counts, aggregated directly; the request stream itself is
  // never materialized.
  std::vector<std::vector<std::uint64_t>> counts(num_users, std::vector<std::uint64_t>(num_domains, 0));
  for (std::uint64_t i = 0; i < num_requests; ++i)
    counts[static_cast<std::size_t>(i % num_users)][sampler.pick(rng)] += 1;

  SessionStore store(EpochSpec{86400, Instant{0}});
  for (std::size_t u = 0; u < num_users; ++u) {
    char name[32];
    std::snprintf(name, sizeof name, "u%05zu", u);
    DomainCounts session;
    for (std::size_t d = 0; d < num_domains; ++d)
      if (counts[u][d] > 0) session.emplace(synth_domain(d), counts[u][d]);
    if (!session.empty()) store.insert_session(SessionKey{name, 0}, std::move(session));
  }
  return store;
}

}  // namespace dnsobs
