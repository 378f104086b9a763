#include "dnsobs/rangequery.hpp"

#include <algorithm>

#include "dnsobs/errors.hpp"
#include "dnsobs/parallel.hpp"
#include "dnsobs/rng.hpp"

namespace dnsobs {

const char* dummy_strategy_name(DummyStrategy s) {
  return s == DummyStrategy::random ? "random" : "pattern_complete";
}

DummyStrategy parse_dummy_strategy(const std::string& name) {
  if (name == "random") return DummyStrategy::random;
  if (name == "pattern_complete") return DummyStrategy::pattern_complete;
  fail(Errc::invalid_argument, "unknown dummy strategy \"" + name + "\"");
}

RangeQueryObservation random_dummies(const AccessPattern& pattern, std::size_t n,
                                     std::span<const DomainName> pool, std::uint64_t seed) {
  RangeQueryObservation obs;
  obs.observed = pattern.domains;
  obs.true_page = pattern.page_id;
  obs.strategy = DummyStrategy::random;
  obs.n_dummies = n;
  if (n == 0) return obs;

  std::vector<DomainName> eligible;
  eligible.reserve(pool.size());
  for (const auto& d : pool)
    if (!pattern.domains.contains(d)) eligible.push_back(d);
  std::sort(eligible.begin(), eligible.end());
  eligible.erase(std::unique(eligible.begin(), eligible.end()), eligible.end());
  if (eligible.size() < n)
    fail(Errc::pool_exhausted, "pool has " + std::to_string(eligible.size()) + " usable domains, need " +
                                   std::to_string(n));

  DetRng rng(seed);
  for (std::size_t idx : rng.sample_distinct(eligible.size(), n)) obs.observed.insert(eligible[idx]);
  return obs;
}

RangeQueryObservation pattern_dummies(const AccessPattern& pattern, std::size_t n_patterns, const PatternDB& db,
                                      std::uint64_t seed) {
  RangeQueryObservation obs;
  obs.observed = pattern.domains;
  obs.true_page = pattern.page_id;
  obs.strategy = DummyStrategy::pattern_complete;
  obs.n_dummies = n_patterns;
  if (n_patterns == 0) return obs;

  std::vector<std::size_t> eligible;
  eligible.reserve(db.size());
  for (std::size_t i = 0; i < db.size(); ++i)
    if (db.pattern(i).page_id != pattern.page_id) eligible.push_back(i);
  if (eligible.size() < n_patterns)
    fail(Errc::not_enough_patterns, "database offers " + std::to_string(eligible.size()) +
                                        " decoy patterns, need " + std::to_string(n_patterns));

  DetRng rng(seed);
  for (std::size_t pick : rng.sample_distinct(eligible.size(), n_patterns)) {
    const auto& decoy = db.pattern(eligible[pick]).domains;
    obs.observed.insert(decoy.begin(), decoy.end());
  }
  return obs;
}

AttackResult range_attack(const PatternDB& db, const RangeQueryObservation& observation) {
  AttackResult result;
  result.candidates = db.match(observation.observed);
  result.candidate_count = result.candidates.size();
  result.identified = result.candidates.size() == 1 && result.candidates.front() == observation.true_page;
  return result;
}

BenchmarkReport defense_benchmark(const PatternDB& db, DummyStrategy strategy, std::size_t n_dummies,
                                  std::size_t trials, std::span<const DomainName> pool, std::uint64_t seed,
                                  int threads) {
  if (trials == 0) fail(Errc::invalid_argument, "trials must be >= 1");
  if (db.empty()) fail(Errc::empty_db, "pattern database is empty");

  std::vector<std::uint8_t> identified(trials, 0);
  std::vector<std::uint64_t> candidate_counts(trials, 0);
  parallel_for(trials, threads, [&](std::size_t trial) {
    DetRng rng(derive_seed(seed, trial));
    const AccessPattern& truth = db.pattern(static_cast<std::size_t>(rng.below(db.size())));
    const std::uint64_t observation_seed = rng.next();
    const RangeQueryObservation obs = strategy == DummyStrategy::random
                                          ? random_dummies(truth, n_dummies, pool, observation_seed)
                                          : pattern_dummies(truth, n_dummies, db, observation_seed);
    const AttackResult attack = range_attack(db, obs);
    identified[trial] = attack.identified ? 1 : 0;
    candidate_counts[trial] = attack.candidate_count;
  });

  BenchmarkReport report;
  report.strategy = strategy;
  report.n_dummies = n_dummies;
  report.trials = trials;
  report.seed = seed;
  std::uint64_t hits = 0, candidates = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    hits += identified[i];
    candidates += candidate_counts[i];
  }
  report.identification_rate = static_cast<double>(hits) / static_cast<double>(trials);
  report.mean_candidate_count = static_cast<double>(candidates) / static_cast<double>(trials);
  return report;
}

}  // namespace dnsobs
