#include "dnsobs/pushdns.hpp"

#include <algorithm>
#include <unordered_set>

#include "dnsobs/errors.hpp"

namespace dnsobs {

PopularityRanking rank_domains(const SessionStore& store) {
  if (store.empty()) fail(Errc::empty_store, "cannot rank an empty store");

  std::map<DomainName, std::uint64_t> totals;
  for (const auto& [key, counts] : store.sessions())
    for (const auto& [domain, n] : counts) totals[domain] += n;

  PopularityRanking ranking;
  ranking.entries.assign(totals.begin(), totals.end());
  // totals is domain-ascending, so a stable sort by count keeps ties lexicographic
  std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return ranking;
}

CoverageResult coverage(const PopularityRanking& ranking, const SessionStore& store, std::size_t k) {
  if (k == 0) fail(Errc::invalid_argument, "k must be >= 1");

  std::unordered_set<DomainName> top;
  top.reserve(std::min(k, ranking.entries.size()) * 2);
  for (std::size_t i = 0; i < ranking.entries.size() && i < k; ++i) top.insert(ranking.entries[i].first);

  std::uint64_t covered = 0, total = 0;
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> per_user;  // user -> (covered, total)
  for (const auto& [key, counts] : store.sessions()) {
    auto& tally = per_user[key.user];
    for (const auto& [domain, n] : counts) {
      total += n;
      tally.second += n;
      if (top.contains(domain)) {
        covered += n;
        tally.first += n;
      }
    }
  }

  CoverageResult result;
  result.aggregate = total == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(total);
  double fraction_sum = 0.0;
  for (const auto& [user, tally] : per_user)
    fraction_sum += static_cast<double>(tally.first) / static_cast<double>(tally.second);
  result.per_user_mean = per_user.empty() ? 0.0 : fraction_sum / static_cast<double>(per_user.size());
  return result;
}

std::vector<std::pair<std::size_t, CoverageResult>> coverage_curve(const PopularityRanking& ranking,
                                                                   const SessionStore& store,
                                                                   std::span<const std::size_t> ks) {
  if (ks.empty()) fail(Errc::invalid_argument, "no k values given");
  std::vector<std::pair<std::size_t, CoverageResult>> curve;
  curve.reserve(ks.size());
  for (std::size_t k : ks) curve.emplace_back(k, coverage(ranking, store, k));
  return curve;
}

double bandwidth_estimate(const PushConfig& config) {
  if (config.top_k == 0 || config.record_size_bytes == 0 || config.mean_change_interval_seconds <= 0.0)
    fail(Errc::invalid_argument, "push config fields must be positive");
  return static_cast<double>(config.top_k) * static_cast<double>(config.record_size_bytes) /
         config.mean_change_interval_seconds;
}

}  // namespace dnsobs
