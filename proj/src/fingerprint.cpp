#include "dnsobs/fingerprint.hpp"

#include <algorithm>
#include <deque>

#include "dnsobs/errors.hpp"

namespace dnsobs {

AccessPattern extract_pattern(std::string page_id, std::span<const DnsQuery> trace) {
  if (page_id.empty()) fail(Errc::invalid_argument, "empty page id");
  if (trace.empty()) fail(Errc::empty_trace, "no queries in trace for page \"" + page_id + "\"");
  AccessPattern pattern{std::move(page_id), {}};
  for (const auto& q : trace) pattern.domains.insert(q.domain);
  return pattern;
}

PatternDB PatternDB::from_patterns(std::vector<AccessPattern> patterns) {
  PatternDB db;
  for (auto& p : patterns) db.add(std::move(p));
  return db;
}

void PatternDB::add(AccessPattern pattern) {
  if (pattern.page_id.empty()) fail(Errc::invalid_argument, "empty page id");
  if (pattern.domains.empty()) fail(Errc::invalid_argument, "pattern \"" + pattern.page_id + "\" has no domains");
  if (index_by_id_.contains(pattern.page_id)) fail(Errc::duplicate_page, "page \"" + pattern.page_id + "\"");
  const std::size_t idx = patterns_.size();
  index_by_id_.emplace(pattern.page_id, idx);
  for (const auto& d : pattern.domains) domain_index_[d].push_back(idx);
  patterns_.push_back(std::move(pattern));
}

const AccessPattern* PatternDB::find(const std::string& page_id) const {
  auto it = index_by_id_.find(page_id);
  return it == index_by_id_.end() ? nullptr : &patterns_[it->second];
}

std::vector<DomainName> PatternDB::domain_universe() const {
  std::set<DomainName> all;
  for (const auto& p : patterns_) all.insert(p.domains.begin(), p.domains.end());
  return {all.begin(), all.end()};
}

std::vector<std::string> PatternDB::match(const std::set<DomainName>& observed) const {
  std::vector<bool> seen(patterns_.size(), false);
  std::vector<std::size_t> candidates;
  for (const auto& d : observed) {
    auto it = domain_index_.find(d);
    if (it == domain_index_.end()) continue;
    for (std::size_t idx : it->second) {
      if (!seen[idx]) {
        seen[idx] = true;
        candidates.push_back(idx);
      }
    }
  }
  std::vector<std::string> hits;
  for (std::size_t idx : candidates) {
    const auto& domains = patterns_[idx].domains;
    if (std::includes(observed.begin(), observed.end(), domains.begin(), domains.end()))
      hits.push_back(patterns_[idx].page_id);
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

UniquenessReport uniqueness_report(const PatternDB& db) {
  if (db.empty()) fail(Errc::empty_db, "pattern database is empty");

  // Group pages by identical domain set.
  std::map<std::vector<DomainName>, std::vector<std::string>> groups;
  for (const auto& p : db.patterns()) {
    std::vector<DomainName> key(p.domains.begin(), p.domains.end());
    groups[std::move(key)].push_back(p.page_id);
  }

  UniquenessReport report;
  report.total = db.size();
  for (auto& [key, pages] : groups) {
    if (pages.size() == 1) {
      ++report.unique_count;
    } else {
      std::sort(pages.begin(), pages.end());
      report.duplicate_groups.push_back(pages);
    }
  }
  std::sort(report.duplicate_groups.begin(), report.duplicate_groups.end());
  report.fraction_unique = static_cast<double>(report.unique_count) / static_cast<double>(report.total);
  return report;
}

std::vector<DetectionEvent> detect_stream(const PatternDB& db, std::span<const DnsQuery> queries,
                                          std::int64_t window_seconds) {
  if (window_seconds <= 0) fail(Errc::invalid_argument, "window must be positive");

  struct UserState {
    std::deque<const DnsQuery*> window;
    std::map<DomainName, std::size_t> live;  // domain -> occurrences inside the window
    std::vector<std::string> last_match;
  };
  std::map<std::string, UserState> states;

  std::vector<DetectionEvent> events;
  for (const auto& q : queries) {
    auto& st = states[q.user];
    if (!st.window.empty() && q.time < st.window.back()->time)
      fail(Errc::unsorted_input, "queries for user \"" + q.user + "\" are not time-ordered at " +
                                     format_rfc3339(q.time));

    while (!st.window.empty() && q.time - st.window.front()->time > window_seconds) {
      const auto& old = *st.window.front();
      auto it = st.live.find(old.domain);
      if (--it->second == 0) st.live.erase(it);
      st.window.pop_front();
    }
    st.window.push_back(&q);
    st.live[q.domain] += 1;

    std::set<DomainName> observed;
    for (const auto& [d, n] : st.live) observed.insert(d);
    auto matched = db.match(observed);
    if (matched != st.last_match) {
      events.push_back(DetectionEvent{q.time, q.user, matched});
      st.last_match = std::move(matched);
    }
  }
  return events;
}

}  // namespace dnsobs
