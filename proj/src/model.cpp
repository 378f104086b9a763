#include "dnsobs/model.hpp"

#include <algorithm>
#include <cctype>

#include "dnsobs/errors.hpp"

namespace dnsobs {

DomainName normalize_domain(std::string_view raw) {
  // Trim outer whitespace first; the precondition is on the trimmed input.
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!raw.empty() && is_space(static_cast<unsigned char>(raw.front()))) raw.remove_prefix(1);
  while (!raw.empty() && is_space(static_cast<unsigned char>(raw.back()))) raw.remove_suffix(1);
  if (raw.empty()) fail(Errc::empty_input, "empty domain name");

  std::string value;
  value.reserve(raw.size());
  for (char c : raw) {
    if (is_space(static_cast<unsigned char>(c)))
      fail(Errc::whitespace_in_domain, "whitespace inside domain \"" + std::string(raw) + "\"");
    value.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }

  if (value.back() == '.') value.pop_back();  // absolute-name form
  if (value.empty()) fail(Errc::empty_input, "domain \"" + std::string(raw) + "\" has no labels");

  std::size_t label_len = 0;
  for (char c : value) {
    if (c == '.') {
      if (label_len == 0) fail(Errc::empty_label, "empty label in \"" + std::string(raw) + "\"");
      label_len = 0;
    } else {
      ++label_len;
    }
  }
  if (label_len == 0) fail(Errc::empty_label, "empty label in \"" + std::string(raw) + "\"");

  return DomainName{std::move(value)};
}

std::uint64_t total_count(const DomainCounts& counts) {
  std::uint64_t total = 0;
  for (const auto& [domain, count] : counts) total += count;
  return total;
}

void SessionStore::add(const std::string& user, std::int64_t epoch_index, const DomainName& domain,
                       std::uint64_t count) {
  if (count == 0) fail(Errc::invalid_argument, "zero count");
  sessions_[SessionKey{user, epoch_index}][domain] += count;
}

void SessionStore::insert_session(SessionKey key, DomainCounts counts) {
  if (counts.empty()) fail(Errc::bad_format, "empty session for user \"" + key.user + "\"");
  for (const auto& [domain, count] : counts)
    if (count == 0) fail(Errc::bad_format, "zero count for domain \"" + domain.value + "\"");
  auto [it, inserted] = sessions_.emplace(std::move(key), std::move(counts));
  if (!inserted)
    fail(Errc::bad_format,
         "duplicate session (" + it->first.user + ", " + std::to_string(it->first.epoch_index) + ")");
}

std::uint64_t SessionStore::total_requests() const {
  std::uint64_t total = 0;
  for (const auto& [key, counts] : sessions_) total += total_count(counts);
  return total;
}

std::vector<std::string> SessionStore::users() const {
  std::vector<std::string> out;
  for (const auto& [key, counts] : sessions_)
    if (out.empty() || out.back() != key.user) out.push_back(key.user);
  // sessions_ is ordered by (user, epoch), so duplicates are adjacent
  return out;
}

std::vector<std::int64_t> SessionStore::epochs() const {
  std::set<std::int64_t> distinct;
  for (const auto& [key, counts] : sessions_) distinct.insert(key.epoch_index);
  return {distinct.begin(), distinct.end()};
}

std::map<std::string, const DomainCounts*> SessionStore::epoch_sessions(std::int64_t epoch_index) const {
  std::map<std::string, const DomainCounts*> out;
  for (const auto& [key, counts] : sessions_)
    if (key.epoch_index == epoch_index) out.emplace(key.user, &counts);
  return out;
}

std::map<std::int64_t, std::map<std::string, const DomainCounts*>> SessionStore::grouped_by_epoch() const {
  std::map<std::int64_t, std::map<std::string, const DomainCounts*>> out;
  for (const auto& [key, counts] : sessions_) out[key.epoch_index].emplace(key.user, &counts);
  return out;
}

SessionStore sessionize(std::span<const DnsQuery> queries, const EpochSpec& spec) {
  if (spec.duration_seconds <= 0) fail(Errc::invalid_argument, "epoch duration must be positive");
  SessionStore store(spec);
  for (const auto& q : queries) {
    if (q.time < spec.origin)
      fail(Errc::out_of_range, "query at " + format_rfc3339(q.time) + " precedes epoch origin " +
                                   format_rfc3339(spec.origin));
    store.add(q.user, spec.index_of(q.time), q.domain);
  }
  return store;
}

}  // namespace dnsobs
