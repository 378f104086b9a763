#include "dnsobs/linker.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

#include "dnsobs/errors.hpp"
#include "dnsobs/parallel.hpp"
#include "dnsobs/pushdns.hpp"

namespace dnsobs {

double LinkerModel::log_weight(const std::string& user, const DomainName& domain) const {
  auto it = users.find(user);
  if (it == users.end()) fail(Errc::invalid_argument, "unknown user \"" + user + "\"");
  const auto& profile = it->second;
  auto cit = profile.counts.find(domain);
  const double count = cit == profile.counts.end() ? 0.0 : static_cast<double>(cit->second);
  return std::log((count + alpha) / profile.denominator);
}

double LinkerModel::log_oov_weight(const std::string& user) const {
  auto it = users.find(user);
  if (it == users.end()) fail(Errc::invalid_argument, "unknown user \"" + user + "\"");
  return std::log(alpha / it->second.denominator);
}

double LinkerModel::log_likelihood(const DomainCounts& session, const UserProfile& profile,
                                   std::vector<double>& scratch) const {
  scratch.clear();
  for (const auto& [domain, n] : session) {
    auto cit = profile.counts.find(domain);
    const double count = cit == profile.counts.end() ? 0.0 : static_cast<double>(cit->second);
    scratch.push_back(static_cast<double>(n) * std::log((count + alpha) / profile.denominator));
  }
  std::sort(scratch.begin(), scratch.end());
  double score = 0.0;
  for (double term : scratch) score += term;
  return score;
}

double LinkerModel::log_likelihood(const DomainCounts& session, const UserProfile& profile) const {
  std::vector<double> scratch;
  return log_likelihood(session, profile, scratch);
}

LinkerModel train(const std::map<std::string, const DomainCounts*>& sessions_by_user, double alpha) {
  if (alpha <= 0.0) fail(Errc::invalid_argument, "alpha must be positive");
  if (sessions_by_user.size() < 2)
    fail(Errc::degenerate_training, "need at least 2 users, got " + std::to_string(sessions_by_user.size()));

  LinkerModel model;
  model.alpha = alpha;

  std::set<DomainName> vocabulary;
  for (const auto& [user, counts] : sessions_by_user)
    for (const auto& [domain, n] : *counts) vocabulary.insert(domain);
  model.vocabulary.assign(vocabulary.begin(), vocabulary.end());

  const double slots = static_cast<double>(model.vocabulary.size() + 1);  // +1: the OOV bucket
  for (const auto& [user, counts] : sessions_by_user) {
    LinkerModel::UserProfile profile;
    profile.counts.reserve(counts->size() * 2);
    for (const auto& [domain, n] : *counts) {
      profile.counts.emplace(domain, n);
      profile.total += n;
    }
    profile.denominator = static_cast<double>(profile.total) + alpha * slots;
    model.users.emplace(user, std::move(profile));
  }
  model.log_prior = -std::log(static_cast<double>(model.users.size()));
  return model;
}

LinkerModel train(const SessionStore& store, std::int64_t epoch_index, double alpha) {
  auto sessions = store.epoch_sessions(epoch_index);
  if (sessions.empty()) fail(Errc::empty_epoch, "no sessions in epoch " + std::to_string(epoch_index));
  return train(sessions, alpha);
}

LinkPrediction predict(const LinkerModel& model, const Session& session, bool include_prior) {
  if (session.counts.empty()) fail(Errc::invalid_argument, "empty query session");

  LinkPrediction prediction;
  prediction.query_user = session.user;
  prediction.epoch_index = session.epoch_index;
  prediction.ranked.reserve(model.users.size());
  std::vector<double> scratch;
  for (const auto& [user, profile] : model.users) {
    double score = model.log_likelihood(session.counts, profile, scratch);
    if (include_prior) score += model.log_prior;
    prediction.ranked.emplace_back(user, score);
  }
  // Entries start user-ascending, so a stable sort by score leaves exact ties
  // lexicographically ordered.
  std::stable_sort(prediction.ranked.begin(), prediction.ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return prediction;
}

namespace {

// argmax over (score desc, user asc); equivalent to predict(...).top1().
const std::string* best_user(const LinkerModel& model, const DomainCounts& session, std::vector<double>& scratch) {
  const std::string* best = nullptr;
  double best_score = 0.0;
  for (const auto& [user, profile] : model.users) {
    const double score = model.log_likelihood(session, profile, scratch);
    if (best == nullptr || score > best_score) {
      best = &user;
      best_score = score;
    }
  }
  return best;
}

PairEvaluation evaluate_pair(const std::map<std::string, const DomainCounts*>& train_sessions,
                             const std::map<std::string, const DomainCounts*>& next_sessions,
                             std::int64_t train_epoch, double alpha,
                             std::map<std::string, std::pair<std::uint64_t, std::uint64_t>>* per_user,
                             std::mutex* per_user_mutex) {
  const LinkerModel model = train(train_sessions, alpha);

  PairEvaluation eval;
  eval.train_epoch = train_epoch;
  std::vector<std::pair<std::string, bool>> outcomes;
  std::vector<double> scratch;
  for (const auto& [user, counts] : next_sessions) {
    if (!model.users.contains(user)) {
      ++eval.unmatchable;
      continue;
    }
    const std::string* top1 = best_user(model, *counts, scratch);
    const bool correct = top1 != nullptr && *top1 == user;
    ++eval.scored;
    if (correct) ++eval.correct;
    outcomes.emplace_back(user, correct);
  }
  eval.accuracy = eval.scored == 0 ? 0.0 : static_cast<double>(eval.correct) / static_cast<double>(eval.scored);

  if (per_user != nullptr) {
    std::lock_guard<std::mutex> lock(*per_user_mutex);
    for (const auto& [user, correct] : outcomes) {
      auto& [scored, right] = (*per_user)[user];
      ++scored;
      if (correct) ++right;
    }
  }
  return eval;
}

}  // namespace

PairEvaluation link_epoch_pair(const SessionStore& store, std::int64_t train_epoch, double alpha) {
  const auto train_sessions = store.epoch_sessions(train_epoch);
  const auto next_sessions = store.epoch_sessions(train_epoch + 1);
  if (train_sessions.empty()) fail(Errc::empty_epoch, "no sessions in epoch " + std::to_string(train_epoch));
  if (next_sessions.empty()) fail(Errc::empty_epoch, "no sessions in epoch " + std::to_string(train_epoch + 1));
  return evaluate_pair(train_sessions, next_sessions, train_epoch, alpha, nullptr, nullptr);
}

LinkageEvaluation evaluate_linkage(const SessionStore& store, double alpha, int threads) {
  const auto by_epoch = store.grouped_by_epoch();
  if (by_epoch.size() < 2) fail(Errc::not_enough_epochs, "need sessions in at least 2 epochs");

  LinkageEvaluation result;
  result.alpha = alpha;
  result.epoch_seconds = store.epoch_spec().duration_seconds;

  std::vector<std::int64_t> eligible;
  for (auto it = by_epoch.begin(); it != by_epoch.end(); ++it) {
    auto next = by_epoch.find(it->first + 1);
    if (next == by_epoch.end()) continue;
    if (it->second.size() < 2) {
      ++result.skipped_pairs;  // one user cannot train a discriminating model
      continue;
    }
    eligible.push_back(it->first);
  }
  if (eligible.empty()) fail(Errc::not_enough_epochs, "no adjacent epoch pair is evaluable");

  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> per_user;  // user -> (scored, correct)
  std::mutex per_user_mutex;
  result.pairs.resize(eligible.size());
  parallel_for(eligible.size(), threads, [&](std::size_t i) {
    const std::int64_t t = eligible[i];
    result.pairs[i] =
        evaluate_pair(by_epoch.at(t), by_epoch.at(t + 1), t, alpha, &per_user, &per_user_mutex);
  });

  double accuracy_sum = 0.0;
  for (const auto& pair : result.pairs) accuracy_sum += pair.accuracy;
  result.mean_accuracy = accuracy_sum / static_cast<double>(result.pairs.size());

  std::size_t perfect = 0;
  for (const auto& [user, tally] : per_user)
    if (tally.second == tally.first) ++perfect;
  result.users_scored = per_user.size();
  result.perfect_user_fraction =
      per_user.empty() ? 0.0 : static_cast<double>(perfect) / static_cast<double>(per_user.size());
  return result;
}

RestrictResult restrict_vocabulary(const SessionStore& store, std::size_t top_n) {
  if (top_n == 0) fail(Errc::invalid_argument, "top_n must be >= 1");

  const PopularityRanking ranking = rank_domains(store);
  std::set<DomainName> keep;
  for (std::size_t i = 0; i < ranking.entries.size() && i < top_n; ++i) keep.insert(ranking.entries[i].first);

  RestrictResult result;
  result.store = SessionStore(store.epoch_spec());
  result.kept_domains = keep.size();
  for (const auto& [key, counts] : store.sessions()) {
    DomainCounts filtered;
    for (const auto& [domain, n] : counts)
      if (keep.contains(domain)) filtered.emplace(domain, n);
    if (filtered.empty()) {
      ++result.dropped_sessions;
      continue;
    }
    result.store.insert_session(key, std::move(filtered));
  }
  return result;
}

std::vector<SweepPoint> epoch_sweep(std::span<const DnsQuery> queries, Instant origin,
                                    std::span<const std::int64_t> durations, double alpha, int threads) {
  if (durations.empty()) fail(Errc::invalid_argument, "no epoch durations given");

  std::vector<SweepPoint> points;
  points.reserve(durations.size());
  for (std::int64_t duration : durations) {
    const SessionStore store = sessionize(queries, EpochSpec{duration, origin});
    const LinkageEvaluation eval = evaluate_linkage(store, alpha, threads);
    points.push_back(SweepPoint{duration, eval.mean_accuracy, eval.pairs.size()});
  }
  return points;
}

}  // namespace dnsobs
