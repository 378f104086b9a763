#ifndef DNSOBS_LINKER_HPP
#define DNSOBS_LINKER_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dnsobs/model.hpp"

namespace dnsobs {

/// Per-user smoothed multinomial domain distributions trained from one epoch.
///
/// For a user with training counts c(d) totalling T, and a training vocabulary
/// of V domains plus one shared out-of-vocabulary bucket:
///   P(d | user) = (c(d) + alpha) / (T + alpha * (V + 1))
/// A domain unseen for the user (zero count or outside the vocabulary) falls
/// into the same alpha-mass slot, so scoring needs no vocabulary lookup.
class LinkerModel {
 public:
  struct UserProfile {
    std::uint64_t total = 0;
    std::unordered_map<DomainName, std::uint64_t> counts;
    // total + alpha * (vocabulary + 1). Each weight is log((c + alpha) / denominator)
    // with the quotient formed first: equal probability fractions then hit the
    // same double, so true score ties stay exact ties.
    double denominator = 0.0;
  };

  double alpha = 1.0;
  std::vector<DomainName> vocabulary;       // sorted distinct training domains
  std::map<std::string, UserProfile> users; // sorted by pseudonym
  double log_prior = 0.0;                   // log(1 / |users|), uniform

  std::size_t vocabulary_size() const { return vocabulary.size(); }

  /// log P(domain | user); unseen domains get the out-of-vocabulary weight.
  double log_weight(const std::string& user, const DomainName& domain) const;
  double log_oov_weight(const std::string& user) const;

  /// Log-likelihood of a session under one user's distribution (no prior).
  /// Terms are summed in sorted order, so users whose term multisets are equal
  /// score bitwise-identically and tie exactly. scratch is reusable storage.
  double log_likelihood(const DomainCounts& session, const UserProfile& profile,
                        std::vector<double>& scratch) const;
  double log_likelihood(const DomainCounts& session, const UserProfile& profile) const;
};

/// Trains from one epoch's sessions (user -> counts). Throws
/// Errc::degenerate_training with fewer than 2 users, Errc::invalid_argument
/// for alpha <= 0.
LinkerModel train(const std::map<std::string, const DomainCounts*>& sessions_by_user, double alpha);
LinkerModel train(const SessionStore& store, std::int64_t epoch_index, double alpha);

struct LinkPrediction {
  std::string query_user;   // ground-truth pseudonym of the query session
  std::int64_t epoch_index = 0;
  /// (user, log posterior score), descending; exact score ties broken by
  /// lexicographic user id.
  std::vector<std::pair<std::string, double>> ranked;

  const std::string& top1() const { return ranked.front().first; }
};

/// Scores a session against every trained user. The uniform prior enters each
/// score as the same additive constant, so it can never change the ranking.
LinkPrediction predict(const LinkerModel& model, const Session& session, bool include_prior = true);

struct PairEvaluation {
  std::int64_t train_epoch = 0;
  double accuracy = 0.0;       // correct / scored (0 when nothing was scorable)
  std::size_t scored = 0;      // sessions of epoch t+1 whose user also trained
  std::size_t correct = 0;
  std::size_t unmatchable = 0; // sessions of users absent from the training epoch
};

/// Trains on epoch t and links every session of epoch t+1 against it.
/// Throws Errc::empty_epoch if either epoch holds no sessions.
PairEvaluation link_epoch_pair(const SessionStore& store, std::int64_t train_epoch, double alpha);

struct LinkageEvaluation {
  double alpha = 1.0;
  std::int64_t epoch_seconds = 0;
  std::vector<PairEvaluation> pairs;
  double mean_accuracy = 0.0;
  double perfect_user_fraction = 0.0;  // among users scored at least once
  std::size_t skipped_pairs = 0;       // adjacent epochs with an untrainable left side
  std::size_t users_scored = 0;
};

/// Links every adjacent epoch pair (t, t+1) present in the store.
/// Throws Errc::not_enough_epochs when no pair is evaluable.
LinkageEvaluation evaluate_linkage(const SessionStore& store, double alpha, int threads = 1);

struct RestrictResult {
  SessionStore store;
  std::size_t dropped_sessions = 0;
  std::size_t kept_domains = 0;
};

/// Keeps only the globally most-requested top_n domains (count ties broken
/// lexicographically); sessions left empty are dropped and counted.
RestrictResult restrict_vocabulary(const SessionStore& store, std::size_t top_n);

struct SweepPoint {
  std::int64_t duration_seconds = 0;
  double mean_accuracy = 0.0;
  std::size_t pairs = 0;
};

/// Re-sessionizes one query stream per duration and evaluates linkage on each.
std::vector<SweepPoint> epoch_sweep(std::span<const DnsQuery> queries, Instant origin,
                                    std::span<const std::int64_t> durations, double alpha, int threads = 1);

}  // namespace dnsobs

#endif
