#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dnsobs/errors.hpp"
#include "dnsobs/linker.hpp"
#include "dnsobs/rng.hpp"
#include "dnsobs/synth.hpp"
#include "testutil.hpp"

using namespace dnsobs;
using testutil::dom;

namespace {

DomainCounts counts(std::initializer_list<std::pair<std::string, std::uint64_t>> entries) {
  DomainCounts out;
  for (const auto& [d, n] : entries) out.emplace(dom(d), n);
  return out;
}

LinkerModel train_two(const DomainCounts& c1, const DomainCounts& c2, double alpha = 1.0) {
  std::map<std::string, const DomainCounts*> sessions{{"u1", &c1}, {"u2", &c2}};
  return train(sessions, alpha);
}

// Plain-double naive-Bayes reimplementation used as an independent check of
// the linkage pipeline: dense per-user probability vectors, probabilities
// divided out eagerly, prediction by exhaustive scan.
double reference_pair_accuracy(const SessionStore& store, std::int64_t epoch, double alpha) {
  const auto train_sessions = store.epoch_sessions(epoch);
  const auto next_sessions = store.epoch_sessions(epoch + 1);

  std::map<DomainName, std::size_t> vocab_index;
  for (const auto& [user, session] : train_sessions)
    for (const auto& [d, n] : *session) vocab_index.emplace(d, 0);
  std::size_t next_index = 0;
  for (auto& [d, idx] : vocab_index) idx = next_index++;
  const std::size_t slots = vocab_index.size() + 1;  // last slot: unseen domains

  std::map<std::string, std::vector<double>> probability;
  for (const auto& [user, session] : train_sessions) {
    std::vector<double> p(slots, 0.0);
    double total = 0;
    for (const auto& [d, n] : *session) total += static_cast<double>(n);
    for (std::size_t i = 0; i < slots; ++i) p[i] = alpha / (total + alpha * static_cast<double>(slots));
    for (const auto& [d, n] : *session)
      p[vocab_index.at(d)] = (static_cast<double>(n) + alpha) / (total + alpha * static_cast<double>(slots));
    probability.emplace(user, std::move(p));
  }

  std::size_t scored = 0, correct = 0;
  for (const auto& [user, session] : next_sessions) {
    if (!probability.contains(user)) continue;
    std::string best;
    double best_score = 0;
    for (const auto& [candidate, p] : probability) {
      double score = 0;
      for (const auto& [d, n] : *session) {
        auto it = vocab_index.find(d);
        const double pd = it == vocab_index.end() ? p[slots - 1] : p[it->second];
        score += static_cast<double>(n) * std::log(pd);
      }
      if (best.empty() || score > best_score) {
        best = candidate;
        best_score = score;
      }
    }
    ++scored;
    if (best == user) ++correct;
  }
  return scored == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(scored);
}

}  // namespace

TEST_CASE("train computes laplace-smoothed weights") {
  // u1 {a:2}, u2 {b:2}, alpha 1, vocabulary {a, b} plus the unseen slot:
  // P(a|u1) = (2+1)/(2+3) = 0.6
  const auto model = train_two(counts({{"a.de", 2}}), counts({{"b.de", 2}}));
  CHECK(model.vocabulary_size() == 2);
  CHECK(model.log_weight("u1", dom("a.de")) == doctest::Approx(std::log(0.6)).epsilon(1e-12));
  CHECK(model.log_weight("u1", dom("b.de")) == doctest::Approx(std::log(0.2)).epsilon(1e-12));
  CHECK(model.log_oov_weight("u1") == doctest::Approx(std::log(0.2)).epsilon(1e-12));
  CHECK(model.log_weight("u1", dom("never-seen.de")) == model.log_oov_weight("u1"));
}

TEST_CASE("per-user probabilities sum to one") {
  DetRng rng(4001);
  for (int round = 0; round < 30; ++round) {
    std::map<std::string, DomainCounts> sessions;
    const std::size_t users = 2 + rng.below(4);
    for (std::size_t u = 0; u < users; ++u) {
      DomainCounts c;
      const std::size_t domains = 1 + rng.below(6);
      for (std::size_t idx : rng.sample_distinct(8, domains)) c.emplace(dom("d" + std::to_string(idx) + ".ex"), 1 + rng.below(5));
      sessions.emplace("u" + std::to_string(u), std::move(c));
    }
    std::map<std::string, const DomainCounts*> views;
    for (const auto& [u, c] : sessions) views.emplace(u, &c);
    const double alpha = (round % 3 == 0) ? 1.0 : 0.25 * static_cast<double>(1 + round % 5);
    const LinkerModel model = train(views, alpha);
    for (const auto& [user, profile] : model.users) {
      double sum = std::exp(model.log_oov_weight(user));
      for (const auto& d : model.vocabulary) sum += std::exp(model.log_weight(user, d));
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("large alpha washes out the evidence") {
  const auto model = train_two(counts({{"a.de", 1}}), counts({{"b.de", 1}}), 1e9);
  const double wa = model.log_weight("u1", dom("a.de"));
  const double wb = model.log_weight("u1", dom("b.de"));
  CHECK(std::abs(wa - wb) < 1e-6);
}

TEST_CASE("identical training sessions give identical weights") {
  const auto shared = counts({{"a.de", 3}, {"b.de", 1}});
  const auto model = train_two(shared, shared);
  for (const auto& d : model.vocabulary) CHECK(model.log_weight("u1", d) == model.log_weight("u2", d));
  CHECK(model.log_oov_weight("u1") == model.log_oov_weight("u2"));
}

TEST_CASE("training needs at least two users") {
  const auto solo = counts({{"a.de", 1}});
  std::map<std::string, const DomainCounts*> sessions{{"u1", &solo}};
  CHECK_THROWS_AS(train(sessions, 1.0), Error);
  CHECK_THROWS_AS(train_two(solo, solo, 0.0), Error);   // alpha must be positive
  CHECK_THROWS_AS(train_two(solo, solo, -1.0), Error);
}

TEST_CASE("predict picks the separable user") {
  const auto model = train_two(counts({{"a.de", 10}}), counts({{"b.de", 10}}));
  const Session session{"hidden", 1, counts({{"a.de", 3}})};
  const LinkPrediction prediction = predict(model, session);
  CHECK(prediction.top1() == "u1");
  REQUIRE(prediction.ranked.size() == 2);
  CHECK(prediction.ranked[0].second > prediction.ranked[1].second);
}

TEST_CASE("all-unseen query ties and breaks lexicographically") {
  // equal training totals make every OOV weight identical
  const auto model = train_two(counts({{"a.de", 2}}), counts({{"b.de", 2}}));
  const Session session{"hidden", 1, counts({{"z1.ex", 1}, {"z2.ex", 2}})};
  const LinkPrediction prediction = predict(model, session);
  CHECK(prediction.ranked[0].second == prediction.ranked[1].second);
  CHECK(prediction.top1() == "u1");
}

TEST_CASE("predict rejects empty sessions") {
  const auto model = train_two(counts({{"a.de", 1}}), counts({{"b.de", 1}}));
  CHECK_THROWS_AS(predict(model, Session{"hidden", 1, {}}), Error);
}

TEST_CASE("predict matches the exact-fraction oracle on random instances") {
  DetRng rng(4002);
  for (int round = 0; round < 300; ++round) {
    const testutil::NbInstance instance = testutil::random_nb_instance(rng);

    std::map<std::string, DomainCounts> training;
    for (const auto& [user, c] : instance.training) {
      DomainCounts dc;
      for (const auto& [d, n] : c) dc.emplace(dom(d), n);
      training.emplace(user, std::move(dc));
    }
    std::map<std::string, const DomainCounts*> views;
    for (const auto& [u, c] : training) views.emplace(u, &c);
    const LinkerModel model = train(views, 1.0);

    DomainCounts session_counts;
    for (const auto& [d, n] : instance.session) session_counts.emplace(dom(d), n);
    const LinkPrediction prediction = predict(model, Session{"?", 0, session_counts});

    std::vector<std::string> implementation;
    for (const auto& [user, score] : prediction.ranked) implementation.push_back(user);
    CHECK(implementation == testutil::exact_nb_ranking(instance));
  }
}

TEST_CASE("scaling every query count never changes the winner") {
  // score(u) becomes k * score(u): the argmax is invariant although the
  // scores themselves are not.
  DetRng rng(4003);
  for (int round = 0; round < 50; ++round) {
    std::map<std::string, DomainCounts> training;
    const std::uint64_t k = 2 + rng.below(9);
    for (std::size_t u = 0; u < 3; ++u) {
      DomainCounts c;
      for (std::size_t idx : rng.sample_distinct(6, 1 + rng.below(4)))
        c.emplace(dom("d" + std::to_string(idx) + ".ex"), 1 + rng.below(5));
      training.emplace("u" + std::to_string(u), std::move(c));
    }
    std::map<std::string, const DomainCounts*> views;
    for (const auto& [u, c] : training) views.emplace(u, &c);
    const LinkerModel model = train(views, 1.0);

    DomainCounts base, scaled;
    for (std::size_t idx : rng.sample_distinct(6, 1 + rng.below(4))) {
      const std::uint64_t n = 1 + rng.below(5);
      base.emplace(dom("d" + std::to_string(idx) + ".ex"), n);
      scaled.emplace(dom("d" + std::to_string(idx) + ".ex"), n * k);
    }
    const auto plain = predict(model, Session{"?", 0, base});
    const auto boosted = predict(model, Session{"?", 0, scaled});
    CHECK(plain.top1() == boosted.top1());
    CHECK(plain.ranked[0].second != boosted.ranked[0].second);  // scores themselves do move
  }
}

TEST_CASE("uniform prior never affects the ranking") {
  DetRng rng(4004);
  for (int round = 0; round < 50; ++round) {
    std::map<std::string, DomainCounts> training;
    for (std::size_t u = 0; u < 2 + rng.below(3); ++u) {
      DomainCounts c;
      for (std::size_t idx : rng.sample_distinct(5, 1 + rng.below(4)))
        c.emplace(dom("d" + std::to_string(idx) + ".ex"), 1 + rng.below(5));
      training.emplace("u" + std::to_string(u), std::move(c));
    }
    std::map<std::string, const DomainCounts*> views;
    for (const auto& [u, c] : training) views.emplace(u, &c);
    const LinkerModel model = train(views, 1.0);
    const Session session{"?", 0, counts({{"d1.ex", 1}, {"d2.ex", 3}})};
    const auto with_prior = predict(model, session, true);
    const auto without_prior = predict(model, session, false);
    REQUIRE(with_prior.ranked.size() == without_prior.ranked.size());
    for (std::size_t i = 0; i < with_prior.ranked.size(); ++i)
      CHECK(with_prior.ranked[i].first == without_prior.ranked[i].first);
  }
}

TEST_CASE("link_epoch_pair on disjoint stable users") {
  SessionStore store(EpochSpec{86400, Instant{0}});
  store.insert_session(SessionKey{"u1", 0}, counts({{"a.de", 5}, {"b.de", 2}}));
  store.insert_session(SessionKey{"u2", 0}, counts({{"x.de", 4}, {"y.de", 3}}));
  store.insert_session(SessionKey{"u1", 1}, counts({{"a.de", 3}, {"b.de", 1}}));
  store.insert_session(SessionKey{"u2", 1}, counts({{"x.de", 2}, {"y.de", 5}}));
  const PairEvaluation eval = link_epoch_pair(store, 0, 1.0);
  CHECK(eval.accuracy == 1.0);
  CHECK(eval.scored == 2);
  CHECK(eval.unmatchable == 0);
}

TEST_CASE("link_epoch_pair on swapped sessions") {
  const auto c1 = counts({{"a.de", 5}, {"b.de", 2}});
  const auto c2 = counts({{"x.de", 4}, {"y.de", 3}});
  SessionStore store(EpochSpec{86400, Instant{0}});
  store.insert_session(SessionKey{"u1", 0}, c1);
  store.insert_session(SessionKey{"u2", 0}, c2);
  store.insert_session(SessionKey{"u1", 1}, c2);  // users trade behavior
  store.insert_session(SessionKey{"u2", 1}, c1);
  const PairEvaluation eval = link_epoch_pair(store, 0, 1.0);
  CHECK(eval.accuracy == 0.0);
  CHECK(eval.correct == 0);
}

TEST_CASE("link_epoch_pair counts users missing from training as unmatchable") {
  SessionStore store(EpochSpec{86400, Instant{0}});
  store.insert_session(SessionKey{"u1", 0}, counts({{"a.de", 5}}));
  store.insert_session(SessionKey{"u2", 0}, counts({{"x.de", 4}}));
  store.insert_session(SessionKey{"u1", 1}, counts({{"a.de", 2}}));
  store.insert_session(SessionKey{"u3", 1}, counts({{"z.de", 2}}));
  const PairEvaluation eval = link_epoch_pair(store, 0, 1.0);
  CHECK(eval.scored == 1);
  CHECK(eval.unmatchable == 1);
  CHECK(eval.accuracy == 1.0);

  CHECK_THROWS_AS(link_epoch_pair(store, 1, 1.0), Error);  // epoch 2 missing
}

TEST_CASE("link_epoch_pair tracks an independent reimplementation on synthetic data") {
  PopulationConfig config;
  config.num_users = 100;
  config.num_epochs = 2;
  config.global_pool_size = 2000;
  config.profile_size_min = 20;
  config.profile_size_max = 60;
  config.daily_volume_mean = 80;
  config.daily_volume_dispersion = 20;
  config.seed = 5;
  const SyntheticPopulation population = generate_population(config);

  const PairEvaluation eval = link_epoch_pair(population.store, 0, 1.0);
  const double reference = reference_pair_accuracy(population.store, 0, 1.0);
  CHECK(eval.accuracy == doctest::Approx(reference).epsilon(0.05));
  CHECK(eval.accuracy > 0.5);  // far above the 1/100 random baseline
}

TEST_CASE("evaluate_linkage on stationary disjoint behavior") {
  SessionStore store(EpochSpec{86400, Instant{0}});
  for (std::int64_t e = 0; e < 4; ++e) {
    store.insert_session(SessionKey{"u1", e}, counts({{"a.de", 5}, {"b.de", 1}}));
    store.insert_session(SessionKey{"u2", e}, counts({{"x.de", 3}}));
    store.insert_session(SessionKey{"u3", e}, counts({{"y.de", 2}, {"z.de", 2}}));
  }
  const LinkageEvaluation eval = evaluate_linkage(store, 1.0);
  CHECK(eval.pairs.size() == 3);
  CHECK(eval.mean_accuracy == 1.0);
  CHECK(eval.perfect_user_fraction == 1.0);
  CHECK(eval.users_scored == 3);
}

TEST_CASE("evaluate_linkage with indistinguishable users hits the tie-break floor") {
  // Everyone behaves identically, so every prediction ties and the
  // lexicographically smallest user wins: accuracy is exactly 1/|users|.
  const auto shared = counts({{"a.de", 2}, {"b.de", 1}});
  for (std::size_t n_users : {2, 3, 4}) {
    SessionStore store(EpochSpec{86400, Instant{0}});
    for (std::int64_t e = 0; e < 3; ++e)
      for (std::size_t u = 0; u < n_users; ++u)
        store.insert_session(SessionKey{"u" + std::to_string(u), e}, shared);
    const LinkageEvaluation eval = evaluate_linkage(store, 1.0);
    CHECK(eval.mean_accuracy == doctest::Approx(1.0 / static_cast<double>(n_users)).epsilon(1e-12));
  }
}

TEST_CASE("evaluate_linkage needs two epochs") {
  SessionStore store(EpochSpec{86400, Instant{0}});
  store.insert_session(SessionKey{"u1", 0}, counts({{"a.de", 1}}));
  store.insert_session(SessionKey{"u2", 0}, counts({{"b.de", 1}}));
  CHECK_THROWS_AS(evaluate_linkage(store, 1.0), Error);
}

TEST_CASE("evaluate_linkage skips untrainable pairs") {
  SessionStore store(EpochSpec{86400, Instant{0}});
  store.insert_session(SessionKey{"u1", 0}, counts({{"a.de", 1}}));  // single user: no pair (0,1)
  store.insert_session(SessionKey{"u1", 1}, counts({{"a.de", 1}}));
  store.insert_session(SessionKey{"u2", 1}, counts({{"b.de", 1}}));
  store.insert_session(SessionKey{"u1", 2}, counts({{"a.de", 1}}));
  store.insert_session(SessionKey{"u2", 2}, counts({{"b.de", 1}}));
  const LinkageEvaluation eval = evaluate_linkage(store, 1.0);
  CHECK(eval.pairs.size() == 1);
  CHECK(eval.pairs[0].train_epoch == 1);
  CHECK(eval.skipped_pairs == 1);
}

TEST_CASE("identical evaluations are bit-identical") {
  PopulationConfig config;
  config.num_users = 20;
  config.num_epochs = 4;
  config.global_pool_size = 500;
  config.profile_size_min = 10;
  config.profile_size_max = 30;
  config.daily_volume_mean = 40;
  config.daily_volume_dispersion = 10;
  config.seed = 6;
  const auto population = generate_population(config);
  const LinkageEvaluation a = evaluate_linkage(population.store, 1.0, 1);
  const LinkageEvaluation b = evaluate_linkage(population.store, 1.0, 4);
  CHECK(a.mean_accuracy == b.mean_accuracy);
  CHECK(a.perfect_user_fraction == b.perfect_user_fraction);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    CHECK(a.pairs[i].accuracy == b.pairs[i].accuracy);
    CHECK(a.pairs[i].scored == b.pairs[i].scored);
  }
}

TEST_CASE("restrict_vocabulary keeps the global top-n") {
  SessionStore store(EpochSpec{86400, Instant{0}});
  store.insert_session(SessionKey{"u1", 0}, counts({{"a.de", 3}, {"b.de", 1}}));
  store.insert_session(SessionKey{"u2", 0}, counts({{"b.de", 3}, {"c.de", 2}}));

  SUBCASE("top_n covering everything is the identity") {
    const RestrictResult result = restrict_vocabulary(store, 10);
    CHECK(result.store == store);
    CHECK(result.dropped_sessions == 0);
  }
  SUBCASE("top_n = 1 keeps only the most popular domain") {
    // totals: b.de 4, a.de 3, c.de 2
    const RestrictResult result = restrict_vocabulary(store, 1);
    CHECK(result.kept_domains == 1);
    for (const auto& [key, session_counts] : result.store.sessions()) {
      CHECK(session_counts.size() == 1);
      CHECK(session_counts.begin()->first == dom("b.de"));
    }
  }
  SUBCASE("sessions emptied by the cut are dropped and counted") {
    SessionStore s2(EpochSpec{86400, Instant{0}});
    s2.insert_session(SessionKey{"u1", 0}, counts({{"a.de", 9}}));
    s2.insert_session(SessionKey{"u2", 0}, counts({{"b.de", 1}}));
    const RestrictResult result = restrict_vocabulary(s2, 1);
    CHECK(result.store.session_count() == 1);
    CHECK(result.dropped_sessions == 1);
  }
  SUBCASE("top_n must be positive") { CHECK_THROWS_AS(restrict_vocabulary(store, 0), Error); }
}

TEST_CASE("epoch_sweep with one duration equals evaluate_linkage") {
  PopulationConfig config;
  config.num_users = 15;
  config.num_epochs = 3;
  config.global_pool_size = 400;
  config.profile_size_min = 10;
  config.profile_size_max = 20;
  config.daily_volume_mean = 30;
  config.daily_volume_dispersion = 5;
  config.seed = 7;
  const auto population = generate_population(config);

  const std::int64_t durations[] = {86400};
  const auto points = epoch_sweep(population.queries, config.origin, durations, 1.0);
  REQUIRE(points.size() == 1);
  const auto direct = evaluate_linkage(sessionize(population.queries, EpochSpec{86400, config.origin}), 1.0);
  CHECK(points[0].mean_accuracy == direct.mean_accuracy);
  CHECK(points[0].pairs == direct.pairs.size());

  CHECK_THROWS_AS(epoch_sweep(population.queries, config.origin, {}, 1.0), Error);
}
