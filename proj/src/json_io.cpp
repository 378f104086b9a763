#include "dnsobs/json_io.hpp"

#include <charconv>

#include "dnsobs/errors.hpp"

namespace dnsobs {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::bad_format, std::string("invalid JSON: ") + e.what());
  }
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(Errc::bad_format, std::string("missing key \"") + key + "\"");
  return j.at(key);
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return require(j, key).get<T>();
  } catch (const json::exception&) {
    fail(Errc::bad_format, std::string("key \"") + key + "\" has the wrong type");
  }
}

DomainName checked_domain(const std::string& value) {
  DomainName d = normalize_domain(value);
  if (d.value != value) fail(Errc::bad_format, "domain \"" + value + "\" is not in normalized form");
  return d;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(Errc::bad_config, "unknown config key \"" + key + "\"");
  }
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string json_to_text(const json& j) { return j.dump(2) + "\n"; }

json store_to_json(const SessionStore& store) {
  json sessions = json::array();
  for (const auto& [key, counts] : store.sessions()) {
    json counts_json = json::object();
    for (const auto& [domain, n] : counts) counts_json[domain.value] = n;
    sessions.push_back(json{{"user", key.user}, {"epoch_index", key.epoch_index}, {"counts", std::move(counts_json)}});
  }
  return json{{"epoch",
               {{"duration_seconds", store.epoch_spec().duration_seconds},
                {"origin", format_rfc3339(store.epoch_spec().origin)}}},
              {"sessions", std::move(sessions)}};
}

std::string store_to_json_text(const SessionStore& store) { return json_to_text(store_to_json(store)); }

SessionStore store_from_json(const json& j) {
  const json& epoch = require(j, "epoch");
  EpochSpec spec;
  spec.duration_seconds = get_as<std::int64_t>(epoch, "duration_seconds");
  if (spec.duration_seconds <= 0) fail(Errc::bad_format, "epoch duration must be positive");
  spec.origin = parse_rfc3339(get_as<std::string>(epoch, "origin"));

  SessionStore store(spec);
  const json& sessions = require(j, "sessions");
  if (!sessions.is_array()) fail(Errc::bad_format, "\"sessions\" must be an array");
  for (const json& s : sessions) {
    SessionKey key;
    key.user = get_as<std::string>(s, "user");
    key.epoch_index = get_as<std::int64_t>(s, "epoch_index");
    if (key.user.empty()) fail(Errc::bad_format, "empty user pseudonym");
    if (key.epoch_index < 0) fail(Errc::bad_format, "negative epoch_index");
    const json& counts_json = require(s, "counts");
    if (!counts_json.is_object()) fail(Errc::bad_format, "\"counts\" must be an object");
    DomainCounts counts;
    for (const auto& [domain, n] : counts_json.items()) {
      if (!n.is_number_unsigned() || n.get<std::uint64_t>() == 0)
        fail(Errc::bad_format, "count for \"" + domain + "\" must be a positive integer");
      counts.emplace(checked_domain(domain), n.get<std::uint64_t>());
    }
    store.insert_session(std::move(key), std::move(counts));
  }
  return store;
}

SessionStore store_from_json_text(const std::string& text) { return store_from_json(parse_json(text)); }

json patterndb_to_json(const PatternDB& db) {
  json out = json::array();
  for (const auto& p : db.patterns()) {
    json domains = json::array();
    for (const auto& d : p.domains) domains.push_back(d.value);
    out.push_back(json{{"page_id", p.page_id}, {"domains", std::move(domains)}});
  }
  return out;
}

std::string patterndb_to_json_text(const PatternDB& db) { return json_to_text(patterndb_to_json(db)); }

PatternDB patterndb_from_json(const json& j) {
  if (!j.is_array()) fail(Errc::bad_format, "pattern database must be a JSON array");
  std::vector<AccessPattern> patterns;
  patterns.reserve(j.size());
  for (const json& p : j) {
    AccessPattern pattern;
    pattern.page_id = get_as<std::string>(p, "page_id");
    const json& domains = require(p, "domains");
    if (!domains.is_array()) fail(Errc::bad_format, "\"domains\" must be an array");
    for (const json& d : domains) {
      if (!d.is_string()) fail(Errc::bad_format, "domains must be strings");
      pattern.domains.insert(checked_domain(d.get<std::string>()));
    }
    patterns.push_back(std::move(pattern));
  }
  return PatternDB::from_patterns(std::move(patterns));
}

PatternDB patterndb_from_json_text(const std::string& text) { return patterndb_from_json(parse_json(text)); }

PopulationConfig population_config_from_json_text(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) fail(Errc::bad_config, "population config must be a JSON object");
  reject_unknown_keys(j, {"num_users", "num_epochs", "global_pool_size", "profile_size_range", "zipf_exponent",
                          "daily_volume", "stability", "disjoint_profiles", "epoch_duration_seconds", "origin",
                          "seed", "rng_algorithm"});
  PopulationConfig config;
  if (j.contains("num_users")) config.num_users = get_as<std::size_t>(j, "num_users");
  if (j.contains("num_epochs")) config.num_epochs = get_as<std::size_t>(j, "num_epochs");
  if (j.contains("global_pool_size")) config.global_pool_size = get_as<std::size_t>(j, "global_pool_size");
  if (j.contains("profile_size_range")) {
    const json& range = j.at("profile_size_range");
    if (!range.is_array() || range.size() != 2) fail(Errc::bad_config, "profile_size_range must be [min, max]");
    config.profile_size_min = range.at(0).get<std::size_t>();
    config.profile_size_max = range.at(1).get<std::size_t>();
  }
  if (j.contains("zipf_exponent")) config.zipf_exponent = get_as<double>(j, "zipf_exponent");
  if (j.contains("daily_volume")) {
    const json& volume = j.at("daily_volume");
    reject_unknown_keys(volume, {"mean", "dispersion"});
    config.daily_volume_mean = get_as<std::uint64_t>(volume, "mean");
    if (volume.contains("dispersion")) config.daily_volume_dispersion = get_as<std::uint64_t>(volume, "dispersion");
  }
  if (j.contains("stability")) config.stability = get_as<double>(j, "stability");
  if (j.contains("disjoint_profiles")) config.disjoint_profiles = get_as<bool>(j, "disjoint_profiles");
  if (j.contains("epoch_duration_seconds"))
    config.epoch_duration_seconds = get_as<std::int64_t>(j, "epoch_duration_seconds");
  if (j.contains("origin")) config.origin = parse_rfc3339(get_as<std::string>(j, "origin"));
  if (j.contains("seed")) config.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("rng_algorithm")) config.rng_algorithm = get_as<std::string>(j, "rng_algorithm");
  config.validate();
  return config;
}

json population_config_to_json(const PopulationConfig& config) {
  return json{{"num_users", config.num_users},
              {"num_epochs", config.num_epochs},
              {"global_pool_size", config.global_pool_size},
              {"profile_size_range", {config.profile_size_min, config.profile_size_max}},
              {"zipf_exponent", config.zipf_exponent},
              {"daily_volume", {{"mean", config.daily_volume_mean}, {"dispersion", config.daily_volume_dispersion}}},
              {"stability", config.stability},
              {"disjoint_profiles", config.disjoint_profiles},
              {"epoch_duration_seconds", config.epoch_duration_seconds},
              {"origin", format_rfc3339(config.origin)},
              {"seed", config.seed},
              {"rng_algorithm", config.rng_algorithm}};
}

PatternDbConfig patterndb_config_from_json_text(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) fail(Errc::bad_config, "pattern db config must be a JSON object");
  reject_unknown_keys(j, {"num_pages", "pattern_size_range", "pool_size", "overlap_rate", "seed", "rng_algorithm"});
  PatternDbConfig config;
  if (j.contains("num_pages")) config.num_pages = get_as<std::size_t>(j, "num_pages");
  if (j.contains("pattern_size_range")) {
    const json& range = j.at("pattern_size_range");
    if (!range.is_array() || range.size() != 2) fail(Errc::bad_config, "pattern_size_range must be [min, max]");
    config.pattern_size_min = range.at(0).get<std::size_t>();
    config.pattern_size_max = range.at(1).get<std::size_t>();
  }
  if (j.contains("pool_size")) config.pool_size = get_as<std::size_t>(j, "pool_size");
  if (j.contains("overlap_rate")) config.overlap_rate = get_as<double>(j, "overlap_rate");
  if (j.contains("seed")) config.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("rng_algorithm")) config.rng_algorithm = get_as<std::string>(j, "rng_algorithm");
  config.validate();
  return config;
}

json patterndb_config_to_json(const PatternDbConfig& config) {
  return json{{"num_pages", config.num_pages},
              {"pattern_size_range", {config.pattern_size_min, config.pattern_size_max}},
              {"pool_size", config.pool_size},
              {"overlap_rate", config.overlap_rate},
              {"seed", config.seed},
              {"rng_algorithm", config.rng_algorithm}};
}

json to_json(const UniquenessReport& report) {
  return json{{"unique_count", report.unique_count},
              {"total", report.total},
              {"fraction_unique", report.fraction_unique},
              {"duplicate_groups", report.duplicate_groups}};
}

json to_json(const LinkageEvaluation& evaluation) {
  json pairs = json::array();
  for (const auto& p : evaluation.pairs)
    pairs.push_back(json{{"t", p.train_epoch},
                         {"accuracy", p.accuracy},
                         {"scored", p.scored},
                         {"unmatchable", p.unmatchable}});
  return json{{"alpha", evaluation.alpha},
              {"epoch_seconds", evaluation.epoch_seconds},
              {"pairs", std::move(pairs)},
              {"mean_accuracy", evaluation.mean_accuracy},
              {"perfect_user_fraction", evaluation.perfect_user_fraction},
              {"skipped_pairs", evaluation.skipped_pairs},
              {"users_scored", evaluation.users_scored}};
}

json to_json(const BenchmarkReport& report) {
  return json{{"strategy", dummy_strategy_name(report.strategy)},
              {"n", report.n_dummies},
              {"trials", report.trials},
              {"identification_rate", report.identification_rate},
              {"mean_candidate_count", report.mean_candidate_count},
              {"seed", report.seed}};
}

json to_json(const PopularityRanking& ranking) {
  json entries = json::array();
  for (const auto& [domain, count] : ranking.entries)
    entries.push_back(json{{"domain", domain.value}, {"count", count}});
  return json{{"entries", std::move(entries)}};
}

json to_json(std::span<const DetectionEvent> events) {
  json out = json::array();
  for (const auto& e : events)
    out.push_back(json{{"time", format_rfc3339(e.time)}, {"user", e.user}, {"page_ids", e.page_ids}});
  return out;
}

json sweep_to_json(std::span<const SweepPoint> points, Instant origin, double alpha) {
  json durations = json::array();
  for (const auto& p : points)
    durations.push_back(
        json{{"epoch_seconds", p.duration_seconds}, {"mean_accuracy", p.mean_accuracy}, {"pairs", p.pairs}});
  return json{{"alpha", alpha}, {"origin", format_rfc3339(origin)}, {"durations", std::move(durations)}};
}

json parse_report_to_json(const ParseResult& result) {
  json skipped = json::array();
  for (const auto& d : result.skipped) skipped.push_back(json{{"line", d.line}, {"message", d.message}});
  return json{{"parsed", result.queries.size()}, {"skipped", std::move(skipped)}};
}

json store_stats_to_json(const SessionStore& store) {
  return json{{"users", store.users().size()},
              {"epochs", store.epochs().size()},
              {"sessions", store.session_count()},
              {"total_requests", store.total_requests()},
              {"epoch_seconds", store.epoch_spec().duration_seconds},
              {"origin", format_rfc3339(store.epoch_spec().origin)}};
}

json bandwidth_to_json(const PushConfig& config) {
  return json{{"k", config.top_k},
              {"record_size_bytes", config.record_size_bytes},
              {"mean_change_interval_seconds", config.mean_change_interval_seconds},
              {"bytes_per_second", bandwidth_estimate(config)},
              {"mix_latency_reference_seconds", kMixLatencyReferenceSeconds}};
}

std::string coverage_curve_csv(std::span<const std::pair<std::size_t, CoverageResult>> curve) {
  std::string out = "k,aggregate_coverage,per_user_mean_coverage\n";
  for (const auto& [k, result] : curve) {
    out += std::to_string(k);
    out += ',';
    out += format_double(result.aggregate);
    out += ',';
    out += format_double(result.per_user_mean);
    out += '\n';
  }
  return out;
}

}  // namespace dnsobs
