#include "dnsobs.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "dnsobs/errors.hpp"
#include "dnsobs/json_io.hpp"

struct dnsobs_store {
  dnsobs::SessionStore impl;
};

struct dnsobs_patterndb {
  dnsobs::PatternDB impl;
};

namespace {

using dnsobs::Errc;
using dnsobs::Error;

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_out(char** slot, const std::string& value) {
  if (slot != nullptr) *slot = copy_string(value);
}

dnsobs_status status_of(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
      return DNSOBS_ERR_INVALID_ARGUMENT;
    case Errc::empty_input:
    case Errc::empty_label:
    case Errc::whitespace_in_domain:
    case Errc::missing_column:
    case Errc::extra_column:
    case Errc::bad_timestamp:
    case Errc::bad_config:
    case Errc::bad_format:
      return DNSOBS_ERR_PARSE;
    case Errc::io_error:
      return DNSOBS_ERR_IO;
    default:
      return DNSOBS_ERR_DATA;
  }
}

template <typename Fn>
dnsobs_status guarded(char** err_out, Fn&& fn) {
  try {
    fn();
    return DNSOBS_OK;
  } catch (const Error& e) {
    set_out(err_out, e.what());
    return status_of(e.code());
  } catch (const std::exception& e) {
    set_out(err_out, e.what());
    return DNSOBS_ERR_INTERNAL;
  }
}

dnsobs_status require_args(bool ok, char** err_out) {
  if (!ok) set_out(err_out, "null argument");
  return ok ? DNSOBS_OK : DNSOBS_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* dnsobs_status_name(dnsobs_status status) {
  switch (status) {
    case DNSOBS_OK: return "ok";
    case DNSOBS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case DNSOBS_ERR_PARSE: return "parse_error";
    case DNSOBS_ERR_DATA: return "data_error";
    case DNSOBS_ERR_IO: return "io_error";
    case DNSOBS_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* dnsobs_version(void) { return "1.0.0"; }
const char* dnsobs_format_version(void) { return "1"; }

void dnsobs_string_free(char* s) { std::free(s); }

dnsobs_status dnsobs_store_from_json(const char* json_text, dnsobs_store** store_out, char** err_out) {
  if (auto st = require_args(json_text && store_out, err_out)) return st;
  return guarded(err_out, [&] { *store_out = new dnsobs_store{dnsobs::store_from_json_text(json_text)}; });
}

dnsobs_status dnsobs_store_to_json(const dnsobs_store* store, char** json_out, char** err_out) {
  if (auto st = require_args(store && json_out, err_out)) return st;
  return guarded(err_out, [&] { *json_out = copy_string(dnsobs::store_to_json_text(store->impl)); });
}

dnsobs_status dnsobs_store_from_query_csv(const char* csv_text, int64_t epoch_seconds, const char* origin_rfc3339,
                                          int lenient, dnsobs_store** store_out, char** parse_report_out,
                                          char** err_out) {
  if (auto st = require_args(csv_text && store_out, err_out)) return st;
  return guarded(err_out, [&] {
    const auto mode = lenient != 0 ? dnsobs::ParseMode::lenient : dnsobs::ParseMode::strict;
    const dnsobs::ParseResult parsed = dnsobs::parse_query_log(std::string(csv_text), mode);
    dnsobs::Instant origin;
    if (origin_rfc3339 != nullptr) {
      origin = dnsobs::parse_rfc3339(origin_rfc3339);
    } else {
      if (parsed.queries.empty()) dnsobs::fail(Errc::empty_store, "no queries and no explicit origin");
      dnsobs::Instant first = parsed.queries.front().time;
      for (const auto& q : parsed.queries) first = std::min(first, q.time);
      origin = dnsobs::floor_to_utc_day(first);
    }
    auto store = dnsobs::sessionize(parsed.queries, dnsobs::EpochSpec{epoch_seconds, origin});
    *store_out = new dnsobs_store{std::move(store)};
    if (parse_report_out != nullptr)
      *parse_report_out = copy_string(dnsobs::json_to_text(dnsobs::parse_report_to_json(parsed)));
  });
}

dnsobs_status dnsobs_store_stats(const dnsobs_store* store, char** json_out, char** err_out) {
  if (auto st = require_args(store && json_out, err_out)) return st;
  return guarded(err_out,
                 [&] { *json_out = copy_string(dnsobs::json_to_text(dnsobs::store_stats_to_json(store->impl))); });
}

void dnsobs_store_free(dnsobs_store* store) { delete store; }

dnsobs_status dnsobs_synth_population(const char* config_json, dnsobs_store** store_out, char** query_csv_out,
                                      char** err_out) {
  if (auto st = require_args(config_json && store_out, err_out)) return st;
  return guarded(err_out, [&] {
    const auto config = dnsobs::population_config_from_json_text(config_json);
    auto population = dnsobs::generate_population(config);
    *store_out = new dnsobs_store{std::move(population.store)};
    if (query_csv_out != nullptr) *query_csv_out = copy_string(dnsobs::query_log_to_string(population.queries));
  });
}

dnsobs_status dnsobs_synth_pattern_db(const char* config_json, dnsobs_patterndb** db_out, char** err_out) {
  if (auto st = require_args(config_json && db_out, err_out)) return st;
  return guarded(err_out, [&] {
    const auto config = dnsobs::patterndb_config_from_json_text(config_json);
    *db_out = new dnsobs_patterndb{dnsobs::generate_pattern_db(config)};
  });
}

dnsobs_status dnsobs_patterndb_from_json(const char* json_text, dnsobs_patterndb** db_out, char** err_out) {
  if (auto st = require_args(json_text && db_out, err_out)) return st;
  return guarded(err_out, [&] { *db_out = new dnsobs_patterndb{dnsobs::patterndb_from_json_text(json_text)}; });
}

dnsobs_status dnsobs_patterndb_to_json(const dnsobs_patterndb* db, char** json_out, char** err_out) {
  if (auto st = require_args(db && json_out, err_out)) return st;
  return guarded(err_out, [&] { *json_out = copy_string(dnsobs::patterndb_to_json_text(db->impl)); });
}

dnsobs_status dnsobs_patterndb_uniqueness(const dnsobs_patterndb* db, char** report_out, char** err_out) {
  if (auto st = require_args(db && report_out, err_out)) return st;
  return guarded(err_out, [&] {
    *report_out = copy_string(dnsobs::json_to_text(dnsobs::to_json(dnsobs::uniqueness_report(db->impl))));
  });
}

dnsobs_status dnsobs_patterndb_match(const dnsobs_patterndb* db, const char* domains_json, char** pages_out,
                                     char** err_out) {
  if (auto st = require_args(db && domains_json && pages_out, err_out)) return st;
  return guarded(err_out, [&] {
    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(domains_json);
    } catch (const nlohmann::json::exception& e) {
      dnsobs::fail(Errc::bad_format, std::string("invalid JSON: ") + e.what());
    }
    if (!parsed.is_array()) dnsobs::fail(Errc::bad_format, "expected a JSON array of domains");
    std::set<dnsobs::DomainName> observed;
    for (const auto& d : parsed) {
      if (!d.is_string()) dnsobs::fail(Errc::bad_format, "domains must be strings");
      observed.insert(dnsobs::normalize_domain(d.get<std::string>()));
    }
    *pages_out = copy_string(dnsobs::json_to_text(nlohmann::json(db->impl.match(observed))));
  });
}

dnsobs_status dnsobs_patterndb_detect(const dnsobs_patterndb* db, const char* query_csv, int64_t window_seconds,
                                      char** events_out, char** err_out) {
  if (auto st = require_args(db && query_csv && events_out, err_out)) return st;
  return guarded(err_out, [&] {
    const auto parsed = dnsobs::parse_query_log(std::string(query_csv), dnsobs::ParseMode::strict);
    const auto events = dnsobs::detect_stream(db->impl, parsed.queries, window_seconds);
    *events_out = copy_string(dnsobs::json_to_text(dnsobs::to_json(events)));
  });
}

void dnsobs_patterndb_free(dnsobs_patterndb* db) { delete db; }

dnsobs_status dnsobs_link_evaluate(const dnsobs_store* store, double alpha, int threads, char** report_out,
                                   char** err_out) {
  if (auto st = require_args(store && report_out, err_out)) return st;
  return guarded(err_out, [&] {
    const auto evaluation = dnsobs::evaluate_linkage(store->impl, alpha, threads);
    *report_out = copy_string(dnsobs::json_to_text(dnsobs::to_json(evaluation)));
  });
}

dnsobs_status dnsobs_link_restrict(const dnsobs_store* store, int64_t top_n, dnsobs_store** restricted_out,
                                   char** report_out, char** err_out) {
  if (auto st = require_args(store && restricted_out, err_out)) return st;
  return guarded(err_out, [&] {
    if (top_n < 1) dnsobs::fail(Errc::invalid_argument, "top_n must be >= 1");
    auto result = dnsobs::restrict_vocabulary(store->impl, static_cast<std::size_t>(top_n));
    *restricted_out = new dnsobs_store{std::move(result.store)};
    if (report_out != nullptr)
      *report_out = copy_string(dnsobs::json_to_text(nlohmann::json{
          {"top_n", top_n}, {"kept_domains", result.kept_domains}, {"dropped_sessions", result.dropped_sessions}}));
  });
}

dnsobs_status dnsobs_link_sweep(const char* query_csv, const char* origin_rfc3339, const int64_t* epoch_seconds,
                                size_t n_durations, double alpha, int threads, char** report_out, char** err_out) {
  if (auto st = require_args(query_csv && epoch_seconds && n_durations > 0 && report_out, err_out)) return st;
  return guarded(err_out, [&] {
    const auto parsed = dnsobs::parse_query_log(std::string(query_csv), dnsobs::ParseMode::strict);
    dnsobs::Instant origin;
    if (origin_rfc3339 != nullptr) {
      origin = dnsobs::parse_rfc3339(origin_rfc3339);
    } else {
      if (parsed.queries.empty()) dnsobs::fail(Errc::empty_store, "no queries and no explicit origin");
      dnsobs::Instant first = parsed.queries.front().time;
      for (const auto& q : parsed.queries) first = std::min(first, q.time);
      origin = dnsobs::floor_to_utc_day(first);
    }
    const std::vector<std::int64_t> durations(epoch_seconds, epoch_seconds + n_durations);
    const auto points = dnsobs::epoch_sweep(parsed.queries, origin, durations, alpha, threads);
    *report_out = copy_string(dnsobs::json_to_text(dnsobs::sweep_to_json(points, origin, alpha)));
  });
}

dnsobs_status dnsobs_rangequery_bench(const dnsobs_patterndb* db, const char* strategy, int64_t n_dummies,
                                      int64_t trials, uint64_t seed, int threads, char** report_out,
                                      char** err_out) {
  if (auto st = require_args(db && strategy && report_out, err_out)) return st;
  return guarded(err_out, [&] {
    if (n_dummies < 0) dnsobs::fail(Errc::invalid_argument, "dummies must be >= 0");
    if (trials < 1) dnsobs::fail(Errc::invalid_argument, "trials must be >= 1");
    const auto parsed_strategy = dnsobs::parse_dummy_strategy(strategy);
    const auto pool = db->impl.domain_universe();
    const auto report =
        dnsobs::defense_benchmark(db->impl, parsed_strategy, static_cast<std::size_t>(n_dummies),
                                  static_cast<std::size_t>(trials), pool, seed, threads);
    *report_out = copy_string(dnsobs::json_to_text(dnsobs::to_json(report)));
  });
}

dnsobs_status dnsobs_push_rank(const dnsobs_store* store, char** ranking_out, char** err_out) {
  if (auto st = require_args(store && ranking_out, err_out)) return st;
  return guarded(err_out, [&] {
    *ranking_out = copy_string(dnsobs::json_to_text(dnsobs::to_json(dnsobs::rank_domains(store->impl))));
  });
}

dnsobs_status dnsobs_push_coverage_csv(const dnsobs_store* store, const int64_t* ks, size_t n_ks, char** csv_out,
                                       char** err_out) {
  if (auto st = require_args(store && ks && n_ks > 0 && csv_out, err_out)) return st;
  return guarded(err_out, [&] {
    std::vector<std::size_t> k_values;
    k_values.reserve(n_ks);
    for (std::size_t i = 0; i < n_ks; ++i) {
      if (ks[i] < 1) dnsobs::fail(Errc::invalid_argument, "k values must be >= 1");
      k_values.push_back(static_cast<std::size_t>(ks[i]));
    }
    const auto ranking = dnsobs::rank_domains(store->impl);
    const auto curve = dnsobs::coverage_curve(ranking, store->impl, k_values);
    *csv_out = copy_string(dnsobs::coverage_curve_csv(curve));
  });
}

dnsobs_status dnsobs_push_bandwidth(int64_t k, int64_t record_size_bytes, double mean_change_interval_seconds,
                                    char** report_out, char** err_out) {
  if (auto st = require_args(report_out != nullptr, err_out)) return st;
  return guarded(err_out, [&] {
    if (k < 1 || record_size_bytes < 1)
      dnsobs::fail(Errc::invalid_argument, "k and record size must be >= 1");
    const dnsobs::PushConfig config{static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(record_size_bytes),
                                    mean_change_interval_seconds};
    *report_out = copy_string(dnsobs::json_to_text(dnsobs::bandwidth_to_json(config)));
  });
}

}  // extern "C"
