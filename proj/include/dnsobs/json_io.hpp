#ifndef DNSOBS_JSON_IO_HPP
#define DNSOBS_JSON_IO_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dnsobs/fingerprint.hpp"
#include "dnsobs/linker.hpp"
#include "dnsobs/log.hpp"
#include "dnsobs/model.hpp"
#include "dnsobs/pushdns.hpp"
#include "dnsobs/rangequery.hpp"
#include "dnsobs/synth.hpp"

namespace dnsobs {

// Serialized forms. Object keys come out sorted and doubles print
// shortest-round-trip, so identical values always dump to identical bytes.

nlohmann::json store_to_json(const SessionStore& store);
std::string store_to_json_text(const SessionStore& store);
SessionStore store_from_json(const nlohmann::json& j);       // throws Errc::bad_format
SessionStore store_from_json_text(const std::string& text);

nlohmann::json patterndb_to_json(const PatternDB& db);
std::string patterndb_to_json_text(const PatternDB& db);
PatternDB patterndb_from_json(const nlohmann::json& j);
PatternDB patterndb_from_json_text(const std::string& text);

// Config files are strict: an unknown key is an error, not a silent ignore.
PopulationConfig population_config_from_json_text(const std::string& text);
nlohmann::json population_config_to_json(const PopulationConfig& config);
PatternDbConfig patterndb_config_from_json_text(const std::string& text);
nlohmann::json patterndb_config_to_json(const PatternDbConfig& config);

nlohmann::json to_json(const UniquenessReport& report);
nlohmann::json to_json(const LinkageEvaluation& evaluation);
nlohmann::json to_json(const BenchmarkReport& report);
nlohmann::json to_json(const PopularityRanking& ranking);
nlohmann::json to_json(std::span<const DetectionEvent> events);
nlohmann::json sweep_to_json(std::span<const SweepPoint> points, Instant origin, double alpha);
nlohmann::json parse_report_to_json(const ParseResult& result);
nlohmann::json store_stats_to_json(const SessionStore& store);
nlohmann::json bandwidth_to_json(const PushConfig& config);

std::string coverage_curve_csv(std::span<const std::pair<std::size_t, CoverageResult>> curve);

/// dump(2) with a trailing newline; the one serialization used for files.
std::string json_to_text(const nlohmann::json& j);

}  // namespace dnsobs

#endif
