#ifndef DNSOBS_LOG_HPP
#define DNSOBS_LOG_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dnsobs/model.hpp"

namespace dnsobs {

// Query-log CSV: optional header "timestamp,user,domain", then one
// "RFC3339,pseudonym,domain" record per line. No quoting; domains carry no commas.

enum class ParseMode {
  strict,   // first malformed line throws, message carries the line number
  lenient,  // malformed lines are skipped and reported
};

struct ParseDiagnostic {
  std::size_t line = 0;
  std::string message;
};

struct ParseResult {
  std::vector<DnsQuery> queries;
  std::vector<ParseDiagnostic> skipped;  // populated in lenient mode only
};

ParseResult parse_query_log(std::istream& in, ParseMode mode);
ParseResult parse_query_log(const std::string& text, ParseMode mode);

/// Writes the header plus one line per query.
void write_query_log(std::span<const DnsQuery> queries, std::ostream& out);
std::string query_log_to_string(std::span<const DnsQuery> queries);

}  // namespace dnsobs

#endif
