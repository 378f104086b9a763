#include "dnsobs/log.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "dnsobs/errors.hpp"

namespace dnsobs {

namespace {

constexpr const char* kHeader = "timestamp,user,domain";

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

DnsQuery parse_record(const std::string& line, std::size_t line_no) {
  const auto first = line.find(',');
  if (first == std::string::npos)
    fail(Errc::missing_column, "line " + std::to_string(line_no) + ": expected 3 columns, got 1");
  const auto second = line.find(',', first + 1);
  if (second == std::string::npos)
    fail(Errc::missing_column, "line " + std::to_string(line_no) + ": expected 3 columns, got 2");
  if (line.find(',', second + 1) != std::string::npos)
    fail(Errc::extra_column, "line " + std::to_string(line_no) + ": more than 3 columns");

  DnsQuery q;
  try {
    q.time = parse_rfc3339(std::string_view(line).substr(0, first));
    q.user = line.substr(first + 1, second - first - 1);
    if (q.user.empty()) fail(Errc::empty_input, "empty user pseudonym");
    q.domain = normalize_domain(std::string_view(line).substr(second + 1));
  } catch (const Error& e) {
    throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
  }
  return q;
}

}  // namespace

ParseResult parse_query_log(std::istream& in, ParseMode mode) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    if (!seen_content) {
      seen_content = true;
      if (line == kHeader) continue;  // header is recognized but not required
    }
    try {
      result.queries.push_back(parse_record(line, line_no));
    } catch (const Error& e) {
      if (mode == ParseMode::strict) throw;
      result.skipped.push_back(ParseDiagnostic{line_no, e.what()});
    }
  }
  return result;
}

ParseResult parse_query_log(const std::string& text, ParseMode mode) {
  std::istringstream in(text);
  return parse_query_log(in, mode);
}

void write_query_log(std::span<const DnsQuery> queries, std::ostream& out) {
  out << kHeader << '\n';
  for (const auto& q : queries) out << format_rfc3339(q.time) << ',' << q.user << ',' << q.domain.value << '\n';
}

std::string query_log_to_string(std::span<const DnsQuery> queries) {
  std::ostringstream out;
  write_query_log(queries, out);
  return out.str();
}

}  // namespace dnsobs
