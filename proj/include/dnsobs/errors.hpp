#ifndef DNSOBS_ERRORS_HPP
#define DNSOBS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dnsobs {

enum class Errc {
  invalid_argument,
  empty_input,
  empty_label,
  whitespace_in_domain,
  missing_column,
  extra_column,
  bad_timestamp,
  out_of_range,
  unsorted_input,
  empty_trace,
  empty_db,
  duplicate_page,
  degenerate_training,
  empty_epoch,
  not_enough_epochs,
  pool_exhausted,
  not_enough_patterns,
  empty_store,
  bad_config,
  bad_format,
  io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace dnsobs

#endif
