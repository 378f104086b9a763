#include "dnsobs/errors.hpp"

namespace dnsobs {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::empty_input: return "EmptyInput";
    case Errc::empty_label: return "EmptyLabel";
    case Errc::whitespace_in_domain: return "WhitespaceInDomain";
    case Errc::missing_column: return "MissingColumn";
    case Errc::extra_column: return "ExtraColumn";
    case Errc::bad_timestamp: return "BadTimestamp";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::unsorted_input: return "UnsortedInput";
    case Errc::empty_trace: return "EmptyTrace";
    case Errc::empty_db: return "EmptyDb";
    case Errc::duplicate_page: return "DuplicatePage";
    case Errc::degenerate_training: return "DegenerateTraining";
    case Errc::empty_epoch: return "EmptyEpoch";
    case Errc::not_enough_epochs: return "NotEnoughEpochs";
    case Errc::pool_exhausted: return "PoolExhausted";
    case Errc::not_enough_patterns: return "NotEnoughPatterns";
    case Errc::empty_store: return "EmptyStore";
    case Errc::bad_config: return "BadConfig";
    case Errc::bad_format: return "BadFormat";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace dnsobs
