#include "hfaug/error.hpp"

namespace hfaug {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::malformed_row: return "MalformedRow";
    case Errc::unknown_edge_type: return "UnknownEdgeType";
    case Errc::negative_amount: return "NegativeAmount";
    case Errc::dangling_endpoint: return "DanglingEndpoint";
    case Errc::call_into_eoa: return "CallIntoEOA";
    case Errc::insufficient_candidates: return "InsufficientCandidates";
    case Errc::unknown_account: return "UnknownAccount";
    case Errc::kind_mismatch: return "KindMismatch";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::anchor_out_of_range: return "AnchorOutOfRange";
    case Errc::kind_incompatible: return "KindIncompatible";
    case Errc::empty_corpus: return "EmptyCorpus";
    case Errc::single_class_data: return "SingleClassData";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::empty_input: return "Empty";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::division_by_zero: return "DivisionByZero";
    case Errc::io_error: return "IoError";
    case Errc::config_error: return "ConfigError";
    case Errc::internal_error: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace hfaug
