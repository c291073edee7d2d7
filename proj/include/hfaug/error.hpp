#pragma once

#include <stdexcept>
#include <string>

namespace hfaug {

enum class Errc {
  malformed_row,
  unknown_edge_type,
  negative_amount,
  dangling_endpoint,
  call_into_eoa,
  insufficient_candidates,
  unknown_account,
  kind_mismatch,
  syntax_error,
  anchor_out_of_range,
  kind_incompatible,
  empty_corpus,
  single_class_data,
  dimension_mismatch,
  length_mismatch,
  empty_input,
  too_few_samples,
  division_by_zero,
  io_error,
  config_error,
  internal_error,
};

const char* errc_name(Errc c);

/// Exception carrying a machine-readable error code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace hfaug
