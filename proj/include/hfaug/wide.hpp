#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace hfaug {

// Amounts are wei. A single transfer can exceed 2^64 (18.45 ether), so
// amounts and their sums are carried in 128-bit integers and converted to
// floating point only when a finished feature value is emitted.
using Wei = unsigned __int128;
using SignedWei = __int128;

std::optional<Wei> parse_wei(std::string_view text);

std::string wei_to_string(Wei v);
std::string signed_wei_to_string(SignedWei v);

inline double wei_to_double(Wei v) { return static_cast<double>(v); }
inline double signed_wei_to_double(SignedWei v) { return static_cast<double>(v); }

}  // namespace hfaug
