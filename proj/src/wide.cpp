#include "hfaug/wide.hpp"

#include <algorithm>

namespace hfaug {

std::optional<Wei> parse_wei(std::string_view text) {
  if (text.empty()) return std::nullopt;
  constexpr Wei kMax = ~Wei{0};
  Wei value = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') return std::nullopt;
    Wei digit = static_cast<Wei>(ch - '0');
    if (value > (kMax - digit) / 10) return std::nullopt;  // overflow
    value = value * 10 + digit;
  }
  return value;
}

std::string wei_to_string(Wei v) {
  if (v == 0) return "0";
  std::string digits;
  while (v > 0) {
    digits.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
    v /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

std::string signed_wei_to_string(SignedWei v) {
  if (v >= 0) return wei_to_string(static_cast<Wei>(v));
  return "-" + wei_to_string(static_cast<Wei>(-v));
}

}  // namespace hfaug
