#include <doctest.h>

#include <string>

#include "hfaug/rng.hpp"
#include "hfaug/wide.hpp"

using namespace hfaug;

TEST_CASE("parse_wei handles plain integers") {
  CHECK(*parse_wei("0") == Wei{0});
  CHECK(*parse_wei("1") == Wei{1});
  CHECK(*parse_wei("1000000000000000000") == Wei{1000000000000000000ULL});
}

TEST_CASE("parse_wei carries values beyond 64 bits") {
  // 2^64 and 2^64 + 5 do not fit uint64_t
  auto v = parse_wei("18446744073709551616");
  REQUIRE(v.has_value());
  CHECK(*v == Wei{1} << 64);
  CHECK(*parse_wei("18446744073709551621") == (Wei{1} << 64) + 5);
  CHECK(wei_to_string(*parse_wei("18446744073709551616")) == "18446744073709551616");
}

TEST_CASE("parse_wei accepts the full 128-bit range and rejects beyond") {
  const std::string max128 = "340282366920938463463374607431768211455";
  auto v = parse_wei(max128);
  REQUIRE(v.has_value());
  CHECK(*v == ~Wei{0});
  CHECK(wei_to_string(*v) == max128);
  CHECK_FALSE(parse_wei("340282366920938463463374607431768211456").has_value());
  CHECK_FALSE(parse_wei("999999999999999999999999999999999999999999").has_value());
}

TEST_CASE("parse_wei rejects junk") {
  CHECK_FALSE(parse_wei("").has_value());
  CHECK_FALSE(parse_wei("-5").has_value());
  CHECK_FALSE(parse_wei("+5").has_value());
  CHECK_FALSE(parse_wei("12a").has_value());
  CHECK_FALSE(parse_wei(" 12").has_value());
  CHECK_FALSE(parse_wei("0x10").has_value());
  CHECK_FALSE(parse_wei("1.5").has_value());
}

TEST_CASE("wei string round trip on random values") {
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    Wei v = (Wei{rng.next()} << 64) | rng.next();
    if (i % 3 == 0) v >>= rng.index(127);
    auto back = parse_wei(wei_to_string(v));
    REQUIRE(back.has_value());
    CHECK(*back == v);
  }
}

TEST_CASE("signed_wei_to_string") {
  CHECK(signed_wei_to_string(0) == "0");
  CHECK(signed_wei_to_string(42) == "42");
  CHECK(signed_wei_to_string(-42) == "-42");
  SignedWei big = -(static_cast<SignedWei>(Wei{1} << 100));
  CHECK(signed_wei_to_string(big) == "-1267650600228229401496703205376");
}
