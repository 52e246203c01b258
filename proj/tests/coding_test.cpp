#include <bit>
#include <random>

#include <doctest.h>

#include "omegalab/coding.hpp"
#include "omegalab/corpus.hpp"
#include "oracles.hpp"

using namespace omegalab;

namespace {

ApproxSequence approx(std::initializer_list<const char*> values) {
  std::vector<Dyadic> v;
  for (const char* s : values) v.push_back(Dyadic::parse(s));
  return ApproxSequence(std::move(v));
}

// Flip counts read off the binary strings of consecutive stages.
std::int64_t flips_oracle(const ApproxSequence& a, std::int64_t i) {
  std::int64_t count = 0;
  for (std::size_t s = 1; s < a.stages(); ++s) {
    const auto before = oracle::bits(oracle::q(a.at(s - 1)), i);
    const auto after = oracle::bits(oracle::q(a.at(s)), i);
    if (before.back() == '0' && after.back() == '1') ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("approximation sequences") {
  CHECK_THROWS_AS(ApproxSequence(std::vector<Dyadic>{}), Error);
  CHECK_THROWS_AS(approx({"1/2", "1/4"}), Error);
  CHECK_THROWS_AS(approx({"0", "3/2"}), Error);
  CHECK(approx({"0", "3/8"}).precision() == 3);
  CHECK(ApproxSequence{}.stages() == 1);
}

TEST_CASE("flip counts") {
  const auto a = approx({"0", "1/2", "1/2", "3/4"});
  CHECK(flip_counts(a, 1) == 1);
  CHECK(flip_counts(a, 2) == 1);
  const auto b = approx({"0"});
  for (std::int64_t i = 1; i <= 4; ++i) CHECK(flip_counts(b, i) == 0);
  const auto c = approx({"0", "1/4", "1/2"});
  CHECK(flip_counts(c, 1) == 1);
  CHECK(flip_counts(c, 2) == 1);
  CHECK_THROWS_AS(flip_counts(approx({"0", "1"}), 1), Error);
  CHECK_THROWS_AS(flip_counts(a, 0), Error);
}

TEST_CASE("encoding") {
  CHECK(encode_set(approx({"0", "1/2", "1/2", "3/4"}), 2).bits == "110");
  CHECK(encode_set(approx({"0"}), 3).bits == "0000000");
  CHECK(encode_set(approx({"0"}), 3).digits() == 3);
  CHECK(encode_set(approx({"0"}), 0).bits.empty());
  // Blocks start at offsets 0, 1, 3, 7.
  CHECK(block_of(1) == 1);
  CHECK(block_of(2) == 2);
  CHECK(block_of(4) == 3);
  CHECK(block_of(7) == 3);
  CHECK(block_of(8) == 4);
  CHECK_THROWS_AS(block_of(0), Error);
  CHECK_THROWS_AS(encode_set(approx({"0"}), 31), Error);
}

TEST_CASE("decoding examples") {
  for (const auto& a : {approx({"0", "1/2", "1/2", "3/4"}), approx({"0"}), approx({"0", "1/4", "1/2"})}) {
    for (std::int64_t n = 1; n <= 4; ++n) {
      const auto set = encode_set(a, n);
      SetReader reader(set);
      const auto r = decode_real(reader, a, n);
      CHECK(r.prefix == prefix(a.final_value(), n));
      CHECK(r.set_bits_read <= (std::uint64_t{1} << n) - 1);
    }
  }
  const auto zero = approx({"0"});
  const CodedSet blank{"000"};
  SetReader reader(blank);
  CHECK(decode_real(reader, zero, 2).prefix == 0);

  const auto a = approx({"0", "1/2", "1/2", "3/4"});
  const CodedSet too_many{"111"};
  SetReader r1(too_many);
  CHECK_THROWS_AS(decode_real(r1, a, 2), Error);
  const CodedSet gap{"101"};
  SetReader r2(gap);
  CHECK_THROWS_AS(decode_real(r2, a, 2), Error);
  SetReader r3(gap);
  CHECK_THROWS_AS(decode_real(r3, a, 3), Error);  // set too short
}

TEST_CASE("digits from the real itself") {
  const auto a = approx({"0", "1/4", "1/2", "5/8", "3/4", "13/16"});
  const auto set = encode_set(a, 4);
  PrefixOracle one(a.final_value(), 1);
  CHECK(set_from_real(one, a, 1) == (set.bits[0] == '1'));
  CHECK(one.highest() == 1);
  PrefixOracle three(a.final_value(), 3);
  set_from_real(three, a, 5);
  CHECK(three.highest() <= 3);
  PrefixOracle stingy(a.final_value(), 2);
  CHECK_THROWS_AS(set_from_real(stingy, a, 5), Error);
}

TEST_CASE("round trips over random approximations") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng = item_rng(77, i);
    const auto a = random_approximation(rng, 64, 12);
    for (std::int64_t j = 1; j <= 12; ++j) CHECK(flip_counts(a, j) == flips_oracle(a, j));
    const std::int64_t n = 1 + static_cast<std::int64_t>(i % 10);
    const auto set = encode_set(a, n);
    REQUIRE(set.bits.size() == (std::size_t{1} << n) - 1);
    SetReader reader(set);
    const auto r = decode_real(reader, a, n);
    CHECK(r.prefix == oracle::prefix(oracle::q(a.final_value()), n));
    CHECK(reader.highest() <= (std::uint64_t{1} << n) - 1);
    for (std::uint64_t pos = 1; pos <= set.bits.size(); ++pos) {
      PrefixOracle o(a.final_value(), std::bit_width(pos));
      CHECK(set_from_real(o, a, pos) == (set.bits[pos - 1] == '1'));
    }
  }
}
