#include <random>

#include <doctest.h>

#include "omegalab/bounds.hpp"
#include "omegalab/corpus.hpp"
#include "oracles.hpp"

using namespace omegalab;

namespace {

Dyadic d(const char* s) { return Dyadic::parse(s); }

Signature sig3() { return Signature::of({{1, 1, 1}, {2, 2, 3}, {3, 4, 5}}); }

// S_k(i) by the recursion, evaluated with the subtraction oracle.
oracle::Q sums_oracle(const Signature& sig, std::size_t k, std::size_t i) {
  const auto cs = sig.constants();
  oracle::Q s(0);
  for (std::size_t j = 0; j <= i; ++j) {
    const auto& entry = sig[k - j];
    const oracle::Q term = oracle::Q(entry.interval.length()) * oracle::pow2(-entry.c);
    s = oracle::truncate(term + s, 0, {cs[k - j - 1]});
  }
  return s;
}

}  // namespace

TEST_CASE("greedy truncation examples") {
  const std::vector<std::int64_t> c13{1, 3};
  const auto dec = greedy_decomposition(d("5/8"), c13);
  CHECK(dec.coefficients == std::vector<BigInt>{1, 1});
  CHECK(dec.remainder == Dyadic{});
  CHECK(truncate(d("5/8"), 0, c13) == d("1/2"));
  CHECK(truncate(Dyadic{}, 1, c13) == Dyadic{});
  const std::vector<std::int64_t> c23{2, 3};
  CHECK(truncate(d("1/8"), 0, c23) == Dyadic{});
  CHECK(truncate(d("7/4"), 0, c13) == d("3/2"));
  CHECK_THROWS_AS(truncate(d("1/8"), 2, c23), Error);
  const std::vector<std::int64_t> bad{3, 2};
  CHECK_THROWS_AS(truncate(d("1/8"), 1, bad), Error);
}

TEST_CASE("truncation properties") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::int64_t> cs;
    std::int64_t c = static_cast<std::int64_t>(rng() % 3);
    for (int i = 0, n = 1 + static_cast<int>(rng() % 5); i < n; ++i) {
      cs.push_back(c);
      c += 1 + static_cast<std::int64_t>(rng() % 3);
    }
    const auto t = static_cast<std::size_t>(rng() % cs.size());
    const Dyadic x(BigInt(static_cast<unsigned long>(rng() % 4096)), static_cast<std::int64_t>(rng() % 14));
    const Dyadic y = x + Dyadic(BigInt(static_cast<unsigned long>(rng() % 64)), 8);
    const Dyadic tx = truncate(x, t, cs);
    CHECK(oracle::q(tx) == oracle::truncate(oracle::q(x), t, cs));
    CHECK(tx == truncate_at(x, cs[t]));
    CHECK(tx <= x);
    CHECK((tx == x) == (x.scale() <= cs[t]));
    CHECK(tx <= truncate(y, t, cs));
    for (std::size_t s = 0; s <= t; ++s) CHECK(truncate(tx, s, cs) == truncate(x, s, cs));
  }
}

TEST_CASE("truncated sums") {
  const auto sums = truncated_sums(sig3(), 2);
  REQUIRE(sums.values.size() == 2);
  CHECK(sums.at(-1) == Dyadic{});
  CHECK(sums.at(0) == d("1/4"));
  CHECK(sums.at(1) == d("1/2"));
  CHECK_THROWS_AS(sums.at(2), Error);

  // A single small top interval vanishes under the first truncation.
  CHECK(truncated_sums(Signature::of({{0, 1, 1}, {3, 2, 2}}), 1).at(0) == Dyadic{});
  CHECK_THROWS_AS(truncated_sums(sig3(), 0), Error);
  CHECK_THROWS_AS(truncated_sums(sig3(), 3), Error);
}

TEST_CASE("truncated sums match the oracle recursion on random signatures") {
  for (const auto& sig : signature_corpus(5, 150)) {
    const auto cs = sig.constants();
    for (std::size_t k = 1; k < sig.length(); ++k) {
      const auto sums = truncated_sums(sig, k);
      for (std::size_t i = 0; i < k; ++i) {
        CHECK(oracle::q(sums.at(static_cast<std::ptrdiff_t>(i))) == sums_oracle(sig, k, i));
        // Each S_k(i) lands on the grid of c_{k-i-1}.
        CHECK(sums.at(static_cast<std::ptrdiff_t>(i)).scale() <= cs[k - i - 1]);
      }
    }
  }
}

TEST_CASE("lower bound report") {
  const auto r = lower_bound_report(sig3(), 2, 1);
  CHECK(r.truncated == d("1/2"));
  CHECK(r.weight == d("3/4"));
  CHECK(r.holds);
  CHECK(r.margin == d("3/4"));
  const auto r0 = lower_bound_report(sig3(), 2, 0);
  CHECK(r0.holds);
  CHECK_THROWS_AS(lower_bound_report(sig3(), 2, 2), Error);
  CHECK(interval_weight(sig3(), 2, 1) == d("3/4"));
}

TEST_CASE("lower bound never fails on the random corpus") {
  for (const auto& sig : signature_corpus(9, 300)) {
    for (std::size_t k = 1; k < sig.length(); ++k) {
      for (std::size_t t = 0; t < k; ++t) {
        const auto r = lower_bound_report(sig, k, t);
        const oracle::Q lhs = sums_oracle(sig, k, t);
        oracle::Q weight(0);
        for (std::size_t i = 0; i <= t; ++i) {
          weight += oracle::Q(sig[k - i].interval.length()) * oracle::pow2(-sig[k - i].c);
        }
        CHECK(r.holds == (lhs >= weight - 1));
        CHECK(r.holds);
      }
    }
  }
}
