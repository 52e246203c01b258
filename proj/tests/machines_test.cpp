#include <algorithm>
#include <random>

#include <doctest.h>

#include "omegalab/corpus.hpp"
#include "omegalab/machines.hpp"
#include "oracles.hpp"

using namespace omegalab;

namespace {

ApproxSequence approx(std::initializer_list<const char*> values) {
  std::vector<Dyadic> v;
  for (const char* s : values) v.push_back(Dyadic::parse(s));
  return ApproxSequence(std::move(v));
}

bool prefix_free(const std::vector<std::string>& words) {
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (i != j && words[j].rfind(words[i], 0) == 0) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("kc examples") {
  KCState whole;
  CHECK(kc_alloc(whole, 0).empty());
  CHECK(whole.free().empty());

  KCState s;
  CHECK(kc_alloc(s, 2) == "00");
  std::vector<std::string> free;
  for (const auto& [len, w] : s.free()) free.push_back(w);
  CHECK(free == std::vector<std::string>{"1", "01"});

  KCState t;
  CHECK(kc_alloc(t, 1) == "0");
  CHECK(kc_alloc(t, 1) == "1");
  CHECK_THROWS_WITH_AS(kc_alloc(t, 1), doctest::Contains("capacity exceeded"), Error);
  CHECK(t.remaining() == Dyadic{});
}

TEST_CASE("kc allocator properties") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    KCState state;
    std::vector<std::string> words;
    oracle::Q used(0);
    for (int q = 0; q < 30; ++q) {
      const auto len = static_cast<std::size_t>(rng() % 9);
      const bool room = oracle::pow2(-static_cast<std::int64_t>(len)) <= 1 - used;
      CHECK(state.fits(len) == room);
      if (!room) {
        CHECK_THROWS_AS(kc_alloc(state, len), Error);
        continue;
      }
      const auto w = kc_alloc(state, len);
      CHECK(w.size() == len);
      words.push_back(w);
      used += oracle::pow2(-static_cast<std::int64_t>(len));
      CHECK(oracle::q(state.assigned_weight()) == used);
      CHECK(oracle::q(state.remaining()) == 1 - used);
      CHECK(state.invariants_hold());
      std::vector<std::string> all = words;
      for (const auto& [l, f] : state.free()) all.push_back(f);
      CHECK(prefix_free(all));
    }
  }
}

TEST_CASE("reduction tables") {
  std::vector<std::int64_t> twice;
  for (int n = 1; n <= 6; ++n) twice.push_back(2 * n);
  const auto omega = approx({"0", "1/2^3", "5/2^4", "11/2^5"});
  const std::vector<Enumeration> a{{3, 1}, {1, 2}};
  const auto tables = build_reduction(a, UseTable::from(twice), omega);
  CHECK(tables.threshold == 0);
  REQUIRE(tables.requests.size() == 2);
  CHECK(tables.requests[0].n == 3);
  CHECK(tables.requests[0].length == 6);
  CHECK(tables.requests[0].described == "001000");
  CHECK(tables.requests[0].codeword.size() == 6);
  CHECK(tables.request_weight < Dyadic(1));
  CHECK(tables.machine.invariants_hold());

  CHECK_THROWS_AS(build_reduction({}, UseTable::from({0, 0, 0}), omega), Error);
  CHECK_THROWS_AS(build_reduction({{1, 2}, {2, 1}}, UseTable::from(twice), omega), Error);
  CHECK_THROWS_AS(build_reduction({{1, 9}}, UseTable::from(twice), omega), Error);
  CHECK_THROWS_AS(build_reduction({{1, 0}, {1, 1}}, UseTable::from(twice), omega), Error);
  CHECK_THROWS_AS(build_reduction({{7, 0}}, UseTable::from(twice), omega), Error);

  // Threshold: the least c with sum_{n > c} 2^-g(n) < 1.
  const auto small = UseTable::from({0, 1, 1, 3, 3});
  const auto t2 = build_reduction({}, small, omega);
  oracle::Q tail(0);
  for (int n = 5; n > t2.threshold; --n) tail += oracle::pow2(-small.at(n));
  CHECK(tail < 1);
  CHECK(tail + oracle::pow2(-small.at(t2.threshold)) >= 1);
}

TEST_CASE("membership from an Omega prefix") {
  std::vector<std::int64_t> g{2, 3, 4, 5};
  const auto omega = approx({"0", "1/4", "3/8", "7/16", "15/32"});
  // 2 enters at stage 1, before its 3-digit prefix settles at stage 2.
  const std::vector<Enumeration> a{{2, 1}};
  const auto tables = build_reduction(a, UseTable::from(g), omega);
  const auto& final_value = omega.final_value();
  CHECK(decide_member(2, prefix_bits(final_value, 3), tables, a, omega) == 1);
  CHECK(decide_member(3, prefix_bits(final_value, 4), tables, a, omega) == 0);
  CHECK(bad_arguments(tables, omega).empty());
  CHECK_THROWS_AS(decide_member(2, "11", tables, a, omega), Error);
  CHECK_THROWS_AS(decide_member(2, "111", tables, a, omega), Error);
}

TEST_CASE("solovay ledger") {
  const auto g = UseTable::from({1, 2, 3});
  const auto one = solovay_items(approx({"0", "1/2"}), approx({"0", "1/4"}), g);
  REQUIRE(one.items.size() == 1);
  CHECK(one.items[0].digit == 1);
  CHECK(one.items[0].string == "01");
  CHECK(one.weight == Dyadic::parse("1/4"));
  CHECK(one.within_bound());
  const auto none = solovay_items(approx({"1/4", "1/4"}), approx({"0", "1/4"}), g);
  CHECK(none.items.empty());
  CHECK(none.weight == Dyadic{});
  CHECK_THROWS_AS(solovay_items(approx({"0"}), approx({"0", "1/4"}), g), Error);
}

TEST_CASE("real reductions") {
  const auto omega = approx({"0", "1/8", "1/2", "5/8", "11/16"});
  const auto g = UseTable::from({1, 1, 2, 2});
  const auto& w = omega.final_value();
  for (std::int64_t n = 1; n <= 4; ++n) {
    CHECK(reduce_real(n, prefix_bits(w, n + g.at(n)), omega, omega, g) == prefix(w, n));
  }
  CHECK_THROWS_AS(reduce_real(1, "1", omega, omega, g), Error);
  CHECK_THROWS_AS(reduce_real(1, "11", omega, omega, g), Error);
}

TEST_CASE("reduction corpus") {
  for (const auto& inst : reduction_corpus(19, 150)) {
    const auto tables = build_reduction(inst.enumeration, inst.g, inst.omega);
    CHECK(oracle::q(tables.request_weight) < 1);
    const auto bad = bad_arguments(tables, inst.omega);
    const auto& w = inst.omega.final_value();
    for (std::int64_t n = tables.threshold + 1; n <= inst.g.size(); ++n) {
      if (std::find(bad.begin(), bad.end(), n) != bad.end()) continue;
      bool member = false;
      for (const auto& e : inst.enumeration) member = member || e.n == n;
      CHECK(decide_member(n, prefix_bits(w, inst.g.at(n)), tables, inst.enumeration, inst.omega) == member);
    }
    const auto ledger = solovay_items(inst.alpha, inst.omega, inst.g);
    oracle::Q bound(0), weight(0);
    for (std::int64_t n = 1; n <= inst.g.size(); ++n) bound += oracle::pow2(-inst.g.at(n));
    for (const auto& item : ledger.items) weight += oracle::pow2(-static_cast<std::int64_t>(item.string.size()));
    CHECK(oracle::q(ledger.weight) == weight);
    CHECK(weight <= bound);
    for (const auto& item : ledger.items) {
      const auto before = oracle::q(inst.alpha.at(item.index));
      const auto after = oracle::q(inst.alpha.at(item.index + 1));
      CHECK(item.digit == oracle::leftmost_change(before, after));
      CHECK(item.string.size() == static_cast<std::size_t>(item.digit + inst.g.at(item.digit)));
    }
    CHECK(bad_items(ledger, inst.omega).size() <= ledger.items.size());
  }
}
