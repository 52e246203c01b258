#include <doctest.h>

#include "omegalab/coding.hpp"
#include "omegalab/corpus.hpp"
#include "omegalab/machines.hpp"

using namespace omegalab;

// The Omega surrogate coded as a set, read back through the set alone, and
// reduced to itself with the recorded use table.
TEST_CASE("coding composed with reductions") {
  for (const auto& inst : reduction_corpus(23, 60)) {
    const std::int64_t n = std::min<std::int64_t>(inst.g.size(), 8);
    const auto set = encode_set(inst.omega, n);
    SetReader reader(set);
    const auto decoded = decode_real(reader, inst.omega, n);
    const auto& w = inst.omega.final_value();
    for (std::int64_t m = 1; m <= n; ++m) {
      const auto via_omega = reduce_real(m, prefix_bits(w, m + inst.g.at(m)), inst.omega, inst.omega, inst.g);
      CHECK(via_omega == prefix(w, m));
    }
    CHECK(decoded.prefix == prefix(w, n));
    CHECK(decoded.set_bits_read <= (std::uint64_t{1} << n) - 1);
  }
}
