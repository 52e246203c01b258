#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "omegalab/dyadic.hpp"
#include "omegalab/usefn.hpp"

namespace omegalab {

/// x = sum_i n_i 2^-c_i + remainder with n_{i+1} 2^-c_{i+1} < 2^-c_i and
/// remainder < 2^-c_last.
struct Decomposition {
  std::vector<BigInt> coefficients;
  Dyadic remainder;
};

Decomposition greedy_decomposition(const Dyadic& x, std::span<const std::int64_t> constants);

/// T(x, c_t): the part of x carried by the first t+1 terms of the greedy
/// decomposition over `constants` (strictly increasing, t < size).
Dyadic truncate(const Dyadic& x, std::size_t t, std::span<const std::int64_t> constants);

/// floor(x 2^c) 2^-c, which T(x, c_t) reduces to for c = c_t.
Dyadic truncate_at(const Dyadic& x, std::int64_t c);

struct TruncatedSums {
  std::size_t k = 0;
  std::vector<Dyadic> values;  // S_k(0), ..., S_k(k-1)

  /// S_k(i) with S_k(-1) = 0.
  Dyadic at(std::ptrdiff_t i) const;
};

/// S_k(0) = T(|I_k| 2^-c_k, c_{k-1}),
/// S_k(i) = T(|I_{k-i}| 2^-c_{k-i} + S_k(i-1), c_{k-i-1}).
/// Requires 1 <= k < sig.length().
TruncatedSums truncated_sums(const Signature& sig, std::size_t k);

/// sum_{i<=t} |I_{k-i}| 2^-c_{k-i}.
Dyadic interval_weight(const Signature& sig, std::size_t k, std::size_t t);

struct LowerBoundReport {
  std::size_t k = 0;
  std::size_t t = 0;
  Dyadic truncated;  // S_k(t)
  Dyadic weight;     // sum_{i<=t} |I_{k-i}| 2^-c_{k-i}
  bool holds = false;
  /// S_k(t) + 1 - weight when the bound holds, weight - 1 - S_k(t) otherwise.
  Dyadic margin;
};

/// Evaluates S_k(t) >= weight - 1 exactly. Requires t < k.
LowerBoundReport lower_bound_report(const Signature& sig, std::size_t k, std::size_t t);

}  // namespace omegalab
