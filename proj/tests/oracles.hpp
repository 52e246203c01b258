#pragma once

// Reference implementations over rationals. They share no code with the
// library beyond the Dyadic type used to hand values in and out.

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "omegalab/dyadic.hpp"

namespace oracle {

using Q = mpq_class;
using Z = mpz_class;

inline Q pow2(std::int64_t k) {
  Q out(1);
  if (k >= 0) mpq_mul_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(k));
  else mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(-k));
  return out;
}

inline Q q(const omegalab::Dyadic& x) {
  Q out(x.mantissa());
  return out * pow2(-x.scale());
}

inline Z floor(const Q& x) {
  Z out;
  mpz_fdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

/// floor(x 2^m)
inline Z prefix(const Q& x, std::int64_t m) { return floor(x * pow2(m)); }

inline int digit(const Q& x, std::int64_t i) {
  const Z p = prefix(x, i);
  return mpz_odd_p(p.get_mpz_t()) ? 1 : 0;
}

/// Dyadic from a rational with a power-of-two denominator.
inline omegalab::Dyadic dyadic(const Q& x) {
  Q y = x;
  y.canonicalize();
  const auto s = static_cast<std::int64_t>(mpz_sizeinbase(y.get_den_mpz_t(), 2)) - 1;
  return omegalab::Dyadic(y.get_num(), s);
}

/// Smallest m >= 1 (or 0 for the integer part) with differing prefixes.
inline std::int64_t leftmost_change(const Q& a, const Q& b) {
  if (floor(a) != floor(b)) return 0;
  for (std::int64_t m = 1;; ++m) {
    if (prefix(a, m) != prefix(b, m)) return m;
  }
}

/// Next multiple of 2^-d strictly above x, minus x.
inline Q least_increment(const Q& x, std::int64_t d) { return Q(prefix(x, d) + 1) * pow2(-d) - x; }

/// Greedy truncation T(x, c_t) by repeated subtraction.
inline Q truncate(Q x, std::size_t t, const std::vector<std::int64_t>& constants) {
  Q kept(0);
  for (std::size_t i = 0; i <= t; ++i) {
    const Q unit = pow2(-constants[i]);
    while (x >= unit) {
      x -= unit;
      kept += unit;
    }
  }
  return kept;
}

struct LoadStep {
  int mover;  // 0 alpha, 1 beta
  std::int64_t k;
  std::int64_t demand;
  Q gamma;
};

/// Straight simulation of the least-effort h-load on (lo, hi] with alpha
/// first. Counters hold alpha and beta in units of 2^-hi.
template <class H>
std::vector<LoadStep> hload(const H& h, std::int64_t lo, std::int64_t hi, Q gamma = 0) {
  const std::int64_t n = hi - lo;
  const Z full = (Z(1) << static_cast<mp_bitcnt_t>(n)) - 1;
  Z counter[2] = {0, 0};
  std::vector<LoadStep> steps;
  const Q unit = pow2(-hi);
  for (int mover = 0; counter[0] != full || counter[1] != full; mover ^= 1) {
    const Q before = Q(counter[mover]) * unit;
    counter[mover] += 1;
    const Q after = Q(counter[mover]) * unit;
    const std::int64_t k = leftmost_change(before, after);
    const std::int64_t d = k == 0 ? 0 : h(k);
    gamma += least_increment(gamma, d);
    steps.push_back({mover, k, d, gamma});
  }
  return steps;
}

/// Binary digits 1..m as a string.
inline std::string bits(const Q& x, std::int64_t m) {
  std::string out;
  for (std::int64_t i = 1; i <= m; ++i) out += digit(x, i) ? '1' : '0';
  return out;
}

}  // namespace oracle
