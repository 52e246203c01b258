#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace omegalab {

using BigInt = mpz_class;

/// Thrown on violated preconditions of the exact-arithmetic layer and the
/// modules built on it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary digit index. Digit i >= 1 carries weight 2^-i; index 0 stands for
/// "the integer part" when reported by leftmost_change.
struct Position {
  std::int64_t index = 0;

  static constexpr Position integer_part() { return Position{0}; }
  constexpr bool is_integer_part() const { return index == 0; }
  friend constexpr auto operator<=>(Position, Position) = default;
};

/// Exact nonnegative dyadic rational mantissa * 2^-scale.
///
/// Always canonical: the mantissa is odd unless scale is 0, so two values
/// are equal iff their fields are equal.
class Dyadic {
 public:
  Dyadic() = default;
  explicit Dyadic(std::uint64_t integer) : mantissa_(static_cast<unsigned long>(integer)) {}
  Dyadic(BigInt mantissa, std::int64_t scale);

  /// 2^-k for k >= 0.
  static Dyadic pow2_neg(std::int64_t k);
  /// n * 2^-k.
  static Dyadic ratio(std::uint64_t n, std::int64_t k);
  /// Parses "m/2^s", "m/d" (d a power of two), "m" or "0.b1b2..." (binary
  /// expansion, optional integer part).
  static Dyadic parse(std::string_view text);

  const BigInt& mantissa() const { return mantissa_; }
  std::int64_t scale() const { return scale_; }
  bool is_zero() const { return mantissa_ == 0; }

  Dyadic& operator+=(const Dyadic& other);
  /// Requires *this >= other; there are no negative dyadics.
  Dyadic& operator-=(const Dyadic& other);

  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }

  /// x * 2^k for any integer k.
  Dyadic shifted(std::int64_t k) const;
  /// x * n for a nonnegative integer n.
  Dyadic times(const BigInt& n) const;

  friend bool operator==(const Dyadic&, const Dyadic&) = default;
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  /// "m/2^s" (or "m" when scale is 0).
  std::string to_string() const;
  /// "i.b1b2...bs", exact (no trailing zeros past the last 1).
  std::string to_binary() const;

 private:
  void canonicalize();

  BigInt mantissa_{0};
  std::int64_t scale_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Dyadic& x);

/// floor(x * 2^m): the integer whose binary form is the integer part of x
/// followed by digits 1..m.
BigInt prefix(const Dyadic& x, std::int64_t m);

/// Digit i >= 1 of x (weight 2^-i).
int digit(const Dyadic& x, std::int64_t i);

/// x mod 2^-m.
Dyadic tail(const Dyadic& x, std::int64_t m);

/// Least m >= 1 with prefix(a, m) != prefix(b, m), or Position::integer_part()
/// when the integer parts already differ. Throws Error for a == b.
Position leftmost_change(const Dyadic& a, const Dyadic& b);

/// Least delta > 0 with prefix(x + delta, m) != prefix(x, m). A carry into the
/// integer part counts as a change. Requires m >= 0.
Dyadic least_increment(const Dyadic& x, std::int64_t m);

/// Digits 1..m of x as a '0'/'1' string (the integer part is dropped).
std::string prefix_bits(const Dyadic& x, std::int64_t m);

}  // namespace omegalab
