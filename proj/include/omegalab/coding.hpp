#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "omegalab/dyadic.hpp"

namespace omegalab {

/// Stage s -> alpha_s: a finite nondecreasing approximation inside [0, 1].
class ApproxSequence {
 public:
  ApproxSequence() : values_{Dyadic{}} {}
  /// Validates monotonicity and the [0, 1] range.
  explicit ApproxSequence(std::vector<Dyadic> values);

  const std::vector<Dyadic>& values() const { return values_; }
  std::size_t stages() const { return values_.size(); }
  const Dyadic& at(std::size_t s) const { return values_.at(s); }
  const Dyadic& final_value() const { return values_.back(); }
  /// Longest binary expansion among the stages.
  std::int64_t precision() const;

 private:
  std::vector<Dyadic> values_;
};

/// X_alpha restricted to digits 1..n: block i (length 2^(i-1), starting at
/// bit 2^(i-1), 1-based) is 1^p 0^(2^(i-1) - p) with p the number of 0->1
/// flips of digit i.
struct CodedSet {
  std::string bits;

  /// Number of digits covered (bits.size() == 2^digits - 1).
  std::int64_t digits() const;
};

/// Number of 0->1 transitions of digit i along the sequence.
std::int64_t flip_counts(const ApproxSequence& a, std::int64_t i);

/// Blocks for digits 1..n. Stages equal to 1 are rejected (the coding
/// describes reals in [0, 1)).
CodedSet encode_set(const ApproxSequence& a, std::int64_t n);

/// Block index (digit) of 1-based set position n: floor(log2 n) + 1.
std::int64_t block_of(std::uint64_t n);

/// Read-metered access to the bits of a coded set.
class SetReader {
 public:
  explicit SetReader(const CodedSet& set) : set_(&set) {}
  /// 1-based bit.
  int bit(std::uint64_t position);
  std::uint64_t reads() const { return reads_; }
  std::uint64_t highest() const { return highest_; }

 private:
  const CodedSet* set_;
  std::uint64_t reads_ = 0;
  std::uint64_t highest_ = 0;
};

struct DecodeResult {
  BigInt prefix;       // floor(alpha 2^n) recovered from the set
  std::size_t stage = 0;  // replay stage where every block count was met
  std::uint64_t set_bits_read = 0;  // highest set position consulted
};

/// Recovers the n-digit prefix of the limit from X_alpha: replays `a` until
/// every digit's 0->1 count reaches its block count. Throws Error when a
/// count is never reached or a block is not of the form 1^p 0^q.
DecodeResult decode_real(SetReader& x, const ApproxSequence& a, std::int64_t n);

/// Serves digits of a real and refuses reads past a fixed allowance.
class PrefixOracle {
 public:
  PrefixOracle(Dyadic value, std::int64_t allowance);
  int digit(std::int64_t i);
  /// floor(value 2^m) via metered digit reads.
  BigInt prefix(std::int64_t m);
  std::int64_t highest() const { return highest_; }

 private:
  Dyadic value_;
  std::int64_t allowance_;
  std::int64_t highest_ = 0;
};

/// Bit n (1-based) of X_alpha computed from the real itself: reads digits
/// 1..floor(log2 n)+1 of the oracle, replays `a` until they match, and counts
/// flips of that digit up to there.
int set_from_real(PrefixOracle& oracle, const ApproxSequence& a, std::uint64_t n);

}  // namespace omegalab
