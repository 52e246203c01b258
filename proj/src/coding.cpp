#include "omegalab/coding.hpp"

#include <algorithm>
#include <bit>

namespace omegalab {
namespace {

void require_below_one(const ApproxSequence& a) {
  if (a.final_value() >= Dyadic(1)) throw Error("coding: stages must lie in [0, 1)");
}

std::int64_t block_length(std::int64_t i) { return std::int64_t{1} << (i - 1); }

}  // namespace

ApproxSequence::ApproxSequence(std::vector<Dyadic> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error("approximation: needs at least one stage");
  for (std::size_t s = 0; s < values_.size(); ++s) {
    if (values_[s] > Dyadic(1)) throw Error("approximation: stage above 1");
    if (s > 0 && values_[s] < values_[s - 1]) {
      throw Error("approximation: decreases at stage " + std::to_string(s));
    }
  }
}

std::int64_t ApproxSequence::precision() const {
  std::int64_t p = 0;
  for (const auto& v : values_) p = std::max(p, v.scale());
  return p;
}

std::int64_t CodedSet::digits() const {
  return static_cast<std::int64_t>(std::bit_width(bits.size()));
}

std::int64_t flip_counts(const ApproxSequence& a, std::int64_t i) {
  if (i < 1) throw Error("flip_counts: digit index must be >= 1");
  require_below_one(a);
  std::int64_t count = 0;
  for (std::size_t s = 1; s < a.stages(); ++s) {
    if (!digit(a.at(s - 1), i) && digit(a.at(s), i)) ++count;
  }
  return count;
}

CodedSet encode_set(const ApproxSequence& a, std::int64_t n) {
  if (n < 0 || n > 30) throw Error("encode_set: digit count out of range");
  CodedSet out;
  out.bits.reserve(static_cast<std::size_t>((std::int64_t{1} << n) - 1));
  for (std::int64_t i = 1; i <= n; ++i) {
    const std::int64_t p = flip_counts(a, i);
    const std::int64_t len = block_length(i);
    if (p > len) throw Error("encode_set: digit flips more often than its block allows");
    out.bits.append(static_cast<std::size_t>(p), '1');
    out.bits.append(static_cast<std::size_t>(len - p), '0');
  }
  return out;
}

std::int64_t block_of(std::uint64_t n) {
  if (n == 0) throw Error("block_of: set positions are 1-based");
  return static_cast<std::int64_t>(std::bit_width(n));
}

int SetReader::bit(std::uint64_t position) {
  if (position == 0 || position > set_->bits.size()) {
    throw Error("set reader: position " + std::to_string(position) + " outside the coded set");
  }
  ++reads_;
  highest_ = std::max(highest_, position);
  return set_->bits[position - 1] == '1' ? 1 : 0;
}

DecodeResult decode_real(SetReader& x, const ApproxSequence& a, std::int64_t n) {
  if (n < 0 || n > 30) throw Error("decode_real: digit count out of range");
  require_below_one(a);
  std::vector<std::int64_t> target(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t i = 1; i <= n; ++i) {
    const auto start = static_cast<std::uint64_t>(block_length(i));
    const std::int64_t len = block_length(i);
    std::int64_t ones = 0;
    bool seen_zero = false;
    for (std::int64_t j = 0; j < len; ++j) {
      const int b = x.bit(start + static_cast<std::uint64_t>(j));
      if (b && seen_zero) throw Error("decode_real: block " + std::to_string(i) + " is not 1^p 0^q");
      if (b) ++ones;
      else seen_zero = true;
    }
    target[static_cast<std::size_t>(i)] = ones;
  }

  std::vector<std::int64_t> seen(target.size(), 0);
  auto reached = [&] {
    for (std::int64_t i = 1; i <= n; ++i) {
      if (seen[static_cast<std::size_t>(i)] < target[static_cast<std::size_t>(i)]) return false;
    }
    return true;
  };
  auto count_flips = [&](std::size_t s) {
    for (std::int64_t i = 1; i <= n; ++i) {
      if (!digit(a.at(s - 1), i) && digit(a.at(s), i)) ++seen[static_cast<std::size_t>(i)];
    }
  };

  std::size_t stage = 0;
  while (!reached()) {
    if (++stage >= a.stages()) throw Error("decode_real: block counts never reached (corrupt set)");
    count_flips(stage);
  }
  DecodeResult result{prefix(a.at(stage), n), stage, x.highest()};
  // Every later change of the first n digits would be a 0->1 flip beyond its count.
  for (std::size_t s = stage + 1; s < a.stages(); ++s) {
    count_flips(s);
    for (std::int64_t i = 1; i <= n; ++i) {
      if (seen[static_cast<std::size_t>(i)] > target[static_cast<std::size_t>(i)]) {
        throw Error("decode_real: digit " + std::to_string(i) + " flips past its block count");
      }
    }
  }
  return result;
}

PrefixOracle::PrefixOracle(Dyadic value, std::int64_t allowance)
    : value_(std::move(value)), allowance_(allowance) {}

int PrefixOracle::digit(std::int64_t i) {
  if (i < 1) throw Error("oracle: digit index must be >= 1");
  if (i > allowance_) {
    throw Error("oracle: read of digit " + std::to_string(i) + " exceeds the use allowance " +
                std::to_string(allowance_));
  }
  highest_ = std::max(highest_, i);
  return omegalab::digit(value_, i);
}

BigInt PrefixOracle::prefix(std::int64_t m) {
  BigInt out(0);
  for (std::int64_t i = 1; i <= m; ++i) out = out * 2 + digit(i);
  return out;
}

int set_from_real(PrefixOracle& oracle, const ApproxSequence& a, std::uint64_t n) {
  require_below_one(a);
  const std::int64_t i = block_of(n);
  const BigInt target = oracle.prefix(i);
  std::size_t match = 0;
  while (prefix(a.at(match), i) != target) {
    if (++match >= a.stages()) throw Error("set_from_real: oracle prefix never matched");
  }
  std::int64_t flips = 0;
  for (std::size_t s = 1; s <= match; ++s) {
    if (!digit(a.at(s - 1), i) && digit(a.at(s), i)) ++flips;
  }
  const auto offset = static_cast<std::int64_t>(n) - block_length(i);
  return offset < flips ? 1 : 0;
}

}  // namespace omegalab
