#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "omegalab/dyadic.hpp"

namespace omegalab {

/// A finite table g(1..N) of nonnegative integers.
struct UseTable {
  std::vector<std::int64_t> values;
  bool monotone = false;

  /// Builds a table and sets the monotone flag from the data.
  static UseTable from(std::vector<std::int64_t> values);

  std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }
  /// 1-based access; throws outside [1, N].
  std::int64_t at(std::int64_t i) const;
};

/// Closed integer interval [lo, hi]. Bounds are arbitrary precision because
/// construction blocks grow faster than any machine word.
struct Interval {
  BigInt lo;
  BigInt hi;

  BigInt length() const { return hi - lo + 1; }
  bool contains(const BigInt& x) const { return lo <= x && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// One step of a nondecreasing function: g == c on [lo, hi].
struct SignatureEntry {
  std::int64_t c = 0;
  Interval interval;
  friend bool operator==(const SignatureEntry&, const SignatureEntry&) = default;
};

/// Step decomposition (c_j, I_j) of a nondecreasing use-offset function.
/// The I_j partition [1, max I_last] in order and the c_j strictly increase.
class Signature {
 public:
  Signature() = default;
  /// Validates the partition and monotonicity invariants.
  explicit Signature(std::vector<SignatureEntry> entries);
  /// Convenience for small signatures: {c, lo, hi} triples.
  static Signature of(std::initializer_list<std::array<std::int64_t, 3>> triples);
  /// Consecutive intervals of the given sizes starting at 1.
  static Signature from_sizes(const std::vector<std::int64_t>& constants,
                              const std::vector<BigInt>& sizes);

  std::size_t length() const { return entries_.size(); }
  const SignatureEntry& operator[](std::size_t j) const { return entries_.at(j); }
  const std::vector<SignatureEntry>& entries() const { return entries_; }
  std::vector<std::int64_t> constants() const;
  /// max I_last.
  BigInt extent() const;

  /// g(x) for x in [1, extent]; throws otherwise.
  std::int64_t g(const BigInt& x) const;
  std::int64_t g(std::int64_t x) const { return g(BigInt(static_cast<long>(x))); }
  /// Index j with x in I_j.
  std::size_t interval_of(const BigInt& x) const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<SignatureEntry> entries_;
};

/// Use function h on positive positions, as used by the games and the
/// construction.
class UseFunction {
 public:
  /// h(x) = x + c.
  static UseFunction offset(std::int64_t c);
  /// h(x) = table[x].
  static UseFunction table(UseTable h);
  /// h(x) = x + g[x].
  static UseFunction plus_table(UseTable g);
  /// h(x) = x + g(x) with g given by its signature.
  static UseFunction plus_signature(Signature sig);

  std::int64_t operator()(std::int64_t x) const;
  /// Largest x where h is defined (INT64_MAX when unbounded).
  std::int64_t domain_max() const;
  /// Short textual form: "x+2", "table[..]", "x+g".
  std::string describe() const;

 private:
  enum class Kind { offset, table, plus_table, plus_signature };
  Kind kind_ = Kind::offset;
  std::int64_t offset_ = 0;
  std::shared_ptr<const UseTable> table_;
  std::shared_ptr<const Signature> signature_;
};

/// Maximal constant runs of a monotone table. Throws on non-monotone input.
Signature signature_of(const UseTable& g);
/// Inverse of signature_of. Requires a signature small enough to tabulate.
UseTable flatten(const Signature& sig);

struct CondensationLevel {
  std::int64_t t = 0;
  Dyadic tail_sum;       // sum_{i=2^t}^{2^T} f(i)
  Dyadic condensed_sum;  // sum_{i=t}^{T} 2^i f(2^i)
  Dyadic upper_sum;      // 2 * sum_{i=2^{t-1}}^{2^T} f(i)
  bool holds = false;
};

struct CondensationReport {
  std::int64_t levels = 0;
  std::vector<CondensationLevel> rows;
  bool ok() const;
};

/// Checks tail <= condensed <= 2 * shifted tail at every level 1 <= t <= T.
/// `f` holds f(1), ..., f(2^T); it must be positive and nonincreasing.
CondensationReport condensation_check(const std::vector<Dyadic>& f, std::int64_t levels);

struct SpaceTransform {
  UseTable f;
  /// n_0 = 1 < n_1 < ... < n_K; block k is [n_k, n_{k+1}).
  std::vector<std::int64_t> starts;
};

/// Greedy block split with block weight sum 2^-g(n) > 2^k; f = g + k on
/// block k and f = g + K beyond the last block. Throws Error("budget
/// exceeded ...") when a block cannot close within min(budget, N).
SpaceTransform space_transform(const UseTable& g, std::int64_t blocks, std::int64_t budget);

enum class JVariant { exp, lin };

struct IssuedInterval {
  std::int64_t e = 0;
  std::int64_t c = 0;
  JVariant variant = JVariant::lin;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

/// Issues the consecutive t-intervals J_c(e):
///   exp: sum_{t in J} 2^{(t+c) - g(2^{t+c})} > 2^c
///   lin: sum_{t in J} 2^{t - g(2^{t+1})} > 2^c
/// Each interval starts right after the previously issued one (t starts at
/// 0). Requests are served in call order, which is recorded in log().
class IntervalIssuer {
 public:
  IntervalIssuer(UseTable g, std::int64_t budget);

  /// Shortest interval meeting the bound; throws Error("budget exceeded")
  /// when t would pass the budget or g is not tabulated far enough.
  IssuedInterval next(std::int64_t e, std::int64_t c, JVariant variant);
  const std::vector<IssuedInterval>& log() const { return log_; }

 private:
  UseTable g_;
  std::int64_t budget_;
  std::int64_t next_t_ = 0;
  std::vector<IssuedInterval> log_;
};

/// Blocks J_e = union of I_j for j in (n_e, n_{e+1}].
struct ConstructionPlan {
  Signature signature;
  std::vector<std::size_t> boundaries;  // n_0 = 1 < n_1 < ... < n_E

  std::size_t requirements() const { return boundaries.empty() ? 0 : boundaries.size() - 1; }
  /// J_e as a position interval (max I_{n_e}, max I_{n_{e+1}}].
  Interval block(std::size_t e) const;
  /// max I_{n_e}, the position just below J_e.
  BigInt block_floor(std::size_t e) const;
};

/// Threshold of the plan for block e ending at signature index k:
/// 2^-m * S_k(k - n_e - 1), m = max I_{n_e}.
Dyadic plan_threshold_value(const Signature& sig, std::size_t n_e, std::size_t k);

/// Each n_{e+1} is the least index > n_e with plan_threshold_value > 1.
/// Throws Error when the signature runs out first.
ConstructionPlan build_plan(const Signature& sig, std::size_t requirements);

/// Checks the plan invariants (n_0 = 1, increasing, thresholds > 1).
bool plan_is_valid(const ConstructionPlan& plan);

/// Converts a BigInt that must fit a machine word (positions, lengths).
std::int64_t to_int64(const BigInt& v, const char* what);

}  // namespace omegalab
