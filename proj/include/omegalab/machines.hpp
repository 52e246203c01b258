#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "omegalab/coding.hpp"
#include "omegalab/dyadic.hpp"
#include "omegalab/usefn.hpp"

namespace omegalab {

/// Online Kraft-Chaitin ledger. The free strings are pairwise
/// prefix-incomparable with at most one per length, so their weights are the
/// binary digits of the remaining capacity.
class KCState {
 public:
  KCState();

  /// Free strings by length.
  const std::map<std::size_t, std::string>& free() const { return free_; }
  /// Request id -> codeword.
  const std::map<std::uint64_t, std::string>& assigned() const { return assigned_; }

  Dyadic remaining() const;
  Dyadic assigned_weight() const;
  /// 2^-length <= remaining(), i.e. some free string is no longer than length.
  bool fits(std::size_t length) const;

  /// Weight conservation and prefix-freeness of free u assigned.
  bool invariants_hold() const;

 private:
  friend std::string kc_alloc(KCState& state, std::size_t length);
  void add_free(std::string s);

  std::map<std::size_t, std::string> free_;
  std::map<std::uint64_t, std::string> assigned_;
  std::uint64_t next_id_ = 0;
};

/// Assigns a codeword of exactly `length` bits: takes the longest free sigma
/// with |sigma| <= length, assigns sigma 0^(length-|sigma|) and frees the
/// siblings sigma 0^j 1. Throws Error("capacity exceeded") when nothing fits.
std::string kc_alloc(KCState& state, std::size_t length);

/// n enters the c.e. set at stage `stage`.
struct Enumeration {
  std::int64_t n = 0;
  std::size_t stage = 0;
};

struct Request {
  std::int64_t n = 0;
  std::size_t stage = 0;
  std::string described;  // Omega_stage restricted to g(n) digits
  std::int64_t length = 0;  // g(n)
  std::string codeword;
};

struct ReductionTables {
  UseTable g;
  std::int64_t threshold = 0;  // least c with sum_{c < n <= N} 2^-g(n) < 1
  std::vector<Request> requests;
  Dyadic request_weight;
  KCState machine;
};

/// The request machine: every enumerated n > c asks for a description of
/// Omega's current g(n)-prefix of length g(n). Throws when no c < N brings
/// the tail weight below 1.
ReductionTables build_reduction(const std::vector<Enumeration>& enumeration, const UseTable& g,
                                const ApproxSequence& omega);

/// Arguments whose request describes a prefix of the limit of omega; the
/// only ones decide_member can get wrong.
std::vector<std::int64_t> bad_arguments(const ReductionTables& tables, const ApproxSequence& omega);

/// Membership of n from the g(n)-prefix of Omega: first stage where Omega
/// matches the oracle, then whether n was enumerated by then. Requires n > c.
int decide_member(std::int64_t n, const std::string& oracle, const ReductionTables& tables,
                  const std::vector<Enumeration>& enumeration, const ApproxSequence& omega);

struct SolovayItem {
  std::size_t index = 0;   // stage s of the change alpha_s -> alpha_{s+1}
  std::int64_t digit = 0;  // leftmost changed digit
  std::string string;      // Omega_{s+1} restricted to digit + g(digit)
};

struct SolovayTestLedger {
  std::vector<SolovayItem> items;
  Dyadic weight;
  Dyadic bound;  // sum_n 2^-g(n) over the table
  bool within_bound() const { return weight <= bound; }
};

/// One item per stage where alpha changes.
SolovayTestLedger solovay_items(const ApproxSequence& alpha, const ApproxSequence& omega,
                                const UseTable& g);

/// Items whose string is a prefix of the limit of omega.
std::vector<SolovayItem> bad_items(const SolovayTestLedger& ledger, const ApproxSequence& omega);

/// n-digit prefix of alpha from Omega's first n + g(n) digits: the first
/// stage matching the oracle decides.
BigInt reduce_real(std::int64_t n, const std::string& oracle, const ApproxSequence& alpha,
                   const ApproxSequence& omega, const UseTable& g);

}  // namespace omegalab
