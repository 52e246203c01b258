#include "omegalab/machines.hpp"

#include <algorithm>
#include <set>

namespace omegalab {
namespace {

bool comparable(const std::string& a, const std::string& b) {
  const auto n = std::min(a.size(), b.size());
  return a.compare(0, n, b, 0, n) == 0;
}

Dyadic weight_of(std::size_t length) { return Dyadic::pow2_neg(static_cast<std::int64_t>(length)); }

}  // namespace

KCState::KCState() { free_.emplace(0, std::string{}); }

Dyadic KCState::remaining() const {
  Dyadic sum;
  for (const auto& [len, s] : free_) sum += weight_of(len);
  return sum;
}

Dyadic KCState::assigned_weight() const {
  Dyadic sum;
  for (const auto& [id, s] : assigned_) sum += weight_of(s.size());
  return sum;
}

bool KCState::fits(std::size_t length) const {
  return !free_.empty() && free_.begin()->first <= length;
}

bool KCState::invariants_hold() const {
  if (remaining() + assigned_weight() != Dyadic(1)) return false;
  std::vector<const std::string*> all;
  for (const auto& [len, s] : free_) {
    if (s.size() != len) return false;
    all.push_back(&s);
  }
  for (const auto& [id, s] : assigned_) all.push_back(&s);
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      if (comparable(*all[i], *all[j])) return false;
    }
  }
  return true;
}

void KCState::add_free(std::string s) {
  // Merge sibling pairs so that at most one free string has each length.
  while (true) {
    auto it = free_.find(s.size());
    if (it == free_.end()) {
      free_.emplace(s.size(), std::move(s));
      return;
    }
    std::string parent = s.substr(0, s.size() - 1);
    if (s.empty() || it->second.substr(0, it->second.size() - 1) != parent) {
      throw Error("kc: free list would hold two unrelated strings of one length");
    }
    free_.erase(it);
    s = std::move(parent);
  }
}

std::string kc_alloc(KCState& state, std::size_t length) {
  // Longest free string no longer than the request.
  auto it = state.free_.upper_bound(length);
  if (it == state.free_.begin()) {
    throw Error("capacity exceeded: no room for a codeword of length " + std::to_string(length));
  }
  --it;
  const std::string sigma = it->second;
  state.free_.erase(it);
  for (std::size_t j = 0; j < length - sigma.size(); ++j) {
    state.add_free(sigma + std::string(j, '0') + "1");
  }
  std::string codeword = sigma + std::string(length - sigma.size(), '0');
  state.assigned_.emplace(state.next_id_++, codeword);
  return codeword;
}

ReductionTables build_reduction(const std::vector<Enumeration>& enumeration, const UseTable& g,
                                const ApproxSequence& omega) {
  ReductionTables tables;
  tables.g = g;
  const std::int64_t n_max = g.size();
  // tail[c] = sum_{c < n <= N} 2^-g(n)
  std::vector<Dyadic> tail(static_cast<std::size_t>(n_max) + 1);
  for (std::int64_t n = n_max; n >= 1; --n) {
    tail[static_cast<std::size_t>(n - 1)] = tail[static_cast<std::size_t>(n)] + Dyadic::pow2_neg(g.at(n));
  }
  std::int64_t c = 0;
  while (c < n_max && tail[static_cast<std::size_t>(c)] >= Dyadic(1)) ++c;
  if (c >= n_max) throw Error("build_reduction: no c < N with sum_{n>c} 2^-g(n) < 1");
  tables.threshold = c;

  std::set<std::int64_t> seen;
  std::size_t last_stage = 0;
  for (const auto& [n, stage] : enumeration) {
    if (stage < last_stage) throw Error("build_reduction: enumeration out of stage order");
    last_stage = stage;
    if (n < 1 || n > n_max) throw Error("build_reduction: argument outside the use table");
    if (stage >= omega.stages()) throw Error("build_reduction: stage beyond the approximation");
    if (!seen.insert(n).second) throw Error("build_reduction: argument enumerated twice");
    if (n <= c) continue;
    Request r;
    r.n = n;
    r.stage = stage;
    r.length = g.at(n);
    r.described = prefix_bits(omega.at(stage), r.length);
    r.codeword = kc_alloc(tables.machine, static_cast<std::size_t>(r.length));
    tables.request_weight += Dyadic::pow2_neg(r.length);
    tables.requests.push_back(std::move(r));
  }
  return tables;
}

std::vector<std::int64_t> bad_arguments(const ReductionTables& tables, const ApproxSequence& omega) {
  std::vector<std::int64_t> out;
  for (const auto& r : tables.requests) {
    if (prefix_bits(omega.final_value(), r.length) == r.described) out.push_back(r.n);
  }
  return out;
}

int decide_member(std::int64_t n, const std::string& oracle, const ReductionTables& tables,
                  const std::vector<Enumeration>& enumeration, const ApproxSequence& omega) {
  if (n <= tables.threshold) throw Error("decide_member: n must exceed the threshold c");
  const std::int64_t length = tables.g.at(n);
  if (static_cast<std::int64_t>(oracle.size()) != length) {
    throw Error("decide_member: oracle must hold g(n) digits");
  }
  std::size_t s = 0;
  while (prefix_bits(omega.at(s), length) != oracle) {
    if (++s >= omega.stages()) throw Error("decide_member: no stage matches the oracle");
  }
  for (const auto& en : enumeration) {
    if (en.n == n && en.stage <= s) return 1;
  }
  return 0;
}

SolovayTestLedger solovay_items(const ApproxSequence& alpha, const ApproxSequence& omega,
                                const UseTable& g) {
  if (alpha.stages() != omega.stages()) throw Error("solovay_items: sequences differ in length");
  SolovayTestLedger ledger;
  for (std::int64_t n = 1; n <= g.size(); ++n) ledger.bound += Dyadic::pow2_neg(g.at(n));
  for (std::size_t s = 0; s + 1 < alpha.stages(); ++s) {
    if (alpha.at(s) == alpha.at(s + 1)) continue;
    const Position k = leftmost_change(alpha.at(s), alpha.at(s + 1));
    if (k.is_integer_part()) throw Error("solovay_items: alpha reaches 1");
    SolovayItem item;
    item.index = s;
    item.digit = k.index;
    item.string = prefix_bits(omega.at(s + 1), k.index + g.at(k.index));
    ledger.weight += Dyadic::pow2_neg(static_cast<std::int64_t>(item.string.size()));
    ledger.items.push_back(std::move(item));
  }
  return ledger;
}

std::vector<SolovayItem> bad_items(const SolovayTestLedger& ledger, const ApproxSequence& omega) {
  std::vector<SolovayItem> out;
  for (const auto& item : ledger.items) {
    if (prefix_bits(omega.final_value(), static_cast<std::int64_t>(item.string.size())) == item.string) {
      out.push_back(item);
    }
  }
  return out;
}

BigInt reduce_real(std::int64_t n, const std::string& oracle, const ApproxSequence& alpha,
                   const ApproxSequence& omega, const UseTable& g) {
  if (alpha.stages() != omega.stages()) throw Error("reduce_real: sequences differ in length");
  const std::int64_t length = n + g.at(n);
  if (static_cast<std::int64_t>(oracle.size()) != length) {
    throw Error("reduce_real: oracle must hold n + g(n) digits");
  }
  std::size_t s = 0;
  while (prefix_bits(omega.at(s), length) != oracle) {
    if (++s >= omega.stages()) throw Error("reduce_real: no stage matches the oracle");
  }
  return prefix(alpha.at(s), n);
}

}  // namespace omegalab
