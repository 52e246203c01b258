#include "omegalab/bounds.hpp"

namespace omegalab {
namespace {

void require_increasing(std::span<const std::int64_t> constants) {
  for (std::size_t i = 1; i < constants.size(); ++i) {
    if (constants[i] <= constants[i - 1]) throw Error("truncate: constants must strictly increase");
  }
}

}  // namespace

Decomposition greedy_decomposition(const Dyadic& x, std::span<const std::int64_t> constants) {
  require_increasing(constants);
  Decomposition d;
  Dyadic rest = x;
  for (const std::int64_t c : constants) {
    BigInt n = prefix(rest, c);
    rest -= Dyadic(n, c);
    d.coefficients.push_back(std::move(n));
  }
  d.remainder = std::move(rest);
  return d;
}

Dyadic truncate(const Dyadic& x, std::size_t t, std::span<const std::int64_t> constants) {
  if (t >= constants.size()) throw Error("truncate: index beyond the constants list");
  const auto d = greedy_decomposition(x, constants.first(t + 1));
  Dyadic sum;
  for (std::size_t i = 0; i <= t; ++i) sum += Dyadic(d.coefficients[i], constants[i]);
  return sum;
}

Dyadic truncate_at(const Dyadic& x, std::int64_t c) { return Dyadic(prefix(x, c), c); }

Dyadic TruncatedSums::at(std::ptrdiff_t i) const {
  if (i < 0) return Dyadic{};
  if (static_cast<std::size_t>(i) >= values.size()) {
    throw Error("truncated sums: S_k(i) needs i < k");
  }
  return values[static_cast<std::size_t>(i)];
}

TruncatedSums truncated_sums(const Signature& sig, std::size_t k) {
  if (k < 1 || k >= sig.length()) {
    throw Error("truncated_sums: k = " + std::to_string(k) + " outside [1, " +
                std::to_string(sig.length()) + ")");
  }
  TruncatedSums out;
  out.k = k;
  Dyadic previous;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& top = sig[k - i];
    const Dyadic term = Dyadic(top.interval.length(), top.c) + previous;
    previous = truncate_at(term, sig[k - i - 1].c);
    out.values.push_back(previous);
  }
  return out;
}

Dyadic interval_weight(const Signature& sig, std::size_t k, std::size_t t) {
  if (t > k || k >= sig.length()) throw Error("interval_weight: index out of range");
  Dyadic sum;
  for (std::size_t i = 0; i <= t; ++i) {
    sum += Dyadic(sig[k - i].interval.length(), sig[k - i].c);
  }
  return sum;
}

LowerBoundReport lower_bound_report(const Signature& sig, std::size_t k, std::size_t t) {
  if (t >= k) throw Error("lower_bound_report: needs t < k");
  LowerBoundReport r;
  r.k = k;
  r.t = t;
  r.truncated = truncated_sums(sig, k).at(static_cast<std::ptrdiff_t>(t));
  r.weight = interval_weight(sig, k, t);
  const Dyadic lifted = r.truncated + Dyadic(1);
  r.holds = lifted >= r.weight;
  r.margin = r.holds ? lifted - r.weight : r.weight - lifted;
  return r;
}

}  // namespace omegalab
