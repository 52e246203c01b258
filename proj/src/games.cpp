#include "omegalab/games.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <random>

#include "omegalab/bounds.hpp"

namespace omegalab {

const char* to_string(Mover m) { return m == Mover::alpha ? "alpha" : "beta"; }

Responder least_effort() {
  return [](const Dyadic& gamma, std::int64_t demand) { return least_increment(gamma, demand); };
}

Responder random_over_responder(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const Dyadic& gamma, std::int64_t demand) {
    const std::uint64_t extra = (*rng)() % 4;
    const std::int64_t finer = static_cast<std::int64_t>((*rng)() % 4);
    return least_increment(gamma, demand) + Dyadic::ratio(extra, demand + finer);
  };
}

namespace {

void check_interval(const UseFunction& h, std::int64_t lo, std::int64_t hi) {
  if (lo < 0 || hi <= lo) throw Error("hload: interval (lo, hi] must satisfy 0 <= lo < hi");
  if (hi > h.domain_max()) throw Error("hload: interval exceeds the use function's domain");
  for (std::int64_t x = lo + 1; x <= hi; ++x) {
    if (h(x) < x) throw Error("hload: use function must satisfy h(x) >= x");
  }
}

Dyadic respond(const Responder& responder, const Dyadic& gamma, std::int64_t demand) {
  Dyadic delta = responder ? responder(gamma, demand) : least_increment(gamma, demand);
  if (delta.is_zero() || prefix(gamma + delta, demand) == prefix(gamma, demand)) {
    throw Error("hload: response " + delta.to_string() + " does not change gamma's prefix of length " +
                std::to_string(demand));
  }
  return delta;
}

bool all_ones(const Dyadic& x, std::int64_t lo, std::int64_t hi) {
  for (std::int64_t i = lo + 1; i <= hi; ++i) {
    if (!digit(x, i)) return false;
  }
  return true;
}

}  // namespace

GameTrace hload(const UseFunction& h, std::int64_t lo, std::int64_t hi, const HloadOptions& options) {
  check_interval(h, lo, hi);
  if (hi - lo > 24) throw Error("hload: step trace limited to 24 positions; use hload_final");
  GameTrace trace;
  trace.config = {h.describe(), lo, hi, options.first, options.initial_gamma, options.strategy};
  GameState state{Dyadic{}, Dyadic{}, options.initial_gamma, 0};
  const Dyadic unit = Dyadic::pow2_neg(hi);
  const std::uint64_t total = 2 * ((std::uint64_t{1} << (hi - lo)) - 1);
  trace.steps.reserve(total);
  Mover mover = options.first;
  while (!(all_ones(state.alpha, lo, hi) && all_ones(state.beta, lo, hi))) {
    Dyadic& target = mover == Mover::alpha ? state.alpha : state.beta;
    const Dyadic before = target;
    target += unit;
    GameStep step;
    step.mover = mover;
    step.added = unit;
    step.k = leftmost_change(before, target);
    step.demand = h(step.k.index);
    step.gamma_before = state.gamma;
    state.gamma += respond(options.responder, state.gamma, step.demand);
    step.gamma_after = state.gamma;
    trace.steps.push_back(std::move(step));
    ++state.step;
    mover = mover == Mover::alpha ? Mover::beta : Mover::alpha;
  }
  trace.final_state = std::move(state);
  return trace;
}

namespace {

// Final gamma of the least-effort load on (level, hi], memoized on the
// residue of the starting gamma modulo 2^-min_demand[level].
class FastLoad {
 public:
  FastLoad(const UseFunction& h, std::int64_t lo, std::int64_t hi) : lo_(lo), hi_(hi) {
    const auto n = static_cast<std::size_t>(hi - lo);
    demand_.resize(n);
    min_demand_.resize(n + 1);
    memo_.resize(n + 1);
    for (std::int64_t x = lo + 1; x <= hi; ++x) demand_[idx(x - 1)] = h(x);
    // min_demand_[level] bounds every demand of the load on (level, hi].
    std::int64_t running = std::numeric_limits<std::int64_t>::max();
    for (std::int64_t level = hi - 1; level >= lo; --level) {
      running = std::min(running, demand_[idx(level)]);
      min_demand_[idx(level)] = running;
    }
  }

  Dyadic run(std::int64_t level, const Dyadic& gamma) {
    if (level == hi_) return gamma;
    const std::int64_t d = min_demand_[idx(level)];
    const Dyadic residue = tail(gamma, d);
    const Dyadic base = gamma - residue;
    auto& memo = memo_[idx(level)];
    if (auto it = memo.find(residue); it != memo.end()) return base + it->second;
    const std::int64_t top = demand_[idx(level)];
    Dyadic g = run(level + 1, residue);
    g += least_increment(g, top);
    g += least_increment(g, top);
    g = run(level + 1, g);
    memo.emplace(residue, g);
    return base + g;
  }

 private:
  std::size_t idx(std::int64_t level) const { return static_cast<std::size_t>(level - lo_); }

  std::int64_t lo_;
  std::int64_t hi_;
  std::vector<std::int64_t> demand_;  // demand_[x - lo - 1] = h(x)
  std::vector<std::int64_t> min_demand_;
  std::vector<std::map<Dyadic, Dyadic>> memo_;
};

}  // namespace

Dyadic hload_final(const UseFunction& h, std::int64_t lo, std::int64_t hi, const Dyadic& initial_gamma) {
  check_interval(h, lo, hi);
  FastLoad load(h, lo, hi);
  return load.run(lo, initial_gamma);
}

Dyadic predict_atomic(std::int64_t n, std::int64_t k, std::int64_t c) {
  if (n < 1) throw Error("predict_atomic: n must be >= 1");
  return Dyadic(BigInt(static_cast<long>(n)), k + c);
}

GeneralPrediction predict_general(const Signature& sig, std::size_t k, std::size_t t, std::int64_t m) {
  if (k >= sig.length() || t > k) throw Error("predict_general: needs t <= k < signature length");
  const auto& base = sig[k - t];
  const BigInt mb(static_cast<long>(m));
  const bool below = mb == base.interval.lo - 1;
  if (!below && !base.interval.contains(mb)) {
    throw Error("predict_general: m must lie in I_{k-t} or just below it");
  }
  GeneralPrediction p;
  p.truncation_constant = base.c;
  p.lo = m;
  p.hi = to_int64(sig[k].interval.hi, "load interval end");
  Dyadic previous;
  if (t >= 1) previous = truncated_sums(sig, k).at(static_cast<std::ptrdiff_t>(t) - 1);
  p.constraint = previous + Dyadic(base.interval.hi - mb, base.c);
  if (below && t < k) {
    p.floor = truncated_sums(sig, k).at(static_cast<std::ptrdiff_t>(t)).shifted(-m);
  }
  return p;
}

bool satisfies_constraint(const GeneralPrediction& p, std::int64_t m, const Dyadic& gamma) {
  return truncate_at(gamma.shifted(m), p.truncation_constant) == p.constraint;
}

DominanceReport compare_strategies(const UseFunction& h, std::int64_t lo, std::int64_t hi,
                                   const Responder& alternative) {
  const auto base = hload(h, lo, hi);
  HloadOptions alt_options;
  alt_options.responder = alternative;
  alt_options.strategy = "custom";
  const auto alt = hload(h, lo, hi, alt_options);
  DominanceReport report;
  report.stages = base.steps.size();
  for (std::size_t s = 0; s < base.steps.size(); ++s) {
    const auto& mine = base.steps[s].gamma_after;
    const auto& theirs = alt.steps[s].gamma_after;
    if (mine != theirs) report.identical = false;
    if (mine > theirs && !report.first_violation) report.first_violation = s;
  }
  return report;
}

AccumulationReport accumulation_check(const UseFunction& h, std::int64_t lo, std::int64_t hi,
                                      const Dyadic& offset) {
  const auto plain = hload(h, lo, hi);
  for (const auto& step : plain.steps) {
    if (step.demand <= offset.scale()) {
      throw Error("accumulation_check: demand " + std::to_string(step.demand) +
                  " does not lie beyond the offset's " + std::to_string(offset.scale()) + " digits");
    }
  }
  HloadOptions shifted;
  shifted.initial_gamma = offset;
  const auto twin = hload(h, lo, hi, shifted);
  AccumulationReport report;
  report.stages = plain.steps.size();
  report.offset = offset;
  for (std::size_t s = 0; s < plain.steps.size(); ++s) {
    if (twin.steps[s].gamma_after != plain.steps[s].gamma_after + offset) {
      report.first_violation = s;
      break;
    }
  }
  return report;
}

Dyadic false_bound(const Signature& sig, std::int64_t k, std::int64_t n) {
  Dyadic sum;
  for (std::int64_t i = k + 1; i <= k + n; ++i) sum += Dyadic::pow2_neg(sig.g(i));
  return sum.shifted(-k);
}

FalseBoundSearch false_bound_search(std::uint64_t seed, std::uint64_t budget,
                                    std::size_t max_intervals) {
  FalseBoundSearch result;
  if (max_intervals < 1) throw Error("false_bound_search: need at least one interval");
  std::mt19937_64 rng(seed);
  auto pick = [&rng](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  while (result.tried < budget) {
    ++result.tried;
    const auto count = static_cast<std::size_t>(pick(1, static_cast<std::int64_t>(max_intervals)));
    std::vector<std::int64_t> constants;
    std::vector<BigInt> sizes;
    std::int64_t c = pick(0, 2);
    for (std::size_t j = 0; j < count; ++j) {
      constants.push_back(c);
      sizes.emplace_back(static_cast<long>(pick(1, 4)));
      c += pick(1, 3);
    }
    const Signature sig = Signature::from_sizes(constants, sizes);
    const std::int64_t extent = to_int64(sig.extent(), "signature extent");
    const std::int64_t k = pick(0, extent - 1);
    const std::int64_t n = pick(1, extent - k);
    const Dyadic gamma = hload_final(UseFunction::plus_signature(sig), k, k + n);
    const Dyadic bound = false_bound(sig, k, n);
    if (gamma < bound) {
      result.witness = FalseBoundWitness{sig, k, n, gamma, bound};
      break;
    }
  }
  return result;
}

}  // namespace omegalab
