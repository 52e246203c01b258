#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "omegalab/dyadic.hpp"
#include "omegalab/usefn.hpp"

namespace omegalab {

enum class Mover { alpha, beta };

const char* to_string(Mover m);

/// Opponent policy: given the current gamma and the demanded prefix length,
/// return the increment. The engine rejects increments that leave
/// gamma's prefix of that length unchanged.
using Responder = std::function<Dyadic(const Dyadic& gamma, std::int64_t demand)>;

/// The pointwise-minimal legal response.
Responder least_effort();

/// Responds with least_effort plus a seeded random multiple of a finer power
/// of two; always legal, never smaller than least effort.
Responder random_over_responder(std::uint64_t seed);

struct GameState {
  Dyadic alpha;
  Dyadic beta;
  Dyadic gamma;
  std::uint64_t step = 0;
  friend bool operator==(const GameState&, const GameState&) = default;
};

struct GameStep {
  Mover mover = Mover::alpha;
  Dyadic added;
  Position k;
  std::int64_t demand = 0;
  Dyadic gamma_before;
  Dyadic gamma_after;
  friend bool operator==(const GameStep&, const GameStep&) = default;
};

struct GameConfig {
  std::string use;  // UseFunction::describe()
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  Mover first = Mover::alpha;
  Dyadic initial_gamma;
  std::string strategy = "least_effort";
  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

struct GameTrace {
  GameConfig config;
  std::vector<GameStep> steps;
  GameState final_state;
  friend bool operator==(const GameTrace&, const GameTrace&) = default;
};

struct HloadOptions {
  Mover first = Mover::alpha;
  Dyadic initial_gamma;
  /// Empty means least effort.
  Responder responder;
  std::string strategy = "least_effort";
};

/// The h-load process on the positions (lo, hi]: alpha and beta alternately
/// gain 2^-hi until every digit in the interval is 1, and gamma answers each
/// move at demand h(k), k the mover's leftmost changed digit.
///
/// Runs 2 (2^(hi-lo) - 1) steps, so it refuses intervals longer than 24.
GameTrace hload(const UseFunction& h, std::int64_t lo, std::int64_t hi,
                const HloadOptions& options = {});

/// Final gamma of the least-effort h-load process on (lo, hi] without
/// materializing the steps. Exact for any interval length: the process on
/// (j, hi] is the process on (j+1, hi], two moves at digit j+1, then the
/// process on (j+1, hi] again, and a sub-run translates by any multiple of
/// 2^-d when d bounds its demands from below; results are memoized per
/// level on the residue.
Dyadic hload_final(const UseFunction& h, std::int64_t lo, std::int64_t hi,
                   const Dyadic& initial_gamma = {});

/// n 2^(-k-c).
Dyadic predict_atomic(std::int64_t n, std::int64_t k, std::int64_t c);

struct GeneralPrediction {
  Dyadic constraint;           // S_k(t-1) + (max I_{k-t} - m) 2^-c_{k-t}
  std::optional<Dyadic> floor;  // 2^-m S_k(t), when m = min I_{k-t} - 1 and t < k
  std::int64_t truncation_constant = 0;  // c_{k-t}
  std::int64_t lo = 0;  // the loaded interval (m, max I_k]
  std::int64_t hi = 0;
};

/// Prediction for the load on (m, max I_{k-t}] plus I_{k-t+1}, ..., I_k.
/// Requires t <= k < length and m in I_{k-t} or m = min I_{k-t} - 1.
GeneralPrediction predict_general(const Signature& sig, std::size_t k, std::size_t t,
                                  std::int64_t m);

/// True iff T(2^m gamma, c_{k-t}) equals the predicted constraint.
bool satisfies_constraint(const GeneralPrediction& p, std::int64_t m, const Dyadic& gamma);

struct DominanceReport {
  std::size_t stages = 0;
  bool identical = true;  // alternative matched least effort everywhere
  std::optional<std::size_t> first_violation;  // stage where least effort was larger
  bool dominated() const { return !first_violation.has_value(); }
};

/// Runs least effort and `alternative` on the same load and compares gamma
/// stage by stage. Throws if the alternative fails a demand.
DominanceReport compare_strategies(const UseFunction& h, std::int64_t lo, std::int64_t hi,
                                   const Responder& alternative);

struct AccumulationReport {
  std::size_t stages = 0;
  Dyadic offset;
  std::optional<std::size_t> first_violation;
  bool holds() const { return !first_violation.has_value(); }
};

/// Twin least-effort runs from gamma = 0 and gamma = offset; checks
/// gamma'_s = gamma_s + offset at every stage. Throws if some demand does
/// not lie beyond the binary length of the offset.
AccumulationReport accumulation_check(const UseFunction& h, std::int64_t lo, std::int64_t hi,
                                      const Dyadic& offset);

/// 2^-k sum_{i in (k, k+n]} 2^-g(i), the tempting but wrong amplification bound.
Dyadic false_bound(const Signature& sig, std::int64_t k, std::int64_t n);

struct FalseBoundWitness {
  Signature signature;
  std::int64_t k = 0;
  std::int64_t n = 0;
  Dyadic gamma;
  Dyadic bound;
};

struct FalseBoundSearch {
  std::uint64_t tried = 0;
  std::optional<FalseBoundWitness> witness;
};

/// Seeded search over small signatures (1 to `max_intervals` intervals of
/// size <= 4, constant gaps up to 3) and load intervals for a final gamma
/// strictly below false_bound. `budget` caps the number of candidates.
FalseBoundSearch false_bound_search(std::uint64_t seed, std::uint64_t budget,
                                    std::size_t max_intervals = 3);

}  // namespace omegalab
