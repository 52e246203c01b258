#include "omegalab/construction.hpp"

#include <algorithm>
#include <limits>

namespace omegalab {
namespace {

constexpr Count kSaturated = std::numeric_limits<Count>::max();

Count saturating_pow2(const BigInt& exponent) {
  if (exponent >= 63) return kSaturated;
  return Count{1} << exponent.get_ui();
}

Count saturating_add(Count a, Count b) { return a > kSaturated - b ? kSaturated : a + b; }

Count action_bound(const BigInt& length) {
  const Count p = saturating_pow2(length);
  return p == kSaturated ? kSaturated : 2 * (p - 1);
}

}  // namespace

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::open:
      return "open";
    case Outcome::met_by_disagreement:
      return "met_by_disagreement";
    case Outcome::met_by_capped_gamma:
      return "met_by_capped_gamma";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Adversaries

LeastEffortTracker::LeastEffortTracker(UseFunction h, bool allow_overflow)
    : h_(std::move(h)), allow_overflow_(allow_overflow) {}

std::string LeastEffortTracker::name() const {
  return std::string(allow_overflow_ ? "least_effort_unbounded" : "least_effort") + "(" +
         h_.describe() + ")";
}

void LeastEffortTracker::observe(std::uint64_t stage, const Dyadic& alpha, const Dyadic& beta) {
  if (!started_) {
    alpha_copy_ = alpha;
    beta_copy_ = beta;
    started_ = true;
    return;
  }
  if (capped_) return;
  std::optional<Position> k;
  if (alpha != alpha_copy_) k = leftmost_change(alpha_copy_, alpha);
  if (beta != beta_copy_) {
    const Position kb = leftmost_change(beta_copy_, beta);
    if (!k || kb < *k) k = kb;
  }
  if (!k) return;
  const std::int64_t demand = k->is_integer_part() ? 0 : h_(k->index);
  const Dyadic next = gamma_ + least_increment(gamma_, demand);
  if (!allow_overflow_ && next > Dyadic(1)) {
    capped_ = true;
    return;
  }
  gamma_ = next;
  alpha_copy_ = alpha;
  beta_copy_ = beta;
  responses_.push_back({stage, demand, gamma_});
}

std::optional<Answers> LeastEffortTracker::answers() const {
  if (!started_) return std::nullopt;
  return Answers{alpha_copy_, beta_copy_};
}

ScriptedAdversary::ScriptedAdversary(std::string name, Script script)
    : name_(std::move(name)), script_(std::move(script)) {}

std::unique_ptr<Adversary> ScriptedAdversary::silent() {
  return std::make_unique<ScriptedAdversary>(
      "silent", [](std::uint64_t, const Dyadic&, const Dyadic&) { return std::optional<Answers>{}; });
}

void ScriptedAdversary::observe(std::uint64_t stage, const Dyadic& alpha, const Dyadic& beta) {
  current_ = script_(stage, alpha, beta);
}

// ---------------------------------------------------------------------------
// Construction

std::optional<std::int64_t> first_difference(const Dyadic& x, const Dyadic& y, const BigInt& lo,
                                             const BigInt& hi) {
  const std::int64_t longest = std::max(x.scale(), y.scale());
  const BigInt top_big = hi < longest ? hi : BigInt(static_cast<long>(longest));
  if (lo >= top_big) return std::nullopt;
  const std::int64_t top = to_int64(top_big, "comparison end");
  const std::int64_t bottom = to_int64(lo, "comparison start");
  const auto width = static_cast<mp_bitcnt_t>(top - bottom);
  BigInt a = prefix(x, top);
  BigInt b = prefix(y, top);
  mpz_fdiv_r_2exp(a.get_mpz_t(), a.get_mpz_t(), width);
  mpz_fdiv_r_2exp(b.get_mpz_t(), b.get_mpz_t(), width);
  if (a == b) return std::nullopt;
  BigInt diff;
  mpz_xor(diff.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  const auto p = static_cast<std::int64_t>(mpz_sizeinbase(diff.get_mpz_t(), 2)) - 1;
  return top - p;
}

ConstructionState initial_state(const ConstructionPlan& plan) {
  ConstructionState state;
  state.plan = &plan;
  for (std::size_t e = 0; e < plan.requirements(); ++e) {
    RequirementState r;
    r.e = e;
    r.block = plan.block(e);
    r.floor = plan.block_floor(e);
    r.action_bound = action_bound(r.block.length());
    state.requirements.push_back(std::move(r));
  }
  return state;
}

bool requirement_active(const ConstructionState& state, const Adversary& adversary, std::size_t e) {
  const auto& r = state.requirements.at(e);
  if (r.actions_taken >= r.action_bound) return false;
  const auto answers = adversary.answers();
  if (!answers) return false;
  const BigInt lo = state.plan->block_floor(0);
  const BigInt hi = r.block.hi;
  return !first_difference(state.alpha, answers->first, lo, hi) &&
         !first_difference(state.beta, answers->second, lo, hi);
}

std::uint64_t default_stage_budget(const ConstructionPlan& plan) {
  Count total = 0;
  for (std::size_t e = 0; e < plan.requirements(); ++e) {
    total = saturating_add(total, saturating_pow2(plan.block(e).length()));
  }
  return total > kSaturated / 4 ? kSaturated : 4 * total;
}

ConstructionTrace run_construction(const ConstructionPlan& plan,
                                   std::vector<std::unique_ptr<Adversary>>& adversaries,
                                   std::optional<std::uint64_t> stage_budget) {
  const std::size_t count = plan.requirements();
  if (adversaries.size() != count) {
    throw Error("run_construction: need one adversary per requirement (" + std::to_string(count) +
                "), got " + std::to_string(adversaries.size()));
  }
  ConstructionTrace trace;
  trace.plan = plan;
  trace.stage_budget = stage_budget.value_or(default_stage_budget(plan));
  ConstructionState state = initial_state(trace.plan);
  for (auto& a : adversaries) a->observe(0, state.alpha, state.beta);

  const Dyadic one(1);
  std::uint64_t stage = 0;
  while (true) {
    if (stage >= trace.stage_budget) {
      trace.budget_exhausted = true;
      break;
    }
    std::optional<std::size_t> acting;
    for (std::size_t e = 0; e < count; ++e) {
      if (requirement_active(state, *adversaries[e], e)) {
        acting = e;
        break;
      }
    }
    if (!acting) break;
    ++stage;
    auto& r = state.requirements[*acting];
    const Mover mover =
        (!r.last_mover || *r.last_mover == Mover::beta) ? Mover::alpha : Mover::beta;
    const Dyadic step = Dyadic::pow2_neg(to_int64(r.block.hi, "block end"));
    Dyadic& target = mover == Mover::alpha ? state.alpha : state.beta;
    target += step;
    if (target > one) throw Error("run_construction: approximation left [0, 1]");
    r.last_mover = mover;
    ++r.actions_taken;
    for (auto& a : adversaries) a->observe(stage, state.alpha, state.beta);
    trace.stages.push_back(
        {stage, *acting, mover, state.alpha, state.beta, adversaries[*acting]->gamma()});
  }

  trace.alpha = state.alpha;
  trace.beta = state.beta;
  for (auto& a : adversaries) {
    trace.adversaries.push_back({a->name(), a->answers(), a->gamma(), a->capped()});
  }
  trace.requirements = std::move(state.requirements);
  for (std::size_t e = 0; e < count; ++e) {
    trace.requirements[e].outcome = verify_requirement(trace, e).outcome;
  }
  return trace;
}

Verdict verify_requirement(const ConstructionTrace& trace, std::size_t e) {
  Verdict v;
  if (e >= trace.adversaries.size() || e >= trace.plan.requirements()) return v;
  const auto& adv = trace.adversaries[e];
  v.gamma_exceeds_one = adv.gamma > Dyadic(1);
  const BigInt lo = trace.plan.block_floor(0);
  const BigInt hi = trace.plan.block(e).hi;
  if (!adv.answers) {
    v.answers_undefined = true;
    v.outcome = Outcome::met_by_disagreement;
    v.witness = to_int64(lo + 1, "witness");
    return v;
  }
  auto witness = first_difference(trace.alpha, adv.answers->first, lo, hi);
  const auto beta_witness = first_difference(trace.beta, adv.answers->second, lo, hi);
  if (!witness || (beta_witness && *beta_witness < *witness)) witness = beta_witness;
  if (!witness) {
    // Outside the blocks the answers can still be wrong.
    witness = first_difference(trace.alpha, adv.answers->first, BigInt(0), hi);
    if (!witness) witness = first_difference(trace.beta, adv.answers->second, BigInt(0), hi);
  }
  if (!witness) return v;
  v.witness = witness;
  v.outcome = adv.capped ? Outcome::met_by_capped_gamma : Outcome::met_by_disagreement;
  return v;
}

bool digits_isolated(const ConstructionTrace& trace) {
  Dyadic alpha;
  Dyadic beta;
  for (const auto& s : trace.stages) {
    const Interval block = trace.plan.block(s.e);
    const Dyadic& before = s.mover == Mover::alpha ? alpha : beta;
    const Dyadic& after = s.mover == Mover::alpha ? s.alpha : s.beta;
    const Dyadic& other_before = s.mover == Mover::alpha ? beta : alpha;
    const Dyadic& other_after = s.mover == Mover::alpha ? s.beta : s.alpha;
    if (other_before != other_after || before == after) return false;
    const Position k = leftmost_change(before, after);
    if (k.is_integer_part() || BigInt(static_cast<long>(k.index)) < block.lo) return false;
    if (BigInt(static_cast<long>(after.scale())) > block.hi) return false;
    alpha = s.alpha;
    beta = s.beta;
  }
  return true;
}

}  // namespace omegalab
