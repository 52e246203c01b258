#include <doctest.h>

#include "omegalab/construction.hpp"
#include "omegalab/corpus.hpp"
#include "omegalab/serialize.hpp"
#include "oracles.hpp"

using namespace omegalab;

namespace {

std::vector<std::unique_ptr<Adversary>> trackers(const Signature& sig, std::size_t n, bool overflow = false) {
  std::vector<std::unique_ptr<Adversary>> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(std::make_unique<LeastEffortTracker>(UseFunction::plus_signature(sig), overflow));
  }
  return out;
}

const ConstructionPlan& plan1() {
  static const ConstructionPlan plan = build_plan(tower_signature(1), 1);
  return plan;
}

struct Run {
  ConstructionTrace trace;
  std::vector<LeastEffortTracker::Response> responses;
};

const Run& least_effort_run() {
  static const Run run = [] {
    auto pool = trackers(plan1().signature, 1);
    Run r{run_construction(plan1(), pool), {}};
    r.responses = dynamic_cast<LeastEffortTracker&>(*pool[0]).responses();
    return r;
  }();
  return run;
}

}  // namespace

TEST_CASE("plan blocks and bounds") {
  const auto state = initial_state(plan1());
  REQUIRE(state.requirements.size() == 1);
  CHECK(state.requirements[0].block == Interval{3, 20});
  CHECK(state.requirements[0].action_bound == 2 * ((std::uint64_t{1} << 18) - 1));
  CHECK(default_stage_budget(plan1()) == 4 * (std::uint64_t{1} << 18));
  const auto big = build_plan(tower_signature(2), 2);
  CHECK(initial_state(big).requirements[1].action_bound == UINT64_MAX);
  CHECK(default_stage_budget(big) == UINT64_MAX);
}

TEST_CASE("requirement activity") {
  auto state = initial_state(plan1());
  LeastEffortTracker tracker(UseFunction::plus_signature(plan1().signature));
  CHECK_FALSE(requirement_active(state, tracker, 0));  // nothing observed yet
  tracker.observe(0, state.alpha, state.beta);
  CHECK(requirement_active(state, tracker, 0));
  state.requirements[0].actions_taken = state.requirements[0].action_bound;
  CHECK_FALSE(requirement_active(state, tracker, 0));
  CHECK_FALSE(requirement_active(initial_state(plan1()), *ScriptedAdversary::silent(), 0));

  // Disagreement on a block digit deactivates.
  ScriptedAdversary liar("liar", [](std::uint64_t, const Dyadic&, const Dyadic&) {
    return std::optional<Answers>{Answers{Dyadic::pow2_neg(5), Dyadic{}}};
  });
  liar.observe(0, Dyadic{}, Dyadic{});
  CHECK_FALSE(requirement_active(initial_state(plan1()), liar, 0));
}

TEST_CASE("least-effort tracker loses to a single requirement") {
  const auto& run = least_effort_run();
  const auto& trace = run.trace;
  CHECK_FALSE(trace.budget_exhausted);
  REQUIRE(trace.requirements.size() == 1);
  CHECK(trace.requirements[0].outcome == Outcome::met_by_capped_gamma);
  CHECK(trace.requirements[0].actions_taken <= trace.requirements[0].action_bound);
  CHECK(trace.adversaries[0].capped);
  CHECK(trace.adversaries[0].gamma <= Dyadic(1));
  CHECK(trace.alpha <= Dyadic(1));
  CHECK(trace.beta <= Dyadic(1));
  CHECK(digits_isolated(trace));

  const auto verdict = verify_requirement(trace, 0);
  CHECK(verdict.outcome == Outcome::met_by_capped_gamma);
  REQUIRE(verdict.witness.has_value());
  CHECK(*verdict.witness >= 3);
  CHECK(*verdict.witness <= 20);
  CHECK_FALSE(verdict.gamma_exceeds_one);

  // The whole block would push the tracker past 1.
  CHECK(hload_final(UseFunction::plus_signature(plan1().signature), 2, 20) > Dyadic(1));
}

TEST_CASE("tracker gamma follows the games engine") {
  const auto& run = least_effort_run();
  const auto h = UseFunction::plus_signature(plan1().signature);
  // The first 2 (2^10 - 1) stages of the block load coincide with the load on (10, 20].
  const auto load = hload(h, 10, 20);
  REQUIRE(run.responses.size() >= load.steps.size());
  for (std::size_t s = 0; s < load.steps.size(); ++s) {
    CHECK(run.responses[s].demand == load.steps[s].demand);
    CHECK(run.responses[s].gamma_after == load.steps[s].gamma_after);
  }
  // Every response is the least increment for the recorded demand.
  oracle::Q gamma(0);
  for (const auto& r : run.responses) {
    gamma += oracle::least_increment(gamma, r.demand);
    CHECK(oracle::q(r.gamma_after) == gamma);
  }
  // Demands come from the leftmost change of the published reals.
  Dyadic alpha, beta;
  for (std::size_t s = 0; s < 5000; ++s) {
    const auto& st = run.trace.stages[s];
    const Dyadic& before = st.mover == Mover::alpha ? alpha : beta;
    const Dyadic& after = st.mover == Mover::alpha ? st.alpha : st.beta;
    CHECK(run.responses[s].demand == h(leftmost_change(before, after).index));
    alpha = st.alpha;
    beta = st.beta;
  }
}

TEST_CASE("trace determinism") {
  auto pool = trackers(plan1().signature, 1);
  const auto again = run_construction(plan1(), pool);
  CHECK(again.stages == least_effort_run().trace.stages);
  CHECK(to_json(again).dump() == to_json(least_effort_run().trace).dump());
}

TEST_CASE("silent adversary") {
  std::vector<std::unique_ptr<Adversary>> pool;
  pool.push_back(ScriptedAdversary::silent());
  const auto trace = run_construction(plan1(), pool);
  CHECK(trace.stages.empty());
  const auto v = verify_requirement(trace, 0);
  CHECK(v.answers_undefined);
  CHECK(v.outcome == Outcome::met_by_disagreement);
  CHECK(trace.requirements[0].outcome == Outcome::met_by_disagreement);
}

TEST_CASE("uncapped tracker exhibits gamma above 1") {
  auto pool = trackers(plan1().signature, 1, true);
  const auto trace = run_construction(plan1(), pool);
  CHECK(trace.requirements[0].actions_taken == trace.requirements[0].action_bound);
  const auto v = verify_requirement(trace, 0);
  CHECK(v.outcome == Outcome::open);
  CHECK(v.gamma_exceeds_one);
  CHECK_FALSE(v.witness.has_value());
  CHECK(trace.alpha == Dyadic::parse("0.00111111111111111111"));
}

TEST_CASE("empty trace is open") {
  ConstructionTrace empty;
  empty.plan = plan1();
  CHECK(verify_requirement(empty, 0).outcome == Outcome::open);
}

TEST_CASE("later requirements keep to their block") {
  const auto plan = build_plan(tower_signature(2), 2);
  std::vector<std::unique_ptr<Adversary>> pool;
  pool.push_back(ScriptedAdversary::silent());
  pool.push_back(std::make_unique<LeastEffortTracker>(UseFunction::plus_signature(plan.signature)));
  const auto trace = run_construction(plan, pool, 64);
  CHECK(trace.budget_exhausted);
  CHECK(trace.stages.size() == 64);
  CHECK(digits_isolated(trace));
  for (const auto& s : trace.stages) CHECK(s.e == 1);
  CHECK(prefix(trace.alpha, 20) == 0);
  CHECK(prefix(trace.beta, 20) == 0);
  CHECK(trace.requirements[0].actions_taken == 0);
}

TEST_CASE("pool size must match the plan") {
  auto pool = trackers(plan1().signature, 2);
  CHECK_THROWS_AS(run_construction(plan1(), pool), Error);
}

TEST_CASE("first difference") {
  const auto x = Dyadic::parse("0.1011");
  const auto y = Dyadic::parse("0.1001");
  CHECK(first_difference(x, y, 0, 10) == 3);
  CHECK_FALSE(first_difference(x, y, 3, 10).has_value());
  CHECK_FALSE(first_difference(x, x, 0, 10).has_value());
}
