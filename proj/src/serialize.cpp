#include "omegalab/serialize.hpp"

#include <ostream>

namespace omegalab {
namespace {

json bigint_json(const BigInt& v) {
  if (mpz_sizeinbase(v.get_mpz_t(), 2) <= 53) return json(v.get_si());
  return json(v.get_str());
}

BigInt bigint_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    BigInt v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw Error("json: bad integer string");
    return v;
  }
  throw Error("json: expected an integer");
}

}  // namespace

json to_json(const Dyadic& x) { return json{{"exact", x.to_string()}, {"binary", x.to_binary()}}; }

Dyadic dyadic_from_json(const json& j) {
  if (j.is_string()) return Dyadic::parse(j.get<std::string>());
  if (j.is_object() && j.contains("exact")) return Dyadic::parse(j.at("exact").get<std::string>());
  if (j.is_number_unsigned() || j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v < 0) throw Error("json: negative dyadic");
    return Dyadic(static_cast<std::uint64_t>(v));
  }
  throw Error("json: expected a dyadic");
}

json to_json(const UseTable& g) { return json(g.values); }

UseTable use_table_from_json(const json& j) {
  if (!j.is_array()) throw Error("json: use table must be an integer array");
  std::vector<std::int64_t> values;
  for (const auto& v : j) {
    const auto x = v.get<std::int64_t>();
    if (x < 0) throw Error("json: use table values must be nonnegative");
    values.push_back(x);
  }
  return UseTable::from(std::move(values));
}

json to_json(const Signature& sig) {
  json out = json::array();
  for (const auto& e : sig.entries()) {
    out.push_back(json::array({e.c, bigint_json(e.interval.lo), bigint_json(e.interval.hi)}));
  }
  return out;
}

Signature signature_from_json(const json& j) {
  if (!j.is_array()) throw Error("json: signature must be a list of [c, lo, hi]");
  std::vector<SignatureEntry> entries;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != 3) throw Error("json: signature rows are [c, lo, hi]");
    entries.push_back({row[0].get<std::int64_t>(),
                       Interval{bigint_from_json(row[1]), bigint_from_json(row[2])}});
  }
  return Signature(std::move(entries));
}

json to_json(const ConstructionPlan& plan) {
  json blocks = json::array();
  for (std::size_t e = 0; e < plan.requirements(); ++e) {
    const auto b = plan.block(e);
    blocks.push_back(json::array({bigint_json(b.lo), bigint_json(b.hi)}));
  }
  return json{{"signature", to_json(plan.signature)},
              {"boundaries", plan.boundaries},
              {"blocks", blocks}};
}

ConstructionPlan plan_from_json(const json& j) {
  const Signature sig = signature_from_json(j.at("signature"));
  if (j.contains("boundaries")) {
    ConstructionPlan plan{sig, j.at("boundaries").get<std::vector<std::size_t>>()};
    if (!plan_is_valid(plan)) throw Error("plan: boundaries violate the plan invariants");
    return plan;
  }
  return build_plan(sig, j.value("requirements", std::size_t{1}));
}

ApproxSequence approx_from_json(const json& j) {
  const json& values = j.is_object() ? j.at("values") : j;
  if (!values.is_array()) throw Error("json: approximation must be an array");
  std::vector<Dyadic> out;
  for (const auto& v : values) out.push_back(dyadic_from_json(v));
  return ApproxSequence(std::move(out));
}

json to_json(const ApproxSequence& a) {
  json values = json::array();
  for (const auto& v : a.values()) values.push_back(v.to_string());
  return json{{"values", values}};
}

json to_json(const GameTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    steps.push_back(json{{"mover", to_string(s.mover)},
                         {"added", s.added.to_string()},
                         {"k", s.k.index},
                         {"demand", s.demand},
                         {"gamma_before", s.gamma_before.to_string()},
                         {"gamma_after", s.gamma_after.to_string()}});
  }
  const auto& c = trace.config;
  return json{{"config",
               {{"use", c.use},
                {"interval", json::array({c.lo, c.hi})},
                {"first", to_string(c.first)},
                {"initial_gamma", to_json(c.initial_gamma)},
                {"strategy", c.strategy}}},
              {"steps", steps},
              {"final",
               {{"alpha", to_json(trace.final_state.alpha)},
                {"beta", to_json(trace.final_state.beta)},
                {"gamma", to_json(trace.final_state.gamma)},
                {"steps", trace.final_state.step}}}};
}

void write_csv(std::ostream& os, const GameTrace& trace) {
  os << "step,mover,added,k,demand,gamma_before,gamma_after\n";
  std::size_t i = 0;
  for (const auto& s : trace.steps) {
    os << ++i << ',' << to_string(s.mover) << ',' << s.added << ',' << s.k.index << ',' << s.demand
       << ',' << s.gamma_before << ',' << s.gamma_after << '\n';
  }
}

json to_json(const ConstructionTrace& trace) {
  json stages = json::array();
  for (const auto& s : trace.stages) {
    stages.push_back(json::array({s.stage, s.e, to_string(s.mover), s.alpha.to_string(),
                                  s.beta.to_string(), s.gamma.to_string()}));
  }
  json requirements = json::array();
  for (std::size_t e = 0; e < trace.requirements.size(); ++e) {
    const auto& r = trace.requirements[e];
    const Verdict v = verify_requirement(trace, e);
    requirements.push_back(json{
        {"e", r.e},
        {"block", json::array({bigint_json(r.block.lo), bigint_json(r.block.hi)})},
        {"actions_taken", r.actions_taken},
        {"action_bound", r.action_bound},
        {"last_mover", r.last_mover ? to_string(*r.last_mover) : "none"},
        {"outcome", to_string(r.outcome)},
        {"witness", v.witness ? json(*v.witness) : json(nullptr)},
        {"gamma_exceeds_one", v.gamma_exceeds_one}});
  }
  json adversaries = json::array();
  for (const auto& a : trace.adversaries) {
    adversaries.push_back(json{{"name", a.name},
                               {"defined", a.answers.has_value()},
                               {"gamma", to_json(a.gamma)},
                               {"capped", a.capped}});
  }
  return json{{"plan", to_json(trace.plan)},
              {"stage_budget", trace.stage_budget},
              {"budget_exhausted", trace.budget_exhausted},
              {"stage_columns", json::array({"stage", "e", "mover", "alpha", "beta", "gamma"})},
              {"stages", stages},
              {"final", {{"alpha", to_json(trace.alpha)}, {"beta", to_json(trace.beta)}}},
              {"requirements", requirements},
              {"adversaries", adversaries}};
}

void write_csv(std::ostream& os, const ConstructionTrace& trace) {
  os << "stage,e,mover,gamma\n";
  for (const auto& s : trace.stages) {
    os << s.stage << ',' << s.e << ',' << to_string(s.mover) << ',' << s.gamma << '\n';
  }
}

json to_json(const TruncatedSums& sums) {
  json values = json::array();
  for (const auto& v : sums.values) values.push_back(to_json(v));
  return json{{"k", sums.k}, {"values", values}};
}

json to_json(const LowerBoundReport& r) {
  return json{{"k", r.k},          {"t", r.t},         {"truncated", to_json(r.truncated)},
              {"weight", to_json(r.weight)}, {"holds", r.holds}, {"margin", to_json(r.margin)}};
}

json to_json(const CondensationReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back(json{{"t", r.t},
                        {"tail_sum", r.tail_sum.to_string()},
                        {"condensed_sum", r.condensed_sum.to_string()},
                        {"upper_sum", r.upper_sum.to_string()},
                        {"holds", r.holds}});
  }
  return json{{"levels", report.levels}, {"ok", report.ok()}, {"rows", rows}};
}

json to_json(const KCState& state) {
  json free = json::array();
  for (const auto& [len, s] : state.free()) free.push_back(s);
  json assigned = json::object();
  for (const auto& [id, s] : state.assigned()) assigned[std::to_string(id)] = s;
  return json{{"free", free}, {"assigned", assigned}, {"remaining", to_json(state.remaining())}};
}

json to_json(const ReductionTables& tables) {
  json requests = json::array();
  for (const auto& r : tables.requests) {
    requests.push_back(json{{"n", r.n},
                            {"stage", r.stage},
                            {"described", r.described},
                            {"length", r.length},
                            {"codeword", r.codeword}});
  }
  return json{{"threshold", tables.threshold},
              {"requests", requests},
              {"request_weight", to_json(tables.request_weight)}};
}

json to_json(const SolovayTestLedger& ledger) {
  json items = json::array();
  for (const auto& i : ledger.items) {
    items.push_back(json{{"index", i.index}, {"digit", i.digit}, {"string", i.string}});
  }
  return json{{"items", items},
              {"weight", to_json(ledger.weight)},
              {"bound", to_json(ledger.bound)},
              {"within_bound", ledger.within_bound()}};
}

}  // namespace omegalab
