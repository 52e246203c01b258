#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "omegalab/bounds.hpp"
#include "omegalab/coding.hpp"
#include "omegalab/construction.hpp"
#include "omegalab/games.hpp"
#include "omegalab/machines.hpp"
#include "omegalab/usefn.hpp"

namespace omegalab {

using json = nlohmann::ordered_json;

/// {"exact": "m/2^s", "binary": "0.b1b2..."}
json to_json(const Dyadic& x);
Dyadic dyadic_from_json(const json& j);

json to_json(const UseTable& g);
UseTable use_table_from_json(const json& j);

/// [[c, lo, hi], ...]; bounds beyond 2^53 are written as decimal strings.
json to_json(const Signature& sig);
Signature signature_from_json(const json& j);

json to_json(const ConstructionPlan& plan);
/// Accepts {"signature": ..., "boundaries": [...]} or
/// {"signature": ..., "requirements": E} (built with build_plan).
ConstructionPlan plan_from_json(const json& j);

/// Array of dyadic strings or {"values": [...]}.
ApproxSequence approx_from_json(const json& j);
json to_json(const ApproxSequence& a);

json to_json(const GameTrace& trace);
void write_csv(std::ostream& os, const GameTrace& trace);

json to_json(const ConstructionTrace& trace);
/// stage,e,mover,gamma
void write_csv(std::ostream& os, const ConstructionTrace& trace);

json to_json(const TruncatedSums& sums);
json to_json(const LowerBoundReport& report);
json to_json(const CondensationReport& report);
json to_json(const KCState& state);
json to_json(const ReductionTables& tables);
json to_json(const SolovayTestLedger& ledger);

}  // namespace omegalab
