#include "omegalab/suites.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <memory>
#include <ostream>
#include <set>
#include <thread>

#include "omegalab/corpus.hpp"

namespace omegalab {
namespace {

constexpr std::size_t kMaxMessages = 50;

struct ItemResult {
  json row = json::object();
  std::size_t checks = 0;
  std::vector<std::string> failures;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
};

using ItemFn = std::function<ItemResult(std::size_t)>;

SuiteReport collect(const SweepConfig& config, std::vector<std::string> columns, std::size_t items,
                    const ItemFn& fn) {
  std::vector<ItemResult> results(items);
  parallel_for(items, config.workers ? config.workers : default_workers(), [&](std::size_t i) {
    try {
      results[i] = fn(i);
    } catch (const std::exception& ex) {
      results[i].row = json::object();
      results[i].check(false, std::string("error: ") + ex.what());
    }
  });
  SuiteReport report;
  report.suite = config.suite;
  report.config = config;
  columns.push_back("violations");
  report.columns = std::move(columns);
  for (std::size_t i = 0; i < items; ++i) {
    auto& r = results[i];
    r.row["violations"] = r.failures.size();
    report.checks += r.checks;
    report.violations += r.failures.size();
    for (const auto& f : r.failures) {
      if (report.messages.size() < kMaxMessages) report.messages.push_back("item " + std::to_string(i) + ": " + f);
    }
    report.rows.push_back(std::move(r.row));
  }
  return report;
}

std::string sig_text(const Signature& sig) { return to_json(sig).dump(); }

std::int64_t span_of(const Range& r) { return r.hi - r.lo + 1; }

SuiteReport atomic_suite(const SweepConfig& cfg) {
  const std::int64_t nn = span_of(cfg.n), nk = span_of(cfg.k), nc = span_of(cfg.c);
  if (cfg.n.lo < 1 || cfg.k.lo < 0 || cfg.c.lo < 0) throw Error("atomic: needs n >= 1, k >= 0, c >= 0");
  return collect(cfg, {"n", "k", "c", "gamma", "predicted"}, static_cast<std::size_t>(nn * nk * nc),
                 [&](std::size_t i) {
                   const auto idx = static_cast<std::int64_t>(i);
                   const std::int64_t n = cfg.n.lo + idx / (nk * nc);
                   const std::int64_t k = cfg.k.lo + (idx / nc) % nk;
                   const std::int64_t c = cfg.c.lo + idx % nc;
                   const auto trace = hload(UseFunction::offset(c), k, k + n);
                   const Dyadic predicted = predict_atomic(n, k, c);
                   ItemResult r;
                   r.row = json{{"n", n},
                                {"k", k},
                                {"c", c},
                                {"gamma", trace.final_state.gamma.to_string()},
                                {"predicted", predicted.to_string()}};
                   r.check(trace.final_state.gamma == predicted,
                           "gamma " + trace.final_state.gamma.to_string() + " != " + predicted.to_string());
                   return r;
                 });
}

// Every (k, t, m) load on one signature against the exact prediction.
ItemResult general_item(const Signature& sig) {
  ItemResult r;
  const UseFunction h = UseFunction::plus_signature(sig);
  std::size_t loads = 0, floors = 0, replayed = 0;
  for (std::size_t k = 0; k < sig.length(); ++k) {
    const std::int64_t hi = to_int64(sig[k].interval.hi, "load end");
    for (std::size_t t = 0; t <= k; ++t) {
      const auto& base = sig[k - t].interval;
      const std::int64_t first = to_int64(base.lo, "interval start") - 1;
      const std::int64_t last = to_int64(base.hi, "interval end");
      for (std::int64_t m = first; m <= last; ++m) {
        const auto p = predict_general(sig, k, t, m);
        const Dyadic gamma = m < hi ? hload_final(h, m, hi) : Dyadic{};
        ++loads;
        const std::string where =
            "k=" + std::to_string(k) + " t=" + std::to_string(t) + " m=" + std::to_string(m);
        r.check(satisfies_constraint(p, m, gamma),
                where + ": T(2^m gamma) = " + truncate_at(gamma.shifted(m), p.truncation_constant).to_string() +
                    ", predicted " + p.constraint.to_string());
        if (p.floor) {
          ++floors;
          r.check(gamma >= *p.floor, where + ": gamma below 2^-m S_k(t)");
        }
        if (m < hi && hi - m <= 10) {
          ++replayed;
          r.check(hload(h, m, hi).final_state.gamma == gamma, where + ": step engine disagrees");
        }
      }
    }
  }
  r.row = json{{"signature", sig_text(sig)}, {"loads", loads}, {"floors", floors}, {"replayed", replayed}};
  return r;
}

SuiteReport general_suite(const SweepConfig& cfg) {
  const auto corpus = signature_corpus(cfg.seed, cfg.count);
  return collect(cfg, {"index", "signature", "loads", "floors", "replayed"}, corpus.size(), [&](std::size_t i) {
    ItemResult r = general_item(corpus[i]);
    r.row["index"] = i;
    return r;
  });
}

SuiteReport truncsums_suite(const SweepConfig& cfg) {
  const auto corpus = signature_corpus(cfg.seed, cfg.count);
  return collect(cfg, {"index", "signature", "reports", "min_margin"}, corpus.size(), [&](std::size_t i) {
    const auto& sig = corpus[i];
    ItemResult r;
    std::size_t reports = 0;
    std::optional<Dyadic> min_margin;
    for (std::size_t k = 1; k < sig.length(); ++k) {
      for (std::size_t t = 0; t < k; ++t) {
        const auto rep = lower_bound_report(sig, k, t);
        ++reports;
        r.check(rep.holds, "k=" + std::to_string(k) + " t=" + std::to_string(t) + ": S_k(t) = " +
                               rep.truncated.to_string() + " below weight - 1");
        if (rep.holds && (!min_margin || rep.margin < *min_margin)) min_margin = rep.margin;
      }
    }
    r.row = json{{"index", i},
                 {"signature", sig_text(sig)},
                 {"reports", reports},
                 {"min_margin", min_margin ? json(min_margin->to_string()) : json(nullptr)}};
    return r;
  });
}

struct GridGame {
  std::int64_t c;
  std::int64_t lo;
  std::int64_t hi;
};

// 20 loads: offsets 0..4 on four intervals.
std::vector<GridGame> game_grid() {
  std::vector<GridGame> out;
  const std::pair<std::int64_t, std::int64_t> intervals[] = {{0, 4}, {1, 4}, {2, 6}, {1, 8}};
  for (std::int64_t c = 0; c <= 4; ++c) {
    for (const auto& [lo, hi] : intervals) out.push_back({c, lo, hi});
  }
  return out;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  Rng rng = item_rng(seed, (a << 32) ^ b);
  return rng();
}

SuiteReport dominance_suite(const SweepConfig& cfg) {
  const auto grid = game_grid();
  return collect(cfg, {"use", "lo", "hi", "responders", "stages", "identical"}, grid.size(), [&](std::size_t i) {
    const auto& g = grid[i];
    const UseFunction h = UseFunction::offset(g.c);
    ItemResult r;
    std::size_t stages = 0, identical = 0;
    for (std::size_t j = 0; j < cfg.count; ++j) {
      const auto rep = compare_strategies(h, g.lo, g.hi, random_over_responder(mix(cfg.seed, i, j)));
      stages = rep.stages;
      identical += rep.identical ? 1 : 0;
      r.check(rep.dominated(), "responder " + std::to_string(j) + " undercut least effort at stage " +
                                   std::to_string(rep.first_violation.value_or(0)));
    }
    r.row = json{{"use", h.describe()}, {"lo", g.lo},         {"hi", g.hi},
                 {"responders", cfg.count}, {"stages", stages}, {"identical", identical}};
    return r;
  });
}

SuiteReport accumulation_suite(const SweepConfig& cfg) {
  const auto grid = game_grid();
  return collect(cfg, {"use", "lo", "hi", "offsets", "stages"}, grid.size(), [&](std::size_t i) {
    const auto& g = grid[i];
    const UseFunction h = UseFunction::offset(g.c);
    // Demands start at lo + 1 + c, so offsets live on the first lo + c digits.
    const std::int64_t width = g.lo + g.c;
    ItemResult r;
    std::size_t stages = 0;
    for (std::size_t j = 0; j < cfg.count; ++j) {
      Rng rng = item_rng(mix(cfg.seed, i, j), 0);
      const auto top = (std::uint64_t{1} << width);
      const Dyadic offset(BigInt(static_cast<unsigned long>(rng() % top)), width);
      const auto rep = accumulation_check(h, g.lo, g.hi, offset);
      stages = rep.stages;
      r.check(rep.holds(), "offset " + offset.to_string() + " drifted at stage " +
                               std::to_string(rep.first_violation.value_or(0)));
    }
    r.row = json{{"use", h.describe()}, {"lo", g.lo}, {"hi", g.hi}, {"offsets", cfg.count}, {"stages", stages}};
    return r;
  });
}

std::vector<std::unique_ptr<Adversary>> least_effort_pool(const Signature& sig, std::size_t count) {
  std::vector<std::unique_ptr<Adversary>> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(std::make_unique<LeastEffortTracker>(UseFunction::plus_signature(sig)));
  }
  return out;
}

SuiteReport construction_suite(const SweepConfig& cfg) {
  // Plans are built sequentially; runs are independent.
  return collect(cfg, {"requirements", "stages", "alpha", "beta", "outcomes", "actions"}, cfg.count,
                 [&](std::size_t i) {
                   const std::size_t requirements = i + 1;
                   const auto plan = build_plan(tower_signature(requirements), requirements);
                   auto pool = least_effort_pool(plan.signature, requirements);
                   const auto trace = run_construction(plan, pool);
                   auto again = least_effort_pool(plan.signature, requirements);
                   const auto replay = run_construction(plan, again);

                   ItemResult r;
                   const Dyadic one(1);
                   r.check(!trace.budget_exhausted, "stage budget exhausted");
                   r.check(trace.alpha <= one && trace.beta <= one, "alpha or beta left [0, 1]");
                   r.check(digits_isolated(trace), "a requirement touched digits outside its block");
                   json outcomes = json::array(), actions = json::array();
                   for (std::size_t e = 0; e < requirements; ++e) {
                     const auto& req = trace.requirements[e];
                     outcomes.push_back(to_string(req.outcome));
                     actions.push_back(req.actions_taken);
                     r.check(req.outcome != Outcome::open, "R_" + std::to_string(e) + " left open");
                     r.check(req.actions_taken <= req.action_bound,
                             "R_" + std::to_string(e) + " exceeded its action bound");
                   }
                   r.check(to_json(trace).dump() == to_json(replay).dump(), "replay differs");
                   r.row = json{{"requirements", requirements},
                                {"stages", trace.stages.size()},
                                {"alpha", trace.alpha.to_string()},
                                {"beta", trace.beta.to_string()},
                                {"outcomes", outcomes},
                                {"actions", actions}};
                   return r;
                 });
}

SuiteReport coding_suite(const SweepConfig& cfg) {
  return collect(cfg, {"index", "stages", "precision", "n", "set_bits_read", "positions"}, cfg.count,
                 [&](std::size_t i) {
                   Rng rng = item_rng(cfg.seed, i);
                   const auto a = random_approximation(rng, 64, 12);
                   const auto n = std::uniform_int_distribution<std::int64_t>(1, 12)(rng);
                   const auto set = encode_set(a, n);
                   ItemResult r;
                   const auto bits = (std::uint64_t{1} << n) - 1;
                   r.check(set.bits.size() == bits, "coded set has the wrong length");
                   SetReader reader(set);
                   const auto decoded = decode_real(reader, a, n);
                   r.check(decoded.prefix == prefix(a.final_value(), n), "decode(encode) lost the prefix");
                   r.check(decoded.set_bits_read <= bits, "decoding read past 2^n - 1 set bits");
                   for (std::uint64_t pos = 1; pos <= bits; ++pos) {
                     // The oracle throws on reads beyond floor(log2 pos) + 1 digits.
                     PrefixOracle oracle(a.final_value(), block_of(pos));
                     const int bit = set_from_real(oracle, a, pos);
                     r.check(bit == (set.bits[pos - 1] == '1'), "set_from_real wrong at " + std::to_string(pos));
                   }
                   r.row = json{{"index", i},
                                {"stages", a.stages()},
                                {"precision", a.precision()},
                                {"n", n},
                                {"set_bits_read", decoded.set_bits_read},
                                {"positions", bits}};
                   return r;
                 });
}

SuiteReport kc_suite(const SweepConfig& cfg) {
  return collect(cfg, {"index", "requests", "granted", "refused", "reduction_weight"}, cfg.count,
                 [&](std::size_t i) {
                   Rng rng = item_rng(cfg.seed, i);
                   ItemResult r;
                   KCState state;
                   std::set<std::string> issued;
                   const auto requests = std::uniform_int_distribution<int>(1, 40)(rng);
                   std::size_t granted = 0, refused = 0;
                   for (int q = 0; q < requests; ++q) {
                     const auto len = static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 10)(rng));
                     const bool room = Dyadic::pow2_neg(static_cast<std::int64_t>(len)) <= state.remaining();
                     r.check(state.fits(len) == room, "fits disagrees with the remaining capacity");
                     try {
                       const auto word = kc_alloc(state, len);
                       ++granted;
                       r.check(room, "allocation succeeded without room");
                       r.check(word.size() == len, "codeword length differs from the request");
                       for (const auto& w : issued) {
                         const auto common = std::min(w.size(), word.size());
                         r.check(w.compare(0, common, word, 0, common) != 0, "codewords " + w + " and " + word +
                                                                                  " are comparable");
                       }
                       issued.insert(word);
                     } catch (const Error&) {
                       ++refused;
                       r.check(!room, "allocation refused despite room");
                     }
                     r.check(state.invariants_hold(), "weight or prefix-freeness broken");
                   }
                   const auto inst = random_reduction_instance(rng);
                   const auto tables = build_reduction(inst.enumeration, inst.g, inst.omega);
                   r.check(tables.request_weight < Dyadic(1), "reduction request weight reached 1");
                   r.row = json{{"index", i},
                                {"requests", requests},
                                {"granted", granted},
                                {"refused", refused},
                                {"reduction_weight", tables.request_weight.to_string()}};
                   return r;
                 });
}

SuiteReport reduction_suite(const SweepConfig& cfg) {
  const auto corpus = reduction_corpus(cfg.seed, cfg.count);
  return collect(cfg, {"index", "threshold", "decided", "bad_arguments", "solovay_items", "bad_items", "reduced"},
                 corpus.size(), [&](std::size_t i) {
                   const auto& inst = corpus[i];
                   ItemResult r;
                   const auto tables = build_reduction(inst.enumeration, inst.g, inst.omega);
                   const auto bad = bad_arguments(tables, inst.omega);
                   const Dyadic& omega = inst.omega.final_value();
                   std::size_t decided = 0;
                   for (std::int64_t n = tables.threshold + 1; n <= inst.g.size(); ++n) {
                     if (std::find(bad.begin(), bad.end(), n) != bad.end()) continue;
                     const bool member = std::any_of(inst.enumeration.begin(), inst.enumeration.end(),
                                                     [&](const Enumeration& en) { return en.n == n; });
                     const int answer =
                         decide_member(n, prefix_bits(omega, inst.g.at(n)), tables, inst.enumeration, inst.omega);
                     ++decided;
                     r.check(answer == (member ? 1 : 0), "decide_member wrong at n=" + std::to_string(n));
                   }
                   const auto ledger = solovay_items(inst.alpha, inst.omega, inst.g);
                   r.check(ledger.within_bound(), "Solovay ledger weight " + ledger.weight.to_string() +
                                                      " exceeds " + ledger.bound.to_string());
                   std::size_t reduced = 0;
                   for (std::int64_t n = 1; n <= inst.g.size(); ++n) {
                     const auto oracle = prefix_bits(omega, n + inst.g.at(n));
                     ++reduced;
                     r.check(reduce_real(n, oracle, inst.omega, inst.omega, inst.g) == prefix(omega, n),
                             "self-reduction wrong at n=" + std::to_string(n));
                   }
                   r.row = json{{"index", i},
                                {"threshold", tables.threshold},
                                {"decided", decided},
                                {"bad_arguments", bad},
                                {"solovay_items", ledger.items.size()},
                                {"bad_items", bad_items(ledger, inst.omega).size()},
                                {"reduced", reduced}};
                   return r;
                 });
}

std::vector<Dyadic> condensation_table(std::size_t which, std::int64_t levels) {
  std::vector<Dyadic> f;
  const std::uint64_t terms = std::uint64_t{1} << levels;
  f.reserve(terms);
  for (std::uint64_t i = 1; i <= terms; ++i) {
    const auto e = which == 0 ? static_cast<std::int64_t>(std::bit_width(i)) - 1 : static_cast<std::int64_t>(i);
    f.push_back(Dyadic::pow2_neg(e));
  }
  return f;
}

SuiteReport condensation_suite(const SweepConfig& cfg) {
  const auto levels = static_cast<std::int64_t>(cfg.count);
  const char* names[] = {"2^-floor(log2 i)", "2^-i"};
  return collect(cfg, {"table", "levels", "rows", "ok"}, 2, [&](std::size_t i) {
    const auto report = condensation_check(condensation_table(i, levels), levels);
    ItemResult r;
    for (const auto& row : report.rows) {
      r.check(row.holds, std::string(names[i]) + ": sandwich fails at t=" + std::to_string(row.t));
    }
    r.row = json{{"table", names[i]}, {"levels", levels}, {"rows", report.rows.size()}, {"ok", report.ok()}};
    return r;
  });
}

using SuiteFn = SuiteReport (*)(const SweepConfig&);

struct SuiteEntry {
  const char* name;
  SuiteFn fn;
  std::size_t default_count;
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> entries{
      {"atomic", atomic_suite, 0},
      {"general", general_suite, 200},
      {"dominance", dominance_suite, 100},
      {"accumulation", accumulation_suite, 100},
      {"truncsums", truncsums_suite, 200},
      {"construction", construction_suite, 3},
      {"coding", coding_suite, 500},
      {"kc", kc_suite, 500},
      {"reduction", reduction_suite, 200},
      {"condensation", condensation_suite, 12},
  };
  return entries;
}

}  // namespace

Range Range::parse(const std::string& text) {
  auto number = [&](std::string_view s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw Error("range: cannot parse \"" + text + "\"");
    return v;
  };
  const auto dots = text.find("..");
  Range r;
  if (dots == std::string::npos) {
    r.lo = r.hi = number(text);
  } else {
    r.lo = number(std::string_view(text).substr(0, dots));
    r.hi = number(std::string_view(text).substr(dots + 2));
  }
  if (r.hi < r.lo) throw Error("range: empty range \"" + text + "\"");
  return r;
}

std::string Range::to_string() const {
  return lo == hi ? std::to_string(lo) : std::to_string(lo) + ".." + std::to_string(hi);
}

json to_json(const SweepConfig& config) {
  return json{{"suite", config.suite}, {"n", config.n.to_string()}, {"k", config.k.to_string()},
              {"c", config.c.to_string()}, {"seed", config.seed},     {"count", config.count}};
}

json to_json(const SuiteReport& report) {
  return json{{"suite", report.suite},
              {"config", to_json(report.config)},
              {"checks", report.checks},
              {"violations", report.violations},
              {"messages", report.messages},
              {"columns", report.columns},
              {"rows", report.rows}};
}

void write_csv(std::ostream& os, const SuiteReport& report) {
  for (std::size_t i = 0; i < report.columns.size(); ++i) os << (i ? "," : "") << report.columns[i];
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
      if (i) os << ',';
      const auto it = row.find(report.columns[i]);
      if (it == row.end() || it->is_null()) continue;
      std::string s = it->is_string() ? it->get<std::string>() : it->dump();
      if (s.find_first_of(",\"") != std::string::npos) {
        std::string quoted = "\"";
        for (char ch : s) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        s = quoted + "\"";
      }
      os << s;
    }
    os << '\n';
  }
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : registry()) out.emplace_back(e.name);
    return out;
  }();
  return names;
}

bool is_suite(const std::string& name) {
  return std::find(suite_names().begin(), suite_names().end(), name) != suite_names().end();
}

SuiteReport run_suite(const SweepConfig& config) {
  for (const auto& entry : registry()) {
    if (config.suite != entry.name) continue;
    SweepConfig cfg = config;
    if (cfg.count == 0) cfg.count = entry.default_count;
    return entry.fn(cfg);
  }
  throw Error("unknown suite \"" + config.suite + "\"");
}

std::size_t default_workers() {
  if (const char* env = std::getenv("OMEGALAB_WORKERS")) {
    std::size_t v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size() && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace omegalab
