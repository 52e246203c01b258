// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "omegalab/games.hpp"
#include "omegalab/suites.hpp"

using namespace omegalab;

namespace {

struct CheckResult {
  bool ok = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0: no runtime limit
  std::function<CheckResult()> run;
};

CheckResult suites(std::initializer_list<SweepConfig> configs) {
  CheckResult out{true, {}};
  std::size_t checks = 0, violations = 0, rows = 0;
  for (const auto& cfg : configs) {
    const auto report = run_suite(cfg);
    checks += report.checks;
    violations += report.violations;
    rows += report.rows.size();
    for (const auto& m : report.messages) std::fprintf(stderr, "  %s: %s\n", cfg.suite.c_str(), m.c_str());
  }
  out.ok = violations == 0 && checks > 0;
  out.detail = std::to_string(rows) + " rows, " + std::to_string(checks) + " checks, " +
               std::to_string(violations) + " violations";
  return out;
}

SweepConfig config(std::string suite, std::uint64_t seed = 1, std::size_t count = 0) {
  SweepConfig c;
  c.suite = std::move(suite);
  c.seed = seed;
  c.count = count;
  return c;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "atomic attack", 10,
       [] {
         auto c = config("atomic");
         c.n = {1, 10};
         c.k = {0, 8};
         c.c = {0, 6};
         return suites({c});
       }},
      {2, "general h-load", 60, [] { return suites({config("general", 7, 200)}); }},
      {3, "least-effort dominance and accumulation", 30,
       [] { return suites({config("dominance", 3, 100), config("accumulation", 3, 100)}); }},
      {4, "truncated sums", 0, [] { return suites({config("truncsums", 7, 200)}); }},
      {5, "false-bound counterexample", 0,
       [] {
         const auto search = false_bound_search(1, 5000, 3);
         CheckResult out;
         out.ok = search.witness.has_value();
         out.detail = std::to_string(search.tried) + " candidates";
         if (search.witness) {
           const auto& w = *search.witness;
           out.detail += ", gamma " + w.gamma.to_string() + " < " + w.bound.to_string() + " on (" +
                         std::to_string(w.k) + ", " + std::to_string(w.k + w.n) + "]";
         }
         return out;
       }},
      {6, "construction", 120, [] { return suites({config("construction", 1, 3)}); }},
      {7, "coding", 30, [] { return suites({config("coding", 11, 500)}); }},
      {8, "kc allocator", 10, [] { return suites({config("kc", 13, 500)}); }},
      {9, "reductions", 30, [] { return suites({config("reduction", 17, 200)}); }},
      {10, "condensation", 5, [] { return suites({config("condensation", 1, 12)}); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    CheckResult out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs >= c.budget_s) {
      out.ok = false;
      out.detail += ", over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget";
    }
    std::printf("criterion %2d %s: %s (%s; %.2f s)\n", c.id, out.ok ? "PASS" : "FAIL", c.name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.ok) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
