// omegalab command line: verification sweeps and single-scenario runs.

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "omegalab/corpus.hpp"
#include "omegalab/suites.hpp"

namespace ol = omegalab;
using ol::json;

namespace {

constexpr int kViolations = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_json(const std::string& path) {
  try {
    return json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// Inline JSON, or @path to read it from a file.
json inline_json(const std::string& text) {
  if (!text.empty() && text.front() == '@') return load_json(text.substr(1));
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("bad JSON argument: ") + e.what());
  }
}

// "x+c" or "x+g" (with the table from --g).
ol::UseFunction parse_use(const std::string& expr, const std::string& table) {
  std::string s;
  for (char ch : expr) {
    if (ch != ' ') s += ch;
  }
  if (s.rfind("x+", 0) != 0) throw UsageError("use function must be \"x+c\" or \"x+g\"");
  const std::string rest = s.substr(2);
  if (rest == "g") {
    if (table.empty()) throw UsageError("\"x+g\" needs --g with a JSON array");
    return ol::UseFunction::plus_table(ol::use_table_from_json(inline_json(table)));
  }
  std::int64_t c = 0;
  const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), c);
  if (ec != std::errc{} || ptr != rest.data() + rest.size() || c < 0) {
    throw UsageError("use function must be \"x+c\" with c >= 0 or \"x+g\"");
  }
  return ol::UseFunction::offset(c);
}

void emit(const std::string& out, const std::function<void(std::ostream&)>& write) {
  if (out.empty() || out == "-") {
    write(std::cout);
    return;
  }
  std::ofstream file(out);
  if (!file) throw UsageError("cannot write " + out);
  write(file);
}

void emit_json(const std::string& out, const json& j) {
  emit(out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

struct VerifyOptions {
  std::string suite;
  std::string n = "1..10", k = "0..8", c = "0..6";
  std::uint64_t seed = 1;
  std::size_t count = 0;
  std::size_t workers = 0;
  std::string out;
  std::string format = "json";
};

int cmd_verify(const VerifyOptions& o) {
  if (!ol::is_suite(o.suite)) throw UsageError("unknown suite \"" + o.suite + "\"");
  ol::SweepConfig cfg;
  cfg.suite = o.suite;
  try {
    cfg.n = ol::Range::parse(o.n);
    cfg.k = ol::Range::parse(o.k);
    cfg.c = ol::Range::parse(o.c);
  } catch (const ol::Error& e) {
    throw UsageError(e.what());
  }
  cfg.seed = o.seed;
  cfg.count = o.count;
  cfg.workers = o.workers;
  const auto report = ol::run_suite(cfg);
  if (!o.out.empty() || o.format == "csv") {
    if (o.format == "csv") {
      emit(o.out, [&](std::ostream& os) { ol::write_csv(os, report); });
    } else {
      emit_json(o.out, ol::to_json(report));
    }
  }
  std::cerr << report.suite << ": " << report.rows.size() << " rows, " << report.checks << " checks, "
            << report.violations << " violations\n";
  for (const auto& m : report.messages) std::cerr << "  " << m << '\n';
  return report.ok() ? 0 : kViolations;
}

struct RunOptions {
  std::string use = "x+2";
  std::string table;
  std::string interval = "1..3";
  std::string first = "alpha";
  std::string plan;
  std::string adversaries = "least_effort:1";
  std::uint64_t budget = 0;
  std::string approx;
  std::int64_t n = 4;
  std::string instance;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
};

int run_hload(const RunOptions& o) {
  const auto h = parse_use(o.use, o.table);
  const auto range = ol::Range::parse(o.interval);
  ol::HloadOptions options;
  if (o.first == "beta") options.first = ol::Mover::beta;
  else if (o.first != "alpha") throw UsageError("--first must be alpha or beta");
  const auto trace = ol::hload(h, range.lo, range.hi, options);
  if (o.format == "csv") {
    emit(o.out, [&](std::ostream& os) { ol::write_csv(os, trace); });
  } else {
    emit_json(o.out, ol::to_json(trace));
  }
  std::cerr << "final gamma " << trace.final_state.gamma << " (" << trace.final_state.gamma.to_binary()
            << ") after " << trace.steps.size() << " steps\n";
  return 0;
}

std::vector<std::unique_ptr<ol::Adversary>> parse_adversaries(const std::string& list,
                                                              const ol::Signature& sig) {
  std::vector<std::unique_ptr<ol::Adversary>> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto colon = item.find(':');
    const std::string kind = item.substr(0, colon);
    std::size_t count = 1;
    if (colon != std::string::npos) {
      const std::string num = item.substr(colon + 1);
      const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), count);
      if (ec != std::errc{} || ptr != num.data() + num.size()) throw UsageError("bad adversary count in " + item);
    }
    for (std::size_t i = 0; i < count; ++i) {
      if (kind == "least_effort") {
        out.push_back(std::make_unique<ol::LeastEffortTracker>(ol::UseFunction::plus_signature(sig)));
      } else if (kind == "silent") {
        out.push_back(ol::ScriptedAdversary::silent());
      } else {
        throw UsageError("unknown adversary kind \"" + kind + "\" (least_effort, silent)");
      }
    }
  }
  return out;
}

int run_construct(const RunOptions& o) {
  if (o.plan.empty()) throw UsageError("run construct needs --plan");
  const auto plan = ol::plan_from_json(load_json(o.plan));
  auto adversaries = parse_adversaries(o.adversaries, plan.signature);
  std::optional<std::uint64_t> budget;
  if (o.budget) budget = o.budget;
  const auto trace = ol::run_construction(plan, adversaries, budget);
  if (o.format == "csv") {
    emit(o.out, [&](std::ostream& os) { ol::write_csv(os, trace); });
  } else {
    emit_json(o.out, ol::to_json(trace));
  }
  bool open = false;
  for (const auto& r : trace.requirements) {
    std::cerr << "R_" << r.e << ": " << ol::to_string(r.outcome) << " after " << r.actions_taken << " actions\n";
    open = open || r.outcome == ol::Outcome::open;
  }
  std::cerr << trace.stages.size() << " stages" << (trace.budget_exhausted ? " (budget exhausted)" : "") << '\n';
  return open ? kViolations : 0;
}

int run_encode(const RunOptions& o) {
  if (o.approx.empty()) throw UsageError("run encode needs --approx");
  const auto a = ol::approx_from_json(load_json(o.approx));
  const auto set = ol::encode_set(a, o.n);
  if (o.format == "csv") {
    emit(o.out, [&](std::ostream& os) {
      os << "position,bit\n";
      for (std::size_t i = 0; i < set.bits.size(); ++i) os << i + 1 << ',' << set.bits[i] << '\n';
    });
  } else if (o.out.empty()) {
    std::cout << set.bits << '\n';
  } else {
    json counts = json::array();
    for (std::int64_t i = 1; i <= o.n; ++i) counts.push_back(ol::flip_counts(a, i));
    emit_json(o.out, json{{"n", o.n}, {"flip_counts", counts}, {"bits", set.bits}});
  }
  return 0;
}

ol::ReductionInstance instance_from_json(const json& j) {
  ol::ReductionInstance inst{ol::use_table_from_json(j.at("g")), {}, ol::approx_from_json(j.at("omega")),
                             ol::ApproxSequence{}};
  for (const auto& e : j.value("enumeration", json::array())) {
    inst.enumeration.push_back({e.at(0).get<std::int64_t>(), e.at(1).get<std::size_t>()});
  }
  inst.alpha = j.contains("alpha") ? ol::approx_from_json(j.at("alpha")) : inst.omega;
  return inst;
}

int run_reduce(const RunOptions& o) {
  ol::ReductionInstance inst;
  if (o.instance.empty()) {
    ol::Rng rng = ol::item_rng(o.seed, 0);
    inst = ol::random_reduction_instance(rng);
  } else {
    inst = instance_from_json(load_json(o.instance));
  }
  const auto tables = ol::build_reduction(inst.enumeration, inst.g, inst.omega);
  const auto& omega = inst.omega.final_value();
  json decisions = json::array();
  for (std::int64_t n = tables.threshold + 1; n <= inst.g.size(); ++n) {
    decisions.push_back(
        json{{"n", n},
             {"bit", ol::decide_member(n, ol::prefix_bits(omega, inst.g.at(n)), tables, inst.enumeration, inst.omega)}});
  }
  json out{{"omega", ol::to_json(omega)},
           {"tables", ol::to_json(tables)},
           {"machine", ol::to_json(tables.machine)},
           {"bad_arguments", ol::bad_arguments(tables, inst.omega)},
           {"decisions", decisions}};
  if (inst.alpha.stages() == inst.omega.stages()) {
    out["solovay"] = ol::to_json(ol::solovay_items(inst.alpha, inst.omega, inst.g));
  }
  emit_json(o.out, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"omegalab: exact dyadic games, constructions and reductions"};
  app.require_subcommand(1);

  VerifyOptions verify;
  auto* v = app.add_subcommand("verify", "Run a verification suite over a parameter grid");
  std::string positional;
  v->add_option("name", positional, "Suite name");
  v->add_option("--suite", verify.suite, "Suite name (alternative to the positional form)");
  v->add_option("--n", verify.n, "n range, e.g. 1..10")->capture_default_str();
  v->add_option("--k", verify.k, "k range")->capture_default_str();
  v->add_option("--c", verify.c, "c range")->capture_default_str();
  v->add_option("--seed", verify.seed, "Generator seed")->capture_default_str();
  v->add_option("--count", verify.count, "Corpus size (0: suite default)")->capture_default_str();
  v->add_option("--workers", verify.workers, "Worker threads (default: OMEGALAB_WORKERS or hardware)");
  v->add_option("--out", verify.out, "Report path");
  v->add_option("--format", verify.format, "Report format")->check(CLI::IsMember({"json", "csv"}));

  RunOptions run;
  auto* r = app.add_subcommand("run", "Run one scenario and write its trace");
  r->set_help_flag("--help", "Print this help message and exit");
  std::string scenario;
  r->add_option("scenario", scenario, "hload, construct, encode or reduce")
      ->required()
      ->check(CLI::IsMember({"hload", "construct", "encode", "reduce"}));
  r->add_option("--h", run.use, "Use function: \"x+c\" or \"x+g\"")->capture_default_str();
  r->add_option("--g", run.table, "Use table as a JSON array (or @file)");
  r->add_option("--interval", run.interval, "Load interval lo..hi, meaning (lo, hi]")->capture_default_str();
  r->add_option("--first", run.first, "First mover")->check(CLI::IsMember({"alpha", "beta"}));
  r->add_option("--plan", run.plan, "Construction plan JSON");
  r->add_option("--adversaries", run.adversaries, "kind:count[,kind:count] (least_effort, silent)")
      ->capture_default_str();
  r->add_option("--budget", run.budget, "Stage budget (0: default)");
  r->add_option("--approx", run.approx, "Approximation JSON");
  r->add_option("--n", run.n, "Digit count for encode")->capture_default_str();
  r->add_option("--instance", run.instance, "Reduction instance JSON");
  r->add_option("--seed", run.seed, "Seed for a generated reduction instance")->capture_default_str();
  r->add_option("--out", run.out, "Output path (default: stdout)");
  r->add_option("--format", run.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*v) {
      if (!positional.empty()) {
        if (!verify.suite.empty() && verify.suite != positional) throw UsageError("two different suites given");
        verify.suite = positional;
      }
      if (verify.suite.empty()) throw UsageError("verify needs a suite: " + [] {
        std::string s;
        for (const auto& n : ol::suite_names()) s += (s.empty() ? "" : ", ") + n;
        return s;
      }());
      return cmd_verify(verify);
    }
    if (scenario == "hload") return run_hload(run);
    if (scenario == "construct") return run_construct(run);
    if (scenario == "encode") return run_encode(run);
    return run_reduce(run);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nRun with --help for more information.\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kViolations;
  }
}
