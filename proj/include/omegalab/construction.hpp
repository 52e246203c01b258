#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "omegalab/dyadic.hpp"
#include "omegalab/games.hpp"
#include "omegalab/usefn.hpp"

namespace omegalab {

/// The pair (Phi^gamma, Psi^gamma) an adversary currently computes, as reals.
using Answers = std::pair<Dyadic, Dyadic>;

/// A deterministic opponent (Phi_e, Psi_e, gamma_e) driven by the published
/// approximations of alpha and beta.
class Adversary {
 public:
  virtual ~Adversary() = default;

  virtual std::string name() const = 0;
  /// Called once with the initial (0, 0) at stage 0 and after every stage.
  virtual void observe(std::uint64_t stage, const Dyadic& alpha, const Dyadic& beta) = 0;
  /// nullopt while the functionals are undefined.
  virtual std::optional<Answers> answers() const = 0;
  virtual Dyadic gamma() const { return {}; }
  /// True once the adversary stopped answering to keep gamma <= 1.
  virtual bool capped() const { return false; }
};

/// Copies alpha and beta through use h, moving gamma by the least amount that
/// changes gamma's prefix of length h(k) whenever the leftmost change is at k.
/// A committed answer is only replaced after that prefix changed. If the
/// response would push gamma past 1 the tracker freezes, unless
/// `allow_overflow` is set (then gamma may exceed 1 and it keeps copying).
class LeastEffortTracker : public Adversary {
 public:
  explicit LeastEffortTracker(UseFunction h, bool allow_overflow = false);

  std::string name() const override;
  void observe(std::uint64_t stage, const Dyadic& alpha, const Dyadic& beta) override;
  std::optional<Answers> answers() const override;
  Dyadic gamma() const override { return gamma_; }
  bool capped() const override { return capped_; }

  struct Response {
    std::uint64_t stage = 0;
    std::int64_t demand = 0;
    Dyadic gamma_after;
  };
  const std::vector<Response>& responses() const { return responses_; }

 private:
  UseFunction h_;
  bool allow_overflow_;
  bool started_ = false;
  bool capped_ = false;
  Dyadic alpha_copy_;
  Dyadic beta_copy_;
  Dyadic gamma_;
  std::vector<Response> responses_;
};

/// Answers from an arbitrary deterministic script.
class ScriptedAdversary : public Adversary {
 public:
  using Script =
      std::function<std::optional<Answers>(std::uint64_t stage, const Dyadic& alpha, const Dyadic& beta)>;

  ScriptedAdversary(std::string name, Script script);

  /// Never defines its functionals.
  static std::unique_ptr<Adversary> silent();

  std::string name() const override { return name_; }
  void observe(std::uint64_t stage, const Dyadic& alpha, const Dyadic& beta) override;
  std::optional<Answers> answers() const override { return current_; }

 private:
  std::string name_;
  Script script_;
  std::optional<Answers> current_;
};

enum class Outcome { open, met_by_disagreement, met_by_capped_gamma };
const char* to_string(Outcome o);

/// Saturating count: values >= 2^63 are stored as UINT64_MAX.
using Count = std::uint64_t;

struct RequirementState {
  std::size_t e = 0;
  Interval block;  // J_e as positions
  BigInt floor;    // max I_{n_e}
  Count actions_taken = 0;
  Count action_bound = 0;  // 2 (2^|J_e| - 1)
  std::optional<Mover> last_mover;
  Outcome outcome = Outcome::open;
};

struct StageRecord {
  std::uint64_t stage = 0;
  std::size_t e = 0;
  Mover mover = Mover::alpha;
  Dyadic alpha;
  Dyadic beta;
  Dyadic gamma;  // gamma of adversary e after it observed the stage
  friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

struct AdversarySummary {
  std::string name;
  std::optional<Answers> answers;
  Dyadic gamma;
  bool capped = false;
};

struct ConstructionTrace {
  ConstructionPlan plan;
  std::uint64_t stage_budget = 0;
  std::vector<StageRecord> stages;
  Dyadic alpha;
  Dyadic beta;
  bool budget_exhausted = false;
  std::vector<RequirementState> requirements;
  std::vector<AdversarySummary> adversaries;
};

/// Mutable state of a run, exposed so the activity test can be exercised on
/// its own.
struct ConstructionState {
  const ConstructionPlan* plan = nullptr;
  Dyadic alpha;
  Dyadic beta;
  std::vector<RequirementState> requirements;
};

/// Fresh state for a plan (alpha = beta = 0, nothing acted yet).
ConstructionState initial_state(const ConstructionPlan& plan);

/// Agreement of alpha/beta with the adversary's answers on every digit of
/// J_0 u ... u J_e (undefined answers disagree) and unspent action budget.
bool requirement_active(const ConstructionState& state, const Adversary& adversary, std::size_t e);

/// 4 sum_e 2^|J_e|, saturating.
std::uint64_t default_stage_budget(const ConstructionPlan& plan);

/// Runs the priority construction: each stage the least active e adds
/// 2^-(max J_e) to alpha (first time, or after beta) or to beta. Stops when
/// no requirement is active or the budget is spent. One adversary per block.
ConstructionTrace run_construction(const ConstructionPlan& plan,
                                   std::vector<std::unique_ptr<Adversary>>& adversaries,
                                   std::optional<std::uint64_t> stage_budget = std::nullopt);

struct Verdict {
  Outcome outcome = Outcome::open;
  std::optional<std::int64_t> witness;  // digit where alpha or beta disagree
  bool answers_undefined = false;
  bool gamma_exceeds_one = false;
};

Verdict verify_requirement(const ConstructionTrace& trace, std::size_t e);

/// True iff every stage of R_e only changed digits inside J_e.
bool digits_isolated(const ConstructionTrace& trace);

/// Leftmost digit in (lo, hi] where x and y differ (hi clamps to the longest
/// expansion), or nullopt if they agree there.
std::optional<std::int64_t> first_difference(const Dyadic& x, const Dyadic& y, const BigInt& lo,
                                             const BigInt& hi);

}  // namespace omegalab
