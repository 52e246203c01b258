#include "omegalab/usefn.hpp"

#include <algorithm>
#include <limits>

#include "omegalab/bounds.hpp"

namespace omegalab {

std::int64_t to_int64(const BigInt& v, const char* what) {
  if (!mpz_fits_slong_p(v.get_mpz_t())) {
    throw Error(std::string(what) + " does not fit a 64-bit integer");
  }
  return v.get_si();
}

UseTable UseTable::from(std::vector<std::int64_t> values) {
  UseTable t;
  t.values = std::move(values);
  t.monotone = std::is_sorted(t.values.begin(), t.values.end());
  return t;
}

std::int64_t UseTable::at(std::int64_t i) const {
  if (i < 1 || i > size()) {
    throw Error("use table: index " + std::to_string(i) + " outside [1, " +
                std::to_string(size()) + "]");
  }
  return values[static_cast<std::size_t>(i - 1)];
}

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(std::vector<SignatureEntry> entries) : entries_(std::move(entries)) {
  BigInt expected(1);
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    const auto& [c, iv] = entries_[j];
    if (c < 0) throw Error("signature: negative constant");
    if (iv.lo != expected || iv.hi < iv.lo) {
      throw Error("signature: intervals must partition [1, N] in order (entry " +
                  std::to_string(j) + ")");
    }
    if (j > 0 && entries_[j - 1].c >= c) {
      throw Error("signature: constants must strictly increase");
    }
    expected = iv.hi + 1;
  }
}

Signature Signature::of(std::initializer_list<std::array<std::int64_t, 3>> triples) {
  std::vector<SignatureEntry> entries;
  for (const auto& [c, lo, hi] : triples) {
    entries.push_back({c, Interval{BigInt(static_cast<long>(lo)), BigInt(static_cast<long>(hi))}});
  }
  return Signature(std::move(entries));
}

Signature Signature::from_sizes(const std::vector<std::int64_t>& constants,
                                const std::vector<BigInt>& sizes) {
  if (constants.size() != sizes.size()) throw Error("signature: size mismatch");
  std::vector<SignatureEntry> entries;
  BigInt lo(1);
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    if (sizes[j] < 1) throw Error("signature: empty interval");
    BigInt hi = lo + sizes[j] - 1;
    entries.push_back({constants[j], Interval{lo, hi}});
    lo = hi + 1;
  }
  return Signature(std::move(entries));
}

std::vector<std::int64_t> Signature::constants() const {
  std::vector<std::int64_t> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.c);
  return out;
}

BigInt Signature::extent() const {
  return entries_.empty() ? BigInt(0) : entries_.back().interval.hi;
}

std::size_t Signature::interval_of(const BigInt& x) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                             [](const SignatureEntry& e, const BigInt& v) {
                               return e.interval.hi < v;
                             });
  if (x < 1 || it == entries_.end()) {
    throw Error("signature: position " + x.get_str() + " outside [1, " + extent().get_str() + "]");
  }
  return static_cast<std::size_t>(it - entries_.begin());
}

std::int64_t Signature::g(const BigInt& x) const { return entries_[interval_of(x)].c; }

Signature signature_of(const UseTable& g) {
  if (!std::is_sorted(g.values.begin(), g.values.end())) {
    throw Error("signature_of: table is not monotone");
  }
  std::vector<SignatureEntry> entries;
  for (std::int64_t i = 1; i <= g.size(); ++i) {
    const std::int64_t v = g.at(i);
    if (!entries.empty() && entries.back().c == v) {
      entries.back().interval.hi = static_cast<long>(i);
    } else {
      entries.push_back({v, Interval{BigInt(static_cast<long>(i)), BigInt(static_cast<long>(i))}});
    }
  }
  return Signature(std::move(entries));
}

UseTable flatten(const Signature& sig) {
  std::vector<std::int64_t> values;
  for (const auto& e : sig.entries()) {
    const auto n = to_int64(e.interval.length(), "signature interval length");
    values.insert(values.end(), static_cast<std::size_t>(n), e.c);
  }
  return UseTable::from(std::move(values));
}

// ---------------------------------------------------------------------------
// UseFunction

UseFunction UseFunction::offset(std::int64_t c) {
  UseFunction h;
  h.kind_ = Kind::offset;
  h.offset_ = c;
  return h;
}

UseFunction UseFunction::table(UseTable values) {
  UseFunction h;
  h.kind_ = Kind::table;
  h.table_ = std::make_shared<const UseTable>(std::move(values));
  return h;
}

UseFunction UseFunction::plus_table(UseTable g) {
  UseFunction h;
  h.kind_ = Kind::plus_table;
  h.table_ = std::make_shared<const UseTable>(std::move(g));
  return h;
}

UseFunction UseFunction::plus_signature(Signature sig) {
  UseFunction h;
  h.kind_ = Kind::plus_signature;
  h.signature_ = std::make_shared<const Signature>(std::move(sig));
  return h;
}

std::int64_t UseFunction::operator()(std::int64_t x) const {
  switch (kind_) {
    case Kind::offset:
      return x + offset_;
    case Kind::table:
      return table_->at(x);
    case Kind::plus_table:
      return x + table_->at(x);
    case Kind::plus_signature:
      return x + signature_->g(x);
  }
  return x;
}

std::int64_t UseFunction::domain_max() const {
  switch (kind_) {
    case Kind::offset:
      return std::numeric_limits<std::int64_t>::max();
    case Kind::table:
    case Kind::plus_table:
      return table_->size();
    case Kind::plus_signature: {
      const BigInt ext = signature_->extent();
      return mpz_fits_slong_p(ext.get_mpz_t()) ? ext.get_si()
                                               : std::numeric_limits<std::int64_t>::max();
    }
  }
  return 0;
}

std::string UseFunction::describe() const {
  switch (kind_) {
    case Kind::offset:
      return offset_ >= 0 ? "x+" + std::to_string(offset_) : "x" + std::to_string(offset_);
    case Kind::table:
      return "table";
    case Kind::plus_table:
      return "x+g(table)";
    case Kind::plus_signature:
      return "x+g(signature)";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Condensation

bool CondensationReport::ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.holds; });
}

CondensationReport condensation_check(const std::vector<Dyadic>& f, std::int64_t levels) {
  if (levels < 1 || levels > 40) throw Error("condensation: level count out of range");
  const std::int64_t n = std::int64_t{1} << levels;
  if (static_cast<std::int64_t>(f.size()) < n) {
    throw Error("condensation: table shorter than 2^T");
  }
  for (std::int64_t i = 0; i < n; ++i) {
    if (f[static_cast<std::size_t>(i)].is_zero()) throw Error("condensation: f must be positive");
    if (i > 0 && f[static_cast<std::size_t>(i)] > f[static_cast<std::size_t>(i - 1)]) {
      throw Error("condensation: f increases at i = " + std::to_string(i + 1));
    }
  }
  // suffix[i] = sum_{j=i}^{n} f(j), 1-based.
  std::vector<Dyadic> suffix(static_cast<std::size_t>(n) + 2);
  for (std::int64_t i = n; i >= 1; --i) {
    suffix[static_cast<std::size_t>(i)] =
        suffix[static_cast<std::size_t>(i + 1)] + f[static_cast<std::size_t>(i - 1)];
  }
  CondensationReport report;
  report.levels = levels;
  for (std::int64_t t = 1; t <= levels; ++t) {
    CondensationLevel row;
    row.t = t;
    row.tail_sum = suffix[static_cast<std::size_t>(std::int64_t{1} << t)];
    for (std::int64_t i = t; i <= levels; ++i) {
      row.condensed_sum += f[static_cast<std::size_t>((std::int64_t{1} << i) - 1)].shifted(i);
    }
    row.upper_sum = suffix[static_cast<std::size_t>(std::int64_t{1} << (t - 1))].shifted(1);
    row.holds = row.tail_sum <= row.condensed_sum && row.condensed_sum <= row.upper_sum;
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Space transform

SpaceTransform space_transform(const UseTable& g, std::int64_t blocks, std::int64_t budget) {
  if (!g.monotone) throw Error("space_transform: table is not monotone");
  if (blocks < 0) throw Error("space_transform: negative block count");
  const std::int64_t limit = std::min(budget, g.size());
  SpaceTransform out;
  out.starts.push_back(1);
  std::vector<std::int64_t> f = g.values;
  std::int64_t next = 1;
  for (std::int64_t k = 0; k < blocks; ++k) {
    const Dyadic target = Dyadic::pow2_neg(-k);
    Dyadic weight;
    const std::int64_t start = next;
    while (weight <= target) {
      if (next > limit) {
        throw Error("budget exceeded: block " + std::to_string(k) + " starting at " +
                    std::to_string(start) + " never exceeds weight 2^" + std::to_string(k));
      }
      weight += Dyadic::pow2_neg(g.at(next));
      f[static_cast<std::size_t>(next - 1)] = g.at(next) + k;
      ++next;
    }
    out.starts.push_back(next);
  }
  for (std::int64_t i = next; i <= g.size(); ++i) {
    f[static_cast<std::size_t>(i - 1)] = g.at(i) + blocks;
  }
  out.f = UseTable::from(std::move(f));
  return out;
}

// ---------------------------------------------------------------------------
// J_c(e) partitions

IntervalIssuer::IntervalIssuer(UseTable g, std::int64_t budget)
    : g_(std::move(g)), budget_(budget) {}

IssuedInterval IntervalIssuer::next(std::int64_t e, std::int64_t c, JVariant variant) {
  if (c < 0) throw Error("partition_J: negative constant");
  const Dyadic target = Dyadic::pow2_neg(-c);
  Dyadic sum;
  std::int64_t t = next_t_;
  const std::int64_t lo = t;
  while (sum <= target) {
    if (t > budget_) {
      throw Error("budget exceeded: J interval starting at t = " + std::to_string(lo));
    }
    const std::int64_t arg_exp = variant == JVariant::exp ? t + c : t + 1;
    if (arg_exp >= 62 || (std::int64_t{1} << arg_exp) > g_.size()) {
      throw Error("budget exceeded: g not tabulated at 2^" + std::to_string(arg_exp));
    }
    const std::int64_t gx = g_.at(std::int64_t{1} << arg_exp);
    const std::int64_t exponent = (variant == JVariant::exp ? t + c : t) - gx;
    sum += Dyadic::pow2_neg(-exponent);
    ++t;
  }
  next_t_ = t;
  IssuedInterval issued{e, c, variant, lo, t - 1};
  log_.push_back(issued);
  return issued;
}

// ---------------------------------------------------------------------------
// Construction plan

Interval ConstructionPlan::block(std::size_t e) const {
  if (e + 1 >= boundaries.size()) throw Error("plan: block index out of range");
  return Interval{signature[boundaries[e]].interval.hi + 1,
                  signature[boundaries[e + 1]].interval.hi};
}

BigInt ConstructionPlan::block_floor(std::size_t e) const {
  if (e >= boundaries.size()) throw Error("plan: block index out of range");
  return signature[boundaries[e]].interval.hi;
}

Dyadic plan_threshold_value(const Signature& sig, std::size_t n_e, std::size_t k) {
  if (k <= n_e || k >= sig.length()) throw Error("plan: threshold index out of range");
  const auto sums = truncated_sums(sig, k);
  const std::int64_t m = to_int64(sig[n_e].interval.hi, "block floor");
  return sums.at(static_cast<std::ptrdiff_t>(k - n_e - 1)).shifted(-m);
}

ConstructionPlan build_plan(const Signature& sig, std::size_t requirements) {
  if (sig.length() < 2) throw Error("build_plan: signature too short");
  ConstructionPlan plan{sig, {1}};
  const Dyadic one(1);
  for (std::size_t e = 0; e < requirements; ++e) {
    const std::size_t n_e = plan.boundaries.back();
    std::size_t k = n_e + 1;
    for (; k < sig.length(); ++k) {
      if (plan_threshold_value(sig, n_e, k) > one) break;
    }
    if (k >= sig.length()) {
      throw Error("build_plan: signature exhausted before the threshold for requirement " +
                  std::to_string(e));
    }
    plan.boundaries.push_back(k);
  }
  return plan;
}

bool plan_is_valid(const ConstructionPlan& plan) {
  if (plan.boundaries.empty() || plan.boundaries.front() != 1) return false;
  const Dyadic one(1);
  for (std::size_t e = 0; e + 1 < plan.boundaries.size(); ++e) {
    if (plan.boundaries[e + 1] <= plan.boundaries[e]) return false;
    if (plan.boundaries[e + 1] >= plan.signature.length()) return false;
    if (!(plan_threshold_value(plan.signature, plan.boundaries[e], plan.boundaries[e + 1]) > one)) {
      return false;
    }
  }
  return true;
}

}  // namespace omegalab
