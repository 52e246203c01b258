#include "omegalab/corpus.hpp"

#include <algorithm>
#include <numeric>

namespace omegalab {
namespace {

std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

ApproxSequence approximation_with_stages(Rng& rng, std::size_t stages, std::int64_t precision) {
  const std::int64_t top = (std::int64_t{1} << precision) - 1;
  std::vector<std::int64_t> raw(stages);
  for (auto& v : raw) v = uniform(rng, 0, top);
  std::sort(raw.begin(), raw.end());
  std::vector<Dyadic> values;
  values.reserve(stages);
  for (auto v : raw) values.emplace_back(BigInt(static_cast<long>(v)), precision);
  return ApproxSequence(std::move(values));
}

}  // namespace

Rng item_rng(std::uint64_t seed, std::uint64_t item) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(item), static_cast<std::uint32_t>(item >> 32)};
  return Rng(seq);
}

Signature random_signature(Rng& rng, const SignatureLimits& limits) {
  const auto count = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(limits.max_intervals)));
  std::vector<std::int64_t> pool(static_cast<std::size_t>(limits.max_constant) + 1);
  std::iota(pool.begin(), pool.end(), 0);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<std::int64_t> constants(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(constants.begin(), constants.end());
  std::vector<BigInt> sizes;
  for (std::size_t i = 0; i < count; ++i) sizes.emplace_back(static_cast<long>(uniform(rng, 1, limits.max_size)));
  return Signature::from_sizes(constants, sizes);
}

std::vector<Signature> signature_corpus(std::uint64_t seed, std::size_t count, const SignatureLimits& limits) {
  std::vector<Signature> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = item_rng(seed, i);
    out.push_back(random_signature(rng, limits));
  }
  return out;
}

ApproxSequence random_approximation(Rng& rng, std::size_t max_stages, std::int64_t precision) {
  const auto stages = static_cast<std::size_t>(uniform(rng, 1, static_cast<std::int64_t>(max_stages)));
  return approximation_with_stages(rng, stages, uniform(rng, 1, precision));
}

ReductionInstance random_reduction_instance(Rng& rng) {
  const std::int64_t n_max = uniform(rng, 4, 10);
  std::vector<std::int64_t> g;
  for (std::int64_t n = 1; n <= n_max; ++n) g.push_back(std::max<std::int64_t>(0, n - 2 + uniform(rng, 0, 3)));
  const std::int64_t widest = *std::max_element(g.begin(), g.end());
  const auto stages = static_cast<std::size_t>(uniform(rng, 2, 64));

  ReductionInstance out{UseTable::from(g), {},
                        approximation_with_stages(rng, stages, widest + 2),
                        approximation_with_stages(rng, stages, n_max)};
  for (std::int64_t n = 1; n <= n_max; ++n) {
    if (uniform(rng, 0, 1)) {
      out.enumeration.push_back({n, static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(stages) - 1))});
    }
  }
  std::stable_sort(out.enumeration.begin(), out.enumeration.end(),
                   [](const Enumeration& a, const Enumeration& b) { return a.stage < b.stage; });
  return out;
}

std::vector<ReductionInstance> reduction_corpus(std::uint64_t seed, std::size_t count) {
  std::vector<ReductionInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = item_rng(seed, i);
    out.push_back(random_reduction_instance(rng));
  }
  return out;
}

Signature tower_signature(std::size_t requirements) {
  std::vector<std::int64_t> constants{0, 1};
  std::vector<BigInt> sizes{1, 1};
  BigInt top = 2;
  for (std::size_t e = 0; e < requirements; ++e) {
    const std::int64_t c = constants.back() + 1;
    // |I| 2^-c truncated at the previous constant must exceed 2^top.
    BigInt size;
    mpz_ui_pow_ui(size.get_mpz_t(), 2, to_int64(top, "tower exponent") + c);
    size += BigInt(1) << static_cast<mp_bitcnt_t>(c - constants.back());
    constants.push_back(c);
    top += size;
    sizes.push_back(std::move(size));
  }
  return Signature::from_sizes(constants, sizes);
}

}  // namespace omegalab
