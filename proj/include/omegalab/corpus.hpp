#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "omegalab/coding.hpp"
#include "omegalab/machines.hpp"
#include "omegalab/usefn.hpp"

namespace omegalab {

using Rng = std::mt19937_64;

struct SignatureLimits {
  std::size_t max_intervals = 6;
  std::int64_t max_size = 8;
  std::int64_t max_constant = 16;
};

/// 1 to max_intervals intervals starting at 1, strictly increasing constants.
Signature random_signature(Rng& rng, const SignatureLimits& limits = {});

/// `count` signatures from one seed; element i depends only on (seed, i).
std::vector<Signature> signature_corpus(std::uint64_t seed, std::size_t count,
                                        const SignatureLimits& limits = {});

/// Nondecreasing stages in [0, 1), multiples of 2^-precision.
ApproxSequence random_approximation(Rng& rng, std::size_t max_stages = 64,
                                    std::int64_t precision = 12);

/// A c.e. set A, an Omega surrogate and a use table for the reductions.
struct ReductionInstance {
  UseTable g;
  std::vector<Enumeration> enumeration;
  ApproxSequence omega;
  ApproxSequence alpha;  // a second real sharing omega's stages
};

ReductionInstance random_reduction_instance(Rng& rng);

std::vector<ReductionInstance> reduction_corpus(std::uint64_t seed, std::size_t count);

/// Smallest signature on which build_plan succeeds for `requirements`
/// requirements: I_0 = [1,1], I_1 = [2,2], then each next interval just
/// long enough to cross the threshold. Interval lengths grow as a tower.
Signature tower_signature(std::size_t requirements);

/// Derives an independent generator for item i of a seeded corpus.
Rng item_rng(std::uint64_t seed, std::uint64_t item);

}  // namespace omegalab
