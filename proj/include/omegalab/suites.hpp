#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "omegalab/serialize.hpp"

namespace omegalab {

/// Inclusive integer range written "a..b" or "a".
struct Range {
  std::int64_t lo = 0;
  std::int64_t hi = 0;

  static Range parse(const std::string& text);
  std::string to_string() const;
  friend bool operator==(const Range&, const Range&) = default;
};

struct SweepConfig {
  std::string suite;
  Range n{1, 10};
  Range k{0, 8};
  Range c{0, 6};
  std::uint64_t seed = 1;
  std::size_t count = 0;  // 0: the suite default
  std::size_t workers = 0;  // 0: OMEGALAB_WORKERS or the hardware count
};

json to_json(const SweepConfig& config);

struct SuiteReport {
  std::string suite;
  SweepConfig config;
  std::vector<std::string> columns;  // CSV header, also the keys of each row
  std::vector<json> rows;
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::vector<std::string> messages;  // one per violation, capped

  bool ok() const { return violations == 0; }
};

json to_json(const SuiteReport& report);
void write_csv(std::ostream& os, const SuiteReport& report);

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Runs one suite. Throws Error for an unknown name or an empty grid.
SuiteReport run_suite(const SweepConfig& config);

/// Worker count from OMEGALAB_WORKERS, else the hardware concurrency.
std::size_t default_workers();

/// Calls body(i) for i in [0, count) on `workers` threads. Exceptions are
/// rethrown on the caller after all workers stop.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

}  // namespace omegalab
