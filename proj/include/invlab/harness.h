#pragma once

#include "invlab/generators.h"
#include "invlab/inference.h"

namespace invlab {

/// One family swept over an inclusive parameter range (k or n, depending on
/// the family).
struct FamilySpec {
  std::string name;  // qbf2 | monmax | badts | add-even | add-even-max
  int param_min = 2;
  int param_max = 2;
};

struct BenchConfig {
  std::vector<FamilySpec> families;
  std::vector<std::string> algorithms;  // naive | pdr1 | houdini | ice-enum | itp
  std::vector<uint64_t> seeds{0};
  std::string strategy = "first";  // first | random | max-ambiguity
  uint64_t budget = 1000000;
  int workers = 1;
};

struct ExperimentRecord {
  uint64_t run_id = 0;
  std::string family;
  int n = 0, m = 0, k = 0;
  std::string algorithm;
  std::string strategy;
  uint64_t seed = 0;
  std::string result;  // invariant | no_invariant | budget_exhausted | error:<what>
  uint64_t hoare_total = 0;
  uint64_t hoare_in_block = 0;
  uint64_t inductiveness_total = 0;
  uint64_t iterations = 0;
  double wall_clock_ms = 0.0;
};

struct BenchResult {
  std::vector<ExperimentRecord> records;
  std::vector<std::optional<Cnf>> invariants;  // parallel to records
  std::vector<FamilyInstance> instances;       // parallel to records
};

/// Runs the full matrix (one run per instance x algorithm x seed) on
/// cfg.workers threads. Records are ordered by (family, n, seed, algorithm);
/// identical configs and seeds give identical records up to wall clock.
/// Per-run failures are recorded in the result column, never aborting the
/// matrix.
BenchResult run_bench(const BenchConfig& cfg);

/// CSV with the fixed column order; wall clock last.
std::string to_csv(const std::vector<ExperimentRecord>& records);

struct VerifyReport {
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

/// Cross-checks every invariant result against check_invariant and the
/// family ground truth.
VerifyReport verify_ground_truth(const BenchResult& result);

/// Construct an instance by family name, parameter and seed (the bench
/// matrix entry point, also used by the CLI).
FamilyInstance make_instance(const std::string& family, int param, uint64_t seed);

/// Parse a JSON config mirroring BenchConfig.
BenchConfig parse_bench_config(const std::string& json_text);

TeacherStrategy strategy_by_name(const std::string& name, uint64_t seed);

}  // namespace invlab
