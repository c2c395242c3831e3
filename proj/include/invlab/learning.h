#pragma once

#include "invlab/oracles.h"

namespace invlab {

struct HalvingResult {
  /// Recovered truth table of the hidden phi over packed (y, x) valuations.
  std::vector<bool> truth_table;
  uint64_t counterexample_rounds = 0;
  uint64_t equivalence_queries = 0;
  QueryLedger ledger;
};

/// Exactly identifies the phi of a hidden iterating system through Hoare
/// queries: each round checks a single equivalence-style Hoare triple whose
/// postcondition is the one-step image of the majority-vote hypothesis, and
/// on failure extracts a counterexample whose pre-state pins one valuation.
/// The hypothesis set at least halves per counterexample. k capped at 2
/// (65536 hypotheses).
HalvingResult halving_identify_delta(const OracleHandle& handle, int k,
                                     QueryLedger* ledger = nullptr);

}  // namespace invlab
