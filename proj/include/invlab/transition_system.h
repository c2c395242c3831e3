#pragma once

#include "invlab/model_set.h"
#include "invlab/semantics.h"
#include "invlab/step_semantics.h"

namespace invlab {

/// (Init, delta, Bad) over a vocabulary. Init and Bad are over Sigma; delta
/// is over Sigma + Sigma'.
struct TransitionSystem {
  Vocabulary vocab;
  Formula init;
  Formula delta;
  Formula bad;

  /// Throws on primed variables in init/bad or out-of-range variables.
  void validate() const;
};

struct ReachabilityReport {
  ModelSet reachable;
  int diameter = 0;
  bool safe = true;
  /// Minimal-length counterexample, init state first; present iff unsafe.
  std::vector<State> trace;
};

/// Exact reachability by breadth-first image computation. Ground truth for
/// safety; requires |Sigma| <= 24.
ReachabilityReport bfs_reach(const TransitionSystem& ts);

enum class CheckStatus { Ok, FailsInitiation, FailsConsecution, FailsSafety };

struct CheckResult {
  CheckStatus status = CheckStatus::Ok;
  std::optional<State> witness;                    // initiation / safety
  std::optional<std::pair<State, State>> witness_pair;  // consecution
  bool ok() const { return status == CheckStatus::Ok; }
};

/// Checks Init => I, I /\ delta => I', I => !Bad, in that order, returning
/// the first failure with a concrete witness.
CheckResult check_invariant(const TransitionSystem& ts, const Formula& inv);
CheckResult check_invariant(const TransitionSystem& ts, const Cnf& inv);

/// The dual system (Bad, delta with pre/post roles swapped, Init).
/// An involution up to structural equality.
TransitionSystem dualize(const TransitionSystem& ts);
/// The dual of a formula is its negation.
Formula dualize(const Formula& f);
/// CNF with m clauses -> DNF with m cubes (negation with pushed literals).
Formula dualize_cnf_to_dnf(const Cnf& cnf);

// Text format (UTF-8), canonical print is byte-stable under reparsing:
//   vars: x1 x2
//   init: (& (! x1) (! x2))
//   delta: (-> (! x1) (! x1'))
//   bad: (& x1 x2)
std::string print_ts(const TransitionSystem& ts);
TransitionSystem parse_ts(const std::string& text);

}  // namespace invlab
