#pragma once

#include "invlab/transition_system.h"

#include <memory>

namespace invlab {

/// Raised when a query would exceed a configured cap. The query is not
/// performed and not counted; the ledger stays consistent.
struct BudgetExceeded : Error {
  using Error::Error;
};

/// Monotone counters of oracle invocations, one ledger per run. Optional
/// caps make budget overruns abort cleanly mid-operation.
struct QueryLedger {
  uint64_t hoare_total = 0;
  uint64_t hoare_in_block = 0;
  uint64_t inductiveness_total = 0;
  uint64_t bounded_reach_total = 0;
  uint64_t interpolation_total = 0;

  std::optional<uint64_t> hoare_cap;
  std::optional<uint64_t> in_block_cap;
  std::optional<uint64_t> inductiveness_cap;
  std::optional<uint64_t> interpolation_cap;

  void charge_hoare(bool in_block);
  void charge_inductiveness();
  void charge_bounded_reach();
  void charge_interpolation();
};

/// Whether a Hoare query belongs to a Block generalization loop; Block
/// queries are mirrored in the hoare_in_block sub-counter.
enum class HoareScope { Normal, Block };

/// How an inductiveness oracle chooses among counterexamples to induction.
/// Identical inputs and seed always yield the same counterexample.
struct TeacherStrategy {
  enum class Kind { FirstModel, SeededRandom, MaxAmbiguity };
  Kind kind = Kind::FirstModel;
  uint64_t seed = 0;
  /// MaxAmbiguity bookkeeping: the tracked hypothesis set, shrunk as
  /// counterexamples are issued. Feasible for |Sigma| <= 10; larger
  /// vocabularies fall back to FirstModel.
  std::shared_ptr<std::vector<ModelSet>> hypotheses;

  static TeacherStrategy first_model() { return {}; }
  static TeacherStrategy seeded_random(uint64_t seed);
  static TeacherStrategy max_ambiguity(std::vector<ModelSet> hypotheses, uint64_t seed = 0);
};

using Cti = std::pair<State, State>;

struct InductivenessAnswer {
  std::optional<Cti> cex;
  bool inductive() const { return !cex.has_value(); }
};

/// The capability an inference algorithm receives: Init, Bad and the
/// vocabulary are open; the transition relation is reachable only through
/// the query operations below, each charged to the ledger.
class OracleHandle {
 public:
  virtual ~OracleHandle() = default;

  const Vocabulary& vocab() const { return vocab_; }
  const Formula& init() const { return init_; }
  const Formula& bad() const { return bad_; }
  /// Largest unrolling depth bounded-reachability queries accept.
  int max_unroll() const { return max_unroll_; }

  /// True iff alpha /\ delta /\ !beta' is unsatisfiable. One ledger charge.
  virtual bool hoare(const Formula& alpha, const Formula& beta, QueryLedger& ledger,
                     HoareScope scope = HoareScope::Normal) const = 0;

  /// Requires Init => alpha and alpha => !Bad (contract error otherwise).
  /// Inductive iff alpha /\ delta => alpha'; else a strategy-chosen CTI.
  virtual InductivenessAnswer inductiveness(const Formula& alpha, const TeacherStrategy& strategy,
                                            QueryLedger& ledger) const = 0;

  /// True iff every k-step unrolling from alpha lands in beta:
  /// alpha(S^0) /\ delta(S^0,S^1) /\ ... /\ delta(S^{k-1},S^k) => beta(S^k).
  virtual bool bounded_reach(const Formula& alpha, const Formula& beta, int k,
                             QueryLedger& ledger) const = 0;

  /// nullopt if bounded_reach(alpha, beta, k1+k2) fails; otherwise the exact
  /// k1-step post-image of alpha as a formula, which satisfies both side
  /// conditions by construction.
  virtual std::optional<Formula> interpolant(const Formula& alpha, const Formula& beta, int k1,
                                             int k2, QueryLedger& ledger) const = 0;

  /// Finds (s, s') |= alpha /\ delta /\ !beta' using exactly 2|Sigma| Hoare
  /// queries, fixing propositions in vocabulary order (pre side first).
  /// Requires a prior failed hoare(alpha, beta); calling it on a valid
  /// triple is a contract error. Implemented purely via hoare() so that any
  /// handle telling the same query answers extracts the same pair.
  Cti extract_cti(const Formula& alpha, const Formula& beta, QueryLedger& ledger) const;

 protected:
  OracleHandle(Vocabulary vocab, Formula init, Formula bad)
      : vocab_(std::move(vocab)), init_(std::move(init)), bad_(std::move(bad)) {}

  /// Hook for handles that can validate an extracted pair against delta.
  virtual void check_extracted(const Cti&, const Formula& alpha, const Formula& beta) const;

  Vocabulary vocab_;
  Formula init_, bad_;
  int max_unroll_ = 1 << 22;
};

/// The real oracle over a transition system. The system (in particular
/// delta) is private; algorithms cannot reach it.
class DeltaHandle final : public OracleHandle {
 public:
  explicit DeltaHandle(const TransitionSystem& ts, int max_unroll = 0);

  bool hoare(const Formula& alpha, const Formula& beta, QueryLedger& ledger,
             HoareScope scope) const override;
  InductivenessAnswer inductiveness(const Formula& alpha, const TeacherStrategy& strategy,
                                    QueryLedger& ledger) const override;
  bool bounded_reach(const Formula& alpha, const Formula& beta, int k,
                     QueryLedger& ledger) const override;
  std::optional<Formula> interpolant(const Formula& alpha, const Formula& beta, int k1, int k2,
                                     QueryLedger& ledger) const override;

 private:
  TransitionSystem ts_;
  mutable Semantics sem_;
  mutable StepSemantics step_;

  void check_extracted(const Cti& cti, const Formula& alpha, const Formula& beta) const override;
  ModelSet image_at(const Formula& alpha, int k) const;
};

/// Membership query on maximal systems: true iff sigma satisfies the unique
/// invariant, computed as sigma |= Init or hoare(Init, !cube(sigma)) = false.
bool membership_via_hoare(const OracleHandle& handle, const State& sigma, QueryLedger& ledger);

struct EquivalenceAnswer {
  bool equivalent = false;
  std::optional<State> example;
  /// True: example satisfies the invariant but not theta. False: example
  /// satisfies theta but not the invariant.
  bool positive = false;
};

/// Equivalence query over a maximal system: one inductiveness query, plus a
/// membership query to label the counterexample when theta is off.
/// Requires Init => theta => !Bad.
EquivalenceAnswer equivalence_via_inductiveness(const OracleHandle& handle, const Formula& theta,
                                                const TeacherStrategy& strategy,
                                                QueryLedger& ledger);

}  // namespace invlab
