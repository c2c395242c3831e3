#pragma once

#include "invlab/oracles.h"

#include <functional>

namespace invlab {

enum class InferenceStatus { Invariant, NoInvariant, BudgetExhausted };

struct InferenceOutcome {
  InferenceStatus status = InferenceStatus::NoInvariant;
  std::optional<Cnf> invariant;
  QueryLedger ledger;       // final snapshot of the run's ledger
  uint64_t iterations = 0;  // algorithm rounds (blocked states, passes, ...)

  bool found() const { return status == InferenceStatus::Invariant; }
};

/// Caps applied to a run's ledger; exceeding one aborts the operation
/// cleanly with status BudgetExhausted and the ledger intact.
struct Budget {
  std::optional<uint64_t> hoare;
  std::optional<uint64_t> hoare_in_block;
  std::optional<uint64_t> inductiveness;
  std::optional<uint64_t> interpolation;

  void apply(QueryLedger& ledger) const;
};

/// Block strategy: from a CTI pre-state to a conjunction of literals whose
/// negation strengthens the candidate.
using BlockFn =
    std::function<std::vector<Literal>(const OracleHandle&, const State&, QueryLedger&)>;

/// The whole cube: excludes exactly the blocked state. No queries.
std::vector<Literal> naive_block(const State& sigma);

/// Generalization by one-step reachability from Init: drops a literal when
/// no state reachable in at most one step satisfies the rest. Exactly
/// |Sigma| Hoare queries, charged to the Block sub-counter, iterating
/// literals in vocabulary order.
std::vector<Literal> pdr1_block(const Formula& init, const OracleHandle& handle,
                                const State& sigma, QueryLedger& ledger, Semantics& sem);

/// Backward reachability: start from !Bad, repeatedly extract a CTI and
/// conjoin the negation of Block's conjunction. Bad must be a conjunction of
/// literals so the candidate stays in clausal form.
InferenceOutcome backward_reach(const Formula& init, const Formula& bad,
                                const OracleHandle& handle, const BlockFn& block,
                                const Budget& budget, QueryLedger* ledger = nullptr);

/// backward_reach with naive_block.
InferenceOutcome naive_backward(const Formula& init, const Formula& bad,
                                const OracleHandle& handle, const Budget& budget,
                                QueryLedger* ledger = nullptr);

/// backward_reach with pdr1_block: PDR with a single frame.
InferenceOutcome pdr1(const Formula& init, const Formula& bad, const OracleHandle& handle,
                      const Budget& budget, QueryLedger* ledger = nullptr);

/// Class of candidate invariants: CNF / monotone CNF with at most p(n)
/// clauses, p given by its coefficients (p(n) = sum coeffs[i] * n^i).
struct ClassBound {
  enum class Kind { Cnf, MonCnf };
  Kind kind = Kind::Cnf;
  std::vector<int64_t> coeffs{0, 1};  // default p(n) = n

  int64_t p(int n) const;
  bool admits(const Cnf& cnf, int n) const;
};

/// Decision procedure: run PDR-1 with the Block sub-counter capped at
/// p(n)*n; yes iff it yields a candidate inside the class that passes a
/// final inductiveness check.
bool decide_poly_inference(const Formula& init, const Formula& bad, const OracleHandle& handle,
                           const ClassBound& bound, QueryLedger* ledger = nullptr);

/// Greatest conjunctive invariant over the given predicates (each must be a
/// literal or a disjunction of literals). At most |P|+1 passes of at most
/// |P| Hoare queries each.
InferenceOutcome houdini(const Formula& init, const Formula& bad, const OracleHandle& handle,
                         const std::vector<Formula>& predicates, const Budget& budget,
                         QueryLedger* ledger = nullptr);

/// All negative literals over the vocabulary, the usual Houdini seed.
std::vector<Formula> negative_literal_predicates(const Vocabulary& vocab);

struct IceCex {
  State pre, post;
};

/// Produces the next candidate from the counterexamples seen so far, or
/// nullopt when the class is exhausted.
using IceProposer = std::function<std::optional<Cnf>(const std::vector<IceCex>&)>;

/// Scans an explicit finite class in the given (canonical) order, proposing
/// the first hypothesis consistent with every counterexample and satisfying
/// Init => H => !Bad.
IceProposer enumerative_proposer(std::vector<Cnf> hypotheses, const Formula& init,
                                 const Formula& bad, const Vocabulary& vocab);

/// All monotone CNF hypotheses over the vocabulary with clause width at most
/// `max_width` and at most `max_clauses` clauses, in canonical order:
/// clauses sorted by (width, literal order), hypotheses by (clause count,
/// clause order).
std::vector<Cnf> moncnf_hypothesis_class(const Vocabulary& vocab, int max_width, int max_clauses);

/// Singleton-blocking updates: !Bad conjoined with the negated cubes of the
/// counterexample pre-states.
IceProposer cube_blocking_proposer(const Formula& init, const Formula& bad,
                                   const Vocabulary& vocab);

/// Inductiveness-only learner: one inductiveness query per round on the
/// proposed candidate; counterexamples accumulate until a candidate is
/// inductive or the class runs out. `candidate_log`, when given, records the
/// candidate sequence.
InferenceOutcome ice_enum_learner(const Formula& init, const Formula& bad,
                                  const OracleHandle& handle, const IceProposer& proposer,
                                  const TeacherStrategy& strategy, const Budget& budget,
                                  QueryLedger* ledger = nullptr,
                                  std::vector<Cnf>* candidate_log = nullptr);

/// Interpolation-based inference: F starts at Init, grows by interpolants
/// rho = post-image(F, 1) while Bad stays k-unreachable; restarts with k+1
/// when it does not. Terminates when rho adds nothing new, i.e. F is
/// inductive.
InferenceOutcome itp_inference(const Formula& init, const Formula& bad,
                               const OracleHandle& handle, int k_start, const Budget& budget,
                               QueryLedger* ledger = nullptr);

}  // namespace invlab
