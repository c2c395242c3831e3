#pragma once

#include "invlab/formula.h"
#include "invlab/model_set.h"

#include <unordered_map>

namespace invlab {

/// Exact satisfiability backend: computes the model set of a formula by full
/// enumeration, sound and complete for vocabularies of up to 24 variables.
/// Results are memoized per AST node, so formulas built incrementally by
/// sharing subtrees (candidate invariants, narrowed query preconditions) cost
/// one bitset operation per new node.
class Semantics {
 public:
  explicit Semantics(const Vocabulary& vocab);

  int vars() const { return n_; }
  const Vocabulary& vocab() const { return vocab_; }

  /// Model set over the plain vocabulary; primed variables are a contract
  /// error here.
  const ModelSet& models(const Formula& f);
  ModelSet models(const Clause& c) const;
  ModelSet models(const Cnf& cnf) const;

  /// Model set over the doubled vocabulary Sigma + Sigma'. Pair indices pack
  /// the post-state in the low n bits and the pre-state in the high n bits,
  /// so ascending order enumerates pairs by (pre, post). Requires 2n <= 24.
  const ModelSet& models_pair(const Formula& f);

  bool implies(const Formula& f, const Formula& g);
  bool equivalent(const Formula& f, const Formula& g);
  bool satisfiable(const Formula& f);
  std::optional<State> find_model(const Formula& f);
  /// First state satisfying f and not g, if any.
  std::optional<State> find_distinguishing(const Formula& f, const Formula& g);

  State state_of(uint32_t index) const { return State{index, n_}; }

  /// Disjunction of the cubes of the states in the set. Empty set -> false.
  Formula set_to_formula(const ModelSet& set) const;

 private:
  Vocabulary vocab_;
  int n_;
  std::unordered_map<const FormulaNode*, ModelSet> cache_;
  std::unordered_map<const FormulaNode*, ModelSet> pair_cache_;
  std::vector<Formula> pins_;       // keep cached nodes alive
  std::vector<Formula> pair_pins_;
  uint64_t cache_bytes_ = 0;
  uint64_t pair_cache_bytes_ = 0;

  ModelSet compute(const Formula& f, bool pair);
  const ModelSet& lookup(const Formula& f, bool pair);
};

/// Whether phi implies the clause c, whether it implies no proper subclause,
/// both decided by the enumeration backend. Vocabulary capped at 20 vars.
bool is_prime_consequence(const Clause& c, const Cnf& phi, const Vocabulary& vocab);

}  // namespace invlab
