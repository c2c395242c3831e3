#pragma once

#include "invlab/transition_system.h"

#include <functional>
#include <random>

namespace invlab {

/// An exists-forall instance: phi over y1..yk, x1..xk. The variables are the
/// first 2k entries of the system vocabulary (y block first), so phi is
/// usable both standalone and inside the generated system.
struct Qbf2Instance {
  int k = 1;
  Formula phi;
};

/// y1..yk x1..xk a b e
Vocabulary qbf2_vocab(int k);
/// phi must mention only the 2k quantified variables.
void validate_qbf2(const Qbf2Instance& q);

/// Brute-force truth of exists y. forall x. phi. Valuation packing: y in
/// bits [0,k), x in bits [k,2k), with y1/x1 the least significant bits of
/// their blocks (so "lexicographic" order is numeric order).
bool qbf2_truth(const Qbf2Instance& q);
/// Least witness value for y, if any.
std::optional<uint32_t> qbf2_first_witness(const Qbf2Instance& q);

/// One deterministic step of the iterating system, given phi as a function
/// of the packed (y, x) valuation. State layout: y, x, then a, b, e.
uint32_t qbf2_next_state(int k, const std::function<bool(uint32_t)>& phi_eval, uint32_t state);

/// A generated system with its ground truth: a known invariant in the
/// advertised class, or known unsafety (no invariant of any length).
struct FamilyInstance {
  TransitionSystem ts;
  std::optional<Cnf> invariant;  // nullopt = unsafe
  std::string family;
  int n = 0;  // vocabulary size
  int m = 0;  // ground-truth invariant clauses (0 when unsafe)
  int k = 0;  // family parameter, when meaningful
  uint64_t seed = 0;

  bool safe() const { return invariant.has_value(); }
};

/// The iterating hard instance for a QBF2 formula: safe iff the formula is
/// true, in which case the certifying invariant is monotone with at most
/// 2k+1 clauses. k capped at 8.
FamilyInstance gen_qbf2_system(const Qbf2Instance& q);

/// The certifying invariant for a true instance with first witness v:
/// !e, (b -> y <= v), (b and a -> y < v), in monotone CNF.
Cnf build_sigma2_invariant(const Qbf2Instance& q, uint32_t witness);

/// Maximal system for phi: delta = phi -> phi'. Requires Init => phi,
/// phi => !Bad, and Init, Bad satisfiable. phi is the unique invariant.
FamilyInstance gen_maximal(const Cnf& phi, const Formula& init, const Formula& bad,
                           const Vocabulary& vocab);

/// Random maximal system over the k-vocabulary whose invariant is a random
/// monotone CNF with at most 2k+1 clauses consistent with Init_k and Bad_k.
FamilyInstance gen_monmax_family(int k, uint64_t seed);
/// The unsafe member: (Init_k, true, Bad_k).
FamilyInstance gen_badts(int k);

/// The adder family: x (n bits) starts at zero and is repeatedly increased
/// by an even input under the rotation selected by the one-hot c vector;
/// bad is x all-ones. Concrete variant has free inputs y; vocabulary
/// x1..xn c1..cn y1..yn. 2 <= n <= 10.
FamilyInstance gen_add_even(int n);
/// Maximal variant over x1..xn c1..cn: all transitions that respect the
/// one-hot axiom, keep c, and preserve the adder invariant.
FamilyInstance gen_add_even_maximal(int n);

/// From labeled (y,x) valuations (t < 2^k of them, distinct), builds
/// (psi1, psi2) agreeing with the labels pointwise while exists-forall
/// truth differs: psi1 true, psi2 false.
std::pair<Formula, Formula> build_agreeing_pair(
    const std::vector<std::pair<uint32_t, bool>>& valuations, int k);

/// Random monotone CNF: clause count uniform in [1, max_clauses], clause
/// width uniform in [1, num_vars], variables drawn without replacement.
Cnf random_moncnf(std::mt19937_64& rng, int num_vars, int max_clauses);

/// Random formula AST, optionally with primed leaves.
Formula random_formula(std::mt19937_64& rng, int num_vars, int depth, bool allow_primed = false);

/// Random small system (generic transition relation) for property tests.
TransitionSystem random_system(std::mt19937_64& rng, int num_vars, int depth);

// Ground-truth sidecar: "unsafe" or "safe" followed by the invariant as a
// DIMACS clause list.
std::string print_ground_truth(const FamilyInstance& fi);
std::optional<Cnf> parse_ground_truth(const std::string& text);

}  // namespace invlab
