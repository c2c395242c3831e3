#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace invlab {

// Error taxonomy shared by the whole library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Malformed external input (text formats, CLI arguments).
struct InputError : Error {
  using Error::Error;
};
// A caller violated a documented precondition.
struct ContractError : Error {
  using Error::Error;
};
// The request is structurally fine but too large for exact evaluation.
struct ResourceError : Error {
  using Error::Error;
};

/// An ordered set of distinct boolean variable names. The declaration order
/// is the canonical order used everywhere downstream (literal ordering,
/// cube iteration, counterexample extraction, state indexing).
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int var) const { return names_.at(var); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<int> index_of(const std::string& name) const;

  bool operator==(const Vocabulary& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

/// A total assignment to a vocabulary, packed into the low `n` bits of an
/// integer; bit i is the value of variable i.
struct State {
  uint32_t bits = 0;
  int n = 0;

  bool get(int var) const { return (bits >> var) & 1u; }
  void set(int var, bool value) {
    if (value)
      bits |= (1u << var);
    else
      bits &= ~(1u << var);
  }
  bool operator==(const State&) const = default;
};

std::string to_string(const State& s, const Vocabulary& vocab);

struct Literal {
  int var = 0;
  bool positive = true;

  bool operator==(const Literal&) const = default;
  auto operator<=>(const Literal&) const = default;
};

/// A disjunction of literals, kept sorted by (var, polarity) with duplicates
/// removed. May contain both polarities of one variable; see tautological().
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::vector<Literal> lits);

  const std::vector<Literal>& literals() const { return lits_; }
  bool empty() const { return lits_.empty(); }
  int size() const { return static_cast<int>(lits_.size()); }
  bool tautological() const;
  bool monotone() const;  // all literals negative
  bool eval(const State& s) const;
  bool contains(const Literal& l) const;
  /// Subset relation on literal sets.
  bool subsumes(const Clause& other) const;
  Clause without(const Literal& l) const;

  bool operator==(const Clause&) const = default;
  auto operator<=>(const Clause&) const = default;

 private:
  std::vector<Literal> lits_;
};

/// A conjunction of clauses.
class Cnf {
 public:
  Cnf() = default;
  explicit Cnf(std::vector<Clause> clauses) : clauses_(std::move(clauses)) {}

  const std::vector<Clause>& clauses() const { return clauses_; }
  int size() const { return static_cast<int>(clauses_.size()); }
  void add(Clause c) { clauses_.push_back(std::move(c)); }
  bool eval(const State& s) const;
  bool monotone() const;
  bool in_cnf(int m) const { return size() <= m; }
  bool in_moncnf(int m) const { return in_cnf(m) && monotone(); }
  /// Drop duplicate and subsumed clauses; result is semantically equivalent.
  Cnf simplified() const;

  bool operator==(const Cnf&) const = default;

 private:
  std::vector<Clause> clauses_;
};

enum class NodeKind { Const, Var, Not, And, Or, Implies, Iff };

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  NodeKind kind;
  bool value = false;   // Const
  int var = 0;          // Var
  bool primed = false;  // Var
  std::vector<Formula> args;
};

Formula f_const(bool value);
Formula f_true();
Formula f_false();
Formula f_var(int var, bool primed = false);
Formula f_not(Formula f);
Formula f_and(std::vector<Formula> args);
Formula f_or(std::vector<Formula> args);
Formula f_and(Formula a, Formula b);
Formula f_or(Formula a, Formula b);
Formula f_implies(Formula a, Formula b);
Formula f_iff(Formula a, Formula b);
Formula f_literal(const Literal& l, bool primed = false);

/// Structural equality (ignores sharing).
bool structurally_equal(const Formula& a, const Formula& b);

bool has_primed_vars(const Formula& f);
/// Largest variable index mentioned, or -1 for a constant formula.
int max_var(const Formula& f);

/// Evaluate under sigma, and sigma_primed for primed occurrences. A primed
/// variable with no post-state given is a domain error (ContractError).
bool eval(const Formula& f, const State& sigma, const State* sigma_primed = nullptr);
bool eval(const Formula& f, const State& sigma, const State& sigma_primed);

/// Replace every variable occurrence by its primed copy. Input must be
/// unprimed; already-primed input is a domain error.
Formula prime(const Formula& f);
/// Inverse of prime(); input must be purely primed.
Formula unprime(const Formula& f);

/// The cube of a total state: the conjunction of all literals it satisfies,
/// as unit clauses in vocabulary order. Its sole model is the state itself.
Cnf cube(const State& s);

Formula to_formula(const Clause& c);
Formula to_formula(const Cnf& cnf);
/// Conjunction of the cube's literals as a Formula.
Formula cube_formula(const State& s);

// S-expression text format:
//   (const true) | x3 | x3' | (! f) | (& f ...) | (| f ...) | (-> f g) | (<-> f g)
std::string print_formula(const Formula& f, const Vocabulary& vocab);
Formula parse_formula(const std::string& text, const Vocabulary& vocab, bool allow_primed = false);

/// DIMACS CNF export. Variables are numbered vocab index + 1.
std::string write_dimacs(const Cnf& cnf, const Vocabulary& vocab);
Cnf parse_dimacs(const std::string& text);

}  // namespace invlab
