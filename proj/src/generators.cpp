#include "invlab/generators.h"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace invlab {

namespace {

Formula f_xor(Formula a, Formula b) { return f_not(f_iff(std::move(a), std::move(b))); }

void require(bool cond, const char* msg) {
  if (!cond) throw ContractError(msg);
}

}  // namespace

Vocabulary qbf2_vocab(int k) {
  std::vector<std::string> names;
  for (int i = 1; i <= k; ++i) names.push_back("y" + std::to_string(i));
  for (int i = 1; i <= k; ++i) names.push_back("x" + std::to_string(i));
  names.insert(names.end(), {"a", "b", "e"});
  return Vocabulary(names);
}

void validate_qbf2(const Qbf2Instance& q) {
  require(q.k >= 1, "qbf2: k must be at least 1");
  require(!has_primed_vars(q.phi), "qbf2: phi must be unprimed");
  require(max_var(q.phi) < 2 * q.k, "qbf2: phi mentions a variable beyond y,x");
}

bool qbf2_truth(const Qbf2Instance& q) { return qbf2_first_witness(q).has_value(); }

std::optional<uint32_t> qbf2_first_witness(const Qbf2Instance& q) {
  validate_qbf2(q);
  const int k = q.k;
  const uint32_t count = 1u << k;
  for (uint32_t y = 0; y < count; ++y) {
    bool all = true;
    for (uint32_t x = 0; x < count && all; ++x) {
      State s{y | (x << k), 2 * k};
      if (!eval(q.phi, s)) all = false;
    }
    if (all) return y;
  }
  return std::nullopt;
}

uint32_t qbf2_next_state(int k, const std::function<bool(uint32_t)>& phi_eval, uint32_t state) {
  const uint32_t block = (1u << k) - 1;
  uint32_t y = state & block;
  uint32_t x = (state >> k) & block;
  bool a = (state >> (2 * k)) & 1u;
  bool b = (state >> (2 * k + 1)) & 1u;
  bool e = (state >> (2 * k + 2)) & 1u;

  bool phi = phi_eval(state & ((1u << (2 * k)) - 1));
  bool tmp_a = a || !phi;
  bool x_full = x == block;
  bool y_full = y == block;

  bool nb = (x_full && !tmp_a) ? false : b;
  bool na = x_full ? false : tmp_a;
  uint32_t nx = x_full ? 0 : x + 1;
  uint32_t ny = x_full ? (y_full ? 0 : y + 1) : y;
  bool ne = e || (x_full && y_full && nb);

  return ny | (nx << k) | (uint32_t{na} << (2 * k)) | (uint32_t{nb} << (2 * k + 1)) |
         (uint32_t{ne} << (2 * k + 2));
}

namespace {

// Ripple increment with rollover: bit i flips iff all lower bits are one.
// Shared carry chain keeps the DAG linear in the block width.
std::vector<Formula> increment_bits(const std::vector<Formula>& bits) {
  std::vector<Formula> out;
  Formula carry = f_true();
  for (const Formula& bit : bits) {
    out.push_back(f_xor(bit, carry));
    carry = f_and(carry, bit);
  }
  return out;
}

}  // namespace

FamilyInstance gen_qbf2_system(const Qbf2Instance& q) {
  validate_qbf2(q);
  if (q.k > 8) throw ResourceError("qbf2: k capped at 8");
  const int k = q.k;
  Vocabulary vocab = qbf2_vocab(k);

  auto yv = [&](int i) { return f_var(i); };          // y_{i+1}
  auto xv = [&](int i) { return f_var(k + i); };      // x_{i+1}
  const int a = 2 * k, b = 2 * k + 1, e = 2 * k + 2;

  std::vector<Formula> init_lits;
  for (int i = 0; i < 2 * k; ++i) init_lits.push_back(f_not(f_var(i)));
  init_lits.push_back(f_not(f_var(a)));
  init_lits.push_back(f_var(b));
  init_lits.push_back(f_not(f_var(e)));
  Formula init = f_and(std::move(init_lits));
  Formula bad = f_var(e);

  std::vector<Formula> ybits, xbits;
  for (int i = 0; i < k; ++i) ybits.push_back(yv(i));
  for (int i = 0; i < k; ++i) xbits.push_back(xv(i));
  Formula x_full = k == 1 ? xbits[0] : f_and(xbits);
  Formula y_full = k == 1 ? ybits[0] : f_and(ybits);

  Formula tmp_a = f_or(f_var(a), f_not(q.phi));
  Formula next_b = f_and(f_var(b), f_not(f_and(x_full, f_not(tmp_a))));
  Formula next_a = f_and(f_not(x_full), tmp_a);
  Formula next_e = f_or(f_var(e), f_and({y_full, x_full, next_b}));

  std::vector<Formula> x_inc = increment_bits(xbits);
  std::vector<Formula> y_inc = increment_bits(ybits);

  // Conjunct order follows the vocabulary: y updates, x updates, a, b, e.
  std::vector<Formula> conjuncts;
  for (int i = 0; i < k; ++i) {
    Formula ny = f_or(f_and(x_full, y_inc[i]), f_and(f_not(x_full), yv(i)));
    conjuncts.push_back(f_iff(f_var(i, true), std::move(ny)));
  }
  for (int i = 0; i < k; ++i) {
    // Increment rolls over at x = all-ones, which doubles as the reset.
    conjuncts.push_back(f_iff(f_var(k + i, true), f_and(f_not(x_full), x_inc[i])));
  }
  conjuncts.push_back(f_iff(f_var(a, true), next_a));
  conjuncts.push_back(f_iff(f_var(b, true), next_b));
  conjuncts.push_back(f_iff(f_var(e, true), next_e));

  FamilyInstance fi;
  fi.ts = TransitionSystem{vocab, init, f_and(std::move(conjuncts)), bad};
  fi.family = "qbf2";
  fi.n = vocab.size();
  fi.k = k;
  auto witness = qbf2_first_witness(q);
  if (witness) {
    Cnf inv = build_sigma2_invariant(q, *witness);
    if (!inv.in_moncnf(2 * k + 1)) throw Error("qbf2 invariant left the advertised class");
    if (!check_invariant(fi.ts, inv).ok()) throw Error("qbf2 invariant failed the checker");
    fi.m = inv.size();
    fi.invariant = std::move(inv);
  }
  return fi;
}

namespace {

// CNF of the strict lexicographic bound y < w over the first k variables,
// built bottom-up over prefixes: a one-bit of w adds a literal to every
// clause, a zero-bit adds a unit clause.
std::vector<Clause> less_than_cnf(uint32_t w, int k) {
  std::vector<std::vector<Literal>> clauses{{}};
  for (int d = 0; d < k; ++d) {
    if ((w >> d) & 1u) {
      for (auto& c : clauses) c.push_back(Literal{d, false});
    } else {
      clauses.push_back({Literal{d, false}});
    }
  }
  std::vector<Clause> out;
  out.reserve(clauses.size());
  for (auto& c : clauses) out.push_back(Clause(std::move(c)));
  return out;
}

}  // namespace

Cnf build_sigma2_invariant(const Qbf2Instance& q, uint32_t witness) {
  const int k = q.k;
  const uint32_t block = (1u << k) - 1;
  const int a = 2 * k, b = 2 * k + 1, e = 2 * k + 2;

  std::vector<Clause> clauses;
  clauses.push_back(Clause({Literal{e, false}}));
  if (witness != block) {
    // b -> y <= v, encoded as y < v+1; degenerates to true at v = all-ones.
    for (const Clause& c : less_than_cnf(witness + 1, k)) {
      std::vector<Literal> lits = c.literals();
      lits.push_back(Literal{b, false});
      clauses.push_back(Clause(std::move(lits)));
    }
  }
  for (const Clause& c : less_than_cnf(witness, k)) {
    std::vector<Literal> lits = c.literals();
    lits.push_back(Literal{b, false});
    lits.push_back(Literal{a, false});
    clauses.push_back(Clause(std::move(lits)));
  }
  return Cnf(std::move(clauses)).simplified();
}

FamilyInstance gen_maximal(const Cnf& phi, const Formula& init, const Formula& bad,
                           const Vocabulary& vocab) {
  Semantics sem(vocab);
  ModelSet phi_models = sem.models(phi);
  require(sem.models(init).any(), "gen_maximal: Init must be satisfiable");
  require(sem.models(bad).any(), "gen_maximal: Bad must be satisfiable");
  require(sem.models(init).subset_of(phi_models), "gen_maximal: Init must imply phi");
  require(!phi_models.intersects(sem.models(bad)), "gen_maximal: phi must imply !Bad");

  Formula phi_f = to_formula(phi);
  FamilyInstance fi;
  fi.ts = TransitionSystem{vocab, init, f_implies(phi_f, prime(phi_f)), bad};
  fi.family = "maximal";
  fi.n = vocab.size();
  fi.m = phi.size();
  fi.invariant = phi;
  return fi;
}

FamilyInstance gen_monmax_family(int k, uint64_t seed) {
  require(k >= 1 && k <= 8, "gen_monmax_family: k out of range");
  Vocabulary vocab = qbf2_vocab(k);
  const int n = vocab.size();

  std::vector<Formula> init_lits;
  for (int i = 0; i < n; ++i)
    init_lits.push_back(i == 2 * k + 1 ? f_var(i) : f_not(f_var(i)));
  Formula init = f_and(std::move(init_lits));
  Formula bad = f_var(2 * k + 2);

  Semantics sem(vocab);
  std::mt19937_64 rng(seed);
  const ModelSet init_models = sem.models(init);
  const ModelSet bad_models = sem.models(bad);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Cnf phi = random_moncnf(rng, n, 2 * k + 1).simplified();
    ModelSet phi_models = sem.models(phi);
    if (!init_models.subset_of(phi_models) || phi_models.intersects(bad_models)) continue;
    FamilyInstance fi = gen_maximal(phi, init, bad, vocab);
    fi.family = "monmax";
    fi.k = k;
    fi.seed = seed;
    return fi;
  }
  throw Error("gen_monmax_family: rejection sampling did not converge");
}

FamilyInstance gen_badts(int k) {
  require(k >= 1 && k <= 8, "gen_badts: k out of range");
  Vocabulary vocab = qbf2_vocab(k);
  std::vector<Formula> init_lits;
  for (int i = 0; i < vocab.size(); ++i)
    init_lits.push_back(i == 2 * k + 1 ? f_var(i) : f_not(f_var(i)));

  FamilyInstance fi;
  fi.ts = TransitionSystem{vocab, f_and(std::move(init_lits)), f_true(), f_var(2 * k + 2)};
  fi.family = "badts";
  fi.n = vocab.size();
  fi.k = k;
  return fi;
}

namespace {

struct AddEvenParts {
  Vocabulary vocab;
  Formula init;
  Formula bad;
  Formula axiom;                  // exactly one c_i
  std::vector<Formula> only;      // only[r]: c_{r+1} set, all others clear
  Cnf invariant;                  // (c_i -> !x_i) clauses plus the !Bad clause
};

AddEvenParts add_even_parts(int n, bool with_inputs) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n; ++i) names.push_back("c" + std::to_string(i));
  if (with_inputs)
    for (int i = 1; i <= n; ++i) names.push_back("y" + std::to_string(i));

  AddEvenParts parts;
  parts.vocab = Vocabulary(names);

  std::vector<Formula> only;
  for (int r = 0; r < n; ++r) {
    std::vector<Formula> lits;
    for (int s = 0; s < n; ++s)
      lits.push_back(s == r ? f_var(n + s) : f_not(f_var(n + s)));
    only.push_back(n == 1 ? lits[0] : f_and(std::move(lits)));
  }
  parts.axiom = n == 1 ? only[0] : f_or(only);
  parts.only = std::move(only);

  std::vector<Formula> init_conj;
  for (int i = 0; i < n; ++i) init_conj.push_back(f_not(f_var(i)));
  init_conj.push_back(parts.axiom);
  parts.init = f_and(std::move(init_conj));

  std::vector<Formula> bad_conj;
  for (int i = 0; i < n; ++i) bad_conj.push_back(f_var(i));
  parts.bad = n == 1 ? bad_conj[0] : f_and(std::move(bad_conj));

  std::vector<Clause> inv;
  std::vector<Literal> not_all_ones;
  for (int i = 0; i < n; ++i) not_all_ones.push_back(Literal{i, false});
  inv.push_back(Clause(std::move(not_all_ones)));
  for (int i = 0; i < n; ++i) inv.push_back(Clause({Literal{n + i, false}, Literal{i, false}}));
  parts.invariant = Cnf(std::move(inv));
  return parts;
}

}  // namespace

FamilyInstance gen_add_even(int n) {
  require(n >= 2 && n <= 10, "gen_add_even: n out of range");
  AddEvenParts parts = add_even_parts(n, /*with_inputs=*/true);

  auto xv = [&](int i) { return f_var(i); };
  auto yv = [&](int i) { return f_var(2 * n + i); };

  // Under rotation r, position p of the register is variable x_{(r+p) mod n}
  // and the addend is 2 * y (same rotation). One shared carry chain per r.
  std::vector<std::vector<Formula>> sum(n);
  for (int r = 0; r < n; ++r) {
    sum[r].resize(n);
    Formula carry = f_false();
    for (int p = 0; p < n; ++p) {
      Formula a = xv((r + p) % n);
      Formula d = p == 0 ? f_false() : yv((r + p - 1) % n);
      sum[r][p] = f_xor(f_xor(a, d), carry);
      carry = f_or(f_and(a, d), f_and(carry, f_or(a, d)));
    }
  }

  Formula no_axiom = f_not(parts.axiom);
  std::vector<Formula> conjuncts;
  for (int i = 0; i < n; ++i) {
    std::vector<Formula> cases;
    for (int r = 0; r < n; ++r) {
      int p = (i - r + n) % n;  // position of x_{i+1} under rotation r
      cases.push_back(f_and(parts.only[r], sum[r][p]));
    }
    cases.push_back(f_and(no_axiom, xv(i)));  // no selected rotation: stutter
    conjuncts.push_back(f_iff(f_var(i, true), f_or(std::move(cases))));
  }
  for (int i = 0; i < n; ++i)
    conjuncts.push_back(f_iff(f_var(n + i, true), f_var(n + i)));
  // y' unconstrained: fresh inputs each step.

  FamilyInstance fi;
  fi.ts = TransitionSystem{parts.vocab, parts.init, f_and(std::move(conjuncts)), parts.bad};
  fi.family = "add-even";
  fi.n = parts.vocab.size();
  fi.k = n;
  fi.m = parts.invariant.size();
  fi.invariant = parts.invariant;
  if (fi.n <= 24 && !check_invariant(fi.ts, parts.invariant).ok())
    throw Error("add-even invariant failed the checker");
  return fi;
}

FamilyInstance gen_add_even_maximal(int n) {
  require(n >= 2 && n <= 10, "gen_add_even_maximal: n out of range");
  AddEvenParts parts = add_even_parts(n, /*with_inputs=*/false);

  std::vector<Formula> inv_clauses;
  for (int i = 0; i < n; ++i)
    inv_clauses.push_back(f_or(f_not(f_var(n + i)), f_not(f_var(i))));
  Formula inv = f_and(std::move(inv_clauses));

  std::vector<Formula> conjuncts{parts.axiom};
  for (int i = 0; i < n; ++i)
    conjuncts.push_back(f_iff(f_var(n + i, true), f_var(n + i)));
  conjuncts.push_back(f_implies(inv, prime(inv)));

  FamilyInstance fi;
  fi.ts = TransitionSystem{parts.vocab, parts.init, f_and(std::move(conjuncts)), parts.bad};
  fi.family = "add-even-max";
  fi.n = parts.vocab.size();
  fi.k = n;
  fi.m = parts.invariant.size();
  fi.invariant = parts.invariant;
  if (!check_invariant(fi.ts, parts.invariant).ok())
    throw Error("add-even-max invariant failed the checker");
  return fi;
}

std::pair<Formula, Formula> build_agreeing_pair(
    const std::vector<std::pair<uint32_t, bool>>& valuations, int k) {
  require(k >= 1, "agreeing pair: k must be positive");
  require(valuations.size() < (size_t{1} << k), "agreeing pair: too many valuations");
  {
    std::vector<uint32_t> vals;
    for (const auto& [v, label] : valuations) vals.push_back(v);
    std::sort(vals.begin(), vals.end());
    require(std::adjacent_find(vals.begin(), vals.end()) == vals.end(),
            "agreeing pair: valuations must be distinct");
  }

  auto cube_2k = [&](uint32_t v) {
    std::vector<Formula> lits;
    for (int i = 0; i < 2 * k; ++i)
      lits.push_back((v >> i) & 1u ? f_var(i) : f_not(f_var(i)));
    return f_and(std::move(lits));
  };

  std::vector<Formula> neq, eq;
  for (const auto& [v, label] : valuations) {
    if (label)
      eq.push_back(cube_2k(v));
    else
      neq.push_back(f_not(cube_2k(v)));
  }
  Formula psi1 = neq.empty() ? f_true() : (neq.size() == 1 ? neq[0] : f_and(std::move(neq)));
  Formula psi2 = eq.empty() ? f_false() : (eq.size() == 1 ? eq[0] : f_or(std::move(eq)));
  return {psi1, psi2};
}

Cnf random_moncnf(std::mt19937_64& rng, int num_vars, int max_clauses) {
  require(num_vars >= 1 && max_clauses >= 1, "random_moncnf: empty ranges");
  std::uniform_int_distribution<int> count_dist(1, max_clauses);
  std::uniform_int_distribution<int> width_dist(1, num_vars);
  std::vector<int> vars(num_vars);
  std::iota(vars.begin(), vars.end(), 0);

  std::vector<Clause> clauses;
  const int count = count_dist(rng);
  for (int c = 0; c < count; ++c) {
    const int width = width_dist(rng);
    std::shuffle(vars.begin(), vars.end(), rng);
    std::vector<Literal> lits;
    for (int i = 0; i < width; ++i) lits.push_back(Literal{vars[i], false});
    clauses.push_back(Clause(std::move(lits)));
  }
  return Cnf(std::move(clauses));
}

Formula random_formula(std::mt19937_64& rng, int num_vars, int depth, bool allow_primed) {
  std::uniform_int_distribution<int> leaf(0, num_vars);  // num_vars = constant leaf
  auto var_leaf = [&]() -> Formula {
    int v = leaf(rng);
    if (v == num_vars) return f_const(rng() & 1);
    bool primed = allow_primed && (rng() & 1);
    return f_var(v, primed);
  };
  if (depth <= 0) return var_leaf();
  switch (rng() % 6) {
    case 0:
      return var_leaf();
    case 1:
      return f_not(random_formula(rng, num_vars, depth - 1, allow_primed));
    case 2:
      return f_and(random_formula(rng, num_vars, depth - 1, allow_primed),
                   random_formula(rng, num_vars, depth - 1, allow_primed));
    case 3:
      return f_or(random_formula(rng, num_vars, depth - 1, allow_primed),
                  random_formula(rng, num_vars, depth - 1, allow_primed));
    case 4:
      return f_implies(random_formula(rng, num_vars, depth - 1, allow_primed),
                       random_formula(rng, num_vars, depth - 1, allow_primed));
    default:
      return f_iff(random_formula(rng, num_vars, depth - 1, allow_primed),
                   random_formula(rng, num_vars, depth - 1, allow_primed));
  }
}

TransitionSystem random_system(std::mt19937_64& rng, int num_vars, int depth) {
  std::vector<std::string> names;
  for (int i = 1; i <= num_vars; ++i) names.push_back("v" + std::to_string(i));
  TransitionSystem ts;
  ts.vocab = Vocabulary(names);
  ts.init = random_formula(rng, num_vars, depth, false);
  ts.delta = random_formula(rng, num_vars, depth, true);
  ts.bad = random_formula(rng, num_vars, depth, false);
  return ts;
}

std::string print_ground_truth(const FamilyInstance& fi) {
  if (!fi.invariant) return "unsafe\n";
  std::ostringstream out;
  out << "safe\n" << write_dimacs(*fi.invariant, fi.ts.vocab);
  return out.str();
}

std::optional<Cnf> parse_ground_truth(const std::string& text) {
  std::istringstream in(text);
  std::string head;
  if (!std::getline(in, head)) throw InputError("ground truth: empty file");
  if (head == "unsafe") return std::nullopt;
  if (head != "safe") throw InputError("ground truth: expected 'safe' or 'unsafe'");
  std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_dimacs(rest);
}

}  // namespace invlab
