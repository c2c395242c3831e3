#include "invlab/inference.h"

#include <algorithm>

namespace invlab {

namespace {

// Structural cube extraction: a literal or a conjunction of literals.
std::optional<std::vector<Literal>> as_cube(const Formula& f) {
  std::vector<Literal> lits;
  std::vector<const FormulaNode*> stack{f.get()};
  while (!stack.empty()) {
    const FormulaNode* n = stack.back();
    stack.pop_back();
    switch (n->kind) {
      case NodeKind::Var:
        lits.push_back(Literal{n->var, true});
        break;
      case NodeKind::Not:
        if (n->args[0]->kind != NodeKind::Var) return std::nullopt;
        lits.push_back(Literal{n->args[0]->var, false});
        break;
      case NodeKind::And:
        for (const Formula& a : n->args) stack.push_back(a.get());
        break;
      default:
        return std::nullopt;
    }
  }
  return lits;
}

std::optional<Clause> as_clause(const Formula& f) {
  if (f->kind == NodeKind::Var || f->kind == NodeKind::Not) {
    auto cube = as_cube(f);
    if (!cube || cube->size() != 1) return std::nullopt;
    return Clause(std::move(*cube));
  }
  if (f->kind != NodeKind::Or) return std::nullopt;
  std::vector<Literal> lits;
  for (const Formula& a : f->args) {
    auto one = as_cube(a);
    if (!one || one->size() != 1) return std::nullopt;
    lits.push_back((*one)[0]);
  }
  return Clause(std::move(lits));
}

Clause negate_cube(const std::vector<Literal>& cube) {
  std::vector<Literal> lits;
  lits.reserve(cube.size());
  for (const Literal& l : cube) lits.push_back(Literal{l.var, !l.positive});
  return Clause(std::move(lits));
}

Clause not_bad_clause(const Formula& bad) {
  auto cube = as_cube(bad);
  if (!cube)
    throw ContractError("bad must be a conjunction of literals for clausal inference");
  return negate_cube(*cube);
}

Formula conjunction_of(const std::vector<Literal>& lits) {
  if (lits.empty()) return f_true();
  std::vector<Formula> fs;
  fs.reserve(lits.size());
  for (const Literal& l : lits) fs.push_back(f_literal(l));
  if (fs.size() == 1) return fs[0];
  return f_and(std::move(fs));
}

ModelSet cube_models(const std::vector<Literal>& lits, int n) {
  ModelSet out(n, true);
  for (const Literal& l : lits) {
    ModelSet v = ModelSet::var_set(n, l.var);
    out &= l.positive ? v : v.complement();
  }
  return out;
}

// Exact CNF of a state set: one clause per excluded state.
Cnf cnf_of_model_set(const ModelSet& set, int n) {
  std::vector<Clause> clauses;
  set.complement().for_each([&](uint32_t t) {
    std::vector<Literal> lits;
    lits.reserve(n);
    State s{t, n};
    for (int i = 0; i < n; ++i) lits.push_back(Literal{i, !s.get(i)});
    clauses.push_back(Clause(std::move(lits)));
  });
  Cnf out(std::move(clauses));
  return out.size() <= 512 ? out.simplified() : out;
}

}  // namespace

void Budget::apply(QueryLedger& ledger) const {
  ledger.hoare_cap = hoare;
  ledger.in_block_cap = hoare_in_block;
  ledger.inductiveness_cap = inductiveness;
  ledger.interpolation_cap = interpolation;
}

std::vector<Literal> naive_block(const State& sigma) {
  std::vector<Literal> lits;
  lits.reserve(sigma.n);
  for (int i = 0; i < sigma.n; ++i) lits.push_back(Literal{i, sigma.get(i)});
  return lits;
}

std::vector<Literal> pdr1_block(const Formula& init, const OracleHandle& handle,
                                const State& sigma, QueryLedger& ledger, Semantics& sem) {
  const int n = handle.vocab().size();
  std::vector<bool> kept(n, true);
  const ModelSet& init_models = sem.models(init);

  for (int i = 0; i < n; ++i) {
    std::vector<Literal> t;
    for (int j = 0; j < n; ++j)
      if (kept[j] && j != i) t.push_back(Literal{j, sigma.get(j)});
    bool init_excludes = !init_models.intersects(cube_models(t, n));
    // One query per literal of the cube, in vocabulary order.
    bool unreachable = handle.hoare(init, f_not(conjunction_of(t)), ledger, HoareScope::Block);
    if (init_excludes && unreachable) kept[i] = false;
  }

  std::vector<Literal> out;
  for (int i = 0; i < n; ++i)
    if (kept[i]) out.push_back(Literal{i, sigma.get(i)});
  return out;
}

InferenceOutcome backward_reach(const Formula& init, const Formula& bad,
                                const OracleHandle& handle, const BlockFn& block,
                                const Budget& budget, QueryLedger* ledger) {
  QueryLedger local;
  QueryLedger& led = ledger ? *ledger : local;
  budget.apply(led);

  Clause not_bad = not_bad_clause(bad);
  Cnf inv({not_bad});
  Formula cand = to_formula(not_bad);

  InferenceOutcome out;
  try {
    while (!handle.hoare(cand, cand, led)) {
      auto [pre, post] = handle.extract_cti(cand, cand, led);
      (void)post;
      if (eval(init, pre)) {
        // An initial state steps outside the candidate. The successor is
        // bad or inside a blocked region (cube blocking only excludes
        // states that reach Bad; one-step generalization never excludes a
        // successor of Init), so this witnesses unsafety.
        out.status = InferenceStatus::NoInvariant;
        out.ledger = led;
        return out;
      }
      Clause learned = negate_cube(block(handle, pre, led));
      inv.add(learned);
      cand = f_and(cand, to_formula(learned));
      ++out.iterations;
    }
  } catch (const BudgetExceeded&) {
    out.status = InferenceStatus::BudgetExhausted;
    out.ledger = led;
    return out;
  }
  out.status = InferenceStatus::Invariant;
  out.invariant = std::move(inv);
  out.ledger = led;
  return out;
}

InferenceOutcome naive_backward(const Formula& init, const Formula& bad,
                                const OracleHandle& handle, const Budget& budget,
                                QueryLedger* ledger) {
  BlockFn block = [](const OracleHandle&, const State& sigma, QueryLedger&) {
    return naive_block(sigma);
  };
  return backward_reach(init, bad, handle, block, budget, ledger);
}

InferenceOutcome pdr1(const Formula& init, const Formula& bad, const OracleHandle& handle,
                      const Budget& budget, QueryLedger* ledger) {
  Semantics sem(handle.vocab());
  BlockFn block = [&](const OracleHandle& h, const State& sigma, QueryLedger& led) {
    return pdr1_block(init, h, sigma, led, sem);
  };
  return backward_reach(init, bad, handle, block, budget, ledger);
}

int64_t ClassBound::p(int n) const {
  int64_t acc = 0;
  int64_t pow = 1;
  for (int64_t c : coeffs) {
    acc += c * pow;
    pow *= n;
  }
  return acc;
}

bool ClassBound::admits(const Cnf& cnf, int n) const {
  if (cnf.size() > p(n)) return false;
  if (kind == Kind::MonCnf && !cnf.monotone()) return false;
  return true;
}

bool decide_poly_inference(const Formula& init, const Formula& bad, const OracleHandle& handle,
                           const ClassBound& bound, QueryLedger* ledger) {
  const int n = handle.vocab().size();
  const int64_t pn = bound.p(n);
  if (pn < n) throw ContractError("decide_poly_inference: bound requires p(n) >= n");

  QueryLedger local;
  QueryLedger& led = ledger ? *ledger : local;
  Budget budget;
  budget.hoare_in_block = static_cast<uint64_t>(pn) * static_cast<uint64_t>(n);
  InferenceOutcome out = pdr1(init, bad, handle, budget, &led);
  if (!out.found() || !bound.admits(*out.invariant, n)) return false;

  // The candidate is re-validated: boundary conditions openly, consecution
  // with one more Hoare query.
  Semantics sem(handle.vocab());
  Formula psi = to_formula(*out.invariant);
  if (!sem.models(init).subset_of(sem.models(psi))) return false;
  if (sem.models(psi).intersects(sem.models(bad))) return false;
  try {
    return handle.hoare(psi, psi, led);
  } catch (const BudgetExceeded&) {
    return false;
  }
}

InferenceOutcome houdini(const Formula& init, const Formula& bad, const OracleHandle& handle,
                         const std::vector<Formula>& predicates, const Budget& budget,
                         QueryLedger* ledger) {
  QueryLedger local;
  QueryLedger& led = ledger ? *ledger : local;
  budget.apply(led);
  Semantics sem(handle.vocab());

  std::vector<Clause> preds;
  for (const Formula& p : predicates) {
    auto c = as_clause(p);
    if (!c) throw ContractError("houdini predicates must be clauses");
    preds.push_back(std::move(*c));
  }

  const ModelSet& init_models = sem.models(init);
  std::vector<size_t> live;
  for (size_t i = 0; i < preds.size(); ++i)
    if (init_models.subset_of(sem.models(preds[i]))) live.push_back(i);

  InferenceOutcome out;
  try {
    while (true) {
      ++out.iterations;
      std::vector<Formula> conj;
      for (size_t i : live) conj.push_back(to_formula(preds[i]));
      Formula pre = conj.empty() ? f_true() : (conj.size() == 1 ? conj[0] : f_and(conj));

      std::vector<size_t> keep;
      bool changed = false;
      for (size_t i : live) {
        if (handle.hoare(pre, to_formula(preds[i]), led))
          keep.push_back(i);
        else
          changed = true;
      }
      live = std::move(keep);
      if (!changed) break;
    }
  } catch (const BudgetExceeded&) {
    out.status = InferenceStatus::BudgetExhausted;
    out.ledger = led;
    return out;
  }

  std::vector<Clause> clauses;
  for (size_t i : live) clauses.push_back(preds[i]);
  Cnf result(std::move(clauses));
  bool safe = !sem.models(result).intersects(sem.models(bad));
  out.status = safe ? InferenceStatus::Invariant : InferenceStatus::NoInvariant;
  if (safe) out.invariant = std::move(result);
  out.ledger = led;
  return out;
}

std::vector<Formula> negative_literal_predicates(const Vocabulary& vocab) {
  std::vector<Formula> out;
  for (int i = 0; i < vocab.size(); ++i) out.push_back(f_not(f_var(i)));
  return out;
}

IceProposer enumerative_proposer(std::vector<Cnf> hypotheses, const Formula& init,
                                 const Formula& bad, const Vocabulary& vocab) {
  auto sem = std::make_shared<Semantics>(vocab);
  ModelSet init_models = sem->models(init);
  ModelSet bad_models = sem->models(bad);
  auto cursor = std::make_shared<size_t>(0);
  auto hyps = std::make_shared<std::vector<Cnf>>(std::move(hypotheses));

  return [=](const std::vector<IceCex>& cexes) -> std::optional<Cnf> {
    // A hypothesis rejected once stays rejected: counterexamples accumulate,
    // so the scan can resume where it stopped.
    for (size_t& i = *cursor; i < hyps->size(); ++i) {
      const Cnf& h = (*hyps)[i];
      ModelSet h_models = sem->models(h);
      if (!init_models.subset_of(h_models) || h_models.intersects(bad_models)) continue;
      bool consistent = true;
      for (const IceCex& cex : cexes) {
        if (h.eval(cex.pre) && !h.eval(cex.post)) {
          consistent = false;
          break;
        }
      }
      if (consistent) return h;
    }
    return std::nullopt;
  };
}

std::vector<Cnf> moncnf_hypothesis_class(const Vocabulary& vocab, int max_width,
                                         int max_clauses) {
  const int n = vocab.size();
  std::vector<Clause> clauses;
  // All negative clauses by (width, lexicographic variable order).
  std::vector<int> combo;
  auto emit = [&](auto&& self, int width, int start) -> void {
    if (static_cast<int>(combo.size()) == width) {
      std::vector<Literal> lits;
      for (int v : combo) lits.push_back(Literal{v, false});
      clauses.push_back(Clause(std::move(lits)));
      return;
    }
    for (int v = start; v < n; ++v) {
      combo.push_back(v);
      self(self, width, v + 1);
      combo.pop_back();
    }
  };
  for (int w = 1; w <= std::min(max_width, n); ++w) emit(emit, w, 0);

  std::vector<Cnf> hypotheses;
  std::vector<Clause> subset;
  auto build = [&](auto&& self, int count, size_t start) -> void {
    if (static_cast<int>(subset.size()) == count) {
      hypotheses.push_back(Cnf(subset));
      return;
    }
    for (size_t i = start; i < clauses.size(); ++i) {
      subset.push_back(clauses[i]);
      self(self, count, i + 1);
      subset.pop_back();
      if (hypotheses.size() > (1u << 20))
        throw ResourceError("monotone hypothesis class too large to enumerate");
    }
  };
  for (int c = 0; c <= max_clauses; ++c) build(build, c, 0);
  return hypotheses;
}

IceProposer cube_blocking_proposer(const Formula& init, const Formula& bad,
                                   const Vocabulary& vocab) {
  Clause not_bad = not_bad_clause(bad);
  const int n = vocab.size();
  return [=](const std::vector<IceCex>& cexes) -> std::optional<Cnf> {
    Cnf h({not_bad});
    for (const IceCex& cex : cexes) {
      if (eval(init, cex.pre)) return std::nullopt;  // cannot exclude an initial state
      std::vector<Literal> lits;
      for (int i = 0; i < n; ++i) lits.push_back(Literal{i, !cex.pre.get(i)});
      h.add(Clause(std::move(lits)));
    }
    return h;
  };
}

InferenceOutcome ice_enum_learner(const Formula& init, const Formula& bad,
                                  const OracleHandle& handle, const IceProposer& proposer,
                                  const TeacherStrategy& strategy, const Budget& budget,
                                  QueryLedger* ledger, std::vector<Cnf>* candidate_log) {
  (void)init;
  (void)bad;
  QueryLedger local;
  QueryLedger& led = ledger ? *ledger : local;
  budget.apply(led);

  std::vector<IceCex> cexes;
  InferenceOutcome out;
  try {
    while (true) {
      std::optional<Cnf> h = proposer(cexes);
      if (!h) {
        out.status = InferenceStatus::NoInvariant;
        out.ledger = led;
        return out;
      }
      if (candidate_log) candidate_log->push_back(*h);
      InductivenessAnswer ans = handle.inductiveness(to_formula(*h), strategy, led);
      ++out.iterations;
      if (ans.inductive()) {
        out.status = InferenceStatus::Invariant;
        out.invariant = std::move(*h);
        out.ledger = led;
        return out;
      }
      cexes.push_back({ans.cex->first, ans.cex->second});
    }
  } catch (const BudgetExceeded&) {
    out.status = InferenceStatus::BudgetExhausted;
    out.ledger = led;
    return out;
  }
}

InferenceOutcome itp_inference(const Formula& init, const Formula& bad,
                               const OracleHandle& handle, int k_start, const Budget& budget,
                               QueryLedger* ledger) {
  if (k_start < 1) throw ContractError("itp_inference: k must be at least 1");
  QueryLedger local;
  QueryLedger& led = ledger ? *ledger : local;
  budget.apply(led);

  Semantics sem(handle.vocab());
  const int n = handle.vocab().size();
  const ModelSet& bad_models = sem.models(bad);
  Formula not_bad = f_not(bad);

  InferenceOutcome out;
  if (sem.models(init).intersects(bad_models)) {
    out.ledger = led;
    return out;  // an initial state is already bad
  }

  try {
    for (int k = k_start; k <= handle.max_unroll(); ++k) {
      Formula frontier = init;
      ModelSet frontier_models = sem.models(init);
      while (true) {
        ++out.iterations;
        std::optional<Formula> rho = handle.interpolant(frontier, not_bad, 1, k - 1, led);
        if (!rho) break;  // Bad k-reachable from the frontier: widen k
        ModelSet rho_models = sem.models(*rho);
        if (rho_models.subset_of(frontier_models)) {
          // One-step image adds nothing: the frontier is inductive.
          out.status = InferenceStatus::Invariant;
          out.invariant = cnf_of_model_set(frontier_models, n);
          out.ledger = led;
          return out;
        }
        if (rho_models.intersects(bad_models)) break;  // over-approximation hit Bad
        frontier = f_or(frontier, *rho);
        frontier_models |= rho_models;
      }
    }
    // Unrolling depth ran out of the model's polynomial bound.
    out.status = InferenceStatus::BudgetExhausted;
    out.ledger = led;
    return out;
  } catch (const BudgetExceeded&) {
    out.status = InferenceStatus::BudgetExhausted;
    out.ledger = led;
    return out;
  }
}

}  // namespace invlab
