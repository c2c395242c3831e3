#include "invlab/semantics.h"

namespace invlab {

namespace {
constexpr int kMaxEnumerationVars = 24;
constexpr uint64_t kCacheByteBudget = uint64_t{1} << 29;  // 512 MiB per cache
}  // namespace

Semantics::Semantics(const Vocabulary& vocab) : vocab_(vocab), n_(vocab.size()) {
  if (n_ > kMaxEnumerationVars)
    throw ResourceError("vocabulary too large for the enumeration backend");
}

ModelSet Semantics::compute(const Formula& f, bool pair) {
  const int space = pair ? 2 * n_ : n_;
  switch (f->kind) {
    case NodeKind::Const:
      return ModelSet(space, f->value);
    case NodeKind::Var: {
      if (f->var >= n_) throw ContractError("variable out of vocabulary range");
      if (!pair && f->primed)
        throw ContractError("primed variable in a single-vocabulary formula");
      // Pair layout: post-state in bits [0, n), pre-state in bits [n, 2n).
      int bit = !pair ? f->var : (f->primed ? f->var : n_ + f->var);
      return ModelSet::var_set(space, bit);
    }
    case NodeKind::Not:
      return lookup(f->args[0], pair).complement();
    case NodeKind::And: {
      ModelSet out(space, true);
      for (const Formula& a : f->args) out &= lookup(a, pair);
      return out;
    }
    case NodeKind::Or: {
      ModelSet out(space, false);
      for (const Formula& a : f->args) out |= lookup(a, pair);
      return out;
    }
    case NodeKind::Implies: {
      ModelSet out = lookup(f->args[0], pair).complement();
      out |= lookup(f->args[1], pair);
      return out;
    }
    case NodeKind::Iff: {
      const ModelSet& a = lookup(f->args[0], pair);
      const ModelSet& b = lookup(f->args[1], pair);
      ModelSet both = a;
      both &= b;
      ModelSet neither = a.complement();
      neither.subtract(b);
      both |= neither;
      return both;
    }
  }
  throw Error("unreachable");
}

const ModelSet& Semantics::lookup(const Formula& f, bool pair) {
  auto& cache = pair ? pair_cache_ : cache_;
  auto it = cache.find(f.get());
  if (it != cache.end()) return it->second;

  ModelSet ms = compute(f, pair);
  uint64_t bytes = (ms.universe_size() / 8) + 64;
  auto& budget = pair ? pair_cache_bytes_ : cache_bytes_;
  if (budget + bytes > kCacheByteBudget) {
    cache.clear();
    (pair ? pair_pins_ : pins_).clear();
    budget = 0;
  }
  budget += bytes;
  (pair ? pair_pins_ : pins_).push_back(f);
  return cache.emplace(f.get(), std::move(ms)).first->second;
}

const ModelSet& Semantics::models(const Formula& f) { return lookup(f, false); }

ModelSet Semantics::models(const Clause& c) const {
  ModelSet out(n_, false);
  for (const Literal& l : c.literals()) {
    ModelSet v = ModelSet::var_set(n_, l.var);
    out |= l.positive ? v : v.complement();
  }
  return out;
}

ModelSet Semantics::models(const Cnf& cnf) const {
  ModelSet out(n_, true);
  for (const Clause& c : cnf.clauses()) out &= models(c);
  return out;
}

const ModelSet& Semantics::models_pair(const Formula& f) {
  if (2 * n_ > kMaxEnumerationVars)
    throw ResourceError("vocabulary too large for pair-space enumeration");
  return lookup(f, true);
}

bool Semantics::implies(const Formula& f, const Formula& g) {
  return models(f).subset_of(models(g));
}

bool Semantics::equivalent(const Formula& f, const Formula& g) {
  return models(f) == models(g);
}

bool Semantics::satisfiable(const Formula& f) { return models(f).any(); }

std::optional<State> Semantics::find_model(const Formula& f) {
  auto idx = models(f).first();
  if (!idx) return std::nullopt;
  return state_of(*idx);
}

std::optional<State> Semantics::find_distinguishing(const Formula& f, const Formula& g) {
  ModelSet diff = models(f);
  diff.subtract(models(g));
  auto idx = diff.first();
  if (!idx) return std::nullopt;
  return state_of(*idx);
}

Formula Semantics::set_to_formula(const ModelSet& set) const {
  std::vector<Formula> cubes;
  set.for_each([&](uint32_t idx) { cubes.push_back(cube_formula(State{idx, n_})); });
  if (cubes.empty()) return f_false();
  if (cubes.size() == 1) return cubes[0];
  return f_or(std::move(cubes));
}

bool is_prime_consequence(const Clause& c, const Cnf& phi, const Vocabulary& vocab) {
  if (vocab.size() > 20) throw ResourceError("prime-consequence check capped at 20 variables");
  Semantics sem(vocab);
  ModelSet phi_models = sem.models(phi);
  if (!phi_models.subset_of(sem.models(c))) return false;
  for (const Literal& l : c.literals()) {
    if (phi_models.subset_of(sem.models(c.without(l)))) return false;
  }
  return true;
}

}  // namespace invlab
