#include "invlab/transition_system.h"

#include <sstream>

namespace invlab {

void TransitionSystem::validate() const {
  if (has_primed_vars(init)) throw InputError("init must not mention primed variables");
  if (has_primed_vars(bad)) throw InputError("bad must not mention primed variables");
  int n = vocab.size();
  if (max_var(init) >= n || max_var(bad) >= n || max_var(delta) >= n)
    throw InputError("formula mentions a variable outside the vocabulary");
}

ReachabilityReport bfs_reach(const TransitionSystem& ts) {
  Semantics sem(ts.vocab);
  StepSemantics step(sem, ts.delta);
  const int n = ts.vocab.size();

  std::vector<ModelSet> layers;
  layers.push_back(sem.models(ts.init));
  ModelSet reachable = layers[0];
  while (true) {
    ModelSet next = step.post_image(layers.back());
    next.subtract(reachable);
    if (next.none()) break;
    reachable |= next;
    layers.push_back(std::move(next));
  }

  ReachabilityReport report;
  report.reachable = reachable;
  report.diameter = static_cast<int>(layers.size()) - 1;

  const ModelSet& bad = sem.models(ts.bad);
  ModelSet bad_reached = reachable;
  bad_reached &= bad;
  report.safe = bad_reached.none();
  if (report.safe) return report;

  // Minimal-length trace: earliest layer containing a bad state, smallest
  // state indices, predecessors chosen smallest-first.
  size_t bad_depth = 0;
  for (; bad_depth < layers.size(); ++bad_depth) {
    if (layers[bad_depth].intersects(bad)) break;
  }
  ModelSet candidates = layers[bad_depth];
  candidates &= bad;
  uint32_t current = *candidates.first();
  std::vector<uint32_t> rev{current};
  for (size_t d = bad_depth; d > 0; --d) {
    for (auto s = layers[d - 1].first();; s = layers[d - 1].next(*s + 1)) {
      if (!s) throw Error("bfs trace reconstruction failed");
      if (step.can_step(*s, current)) {
        current = *s;
        break;
      }
    }
    rev.push_back(current);
  }
  for (auto it = rev.rbegin(); it != rev.rend(); ++it)
    report.trace.push_back(State{*it, n});
  return report;
}

CheckResult check_invariant(const TransitionSystem& ts, const Formula& inv) {
  if (has_primed_vars(inv)) throw ContractError("invariant must be over the plain vocabulary");
  Semantics sem(ts.vocab);
  const int n = ts.vocab.size();
  const ModelSet& inv_models = sem.models(inv);

  ModelSet escaping_init = sem.models(ts.init);
  escaping_init.subtract(inv_models);
  if (auto w = escaping_init.first())
    return {CheckStatus::FailsInitiation, State{*w, n}, std::nullopt};

  StepSemantics step(sem, ts.delta);
  if (auto cti = step.find_step(inv_models, inv_models.complement())) {
    return {CheckStatus::FailsConsecution, std::nullopt,
            std::make_pair(State{cti->first, n}, State{cti->second, n})};
  }

  ModelSet unsafe = inv_models;
  unsafe &= sem.models(ts.bad);
  if (auto w = unsafe.first()) return {CheckStatus::FailsSafety, State{*w, n}, std::nullopt};

  return {};
}

CheckResult check_invariant(const TransitionSystem& ts, const Cnf& inv) {
  return check_invariant(ts, to_formula(inv));
}

namespace {

Formula swap_prime_roles(const Formula& f) {
  switch (f->kind) {
    case NodeKind::Const:
      return f;
    case NodeKind::Var:
      return f_var(f->var, !f->primed);
    default: {
      std::vector<Formula> args;
      args.reserve(f->args.size());
      for (const Formula& a : f->args) args.push_back(swap_prime_roles(a));
      FormulaNode node{f->kind, false, 0, false, std::move(args)};
      return std::make_shared<const FormulaNode>(std::move(node));
    }
  }
}

}  // namespace

TransitionSystem dualize(const TransitionSystem& ts) {
  return TransitionSystem{ts.vocab, ts.bad, swap_prime_roles(ts.delta), ts.init};
}

Formula dualize(const Formula& f) { return f_not(f); }

Formula dualize_cnf_to_dnf(const Cnf& cnf) {
  // !(c1 /\ ... /\ cm) as an OR of m cubes.
  std::vector<Formula> cubes;
  cubes.reserve(cnf.size());
  for (const Clause& c : cnf.clauses()) {
    std::vector<Formula> lits;
    lits.reserve(c.literals().size());
    for (const Literal& l : c.literals()) lits.push_back(f_literal(Literal{l.var, !l.positive}));
    cubes.push_back(lits.size() == 1 ? lits[0] : f_and(std::move(lits)));
  }
  if (cubes.empty()) return f_false();
  if (cubes.size() == 1) return cubes[0];
  return f_or(std::move(cubes));
}

std::string print_ts(const TransitionSystem& ts) {
  std::ostringstream out;
  out << "vars:";
  for (const std::string& name : ts.vocab.names()) out << ' ' << name;
  out << '\n';
  out << "init: " << print_formula(ts.init, ts.vocab) << '\n';
  out << "delta: " << print_formula(ts.delta, ts.vocab) << '\n';
  out << "bad: " << print_formula(ts.bad, ts.vocab) << '\n';
  return out.str();
}

TransitionSystem parse_ts(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> fields;
  const char* keys[4] = {"vars:", "init:", "delta:", "bad:"};
  size_t next = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (next >= 4) throw InputError("transition system: unexpected extra line");
    const std::string key = keys[next];
    if (line.rfind(key, 0) != 0)
      throw InputError("transition system: expected line starting with '" + key + "'");
    fields.push_back(line.substr(key.size()));
    ++next;
  }
  if (next != 4) throw InputError("transition system: missing sections");

  std::istringstream vars_in(fields[0]);
  std::vector<std::string> names;
  std::string name;
  while (vars_in >> name) names.push_back(name);
  Vocabulary vocab(names);

  TransitionSystem ts;
  ts.vocab = vocab;
  ts.init = parse_formula(fields[1], vocab, false);
  ts.delta = parse_formula(fields[2], vocab, true);
  ts.bad = parse_formula(fields[3], vocab, false);
  ts.validate();
  return ts;
}

}  // namespace invlab
