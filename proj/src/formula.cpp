#include "invlab/formula.h"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace invlab {

Vocabulary::Vocabulary(std::vector<std::string> names) : names_(std::move(names)) {
  for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
    const std::string& n = names_[i];
    if (n.empty()) throw InputError("empty variable name");
    if (n.back() == '\'') throw InputError("variable name carries prime marker: " + n);
    for (char c : n) {
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')')
        throw InputError("invalid character in variable name: " + n);
    }
    if (!index_.emplace(n, i).second) throw InputError("duplicate variable name: " + n);
  }
}

std::optional<int> Vocabulary::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string to_string(const State& s, const Vocabulary& vocab) {
  std::ostringstream out;
  for (int i = 0; i < s.n; ++i) {
    if (i) out << ' ';
    out << vocab.name(i) << '=' << (s.get(i) ? '1' : '0');
  }
  return out.str();
}

Clause::Clause(std::vector<Literal> lits) : lits_(std::move(lits)) {
  std::sort(lits_.begin(), lits_.end());
  lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
}

bool Clause::tautological() const {
  for (size_t i = 0; i + 1 < lits_.size(); ++i)
    if (lits_[i].var == lits_[i + 1].var) return true;
  return false;
}

bool Clause::monotone() const {
  for (const Literal& l : lits_)
    if (l.positive) return false;
  return true;
}

bool Clause::eval(const State& s) const {
  for (const Literal& l : lits_)
    if (s.get(l.var) == l.positive) return true;
  return false;
}

bool Clause::contains(const Literal& l) const {
  return std::binary_search(lits_.begin(), lits_.end(), l);
}

bool Clause::subsumes(const Clause& other) const {
  return std::includes(other.lits_.begin(), other.lits_.end(), lits_.begin(), lits_.end());
}

Clause Clause::without(const Literal& l) const {
  std::vector<Literal> out;
  out.reserve(lits_.size());
  for (const Literal& x : lits_)
    if (!(x == l)) out.push_back(x);
  return Clause(std::move(out));
}

bool Cnf::eval(const State& s) const {
  for (const Clause& c : clauses_)
    if (!c.eval(s)) return false;
  return true;
}

bool Cnf::monotone() const {
  for (const Clause& c : clauses_)
    if (!c.monotone()) return false;
  return true;
}

Cnf Cnf::simplified() const {
  std::vector<Clause> kept;
  for (const Clause& c : clauses_) {
    if (c.tautological()) continue;
    bool subsumed = false;
    for (const Clause& k : kept)
      if (k.subsumes(c)) {
        subsumed = true;
        break;
      }
    if (subsumed) continue;
    std::erase_if(kept, [&](const Clause& k) { return c.subsumes(k); });
    kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end());
  return Cnf(std::move(kept));
}

namespace {

Formula make_node(FormulaNode node) { return std::make_shared<const FormulaNode>(std::move(node)); }

const Formula& cached_const(bool value) {
  static const Formula t = make_node({NodeKind::Const, true, 0, false, {}});
  static const Formula f = make_node({NodeKind::Const, false, 0, false, {}});
  return value ? t : f;
}

}  // namespace

Formula f_const(bool value) { return cached_const(value); }
Formula f_true() { return cached_const(true); }
Formula f_false() { return cached_const(false); }

Formula f_var(int var, bool primed) {
  FormulaNode n{NodeKind::Var, false, var, primed, {}};
  return make_node(std::move(n));
}

Formula f_not(Formula f) { return make_node({NodeKind::Not, false, 0, false, {std::move(f)}}); }

Formula f_and(std::vector<Formula> args) {
  return make_node({NodeKind::And, false, 0, false, std::move(args)});
}

Formula f_or(std::vector<Formula> args) {
  return make_node({NodeKind::Or, false, 0, false, std::move(args)});
}

Formula f_and(Formula a, Formula b) { return f_and(std::vector<Formula>{std::move(a), std::move(b)}); }
Formula f_or(Formula a, Formula b) { return f_or(std::vector<Formula>{std::move(a), std::move(b)}); }

Formula f_implies(Formula a, Formula b) {
  return make_node({NodeKind::Implies, false, 0, false, {std::move(a), std::move(b)}});
}

Formula f_iff(Formula a, Formula b) {
  return make_node({NodeKind::Iff, false, 0, false, {std::move(a), std::move(b)}});
}

Formula f_literal(const Literal& l, bool primed) {
  Formula v = f_var(l.var, primed);
  return l.positive ? v : f_not(std::move(v));
}

bool structurally_equal(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::Const:
      return a->value == b->value;
    case NodeKind::Var:
      return a->var == b->var && a->primed == b->primed;
    default:
      break;
  }
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!structurally_equal(a->args[i], b->args[i])) return false;
  return true;
}

bool has_primed_vars(const Formula& f) {
  if (f->kind == NodeKind::Var) return f->primed;
  for (const Formula& a : f->args)
    if (has_primed_vars(a)) return true;
  return false;
}

int max_var(const Formula& f) {
  if (f->kind == NodeKind::Var) return f->var;
  int m = -1;
  for (const Formula& a : f->args) m = std::max(m, max_var(a));
  return m;
}

bool eval(const Formula& f, const State& sigma, const State* sigma_primed) {
  switch (f->kind) {
    case NodeKind::Const:
      return f->value;
    case NodeKind::Var: {
      const State* s = f->primed ? sigma_primed : &sigma;
      if (s == nullptr) throw ContractError("primed variable evaluated without a post-state");
      if (f->var >= s->n) throw ContractError("unbound variable in eval");
      return s->get(f->var);
    }
    case NodeKind::Not:
      return !eval(f->args[0], sigma, sigma_primed);
    case NodeKind::And:
      for (const Formula& a : f->args)
        if (!eval(a, sigma, sigma_primed)) return false;
      return true;
    case NodeKind::Or:
      for (const Formula& a : f->args)
        if (eval(a, sigma, sigma_primed)) return true;
      return false;
    case NodeKind::Implies:
      return !eval(f->args[0], sigma, sigma_primed) || eval(f->args[1], sigma, sigma_primed);
    case NodeKind::Iff:
      return eval(f->args[0], sigma, sigma_primed) == eval(f->args[1], sigma, sigma_primed);
  }
  throw Error("unreachable");
}

bool eval(const Formula& f, const State& sigma, const State& sigma_primed) {
  return eval(f, sigma, &sigma_primed);
}

namespace {

Formula map_prime(const Formula& f, bool to_primed) {
  switch (f->kind) {
    case NodeKind::Const:
      return f;
    case NodeKind::Var:
      if (f->primed == to_primed)
        throw ContractError(to_primed ? "prime: input already primed" : "unprime: input not primed");
      return f_var(f->var, to_primed);
    default: {
      std::vector<Formula> args;
      args.reserve(f->args.size());
      for (const Formula& a : f->args) args.push_back(map_prime(a, to_primed));
      return make_node({f->kind, false, 0, false, std::move(args)});
    }
  }
}

}  // namespace

Formula prime(const Formula& f) { return map_prime(f, true); }
Formula unprime(const Formula& f) { return map_prime(f, false); }

Cnf cube(const State& s) {
  std::vector<Clause> units;
  units.reserve(s.n);
  for (int i = 0; i < s.n; ++i) units.push_back(Clause({Literal{i, s.get(i)}}));
  return Cnf(std::move(units));
}

Formula to_formula(const Clause& c) {
  if (c.empty()) return f_false();
  if (c.size() == 1) return f_literal(c.literals()[0]);
  std::vector<Formula> lits;
  lits.reserve(c.literals().size());
  for (const Literal& l : c.literals()) lits.push_back(f_literal(l));
  return f_or(std::move(lits));
}

Formula to_formula(const Cnf& cnf) {
  if (cnf.size() == 0) return f_true();
  if (cnf.size() == 1) return to_formula(cnf.clauses()[0]);
  std::vector<Formula> cls;
  cls.reserve(cnf.clauses().size());
  for (const Clause& c : cnf.clauses()) cls.push_back(to_formula(c));
  return f_and(std::move(cls));
}

Formula cube_formula(const State& s) {
  std::vector<Formula> lits;
  lits.reserve(s.n);
  for (int i = 0; i < s.n; ++i) lits.push_back(f_literal(Literal{i, s.get(i)}));
  if (lits.size() == 1) return lits[0];
  return f_and(std::move(lits));
}

namespace {

void print_rec(const Formula& f, const Vocabulary& vocab, std::string& out) {
  switch (f->kind) {
    case NodeKind::Const:
      out += f->value ? "(const true)" : "(const false)";
      return;
    case NodeKind::Var:
      out += vocab.name(f->var);
      if (f->primed) out += '\'';
      return;
    case NodeKind::Not:
      out += "(! ";
      print_rec(f->args[0], vocab, out);
      out += ')';
      return;
    case NodeKind::And:
    case NodeKind::Or: {
      if (f->args.empty()) {
        out += f->kind == NodeKind::And ? "(const true)" : "(const false)";
        return;
      }
      out += f->kind == NodeKind::And ? "(&" : "(|";
      for (const Formula& a : f->args) {
        out += ' ';
        print_rec(a, vocab, out);
      }
      out += ')';
      return;
    }
    case NodeKind::Implies:
    case NodeKind::Iff:
      out += f->kind == NodeKind::Implies ? "(-> " : "(<-> ";
      print_rec(f->args[0], vocab, out);
      out += ' ';
      print_rec(f->args[1], vocab, out);
      out += ')';
      return;
  }
}

struct Parser {
  const std::string& text;
  const Vocabulary& vocab;
  bool allow_primed;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  std::string next_token() {
    skip_ws();
    if (pos >= text.size()) throw InputError("unexpected end of formula");
    char c = text[pos];
    if (c == '(' || c == ')') {
      ++pos;
      return std::string(1, c);
    }
    size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')')
      ++pos;
    return text.substr(start, pos - start);
  }

  Formula parse_var(const std::string& tok) {
    bool primed = !tok.empty() && tok.back() == '\'';
    std::string name = primed ? tok.substr(0, tok.size() - 1) : tok;
    auto idx = vocab.index_of(name);
    if (!idx) throw InputError("unknown variable: " + name);
    if (primed && !allow_primed) throw InputError("primed variable not allowed here: " + tok);
    return f_var(*idx, primed);
  }

  Formula parse_expr() {
    std::string tok = next_token();
    if (tok == ")") throw InputError("unexpected ')'");
    if (tok != "(") return parse_var(tok);

    std::string op = next_token();
    if (op == "const") {
      std::string v = next_token();
      if (v != "true" && v != "false") throw InputError("expected true/false after const");
      expect_close();
      return f_const(v == "true");
    }
    std::vector<Formula> args;
    while (true) {
      skip_ws();
      if (pos < text.size() && text[pos] == ')') {
        ++pos;
        break;
      }
      args.push_back(parse_expr());
    }
    if (op == "!") {
      if (args.size() != 1) throw InputError("'!' takes exactly one argument");
      return f_not(std::move(args[0]));
    }
    if (op == "&") return f_and(std::move(args));
    if (op == "|") return f_or(std::move(args));
    if (op == "->" || op == "<->") {
      if (args.size() != 2) throw InputError("'" + op + "' takes exactly two arguments");
      return op == "->" ? f_implies(std::move(args[0]), std::move(args[1]))
                        : f_iff(std::move(args[0]), std::move(args[1]));
    }
    throw InputError("unknown operator: " + op);
  }

  void expect_close() {
    std::string tok = next_token();
    if (tok != ")") throw InputError("expected ')'");
  }
};

}  // namespace

std::string print_formula(const Formula& f, const Vocabulary& vocab) {
  std::string out;
  print_rec(f, vocab, out);
  return out;
}

Formula parse_formula(const std::string& text, const Vocabulary& vocab, bool allow_primed) {
  Parser p{text, vocab, allow_primed};
  Formula f = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) throw InputError("trailing input after formula");
  return f;
}

std::string write_dimacs(const Cnf& cnf, const Vocabulary& vocab) {
  std::ostringstream out;
  out << "p cnf " << vocab.size() << ' ' << cnf.size() << '\n';
  for (const Clause& c : cnf.clauses()) {
    for (const Literal& l : c.literals()) out << (l.positive ? l.var + 1 : -(l.var + 1)) << ' ';
    out << "0\n";
  }
  return out.str();
}

Cnf parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  int nvars = 0, nclauses = 0;
  if (!(in >> tok) || tok != "p") throw InputError("dimacs: expected 'p' header");
  if (!(in >> tok) || tok != "cnf") throw InputError("dimacs: expected 'cnf' header");
  if (!(in >> nvars >> nclauses)) throw InputError("dimacs: malformed header");
  std::vector<Clause> clauses;
  std::vector<Literal> lits;
  long v;
  while (in >> v) {
    if (v == 0) {
      clauses.push_back(Clause(lits));
      lits.clear();
    } else {
      int var = static_cast<int>(v > 0 ? v : -v) - 1;
      if (var >= nvars) throw InputError("dimacs: literal out of range");
      lits.push_back(Literal{var, v > 0});
    }
  }
  if (!lits.empty()) throw InputError("dimacs: clause missing terminating 0");
  if (static_cast<int>(clauses.size()) != nclauses)
    throw InputError("dimacs: clause count mismatch");
  return Cnf(std::move(clauses));
}

}  // namespace invlab
