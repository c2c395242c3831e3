#include "invlab/step_semantics.h"

namespace invlab {

namespace {

// Iterate subsets of `mask` in increasing numeric order, starting at 0.
inline uint32_t next_submask(uint32_t current, uint32_t mask) {
  return (current - mask) & mask;
}

bool purely_primed(const Formula& f) {
  if (f->kind == NodeKind::Var) return f->primed;
  if (f->kind == NodeKind::Const) return true;
  for (const Formula& a : f->args)
    if (!purely_primed(a)) return false;
  return true;
}

}  // namespace

StepSemantics::StepSemantics(Semantics& sem, const Formula& delta)
    : sem_(&sem),
      n_(sem.vars()),
      pre_constraint_(n_, true),
      post_constraint_(n_, true) {
  std::vector<Formula> conjuncts;
  flatten(delta, conjuncts);
  if (!classify(conjuncts)) {
    generic_ = true;
    pair_models_ = sem_->models_pair(delta);  // throws ResourceError when 2n > 24
  }
  free_mask_ = static_cast<uint32_t>((uint64_t{1} << n_) - 1) & ~determined_mask_;
}

void StepSemantics::flatten(const Formula& f, std::vector<Formula>& out) const {
  if (f->kind == NodeKind::And) {
    for (const Formula& a : f->args) flatten(a, out);
  } else {
    out.push_back(f);
  }
}

bool StepSemantics::classify(const std::vector<Formula>& conjuncts) {
  for (const Formula& c : conjuncts) {
    if (!has_primed_vars(c)) {
      pre_constraint_ &= sem_->models(c);
      continue;
    }
    if (purely_primed(c)) {
      post_constraint_ &= sem_->models(unprime(c));
      continue;
    }
    if (c->kind == NodeKind::Iff) {
      const Formula* lhs = &c->args[0];
      const Formula* rhs = &c->args[1];
      if (rhs->get()->kind == NodeKind::Var && (*rhs)->primed) std::swap(lhs, rhs);
      if ((*lhs)->kind == NodeKind::Var && (*lhs)->primed && !has_primed_vars(*rhs)) {
        int var = (*lhs)->var;
        if ((determined_mask_ >> var) & 1u) return false;  // doubly assigned
        determined_mask_ |= 1u << var;
        assignments_.push_back({var, sem_->models(*rhs)});
        continue;
      }
      return false;
    }
    if (c->kind == NodeKind::Implies && !has_primed_vars(c->args[0]) &&
        structurally_equal(c->args[1], prime(c->args[0]))) {
      if (coupler_phi_) return false;
      coupler_phi_ = sem_->models(c->args[0]);
      continue;
    }
    return false;
  }
  return true;
}

uint32_t StepSemantics::pattern_of(uint32_t s) const {
  uint32_t p = 0;
  for (const Assignment& a : assignments_)
    if (a.fn.test(s)) p |= 1u << a.var;
  return p;
}

bool StepSemantics::can_step(uint32_t s, uint32_t t) const {
  if (generic_) return pair_models_.test((s << n_) | t);
  if (!pre_constraint_.test(s) || !post_constraint_.test(t)) return false;
  if ((t & determined_mask_) != pattern_of(s)) return false;
  if (coupler_phi_ && coupler_phi_->test(s) && !coupler_phi_->test(t)) return false;
  return true;
}

std::optional<StatePair> StepSemantics::find_step(const ModelSet& pre,
                                                  const ModelSet& post) const {
  StatePair found;
  uint64_t seen = enumerate_steps(pre, post, 1, [&](StatePair p) {
    found = p;
    return false;
  });
  if (seen == 0) return std::nullopt;
  return found;
}

uint64_t StepSemantics::enumerate_steps(const ModelSet& pre, const ModelSet& post,
                                        uint64_t limit,
                                        const std::function<bool(StatePair)>& visit) const {
  if (limit == 0) return 0;
  uint64_t seen = 0;

  if (generic_) {
    // Embed pre and post into pair space and scan the conjunction.
    for (auto s = pre.first(); s; s = pre.next(*s + 1)) {
      uint32_t base = *s << n_;
      for (auto t = post.first(); t; t = post.next(*t + 1)) {
        if (!pair_models_.test(base | *t)) continue;
        ++seen;
        if (!visit({*s, *t}) || seen == limit) return seen;
      }
    }
    return seen;
  }

  ModelSet a = pre;
  a &= pre_constraint_;
  ModelSet b_any = post;
  b_any &= post_constraint_;
  std::optional<ModelSet> b_phi;
  if (coupler_phi_) {
    b_phi = b_any;
    *b_phi &= *coupler_phi_;
  }
  // After quantifying the free variables, membership can be tested at the
  // canonical index with free bits cleared.
  ModelSet proj_any = b_any.exists_all(free_mask_);
  std::optional<ModelSet> proj_phi;
  if (coupler_phi_) proj_phi = b_phi->exists_all(free_mask_);

  for (auto s = a.first(); s; s = a.next(*s + 1)) {
    bool in_phi = coupler_phi_ && coupler_phi_->test(*s);
    const ModelSet& proj = in_phi ? *proj_phi : proj_any;
    uint32_t pattern = pattern_of(*s);
    if (!proj.test(pattern)) continue;
    const ModelSet& target = in_phi ? *b_phi : b_any;
    uint32_t sub = 0;
    do {
      uint32_t t = pattern | sub;
      if (target.test(t)) {
        ++seen;
        if (!visit({*s, t}) || seen == limit) return seen;
      }
      sub = next_submask(sub, free_mask_);
    } while (sub != 0);
  }
  return seen;
}

uint64_t StepSemantics::count_steps(const ModelSet& pre, const ModelSet& post) const {
  uint64_t count = 0;
  enumerate_steps(pre, post, ~uint64_t{0}, [&](StatePair) {
    ++count;
    return true;
  });
  return count;
}

StatePair StepSemantics::nth_step(const ModelSet& pre, const ModelSet& post,
                                  uint64_t k) const {
  std::optional<StatePair> out;
  enumerate_steps(pre, post, k + 1, [&](StatePair p) {
    out = p;
    return true;
  });
  if (!out) throw ContractError("nth_step index out of range");
  return *out;
}

ModelSet StepSemantics::post_image(const ModelSet& from) const {
  ModelSet out(n_, false);

  if (generic_) {
    for (auto s = from.first(); s; s = from.next(*s + 1)) {
      uint32_t base = *s << n_;
      for (uint32_t t = 0; t < (uint32_t{1} << n_); ++t)
        if (pair_models_.test(base | t)) out.set(t);
    }
    return out;
  }

  ModelSet src = from;
  src &= pre_constraint_;
  if (assignments_.empty()) {
    // Post-states are tied to pre-states only through the coupler, so the
    // image is computed set-wise.
    if (coupler_phi_) {
      ModelSet in_phi = src;
      in_phi &= *coupler_phi_;
      if (in_phi.any()) {
        ModelSet img = post_constraint_;
        img &= *coupler_phi_;
        out |= img;
      }
      ModelSet out_phi = src;
      out_phi.subtract(*coupler_phi_);
      if (out_phi.any()) out |= post_constraint_;
    } else if (src.any()) {
      out |= post_constraint_;
    }
    return out;
  }

  for (auto s = src.first(); s; s = src.next(*s + 1)) {
    bool in_phi = coupler_phi_ && coupler_phi_->test(*s);
    uint32_t pattern = pattern_of(*s);
    uint32_t sub = 0;
    do {
      uint32_t t = pattern | sub;
      if (post_constraint_.test(t) && (!in_phi || coupler_phi_->test(t))) out.set(t);
      sub = next_submask(sub, free_mask_);
    } while (sub != 0);
  }
  return out;
}

}  // namespace invlab
