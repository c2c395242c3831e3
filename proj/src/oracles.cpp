#include "invlab/oracles.h"

#include <random>

namespace invlab {

namespace {

void charge(uint64_t& counter, const std::optional<uint64_t>& cap, const char* what) {
  if (cap && counter >= *cap) throw BudgetExceeded(what);
  ++counter;
}

}  // namespace

void QueryLedger::charge_hoare(bool in_block) {
  if (hoare_cap && hoare_total >= *hoare_cap) throw BudgetExceeded("hoare budget exhausted");
  if (in_block && in_block_cap && hoare_in_block >= *in_block_cap)
    throw BudgetExceeded("block-query budget exhausted");
  ++hoare_total;
  if (in_block) ++hoare_in_block;
}

void QueryLedger::charge_inductiveness() {
  charge(inductiveness_total, inductiveness_cap, "inductiveness budget exhausted");
}

void QueryLedger::charge_bounded_reach() {
  charge(bounded_reach_total, std::nullopt, "");
}

void QueryLedger::charge_interpolation() {
  charge(interpolation_total, interpolation_cap, "interpolation budget exhausted");
}

TeacherStrategy TeacherStrategy::seeded_random(uint64_t seed) {
  TeacherStrategy s;
  s.kind = Kind::SeededRandom;
  s.seed = seed;
  return s;
}

TeacherStrategy TeacherStrategy::max_ambiguity(std::vector<ModelSet> hypotheses, uint64_t seed) {
  TeacherStrategy s;
  s.kind = Kind::MaxAmbiguity;
  s.seed = seed;
  s.hypotheses = std::make_shared<std::vector<ModelSet>>(std::move(hypotheses));
  return s;
}

void OracleHandle::check_extracted(const Cti&, const Formula&, const Formula&) const {}

Cti OracleHandle::extract_cti(const Formula& alpha, const Formula& beta,
                              QueryLedger& ledger) const {
  const int n = vocab_.size();
  // Invariant: alpha_acc /\ delta /\ !(post_acc)' stays satisfiable, where
  // post_acc = beta \/ (negated literals fixed on the post side so far).
  Formula alpha_acc = alpha;
  Formula post_acc = beta;
  State pre{0, n}, post{0, n};

  for (int i = 0; i < n; ++i) {
    Formula with_pos = f_and(alpha_acc, f_var(i));
    if (!hoare(with_pos, post_acc, ledger)) {
      alpha_acc = std::move(with_pos);
      pre.set(i, true);
    } else {
      alpha_acc = f_and(alpha_acc, f_not(f_var(i)));
    }
  }
  for (int i = 0; i < n; ++i) {
    // Fixing p' on the post side strengthens !beta' with p', i.e. weakens
    // the postcondition to post_acc \/ !p.
    Formula try_pos = f_or(post_acc, f_not(f_var(i)));
    if (!hoare(alpha_acc, try_pos, ledger)) {
      post_acc = std::move(try_pos);
      post.set(i, true);
    } else {
      post_acc = f_or(post_acc, f_var(i));
    }
  }
  Cti cti{pre, post};
  check_extracted(cti, alpha, beta);
  return cti;
}

DeltaHandle::DeltaHandle(const TransitionSystem& ts, int max_unroll)
    : OracleHandle(ts.vocab, ts.init, ts.bad), ts_(ts), sem_(ts.vocab), step_(sem_, ts.delta) {
  ts_.validate();
  if (max_unroll > 0) {
    max_unroll_ = max_unroll;
  } else {
    int n = std::min(vocab_.size(), 20);
    max_unroll_ = 4 * (1 << n) + 16;
  }
}

bool DeltaHandle::hoare(const Formula& alpha, const Formula& beta, QueryLedger& ledger,
                        HoareScope scope) const {
  ledger.charge_hoare(scope == HoareScope::Block);
  const ModelSet& a = sem_.models(alpha);
  ModelSet not_b = sem_.models(beta).complement();
  return !step_.find_step(a, not_b).has_value();
}

InductivenessAnswer DeltaHandle::inductiveness(const Formula& alpha,
                                               const TeacherStrategy& strategy,
                                               QueryLedger& ledger) const {
  const ModelSet& a = sem_.models(alpha);
  if (!sem_.models(init_).subset_of(a))
    throw ContractError("inductiveness query requires Init => alpha");
  if (a.intersects(sem_.models(bad_)))
    throw ContractError("inductiveness query requires alpha => !Bad");
  ledger.charge_inductiveness();

  ModelSet not_a = a.complement();
  const int n = vocab_.size();
  auto as_cti = [n](StatePair p) { return Cti{State{p.first, n}, State{p.second, n}}; };

  switch (strategy.kind) {
    case TeacherStrategy::Kind::FirstModel:
      break;
    case TeacherStrategy::Kind::SeededRandom: {
      uint64_t total = step_.count_steps(a, not_a);
      if (total == 0) return {};
      // Derive the per-call stream position from the ledger so that two runs
      // with the same seed see identical counterexample sequences.
      std::mt19937_64 rng(strategy.seed * 0x9e3779b97f4a7c15ULL + ledger.inductiveness_total);
      uint64_t k = rng() % total;
      return {as_cti(step_.nth_step(a, not_a, k))};
    }
    case TeacherStrategy::Kind::MaxAmbiguity: {
      if (!strategy.hypotheses || vocab_.size() > 10) break;  // first-model fallback
      auto& hyps = *strategy.hypotheses;
      std::optional<StatePair> best;
      uint64_t best_surviving = 0;
      step_.enumerate_steps(a, not_a, uint64_t{1} << 16, [&](StatePair p) {
        uint64_t surviving = 0;
        for (const ModelSet& h : hyps)
          if (!(h.test(p.first) && !h.test(p.second))) ++surviving;
        if (!best || surviving > best_surviving) {
          best = p;
          best_surviving = surviving;
        }
        return true;
      });
      if (!best) return {};
      std::erase_if(hyps, [&](const ModelSet& h) {
        return h.test(best->first) && !h.test(best->second);
      });
      return {as_cti(*best)};
    }
  }
  auto p = step_.find_step(a, not_a);
  if (!p) return {};
  return {as_cti(*p)};
}

ModelSet DeltaHandle::image_at(const Formula& alpha, int k) const {
  ModelSet s = sem_.models(alpha);
  for (int i = 0; i < k; ++i) s = step_.post_image(s);
  return s;
}

bool DeltaHandle::bounded_reach(const Formula& alpha, const Formula& beta, int k,
                                QueryLedger& ledger) const {
  if (k < 0 || k > max_unroll_) throw ContractError("bounded_reach: depth out of range");
  ledger.charge_bounded_reach();
  return image_at(alpha, k).subset_of(sem_.models(beta));
}

std::optional<Formula> DeltaHandle::interpolant(const Formula& alpha, const Formula& beta,
                                                int k1, int k2, QueryLedger& ledger) const {
  if (k1 < 0 || k2 < 0 || k1 + k2 > max_unroll_)
    throw ContractError("interpolant: depth out of range");
  ledger.charge_interpolation();
  ModelSet s = sem_.models(alpha);
  ModelSet at_k1(vocab_.size(), false);
  for (int i = 0; i <= k1 + k2; ++i) {
    if (i == k1) at_k1 = s;
    if (i < k1 + k2) s = step_.post_image(s);
  }
  if (!s.subset_of(sem_.models(beta))) return std::nullopt;
  return sem_.set_to_formula(at_k1);
}

void DeltaHandle::check_extracted(const Cti& cti, const Formula& alpha,
                                  const Formula& beta) const {
  if (!eval(alpha, cti.first) || eval(beta, cti.second) ||
      !step_.can_step(cti.first.bits, cti.second.bits))
    throw ContractError("extract_cti called on a valid Hoare triple");
}

bool membership_via_hoare(const OracleHandle& handle, const State& sigma, QueryLedger& ledger) {
  if (eval(handle.init(), sigma)) return true;
  return !handle.hoare(handle.init(), f_not(cube_formula(sigma)), ledger);
}

EquivalenceAnswer equivalence_via_inductiveness(const OracleHandle& handle, const Formula& theta,
                                                const TeacherStrategy& strategy,
                                                QueryLedger& ledger) {
  Semantics sem(handle.vocab());
  const ModelSet& t = sem.models(theta);
  if (!sem.models(handle.init()).subset_of(t) || t.intersects(sem.models(handle.bad())))
    throw ContractError("equivalence query requires Init => theta => !Bad");

  InductivenessAnswer ans = handle.inductiveness(theta, strategy, ledger);
  if (ans.inductive()) return {true, std::nullopt, false};

  // A maximal system has a unique invariant, so theta is wrong; membership
  // on the pre-state tells which side of the difference we saw.
  const auto& [pre, post] = *ans.cex;
  if (!membership_via_hoare(handle, pre, ledger))
    return {false, pre, false};  // pre |= theta, pre not in the invariant
  return {false, post, true};    // post in the invariant, post not in theta
}

}  // namespace invlab
