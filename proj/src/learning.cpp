#include "invlab/learning.h"

#include "invlab/generators.h"

namespace invlab {

namespace {

// States the equivalence precondition ranges over: every (y, x) with a
// clear, b set, e clear. With b set, one step reveals phi at every
// valuation: through a' when x is mid-block, through b' at the block end.
Formula equivalence_pre(int k) {
  return f_and({f_not(f_var(2 * k)), f_var(2 * k + 1), f_not(f_var(2 * k + 2))});
}

Formula hypothesis_post_image(int k, uint32_t table, int n) {
  const uint32_t vals = 1u << (2 * k);
  const uint32_t b_bit = 1u << (2 * k + 1);
  auto phi = [&](uint32_t v) { return (table >> v) & 1u; };
  std::vector<Formula> cubes;
  for (uint32_t v = 0; v < vals; ++v) {
    uint32_t post = qbf2_next_state(k, phi, v | b_bit);
    cubes.push_back(cube_formula(State{post, n}));
  }
  return f_or(std::move(cubes));
}

}  // namespace

HalvingResult halving_identify_delta(const OracleHandle& handle, int k, QueryLedger* ledger) {
  if (k < 1 || k > 2) throw ResourceError("halving: k capped at 2");
  const int n = handle.vocab().size();
  if (n != 2 * k + 3) throw ContractError("halving: handle is not a k-iterating system");
  const uint32_t vals = 1u << (2 * k);
  const uint32_t table_count = 1u << vals;

  QueryLedger local;
  QueryLedger& led = ledger ? *ledger : local;

  std::vector<uint32_t> candidates(table_count);
  for (uint32_t t = 0; t < table_count; ++t) candidates[t] = t;

  Formula alpha = equivalence_pre(k);
  HalvingResult result;
  while (true) {
    // Majority vote per valuation (ties count as true).
    uint32_t majority = 0;
    for (uint32_t v = 0; v < vals; ++v) {
      uint64_t ones = 0;
      for (uint32_t t : candidates) ones += (t >> v) & 1u;
      if (2 * ones >= candidates.size()) majority |= 1u << v;
    }

    ++result.equivalence_queries;
    if (handle.hoare(alpha, hypothesis_post_image(k, majority, n), led)) {
      result.truth_table.assign(vals, false);
      for (uint32_t v = 0; v < vals; ++v) result.truth_table[v] = (majority >> v) & 1u;
      result.ledger = led;
      return result;
    }

    Cti cti = handle.extract_cti(alpha, hypothesis_post_image(k, majority, n), led);
    uint32_t v = cti.first.bits & (vals - 1);  // differing valuation, from the pre-state
    bool target_value = !((majority >> v) & 1u);
    ++result.counterexample_rounds;
    std::erase_if(candidates, [&](uint32_t t) {
      return (((t >> v) & 1u) != 0) != target_value;
    });
    if (candidates.empty()) throw Error("halving eliminated every hypothesis");
  }
}

}  // namespace invlab
