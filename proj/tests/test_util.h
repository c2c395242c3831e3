#pragma once

#include "invlab/generators.h"
#include "invlab/oracles.h"

#include <random>

namespace invlab::test {

inline Vocabulary small_vocab(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back("v" + std::to_string(i));
  return Vocabulary(names);
}

inline State state_of(uint32_t bits, int n) { return State{bits, n}; }

inline State random_state(std::mt19937_64& rng, int n) {
  return State{static_cast<uint32_t>(rng() & ((uint64_t{1} << n) - 1)), n};
}

// Reference satisfiability of alpha /\ delta /\ !beta' by looping over all
// state pairs; the independent oracle the semantic layer is checked against.
inline std::optional<std::pair<State, State>> brute_force_step(const TransitionSystem& ts,
                                                               const Formula& alpha,
                                                               const Formula& beta) {
  const int n = ts.vocab.size();
  const uint32_t count = 1u << n;
  for (uint32_t s = 0; s < count; ++s) {
    State pre{s, n};
    if (!eval(alpha, pre)) continue;
    for (uint32_t t = 0; t < count; ++t) {
      State post{t, n};
      if (eval(beta, post)) continue;
      if (eval(ts.delta, pre, post)) return std::make_pair(pre, post);
    }
  }
  return std::nullopt;
}

}  // namespace invlab::test
