#pragma once

#include "invlab/semantics.h"

#include <functional>
#include <optional>
#include <utility>

namespace invlab {

using StatePair = std::pair<uint32_t, uint32_t>;  // (pre, post) packed states

/// Exact one-step semantics of a transition relation over Sigma + Sigma'.
///
/// The constructor decomposes a top-level conjunction of delta into
///   - constraints on the pre-state only,
///   - constraints on the post-state only,
///   - assignments v' <-> g(Sigma),
///   - at most one coupler of the shape phi -> phi',
/// which covers every relation this library generates (deterministic
/// counters, input-driven updates, maximal systems, the complete relation).
/// Anything else falls back to enumerating the doubled vocabulary, exact up
/// to 12 variables.
///
/// All searches are deterministic: the least (pre, post) pair in state-index
/// order is found first.
class StepSemantics {
 public:
  StepSemantics(Semantics& sem, const Formula& delta);

  int vars() const { return n_; }
  bool generic() const { return generic_; }

  /// Least (s, t) with s in pre, t in post and (s, t) |= delta, if any.
  std::optional<StatePair> find_step(const ModelSet& pre, const ModelSet& post) const;
  bool can_step(uint32_t s, uint32_t t) const;
  /// Exact image of a state set under one step.
  ModelSet post_image(const ModelSet& from) const;

  /// Number of delta-pairs in pre x post (for teacher strategies).
  uint64_t count_steps(const ModelSet& pre, const ModelSet& post) const;
  /// k-th pair (0-based) in (pre, post) order; k < count_steps.
  StatePair nth_step(const ModelSet& pre, const ModelSet& post, uint64_t k) const;
  /// Visit pairs in order until the visitor returns false or `limit` pairs
  /// were seen. Returns the number visited.
  uint64_t enumerate_steps(const ModelSet& pre, const ModelSet& post, uint64_t limit,
                           const std::function<bool(StatePair)>& visit) const;

 private:
  Semantics* sem_;
  int n_;
  bool generic_ = false;

  // Factored form.
  ModelSet pre_constraint_;
  ModelSet post_constraint_;
  struct Assignment {
    int var;
    ModelSet fn;  // models of g over Sigma
  };
  std::vector<Assignment> assignments_;
  uint32_t determined_mask_ = 0;
  uint32_t free_mask_ = 0;
  std::optional<ModelSet> coupler_phi_;

  // Generic form.
  ModelSet pair_models_;  // pair index = (pre << n) | post

  uint32_t pattern_of(uint32_t s) const;
  void flatten(const Formula& f, std::vector<Formula>& out) const;
  bool classify(const std::vector<Formula>& conjuncts);
};

}  // namespace invlab
