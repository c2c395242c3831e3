#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace invlab {

/// A set of states over an n-variable vocabulary, stored as a bitset indexed
/// by the packed state encoding (bit i of the index = variable i). Supports
/// the boolean algebra plus existential quantification over one variable,
/// which is all the semantic layer needs. n is capped at 24 by callers.
class ModelSet {
 public:
  ModelSet() = default;
  ModelSet(int n, bool full);

  int vars() const { return n_; }
  uint64_t universe_size() const { return uint64_t{1} << n_; }
  bool test(uint32_t index) const { return (words_[index >> 6] >> (index & 63)) & 1u; }
  void set(uint32_t index) { words_[index >> 6] |= uint64_t{1} << (index & 63); }
  void reset(uint32_t index) { words_[index >> 6] &= ~(uint64_t{1} << (index & 63)); }

  bool any() const;
  bool none() const { return !any(); }
  uint64_t count() const;
  std::optional<uint32_t> first() const;
  /// First element at or after `from`, if any.
  std::optional<uint32_t> next(uint32_t from) const;

  ModelSet& operator&=(const ModelSet& other);
  ModelSet& operator|=(const ModelSet& other);
  ModelSet& subtract(const ModelSet& other);
  ModelSet complement() const;
  bool subset_of(const ModelSet& other) const;
  bool intersects(const ModelSet& other) const;
  bool operator==(const ModelSet& other) const = default;

  /// Existentially quantify variable `var`: the result contains index i iff
  /// this contains i with var set to 0 or to 1.
  ModelSet exists(int var) const;
  /// Quantify every variable in the mask.
  ModelSet exists_all(uint32_t var_mask) const;

  void for_each(const std::function<void(uint32_t)>& fn) const;

  /// The set of states in which variable `var` is true.
  static ModelSet var_set(int n, int var);

 private:
  int n_ = 0;
  std::vector<uint64_t> words_;

  void mask_tail();
};

inline ModelSet operator&(ModelSet a, const ModelSet& b) { return a &= b; }
inline ModelSet operator|(ModelSet a, const ModelSet& b) { return a |= b; }

}  // namespace invlab
