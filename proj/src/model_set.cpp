#include "invlab/model_set.h"

#include <bit>
#include <cassert>

namespace invlab {

namespace {

uint64_t low_half_pattern(int stride) {
  // Bits whose index has bit log2(stride) clear, e.g. stride=1 -> 0x5555...
  uint64_t block = (uint64_t{1} << stride) - 1;  // stride ones (stride < 64)
  uint64_t pattern = 0;
  for (int shift = 0; shift < 64; shift += 2 * stride) pattern |= block << shift;
  return pattern;
}

}  // namespace

ModelSet::ModelSet(int n, bool full) : n_(n) {
  size_t nwords = (universe_size() + 63) / 64;
  words_.assign(nwords, full ? ~uint64_t{0} : 0);
  if (full) mask_tail();
}

void ModelSet::mask_tail() {
  if (n_ < 6) words_[0] &= (uint64_t{1} << universe_size()) - 1;
}

bool ModelSet::any() const {
  for (uint64_t w : words_)
    if (w) return true;
  return false;
}

uint64_t ModelSet::count() const {
  uint64_t c = 0;
  for (uint64_t w : words_) c += std::popcount(w);
  return c;
}

std::optional<uint32_t> ModelSet::first() const { return next(0); }

std::optional<uint32_t> ModelSet::next(uint32_t from) const {
  if (from >= universe_size()) return std::nullopt;
  size_t wi = from >> 6;
  uint64_t w = words_[wi] & (~uint64_t{0} << (from & 63));
  while (true) {
    if (w) return static_cast<uint32_t>((wi << 6) + std::countr_zero(w));
    if (++wi >= words_.size()) return std::nullopt;
    w = words_[wi];
  }
}

ModelSet& ModelSet::operator&=(const ModelSet& other) {
  assert(n_ == other.n_);
  for (size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

ModelSet& ModelSet::operator|=(const ModelSet& other) {
  assert(n_ == other.n_);
  for (size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

ModelSet& ModelSet::subtract(const ModelSet& other) {
  assert(n_ == other.n_);
  for (size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

ModelSet ModelSet::complement() const {
  ModelSet out(n_, true);
  for (size_t i = 0; i < words_.size(); ++i) out.words_[i] &= ~words_[i];
  return out;
}

bool ModelSet::subset_of(const ModelSet& other) const {
  assert(n_ == other.n_);
  for (size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~other.words_[i]) return false;
  return true;
}

bool ModelSet::intersects(const ModelSet& other) const {
  assert(n_ == other.n_);
  for (size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & other.words_[i]) return true;
  return false;
}

ModelSet ModelSet::exists(int var) const {
  ModelSet out = *this;
  if (var < 6) {
    int stride = 1 << var;
    uint64_t lo = low_half_pattern(stride);
    for (uint64_t& w : out.words_) w = w | ((w & ~lo) >> stride) | ((w & lo) << stride);
  } else {
    size_t wstride = size_t{1} << (var - 6);
    for (size_t i = 0; i < out.words_.size(); ++i) {
      if (i & wstride) continue;
      uint64_t merged = out.words_[i] | out.words_[i + wstride];
      out.words_[i] = merged;
      out.words_[i + wstride] = merged;
    }
  }
  return out;
}

ModelSet ModelSet::exists_all(uint32_t var_mask) const {
  ModelSet out = *this;
  for (int v = 0; v < n_; ++v)
    if ((var_mask >> v) & 1u) out = out.exists(v);
  return out;
}

void ModelSet::for_each(const std::function<void(uint32_t)>& fn) const {
  for (size_t wi = 0; wi < words_.size(); ++wi) {
    uint64_t w = words_[wi];
    while (w) {
      int bit = std::countr_zero(w);
      fn(static_cast<uint32_t>((wi << 6) + bit));
      w &= w - 1;
    }
  }
}

ModelSet ModelSet::var_set(int n, int var) {
  ModelSet out(n, false);
  if (var < 6) {
    uint64_t pattern = ~low_half_pattern(1 << var);
    for (uint64_t& w : out.words_) w = pattern;
    out.mask_tail();
  } else {
    size_t wstride = size_t{1} << (var - 6);
    for (size_t i = 0; i < out.words_.size(); ++i)
      if (i & wstride) out.words_[i] = ~uint64_t{0};
  }
  return out;
}

}  // namespace invlab
