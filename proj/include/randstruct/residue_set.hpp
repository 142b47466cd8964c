// Copyright 2026 The randstruct Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "randstruct/fourier.hpp"

namespace randstruct {

/// A subset of Z_N stored as a packed bitset of N bits.
class ResidueSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kBits = 64;

  ResidueSet() = default;
  explicit ResidueSet(std::size_t modulus)
      : modulus_(modulus), words_((modulus + kBits - 1) / kBits, 0) {
    if (modulus == 0) throw std::invalid_argument("ResidueSet: modulus must be at least 1");
  }

  /// Elements are reduced mod N.
  static ResidueSet from_elements(std::size_t modulus, std::span<const std::size_t> elements) {
    ResidueSet s(modulus);
    for (std::size_t x : elements) s.insert(x);
    return s;
  }
  static ResidueSet from_elements(std::size_t modulus, std::initializer_list<std::size_t> elements) {
    ResidueSet s(modulus);
    for (std::size_t x : elements) s.insert(x);
    return s;
  }
  static ResidueSet full(std::size_t modulus) {
    ResidueSet s(modulus);
    for (auto& w : s.words_) w = ~Word{0};
    s.trim();
    return s;
  }
  /// Support of f, i.e. {x : f(x) != 0}.
  template <ZnReal Fn>
  static ResidueSet support(const Fn& f, double threshold = 0.0) {
    ResidueSet s(f.modulus());
    for (std::size_t x = 0; x < f.modulus(); ++x) {
      if (std::abs(f[x]) > threshold) s.insert(x);
    }
    return s;
  }

  std::size_t modulus() const noexcept { return modulus_; }
  std::span<const Word> words() const noexcept { return words_; }

  void insert(std::size_t x) {
    x %= modulus_;
    words_[x / kBits] |= Word{1} << (x % kBits);
  }
  void erase(std::size_t x) {
    x %= modulus_;
    words_[x / kBits] &= ~(Word{1} << (x % kBits));
  }
  bool contains(std::size_t x) const {
    x %= modulus_;
    return (words_[x / kBits] >> (x % kBits)) & 1U;
  }

  std::size_t size() const {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const {
    for (Word w : words_) {
      if (w != 0) return false;
    }
    return true;
  }

  /// Sorted element list.
  std::vector<std::size_t> elements() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
      Word w = words_[i];
      while (w != 0) {
        out.push_back(i * kBits + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  /// Returns {x + shift : x in this}.
  ResidueSet rotated(std::size_t shift) const {
    shift %= modulus_;
    ResidueSet out(modulus_);
    if (shift == 0) {
      out.words_ = words_;
      return out;
    }
    // out[p] = this[p - shift] for p >= shift, this[p - shift + N] otherwise.
    for (std::size_t w = 0; w < out.words_.size(); ++w) {
      const std::size_t lo = w * kBits;
      const std::size_t hi = std::min(lo + kBits, modulus_);
      std::size_t p = lo;
      while (p < hi) {
        std::size_t seg_end = hi;
        std::size_t src;
        if (p < shift) {
          seg_end = std::min(hi, shift);
          src = p - shift + modulus_;
        } else {
          src = p - shift;
        }
        const std::size_t len = seg_end - p;
        out.words_[w] |= extract(src, len) << (p - lo);
        p = seg_end;
      }
    }
    return out;
  }

  ResidueSet& operator&=(const ResidueSet& o) {
    detail::require_same_modulus(modulus_, o.modulus_, "ResidueSet &");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  ResidueSet& operator|=(const ResidueSet& o) {
    detail::require_same_modulus(modulus_, o.modulus_, "ResidueSet |");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  friend ResidueSet operator&(ResidueSet a, const ResidueSet& b) { return a &= b; }
  friend ResidueSet operator|(ResidueSet a, const ResidueSet& b) { return a |= b; }

  /// |this AND other| without materializing the intersection.
  std::size_t intersection_size(const ResidueSet& o) const {
    detail::require_same_modulus(modulus_, o.modulus_, "ResidueSet intersection");
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    }
    return c;
  }
  bool is_subset_of(const ResidueSet& o) const {
    detail::require_same_modulus(modulus_, o.modulus_, "ResidueSet subset");
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    }
    return true;
  }

  /// 0/1 indicator as a density function.
  DensityFunction indicator(double scale = 1.0) const {
    std::vector<double> v(modulus_, 0.0);
    for (std::size_t x : elements()) v[x] = scale;
    return DensityFunction(std::move(v));
  }

  friend bool operator==(const ResidueSet& a, const ResidueSet& b) {
    return a.modulus_ == b.modulus_ && a.words_ == b.words_;
  }

 private:
  // Bits [start, start + len) as the low bits of a word; requires
  // start + len <= N and len <= 64.
  Word extract(std::size_t start, std::size_t len) const {
    const std::size_t wi = start / kBits;
    const std::size_t off = start % kBits;
    Word v = words_[wi] >> off;
    if (off != 0 && wi + 1 < words_.size()) v |= words_[wi + 1] << (kBits - off);
    if (len < kBits) v &= (Word{1} << len) - 1;
    return v;
  }

  void trim() {
    const std::size_t tail = modulus_ % kBits;
    if (tail != 0) words_.back() &= (Word{1} << tail) - 1;
  }

  std::size_t modulus_ = 0;
  std::vector<Word> words_;
};

}  // namespace randstruct
