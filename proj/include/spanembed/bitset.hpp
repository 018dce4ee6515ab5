// Copyright 2026 The spanembed Authors
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

#ifndef SPANEMBED_BITSET_HPP_
#define SPANEMBED_BITSET_HPP_

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "spanembed/bitkernel.hpp"

namespace spanembed {

// Fixed-size dynamic bitset backed by the runtime-selected bit kernels.
// Invariant: bits at positions >= size() are always zero, so whole-word
// kernels never need tail masking.
class DynBitset {
 public:
  DynBitset() = default;

  explicit DynBitset(std::size_t size)
      : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  std::size_t word_count() const { return words_.size(); }
  const std::uint64_t* data() const { return words_.data(); }

  void set(std::size_t i) {
    assert(i < size_);
    words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }

  void reset(std::size_t i) {
    assert(i < size_);
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }

  bool test(std::size_t i) const {
    assert(i < size_);
    return (words_[i >> 6] >> (i & 63)) & 1;
  }

  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  void set_all() {
    if (size_ == 0) return;
    std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
    mask_tail();
  }

  std::size_t count() const {
    return bitkernel::active_backend().popcount(words_.data(), words_.size());
  }

  bool any() const {
    for (std::uint64_t w : words_)
      if (w != 0) return true;
    return false;
  }

  bool none() const { return !any(); }

  // this &= other
  void and_into(const DynBitset& other) {
    assert(size_ == other.size_);
    bitkernel::active_backend().and_into(words_.data(), other.words_.data(),
                                         words_.size());
  }

  // this |= other
  void or_into(const DynBitset& other) {
    assert(size_ == other.size_);
    bitkernel::active_backend().or_into(words_.data(), other.words_.data(),
                                        words_.size());
  }

  // this &= ~other
  void andnot_into(const DynBitset& other) {
    assert(size_ == other.size_);
    bitkernel::active_backend().andnot_into(words_.data(), other.words_.data(),
                                            words_.size());
  }

  std::size_t intersect_count(const DynBitset& other) const {
    assert(size_ == other.size_);
    return bitkernel::active_backend().and_popcount(
        words_.data(), other.words_.data(), words_.size());
  }

  bool is_subset_of(const DynBitset& other) const {
    assert(size_ == other.size_);
    return bitkernel::active_backend().is_subset(
        words_.data(), other.words_.data(), words_.size());
  }

  bool operator==(const DynBitset& other) const {
    return size_ == other.size_ && words_ == other.words_;
  }

  // Smallest set position, or size() if empty.
  std::size_t first_set() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] != 0)
        return (w << 6) + static_cast<std::size_t>(std::countr_zero(words_[w]));
    }
    return size_;
  }

  // Position of the k-th set bit (0-based among set bits); size() if there
  // are at most k set bits. Used for uniform selection out of a candidate set.
  std::size_t nth_set(std::size_t k) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      auto pop = static_cast<std::size_t>(std::popcount(word));
      if (k >= pop) {
        k -= pop;
        continue;
      }
      while (k > 0) {
        word &= word - 1;
        --k;
      }
      return (w << 6) + static_cast<std::size_t>(std::countr_zero(word));
    }
    return size_;
  }

  template <typename Fn>
  void for_each_set(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word != 0) {
        std::size_t bit = (w << 6) +
                          static_cast<std::size_t>(std::countr_zero(word));
        fn(bit);
        word &= word - 1;
      }
    }
  }

  std::vector<std::size_t> collect() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each_set([&](std::size_t i) { out.push_back(i); });
    return out;
  }

 private:
  void mask_tail() {
    std::size_t rem = size_ & 63;
    if (rem != 0) words_.back() &= (std::uint64_t{1} << rem) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace spanembed

#endif  // SPANEMBED_BITSET_HPP_
