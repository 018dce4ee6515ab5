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

#ifndef SPANEMBED_RNG_HPP_
#define SPANEMBED_RNG_HPP_

#include <cassert>
#include <cmath>
#include <cstdint>

namespace spanembed {

// Deterministic random source: xoshiro256** state derived from a
// (seed, stream) pair through a SplitMix64 chain. Identical pairs yield
// identical sequences on every platform, which the reproducibility tests
// rely on. split(tag) derives an independent child source so that phases
// of one run do not perturb each other's draws.
class RandomSource {
 public:
  RandomSource(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed;
    x = splitmix(x + 0x9e3779b97f4a7c15ull * (stream + 1));
    s_[0] = splitmix(x);
    x += 0x9e3779b97f4a7c15ull;
    s_[1] = splitmix(x);
    x += 0x9e3779b97f4a7c15ull;
    s_[2] = splitmix(x);
    x += 0x9e3779b97f4a7c15ull;
    s_[3] = splitmix(x);
    // xoshiro256** must not start at the all-zero state.
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t next() {
    std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, n). Rejection keeps the draw unbiased.
  std::uint64_t below(std::uint64_t n) {
    assert(n > 0);
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return unit() < p;
  }

  // Number of consecutive failures before the next success of a
  // Bernoulli(p) sequence. Used to skip over absent edges when sampling
  // sparse random graphs.
  std::uint64_t geometric_skip(double p) {
    assert(p > 0.0 && p <= 1.0);
    if (p >= 1.0) return 0;
    double u = unit();
    // First draw of unit() can be 0; nudge into (0,1] for the log.
    if (u <= 0.0) u = 0x1.0p-53;
    return static_cast<std::uint64_t>(std::floor(std::log(u) /
                                                 std::log1p(-p)));
  }

  // Derive an independent child stream keyed by tag.
  RandomSource split(std::uint64_t tag) {
    std::uint64_t a = next();
    std::uint64_t b = next();
    return RandomSource(a ^ splitmix(tag + 0x632be59bd9b4e019ull), b);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t s_[4];
};

}  // namespace spanembed

#endif  // SPANEMBED_RNG_HPP_
