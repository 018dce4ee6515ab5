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

#pragma once

#include <cstddef>
#include <cstdint>

namespace spanembed::bitkernel {

// Word-array kernels behind DynBitset. The candidate search in the embedding
// loop reduces to these: intersect neighborhood rows, count survivors, test
// containment. Scalar versions are the reference semantics; vector backends
// must match them bit for bit (see the equivalence tests).
struct Backend {
  const char* name;
  // dst[i] &= src[i]
  void (*and_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t nwords);
  // dst[i] |= src[i]
  void (*or_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t nwords);
  // dst[i] &= ~src[i]
  void (*andnot_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t nwords);
  std::size_t (*popcount)(const std::uint64_t* a, std::size_t nwords);
  std::size_t (*and_popcount)(const std::uint64_t* a, const std::uint64_t* b,
                              std::size_t nwords);
  // true iff a & ~b == 0, i.e. a is contained in b
  bool (*is_subset)(const std::uint64_t* a, const std::uint64_t* b, std::size_t nwords);
};

const Backend& scalar_backend();

#if defined(__x86_64__) || defined(_M_X64)
const Backend& avx2_backend();
bool cpu_has_avx2();
#endif

// Backend selected at load time from CPU features; force_backend overrides it
// ("scalar", "avx2", "auto"). Returns false if the named backend is
// unavailable on this machine.
const Backend& active_backend();
bool force_backend(const char* name);

}  // namespace spanembed::bitkernel
