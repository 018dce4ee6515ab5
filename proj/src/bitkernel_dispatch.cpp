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

#include "spanembed/bitkernel.hpp"

#include <cstring>

namespace spanembed::bitkernel {

namespace {

const Backend* detect() {
#if defined(__x86_64__) || defined(_M_X64)
  if (cpu_has_avx2()) return &avx2_backend();
#endif
  return &scalar_backend();
}

const Backend*& current() {
  static const Backend* backend = detect();
  return backend;
}

}  // namespace

const Backend& active_backend() { return *current(); }

bool force_backend(const char* name) {
  if (std::strcmp(name, "auto") == 0) {
    current() = detect();
    return true;
  }
  if (std::strcmp(name, "scalar") == 0) {
    current() = &scalar_backend();
    return true;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (std::strcmp(name, "avx2") == 0 && cpu_has_avx2()) {
    current() = &avx2_backend();
    return true;
  }
#endif
  return false;
}

}  // namespace spanembed::bitkernel
