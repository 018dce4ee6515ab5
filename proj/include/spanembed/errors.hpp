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

#ifndef SPANEMBED_ERRORS_HPP_
#define SPANEMBED_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace spanembed {

// Precondition or input violations: the caller asked for something
// meaningless (bad edge list, mismatched sizes, out-of-range ids).
class SpanError : public std::runtime_error {
 public:
  explicit SpanError(const std::string& what) : std::runtime_error(what) {}
};

// Search outcome for the probabilistic machinery. A failed embedding attempt
// is data, not an error: the harness counts failures by phase.
struct Failure {
  // Phase names are stable identifiers used in CSV columns:
  //   decompose, absorber, phase2, matching
  std::string phase;
  std::string detail;
  std::vector<std::size_t> witness;  // optional offending vertex set
};

template <typename T>
class Expected {
 public:
  Expected(T value) : state_(std::move(value)) {}        // NOLINT
  Expected(Failure failure) : state_(std::move(failure)) {}  // NOLINT

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  T& value() { return std::get<T>(state_); }
  const T& value() const { return std::get<T>(state_); }

  Failure& failure() { return std::get<Failure>(state_); }
  const Failure& failure() const { return std::get<Failure>(state_); }

 private:
  std::variant<T, Failure> state_;
};

}  // namespace spanembed

#endif  // SPANEMBED_ERRORS_HPP_
