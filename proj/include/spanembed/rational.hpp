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

#ifndef SPANEMBED_RATIONAL_HPP_
#define SPANEMBED_RATIONAL_HPP_

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "spanembed/errors.hpp"

namespace spanembed {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational with arbitrary-precision integer parts, always normalized
// (gcd 1, denominator > 0). Density results never touch floating point.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}

  Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw SpanError("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  Rational(long long num, long long den) : Rational(BigInt(num), BigInt(den)) {}

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool operator==(const Rational& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const {
    return num_ * o.den_ < o.num_ * den_;
  }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>=(const Rational& o) const { return !(*this < o); }

  std::string str() const { return num_.str() + "/" + den_.str(); }

 private:
  BigInt num_;
  BigInt den_;
};

}  // namespace spanembed

#endif  // SPANEMBED_RATIONAL_HPP_
