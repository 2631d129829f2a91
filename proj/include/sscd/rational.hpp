// Copyright 2026 The SSCD Workbench Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SSCD_RATIONAL_HPP_
#define SSCD_RATIONAL_HPP_

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace sscd {

// Exact probabilities and time shares. GMP keeps numerators and denominators
// unbounded, so products of long branch-weight chains never overflow.
using Rational = mpq_class;

// a / b in lowest terms. (The two-argument mpq_class constructor does not
// canonicalize, and comparisons on non-canonical values are wrong.)
inline Rational ratio(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

// Parses "p/q" or "p" with optional leading '-'. Anything else (decimal
// points, exponents, whitespace) throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Canonical "p/q" form; integers print as "p/1" so the wire format is uniform.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.get_d(); }

// Smallest integer >= value.
long ceil_int(const Rational& value);
// Largest integer <= value.
long floor_int(const Rational& value);

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace sscd

#endif  // SSCD_RATIONAL_HPP_
