// Copyright 2026 The twoprice Authors
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

#ifndef TWOPRICE_RATIONAL_HPP_
#define TWOPRICE_RATIONAL_HPP_

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twoprice/error.hpp"

namespace twoprice {

// Exact arbitrary-precision rational. Every price, value and discrepancy in
// the library is one of these; floating point only appears in --approx output.
using Rational = mpq_class;

inline Rational MakeRational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) Fail(ErrorCode::kMalformedInput, "zero denominator");
  Rational r(mpz_class(std::to_string(num), 10), mpz_class(std::to_string(den), 10));
  r.canonicalize();
  return r;
}

// Accepts "7", "-3", "3/2" and "0.9". Exponent notation is rejected.
inline Rational ParseRational(std::string_view text) {
  auto bad = [&]() -> Rational {
    Fail(ErrorCode::kMalformedInput,
         "not a rational literal: '" + std::string(text) + "'");
  };
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) return bad();

  auto all_digits = [](std::string_view d, bool allow_sign) {
    if (d.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (d[0] == '-' || d[0] == '+')) i = 1;
    if (i == d.size()) return false;
    for (; i < d.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(d[i]))) return false;
    }
    return true;
  };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num, true) || !all_digits(den, false)) return bad();
    if (num[0] == '+') num.erase(0, 1);
    mpz_class d(den, 10);
    if (d == 0) return bad();
    Rational r(mpz_class(num, 10), d);
    r.canonicalize();
    return r;
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (!whole.empty() && (whole[0] == '-' || whole[0] == '+')) {
      whole.erase(0, 1);
    }
    if (whole.empty()) whole = "0";
    if (!all_digits(whole, false) || (!frac.empty() && !all_digits(frac, false))) {
      return bad();
    }
    mpz_class scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    mpz_class num(whole + frac, 10);
    Rational r(negative ? mpz_class(-num) : num, scale);
    r.canonicalize();
    return r;
  }
  if (!all_digits(s, true)) return bad();
  if (s[0] == '+') s.erase(0, 1);
  return Rational(mpz_class(s, 10));
}

// "p/q" in lowest terms, or the bare integer when q = 1.
inline std::string ToString(const Rational& r) { return r.get_str(); }

inline double ToDouble(const Rational& r) { return r.get_d(); }

inline mpz_class Floor(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Rational Sum(std::span<const Rational> xs) {
  Rational total = 0;
  for (const Rational& x : xs) total += x;
  return total;
}

inline std::vector<std::string> ToStrings(std::span<const Rational> xs) {
  std::vector<std::string> out;
  out.reserve(xs.size());
  for (const Rational& x : xs) out.push_back(ToString(x));
  return out;
}

}  // namespace twoprice

#endif  // TWOPRICE_RATIONAL_HPP_
