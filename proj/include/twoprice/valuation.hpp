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

#ifndef TWOPRICE_VALUATION_HPP_
#define TWOPRICE_VALUATION_HPP_

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twoprice/error.hpp"
#include "twoprice/lp.hpp"
#include "twoprice/rational.hpp"

namespace twoprice {

// Set of items as a bitmask; item j is bit j.
using Bundle = std::uint32_t;

inline int Size(Bundle b) { return std::popcount(b); }
inline Bundle FullBundle(std::size_t m) {
  return m >= 32 ? ~Bundle{0} : (Bundle{1} << m) - 1;
}
inline bool Contains(Bundle b, std::size_t j) { return (b >> j) & 1u; }

// Valuation over m identical items: v(k) for k = 0..m.
class SymmetricValuation {
 public:
  SymmetricValuation() = default;

  explicit SymmetricValuation(std::vector<Rational> values)
      : values_(std::move(values)) {
    if (values_.size() < 2) {
      Fail(ErrorCode::kInvalidValuation, "need m >= 1 (at least two values)");
    }
    if (values_[0] != 0) {
      Fail(ErrorCode::kInvalidValuation,
           "v(0) must be 0, got " + ToString(values_[0]));
    }
    for (std::size_t k = 0; k + 1 < values_.size(); ++k) {
      if (values_[k] > values_[k + 1]) {
        Fail(ErrorCode::kInvalidValuation,
             "not monotone: v(" + std::to_string(k) + ") = " +
                 ToString(values_[k]) + " > v(" + std::to_string(k + 1) +
                 ") = " + ToString(values_[k + 1]));
      }
    }
  }

  static SymmetricValuation FromInts(const std::vector<std::int64_t>& values) {
    std::vector<Rational> r;
    r.reserve(values.size());
    for (std::int64_t x : values) r.push_back(MakeRational(x));
    return SymmetricValuation(std::move(r));
  }

  std::size_t m() const { return values_.size() - 1; }
  const Rational& operator()(std::size_t k) const { return values_.at(k); }
  const std::vector<Rational>& values() const { return values_; }

  friend bool operator==(const SymmetricValuation& a,
                         const SymmetricValuation& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<Rational> values_;
};

// Valuation over m heterogeneous items as a table over all 2^m bundles.
class GeneralValuation {
 public:
  GeneralValuation() = default;

  GeneralValuation(std::size_t m, std::vector<Rational> table)
      : m_(m), table_(std::move(table)) {
    RequireGeneralSize(m_, "GeneralValuation");
    if (m_ == 0) Fail(ErrorCode::kInvalidValuation, "need m >= 1");
    if (table_.size() != (std::size_t{1} << m_)) {
      Fail(ErrorCode::kInvalidValuation,
           "table has " + std::to_string(table_.size()) + " entries, need 2^" +
               std::to_string(m_));
    }
    if (table_[0] != 0) {
      Fail(ErrorCode::kInvalidValuation, "v(empty) must be 0");
    }
    for (Bundle s = 1; s < table_.size(); ++s) {
      for (std::size_t j = 0; j < m_; ++j) {
        if (Contains(s, j) && table_[s & ~(Bundle{1} << j)] > table_[s]) {
          Fail(ErrorCode::kInvalidValuation,
               "not monotone at bundle " + std::to_string(s) + " without item " +
                   std::to_string(j));
        }
      }
    }
  }

  std::size_t m() const { return m_; }
  const Rational& operator()(Bundle s) const { return table_.at(s); }
  const std::vector<Rational>& table() const { return table_; }

 private:
  std::size_t m_ = 0;
  std::vector<Rational> table_;
};

inline GeneralValuation SymmetricToGeneral(const SymmetricValuation& v) {
  RequireGeneralSize(v.m(), "symmetric_to_general");
  std::vector<Rational> table(std::size_t{1} << v.m());
  for (Bundle s = 0; s < table.size(); ++s) table[s] = v(Size(s));
  return GeneralValuation(v.m(), std::move(table));
}

inline GeneralValuation AdditiveGeneral(const std::vector<Rational>& weights) {
  const std::size_t m = weights.size();
  RequireGeneralSize(m, "additive valuation");
  std::vector<Rational> table(std::size_t{1} << m);
  for (Bundle s = 1; s < table.size(); ++s) {
    const std::size_t j = std::countr_zero(s);
    table[s] = table[s & (s - 1)] + weights[j];
  }
  return GeneralValuation(m, std::move(table));
}

// n buyers over the same m items, all symmetric or all general.
class ValuationProfile {
 public:
  ValuationProfile() = default;

  explicit ValuationProfile(std::vector<SymmetricValuation> buyers)
      : symmetric_(std::move(buyers)) {
    if (symmetric_.empty()) {
      Fail(ErrorCode::kInvalidValuation, "profile needs at least one buyer");
    }
    m_ = symmetric_[0].m();
    for (const auto& v : symmetric_) {
      if (v.m() != m_) {
        Fail(ErrorCode::kDimensionMismatch, "buyers disagree on m");
      }
    }
  }

  explicit ValuationProfile(std::vector<GeneralValuation> buyers)
      : general_(std::move(buyers)) {
    if (general_.empty()) {
      Fail(ErrorCode::kInvalidValuation, "profile needs at least one buyer");
    }
    m_ = general_[0].m();
    for (const auto& v : general_) {
      if (v.m() != m_) {
        Fail(ErrorCode::kDimensionMismatch, "buyers disagree on m");
      }
    }
  }

  static ValuationProfile Identical(const SymmetricValuation& v, std::size_t n) {
    return ValuationProfile(std::vector<SymmetricValuation>(n, v));
  }

  std::size_t m() const { return m_; }
  std::size_t n() const {
    return is_symmetric() ? symmetric_.size() : general_.size();
  }
  bool is_symmetric() const { return !symmetric_.empty(); }

  const SymmetricValuation& symmetric(std::size_t i) const {
    if (!is_symmetric()) {
      Fail(ErrorCode::kUnsupportedClass, "profile is not symmetric");
    }
    return symmetric_.at(i);
  }
  const std::vector<SymmetricValuation>& symmetric_buyers() const {
    return symmetric_;
  }
  const GeneralValuation& general(std::size_t i) const {
    if (is_symmetric()) {
      Fail(ErrorCode::kUnsupportedClass, "profile is symmetric");
    }
    return general_.at(i);
  }

  Rational Value(std::size_t i, Bundle s) const {
    if (is_symmetric()) return symmetric_.at(i)(Size(s));
    return general_.at(i)(s);
  }
  Rational ValueOfCount(std::size_t i, std::size_t k) const {
    return symmetric(i)(k);
  }
  Rational FullValue(std::size_t i) const {
    if (is_symmetric()) return symmetric_.at(i)(m_);
    return general_.at(i)(FullBundle(m_));
  }

  bool AllIdentical() const {
    if (!is_symmetric()) return false;
    for (const auto& v : symmetric_) {
      if (!(v == symmetric_[0])) return false;
    }
    return true;
  }

  ValuationProfile ToGeneral() const {
    if (!is_symmetric()) return *this;
    std::vector<GeneralValuation> out;
    out.reserve(symmetric_.size());
    for (const auto& v : symmetric_) out.push_back(SymmetricToGeneral(v));
    return ValuationProfile(std::move(out));
  }

 private:
  std::size_t m_ = 0;
  std::vector<SymmetricValuation> symmetric_;
  std::vector<GeneralValuation> general_;
};

enum class ValuationClass {
  kUnitDemand,
  kAdditive,
  kSubmodular,
  kXOS,
  kSubadditive,
  kGeneral,
};

inline std::string_view ClassName(ValuationClass c) {
  switch (c) {
    case ValuationClass::kUnitDemand: return "UnitDemand";
    case ValuationClass::kAdditive: return "Additive";
    case ValuationClass::kSubmodular: return "Submodular";
    case ValuationClass::kXOS: return "XOS";
    case ValuationClass::kSubadditive: return "Subadditive";
    case ValuationClass::kGeneral: return "General";
  }
  return "Unknown";
}

inline std::optional<ValuationClass> ParseClass(std::string_view name) {
  for (auto c : {ValuationClass::kUnitDemand, ValuationClass::kAdditive,
                 ValuationClass::kSubmodular, ValuationClass::kXOS,
                 ValuationClass::kSubadditive, ValuationClass::kGeneral}) {
    if (ClassName(c) == name) return c;
  }
  return std::nullopt;
}

using ClassSet = std::set<ValuationClass>;

inline bool IsSubadditive(const SymmetricValuation& v) {
  const std::size_t m = v.m();
  for (std::size_t k = 1; k <= m; ++k) {
    for (std::size_t t = k; k + t <= m; ++t) {
      if (v(k) + v(t) < v(k + t)) return false;
    }
  }
  return true;
}

inline bool IsSubmodular(const SymmetricValuation& v) {
  for (std::size_t k = 1; k < v.m(); ++k) {
    if (v(k + 1) - v(k) > v(k) - v(k - 1)) return false;
  }
  return true;
}

// v(k)/k non-increasing, i.e. v(k) >= (k/t) v(t) for 0 < k < t.
inline bool IsXOS(const SymmetricValuation& v) {
  for (std::size_t k = 1; k < v.m(); ++k) {
    if (v(k) * static_cast<unsigned long>(k + 1) <
        v(k + 1) * static_cast<unsigned long>(k)) {
      return false;
    }
  }
  return true;
}

// General is reported only when no narrower class holds.
inline ClassSet ClassifySymmetric(const SymmetricValuation& v) {
  ClassSet out;
  const std::size_t m = v.m();
  bool unit = true;
  bool additive = true;
  for (std::size_t k = 1; k <= m; ++k) {
    if (v(k) != v(1)) unit = false;
    if (v(k) != v(1) * static_cast<unsigned long>(k)) additive = false;
  }
  if (unit) out.insert(ValuationClass::kUnitDemand);
  if (additive) out.insert(ValuationClass::kAdditive);
  if (IsSubmodular(v)) out.insert(ValuationClass::kSubmodular);
  if (IsXOS(v)) out.insert(ValuationClass::kXOS);
  if (IsSubadditive(v)) out.insert(ValuationClass::kSubadditive);
  if (out.empty()) out.insert(ValuationClass::kGeneral);
  return out;
}

inline bool IsSubadditive(const GeneralValuation& v) {
  const Bundle full = FullBundle(v.m());
  for (Bundle s = 1; s <= full; ++s) {
    const Bundle rest = full & ~s;
    for (Bundle t = rest; t != 0; t = (t - 1) & rest) {
      if (t < s) continue;
      if (v(s) + v(t) < v(s | t)) return false;
    }
  }
  return true;
}

inline bool IsSubmodular(const GeneralValuation& v) {
  const std::size_t m = v.m();
  const Bundle full = FullBundle(m);
  for (Bundle s = 0; s <= full; ++s) {
    for (std::size_t j = 0; j < m; ++j) {
      if (Contains(s, j)) continue;
      for (std::size_t k = j + 1; k < m; ++k) {
        if (Contains(s, k)) continue;
        const Bundle sj = s | (Bundle{1} << j);
        const Bundle sk = s | (Bundle{1} << k);
        if (v(sj) + v(sk) < v(sj | sk) + v(s)) return false;
      }
    }
  }
  return true;
}

// Largest additive clause a >= 0 on the items of S with a(T) <= v(T) for all
// T within S. v is XOS at S iff the optimum equals v(S); the optimizer is then
// a supporting price vector for S.
inline lp::Result SupportingClauseLP(const GeneralValuation& v, Bundle s) {
  std::vector<std::size_t> items;
  for (std::size_t j = 0; j < v.m(); ++j) {
    if (Contains(s, j)) items.push_back(j);
  }
  const std::size_t k = items.size();
  std::vector<Rational> objective(k, Rational(1));
  std::vector<lp::Constraint> rows;
  for (std::size_t a = 0; a < k; ++a) {
    lp::Constraint c;
    c.coeffs.assign(k, Rational(0));
    c.coeffs[a] = 1;
    c.rhs = v(Bundle{1} << items[a]);
    rows.push_back(std::move(c));
  }
  auto separate = [&](const std::vector<Rational>& x)
      -> std::optional<lp::Constraint> {
    std::optional<Bundle> worst_local;
    Rational worst_gap = 0;
    const Bundle local_full = FullBundle(k);
    for (Bundle t = 1; t <= local_full; ++t) {
      Bundle global = 0;
      Rational price = 0;
      for (std::size_t a = 0; a < k; ++a) {
        if (Contains(t, a)) {
          global |= Bundle{1} << items[a];
          price += x[a];
        }
      }
      Rational gap = price - v(global);
      if (gap > worst_gap) {
        worst_gap = gap;
        worst_local = t;
      }
    }
    if (!worst_local) return std::nullopt;
    lp::Constraint c;
    c.coeffs.assign(k, Rational(0));
    Bundle global = 0;
    for (std::size_t a = 0; a < k; ++a) {
      if (Contains(*worst_local, a)) {
        c.coeffs[a] = 1;
        global |= Bundle{1} << items[a];
      }
    }
    c.rhs = v(global);
    return c;
  };
  return lp::MaximizeLazily(objective, std::move(rows), separate);
}

// Per-item supporting prices for S (zero outside S), or nullopt when v has no
// additive clause touching it at S.
inline std::optional<std::vector<Rational>> SupportingPrices(
    const GeneralValuation& v, Bundle s) {
  std::vector<Rational> prices(v.m(), Rational(0));
  if (s == 0) return prices;
  lp::Result r = SupportingClauseLP(v, s);
  if (r.status != lp::Status::kOptimal || r.objective != v(s)) {
    return std::nullopt;
  }
  std::size_t a = 0;
  for (std::size_t j = 0; j < v.m(); ++j) {
    if (Contains(s, j)) prices[j] = r.x[a++];
  }
  return prices;
}

inline bool IsXOS(const GeneralValuation& v) {
  if (IsSubmodular(v)) return true;
  if (!IsSubadditive(v)) return false;
  for (Bundle s = 1; s <= FullBundle(v.m()); ++s) {
    if (!SupportingPrices(v, s)) return false;
  }
  return true;
}

inline ClassSet ClassifyGeneral(const GeneralValuation& v) {
  RequireGeneralSize(v.m(), "classify_general");
  ClassSet out;
  const std::size_t m = v.m();
  bool unit = true;
  bool additive = true;
  for (Bundle s = 1; s <= FullBundle(m); ++s) {
    Rational best = 0;
    Rational sum = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (!Contains(s, j)) continue;
      const Rational& single = v(Bundle{1} << j);
      if (single > best) best = single;
      sum += single;
    }
    if (v(s) != best) unit = false;
    if (v(s) != sum) additive = false;
  }
  if (unit) out.insert(ValuationClass::kUnitDemand);
  if (additive) out.insert(ValuationClass::kAdditive);
  const bool submodular = IsSubmodular(v);
  if (submodular) out.insert(ValuationClass::kSubmodular);
  const bool subadditive = submodular || IsSubadditive(v);
  if (subadditive) out.insert(ValuationClass::kSubadditive);
  if (submodular) {
    out.insert(ValuationClass::kXOS);
  } else if (subadditive) {
    bool xos = true;
    for (Bundle s = 1; s <= FullBundle(m) && xos; ++s) {
      xos = SupportingPrices(v, s).has_value();
    }
    if (xos) out.insert(ValuationClass::kXOS);
  }
  if (out.empty()) out.insert(ValuationClass::kGeneral);
  return out;
}

namespace internal {

// Uniform draw in [lo, hi] by modulo reduction. Fixed arithmetic so a seed
// produces the same valuation with every standard library.
inline std::int64_t Draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(rng() % span);
}

}  // namespace internal

inline SymmetricValuation RandomSymmetric(std::size_t m, ValuationClass cls,
                                          std::uint64_t seed) {
  if (m == 0) Fail(ErrorCode::kInvalidValuation, "need m >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> v(m + 1, 0);
  switch (cls) {
    case ValuationClass::kAdditive: {
      const std::int64_t a = internal::Draw(rng, 1, 10);
      for (std::size_t k = 1; k <= m; ++k) v[k] = a * static_cast<std::int64_t>(k);
      break;
    }
    case ValuationClass::kSubmodular: {
      std::vector<std::int64_t> marginals(m);
      for (auto& d : marginals) d = internal::Draw(rng, 0, 10);
      marginals[0] = std::max<std::int64_t>(marginals[0], 1);
      std::sort(marginals.begin(), marginals.end(), std::greater<>());
      for (std::size_t k = 1; k <= m; ++k) v[k] = v[k - 1] + marginals[k - 1];
      break;
    }
    case ValuationClass::kXOS: {
      v[1] = internal::Draw(rng, 10, 100);
      for (std::size_t k = 2; k <= m; ++k) {
        const std::int64_t cap = v[k - 1] / static_cast<std::int64_t>(k - 1);
        v[k] = v[k - 1] + internal::Draw(rng, 0, cap);
      }
      break;
    }
    case ValuationClass::kSubadditive: {
      for (std::size_t k = 1; k <= m; ++k) {
        const bool step = k == 1 || internal::Draw(rng, 0, 9) >= 6;
        v[k] = v[k - 1] + (step ? internal::Draw(rng, 1, 10) : 0);
      }
      // Subadditive lower envelope; one increasing pass reaches the fixpoint
      // because v(s) and v(k - s) are final when k is visited.
      for (std::size_t k = 2; k <= m; ++k) {
        for (std::size_t s = 1; s < k; ++s) v[k] = std::min(v[k], v[s] + v[k - s]);
      }
      break;
    }
    default:
      Fail(ErrorCode::kUnsupportedClass,
           "random_symmetric does not generate " + std::string(ClassName(cls)));
  }
  return SymmetricValuation::FromInts(v);
}

}  // namespace twoprice

#endif  // TWOPRICE_VALUATION_HPP_
