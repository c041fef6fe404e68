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

#ifndef TWOPRICE_MARKET_HPP_
#define TWOPRICE_MARKET_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "twoprice/error.hpp"
#include "twoprice/rational.hpp"
#include "twoprice/valuation.hpp"

namespace twoprice {

// Partition of items 0..m-1 among n buyers, stored as the owner of each item.
// Every item is owned; partial allocations cannot be represented.
class Allocation {
 public:
  Allocation() = default;

  // Buyer 0 gets items 0..k_0-1, buyer 1 the next k_1, and so on.
  static Allocation FromCounts(const std::vector<std::size_t>& counts) {
    Allocation a;
    a.n_ = counts.size();
    for (std::size_t i = 0; i < counts.size(); ++i) {
      a.owner_.insert(a.owner_.end(), counts[i], i);
    }
    return a;
  }

  static Allocation FromOwners(std::vector<std::size_t> owner, std::size_t n) {
    for (std::size_t j = 0; j < owner.size(); ++j) {
      if (owner[j] >= n) {
        Fail(ErrorCode::kIndexOutOfRange,
             "item " + std::to_string(j) + " assigned to buyer " +
                 std::to_string(owner[j]) + " of " + std::to_string(n));
      }
    }
    Allocation a;
    a.n_ = n;
    a.owner_ = std::move(owner);
    return a;
  }

  static Allocation FromBundles(const std::vector<Bundle>& bundles,
                                std::size_t m) {
    if (m > 31) Fail(ErrorCode::kInstanceTooLarge, "bundle masks need m <= 31");
    std::vector<std::optional<std::size_t>> owner(m);
    for (std::size_t i = 0; i < bundles.size(); ++i) {
      if (m < 32 && (bundles[i] >> m) != 0) {
        Fail(ErrorCode::kIndexOutOfRange,
             "bundle of buyer " + std::to_string(i) + " names an item >= m");
      }
      for (std::size_t j = 0; j < m; ++j) {
        if (!Contains(bundles[i], j)) continue;
        if (owner[j]) {
          Fail(ErrorCode::kCountMismatch,
               "item " + std::to_string(j) + " allocated twice");
        }
        owner[j] = i;
      }
    }
    std::vector<std::size_t> flat(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (!owner[j]) {
        Fail(ErrorCode::kCountMismatch,
             "item " + std::to_string(j) + " is not allocated");
      }
      flat[j] = *owner[j];
    }
    return FromOwners(std::move(flat), bundles.size());
  }

  std::size_t m() const { return owner_.size(); }
  std::size_t n() const { return n_; }
  std::size_t owner(std::size_t j) const { return owner_.at(j); }
  const std::vector<std::size_t>& owners() const { return owner_; }

  std::vector<std::size_t> Counts() const {
    std::vector<std::size_t> c(n_, 0);
    for (std::size_t o : owner_) ++c[o];
    return c;
  }

  std::vector<std::size_t> Items(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < owner_.size(); ++j) {
      if (owner_[j] == i) out.push_back(j);
    }
    return out;
  }

  Bundle BundleOf(std::size_t i) const {
    if (m() > 31) {
      Fail(ErrorCode::kInstanceTooLarge, "bundle masks need m <= 31");
    }
    Bundle b = 0;
    for (std::size_t j = 0; j < owner_.size(); ++j) {
      if (owner_[j] == i) b |= Bundle{1} << j;
    }
    return b;
  }

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> owner_;
};

inline void CheckCompatible(const ValuationProfile& v, const Allocation& s) {
  if (s.m() != v.m() || s.n() != v.n()) {
    Fail(ErrorCode::kDimensionMismatch,
         "allocation is " + std::to_string(s.n()) + " buyers x " +
             std::to_string(s.m()) + " items; market is " +
             std::to_string(v.n()) + " x " + std::to_string(v.m()));
  }
}

inline Rational BuyerValue(const ValuationProfile& v, const Allocation& s,
                           std::size_t i) {
  if (v.is_symmetric()) return v.symmetric(i)(s.Counts()[i]);
  return v.Value(i, s.BundleOf(i));
}

struct TwoPriceSystem {
  std::vector<Rational> high;
  std::vector<Rational> low;

  static TwoPriceSystem Single(const std::vector<Rational>& p) {
    return TwoPriceSystem{p, p};
  }
  static TwoPriceSystem Constant(std::size_t m, const Rational& high,
                                 const Rational& low) {
    return TwoPriceSystem{std::vector<Rational>(m, high),
                          std::vector<Rational>(m, low)};
  }

  void Validate(std::size_t m) const {
    if (high.size() != m || low.size() != m) {
      Fail(ErrorCode::kDimensionMismatch,
           "price vectors must have one entry per item (m = " +
               std::to_string(m) + ")");
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (low[j] < 0 || high[j] < low[j]) {
        Fail(ErrorCode::kPriceOrderViolation,
             "item " + std::to_string(j) + ": need high >= low >= 0, got " +
                 ToString(high[j]) + " / " + ToString(low[j]));
      }
    }
  }

  Rational Gap() const {
    Rational g = 0;
    for (std::size_t j = 0; j < high.size(); ++j) g += high[j] - low[j];
    return g;
  }
};

// One (high, low) pair per buyer, applied to every item of that buyer.
struct UniformPrices {
  std::vector<Rational> high;
  std::vector<Rational> low;

  TwoPriceSystem Expand(const Allocation& s) const {
    TwoPriceSystem p;
    p.high.reserve(s.m());
    p.low.reserve(s.m());
    for (std::size_t j = 0; j < s.m(); ++j) {
      p.high.push_back(high.at(s.owner(j)));
      p.low.push_back(low.at(s.owner(j)));
    }
    return p;
  }

  // Sum over items of high - low.
  Rational Gap(const std::vector<std::size_t>& counts) const {
    Rational g = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      g += (high[i] - low[i]) * Rational(static_cast<unsigned long>(counts[i]));
    }
    return g;
  }
};

// A price at least this large can never be worth paying.
inline Rational InfinitePrice(const ValuationProfile& v) {
  Rational total = 1;
  for (std::size_t i = 0; i < v.n(); ++i) total += v.FullValue(i);
  return total;
}

struct Witness {
  std::size_t buyer = 0;
  std::vector<std::size_t> bundle;  // deviation T as item indices
  std::optional<std::size_t> count;  // deviation size where only |T| matters
  Rational lhs;
  Rational rhs;
  std::string condition;
};

struct EquilibriumReport {
  bool holds = true;
  std::optional<Witness> witness;

  static EquilibriumReport Ok() { return {}; }
  static EquilibriumReport Violated(Witness w) {
    return EquilibriumReport{false, std::move(w)};
  }
};

}  // namespace twoprice

#endif  // TWOPRICE_MARKET_HPP_
