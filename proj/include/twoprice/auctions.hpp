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

// Simultaneous second-price auctions, one per item.
//
// A unilateral deviation by bidder i can win any set T of items, and on each
// item j in T she pays c_j, the highest competing bid. Bidding above c_j wins
// j whatever the tie rule, so the best deviation is max_T v_i(T) - c(T) and
// the tie rule only matters for the incumbent outcome.

#ifndef TWOPRICE_AUCTIONS_HPP_
#define TWOPRICE_AUCTIONS_HPP_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twoprice/equilibrium.hpp"
#include "twoprice/error.hpp"
#include "twoprice/market.hpp"
#include "twoprice/rational.hpp"
#include "twoprice/valuation.hpp"

namespace twoprice {

struct BidProfile {
  std::vector<std::vector<Rational>> bids;  // bids[i][j]

  std::size_t n() const { return bids.size(); }
  std::size_t m() const { return bids.empty() ? 0 : bids[0].size(); }
};

enum class TieRule { kPreferAllocation, kLowestIndex };

struct TieBreak {
  TieRule rule = TieRule::kLowestIndex;
  std::optional<Allocation> preferred;

  static TieBreak LowestIndex() { return {}; }
  static TieBreak Prefer(Allocation s) {
    return TieBreak{TieRule::kPreferAllocation, std::move(s)};
  }
  std::string name() const {
    return rule == TieRule::kLowestIndex ? "index" : "alloc";
  }
};

struct AuctionOutcome {
  Allocation allocation;
  std::vector<Rational> payments;
  std::string tiebreak;
};

namespace internal {

inline void CheckBids(const ValuationProfile& v, const BidProfile& b) {
  if (b.n() != v.n()) {
    Fail(ErrorCode::kDimensionMismatch, "bid matrix has " + std::to_string(b.n()) +
                                            " rows, market has " +
                                            std::to_string(v.n()) + " buyers");
  }
  for (const auto& row : b.bids) {
    if (row.size() != v.m()) {
      Fail(ErrorCode::kDimensionMismatch, "bid row length differs from m");
    }
    for (const Rational& x : row) {
      if (x < 0) Fail(ErrorCode::kMalformedInput, "bids must be non-negative");
    }
  }
}

// Highest bid on j among everyone but `skip`.
inline Rational CompetingBid(const BidProfile& b, std::size_t j,
                             std::optional<std::size_t> skip) {
  Rational best = 0;
  for (std::size_t k = 0; k < b.n(); ++k) {
    if (k != skip && b.bids[k][j] > best) best = b.bids[k][j];
  }
  return best;
}

}  // namespace internal

inline Rational ColumnMax(const BidProfile& b, std::size_t j) {
  return internal::CompetingBid(b, j, std::nullopt);
}

// Second-highest bid counting multiplicity; 0 with a single bidder.
inline Rational ColumnMax2(const BidProfile& b, std::size_t j) {
  if (b.n() < 2) return 0;
  std::vector<Rational> col;
  for (std::size_t k = 0; k < b.n(); ++k) col.push_back(b.bids[k][j]);
  std::partial_sort(col.begin(), col.begin() + 2, col.end(), std::greater<>());
  return col[1];
}

inline AuctionOutcome Resolve(const ValuationProfile& v, const BidProfile& b,
                              const TieBreak& tie) {
  internal::CheckBids(v, b);
  if (tie.rule == TieRule::kPreferAllocation) {
    if (!tie.preferred) {
      Fail(ErrorCode::kMalformedInput, "alloc tie rule needs an allocation");
    }
    CheckCompatible(v, *tie.preferred);
  }
  const std::size_t m = v.m();
  std::vector<std::size_t> owner(m);
  std::vector<Rational> pay(m);
  for (std::size_t j = 0; j < m; ++j) {
    const Rational top = ColumnMax(b, j);
    std::optional<std::size_t> winner;
    if (tie.rule == TieRule::kPreferAllocation) {
      const std::size_t o = tie.preferred->owner(j);
      if (b.bids[o][j] == top) winner = o;
    }
    for (std::size_t k = 0; k < b.n() && !winner; ++k) {
      if (b.bids[k][j] == top) winner = k;
    }
    owner[j] = *winner;
    pay[j] = ColumnMax2(b, j);
  }
  return AuctionOutcome{Allocation::FromOwners(std::move(owner), v.n()),
                        std::move(pay), tie.name()};
}

inline EquilibriumReport IsPne(const ValuationProfile& v, const BidProfile& b,
                               const TieBreak& tie) {
  const AuctionOutcome out = Resolve(v, b, tie);
  const std::size_t m = v.m();
  if (!v.is_symmetric()) RequireGeneralSize(m, "is_pne");
  for (std::size_t i = 0; i < v.n(); ++i) {
    Rational current = BuyerValue(v, out.allocation, i);
    for (std::size_t j : out.allocation.Items(i)) current -= out.payments[j];
    std::vector<Rational> c(m);
    for (std::size_t j = 0; j < m; ++j) c[j] = internal::CompetingBid(b, j, i);

    std::optional<std::vector<std::size_t>> best_t;
    Rational best = current;
    if (v.is_symmetric()) {
      std::vector<std::size_t> order(m);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t z) { return c[a] < c[z]; });
      Rational cost = 0;
      for (std::size_t t = 0; t <= m; ++t) {
        if (t > 0) cost += c[order[t - 1]];
        Rational util = v.symmetric(i)(t) - cost;
        if (util > best) {
          best = util;
          best_t.emplace(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(t));
        }
      }
    } else {
      const std::vector<Rational> cost = internal::AdditiveTable(c);
      for (Bundle t = 0; t < cost.size(); ++t) {
        Rational util = v.Value(i, t) - cost[t];
        if (util > best) {
          best = util;
          best_t = internal::MaskItems(t, m);
        }
      }
    }
    if (best_t) {
      std::sort(best_t->begin(), best_t->end());
      return EquilibriumReport::Violated(internal::MakeWitness(
          i, std::move(*best_t), current, best, "profitable deviation"));
    }
  }
  return EquilibriumReport::Ok();
}

inline std::pair<Allocation, TwoPriceSystem> PneTo2pe(const ValuationProfile& v,
                                                      const BidProfile& b,
                                                      const TieBreak& tie) {
  if (!IsPne(v, b, tie).holds) {
    Fail(ErrorCode::kNotAnEquilibrium, "bid profile is not a PNE");
  }
  AuctionOutcome out = Resolve(v, b, tie);
  TwoPriceSystem p;
  for (std::size_t j = 0; j < v.m(); ++j) {
    p.high.push_back(ColumnMax(b, j));
    p.low.push_back(ColumnMax2(b, j));
  }
  EquilibriumReport r = Is2pe(v, out.allocation, p);
  if (!r.holds) {
    Fail(ErrorCode::kNotAnEquilibrium, "PNE prices failed 2PE verification");
  }
  return {std::move(out.allocation), std::move(p)};
}

// Owners bid the high price, everyone else the low price.
inline BidProfile TwoPeToPne(const ValuationProfile& v, const Allocation& s,
                             const TwoPriceSystem& p) {
  if (!Is2pe(v, s, p).holds) {
    Fail(ErrorCode::kNotAnEquilibrium, "input is not a 2PE");
  }
  BidProfile b;
  b.bids.assign(v.n(), std::vector<Rational>(v.m()));
  for (std::size_t i = 0; i < v.n(); ++i) {
    for (std::size_t j = 0; j < v.m(); ++j) {
      b.bids[i][j] = s.owner(j) == i ? p.high[j] : p.low[j];
    }
  }
  const TieBreak tie = TieBreak::Prefer(s);
  if (!IsPne(v, b, tie).holds) {
    Fail(ErrorCode::kNotAnEquilibrium, "constructed bids are not a PNE");
  }
  AuctionOutcome out = Resolve(v, b, tie);
  if (!(out.allocation == s)) {
    Fail(ErrorCode::kNotAnEquilibrium, "constructed bids do not reproduce S");
  }
  if (v.n() >= 2) {
    for (std::size_t j = 0; j < v.m(); ++j) {
      if (out.payments[j] != p.low[j]) {
        Fail(ErrorCode::kNotAnEquilibrium,
             "payment on item " + std::to_string(j) + " differs from low price");
      }
    }
  }
  return b;
}

}  // namespace twoprice

#endif  // TWOPRICE_AUCTIONS_HPP_
