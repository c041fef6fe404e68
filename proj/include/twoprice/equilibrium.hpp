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

// Verification and optimization of two-price, Walrasian and conditional
// equilibria.
//
// A triple (S, high, low) is a two-price equilibrium when no buyer i prefers
// some bundle T, paying low prices for the items of S_i she keeps and high
// prices for everything she takes from others:
//
//   v_i(S_i) - low(S_i \ T) >= v_i(T) - high(T \ S_i).
//
// Equivalently S_i maximizes v_i(T) - q_i(T) where q_i charges low on S_i and
// high elsewhere. For symmetric valuations v_i(T) depends on |T| only, so the
// best T of each size is the cheapest items under q_i and the check is a sort.

#ifndef TWOPRICE_EQUILIBRIUM_HPP_
#define TWOPRICE_EQUILIBRIUM_HPP_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twoprice/error.hpp"
#include "twoprice/geometry.hpp"
#include "twoprice/lp.hpp"
#include "twoprice/market.hpp"
#include "twoprice/rational.hpp"
#include "twoprice/valuation.hpp"

namespace twoprice {

namespace internal {

inline Rational Count(std::size_t k) {
  return Rational(static_cast<unsigned long>(k));
}

inline std::vector<std::size_t> MaskItems(Bundle b, std::size_t m) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < m; ++j) {
    if (Contains(b, j)) out.push_back(j);
  }
  return out;
}

// q(T) for every T, built from the lowest set bit.
inline std::vector<Rational> AdditiveTable(const std::vector<Rational>& q) {
  std::vector<Rational> t(std::size_t{1} << q.size());
  for (Bundle s = 1; s < t.size(); ++s) {
    t[s] = t[s & (s - 1)] + q[std::countr_zero(s)];
  }
  return t;
}

inline Witness MakeWitness(std::size_t buyer, std::vector<std::size_t> bundle,
                           Rational lhs, Rational rhs, std::string condition) {
  Witness w;
  w.buyer = buyer;
  w.bundle = std::move(bundle);
  w.lhs = std::move(lhs);
  w.rhs = std::move(rhs);
  w.condition = std::move(condition);
  return w;
}

inline EquilibriumReport Is2peSymmetric(const ValuationProfile& v,
                                        const Allocation& s,
                                        const TwoPriceSystem& p) {
  const std::size_t m = v.m();
  const std::vector<std::size_t> counts = s.Counts();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < v.n(); ++i) {
    const SymmetricValuation& vi = v.symmetric(i);
    auto q = [&](std::size_t j) -> const Rational& {
      return s.owner(j) == i ? p.low[j] : p.high[j];
    };
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return q(a) < q(b);
    });
    Rational own_low = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (s.owner(j) == i) own_low += p.low[j];
    }
    const Rational base = vi(counts[i]) - own_low;
    Rational paid = 0;
    Rational best = base;
    std::optional<std::size_t> best_size;
    for (std::size_t t = 0; t <= m; ++t) {
      if (t > 0) paid += q(order[t - 1]);
      Rational util = vi(t) - paid;
      if (util > best) {
        best = util;
        best_size = t;
      }
    }
    if (best_size) {
      std::vector<std::size_t> tset(order.begin(),
                                    order.begin() + static_cast<std::ptrdiff_t>(*best_size));
      std::sort(tset.begin(), tset.end());
      Rational lhs = vi(counts[i]);
      Rational rhs = vi(*best_size);
      std::vector<bool> in_t(m, false);
      for (std::size_t j : tset) in_t[j] = true;
      for (std::size_t j = 0; j < m; ++j) {
        if (s.owner(j) == i && !in_t[j]) lhs -= p.low[j];
        if (s.owner(j) != i && in_t[j]) rhs -= p.high[j];
      }
      Witness w = MakeWitness(i, std::move(tset), lhs, rhs, "utility maximization");
      w.count = *best_size;
      return EquilibriumReport::Violated(std::move(w));
    }
  }
  return EquilibriumReport::Ok();
}

inline EquilibriumReport Is2peGeneral(const ValuationProfile& v,
                                      const Allocation& s,
                                      const TwoPriceSystem& p) {
  const std::size_t m = v.m();
  RequireGeneralSize(m, "is_2pe");
  for (std::size_t i = 0; i < v.n(); ++i) {
    const Bundle own = s.BundleOf(i);
    std::vector<Rational> q(m);
    for (std::size_t j = 0; j < m; ++j) {
      q[j] = Contains(own, j) ? p.low[j] : p.high[j];
    }
    const std::vector<Rational> cost = AdditiveTable(q);
    const Rational base = v.Value(i, own) - cost[own];
    Rational best = base;
    std::optional<Bundle> arg;
    for (Bundle t = 0; t < cost.size(); ++t) {
      Rational util = v.Value(i, t) - cost[t];
      if (util > best) {
        best = util;
        arg = t;
      }
    }
    if (arg) {
      Rational lhs = v.Value(i, own);
      Rational rhs = v.Value(i, *arg);
      for (std::size_t j = 0; j < m; ++j) {
        if (Contains(own, j) && !Contains(*arg, j)) lhs -= p.low[j];
        if (!Contains(own, j) && Contains(*arg, j)) rhs -= p.high[j];
      }
      return EquilibriumReport::Violated(
          MakeWitness(i, MaskItems(*arg, m), lhs, rhs, "utility maximization"));
    }
  }
  return EquilibriumReport::Ok();
}

}  // namespace internal

inline EquilibriumReport Is2pe(const ValuationProfile& v, const Allocation& s,
                               const TwoPriceSystem& p) {
  CheckCompatible(v, s);
  p.Validate(v.m());
  if (v.is_symmetric()) return internal::Is2peSymmetric(v, s, p);
  return internal::Is2peGeneral(v, s, p);
}

inline EquilibriumReport IsWe(const ValuationProfile& v, const Allocation& s,
                              const std::vector<Rational>& p) {
  return Is2pe(v, s, TwoPriceSystem::Single(p));
}

// Individual rationality plus outward stability, checked directly rather than
// through the two-price reduction.
inline EquilibriumReport IsCe(const ValuationProfile& v, const Allocation& s,
                              const std::vector<Rational>& p) {
  CheckCompatible(v, s);
  TwoPriceSystem{p, std::vector<Rational>(p.size(), Rational(0))}.Validate(v.m());
  const std::size_t m = v.m();
  for (std::size_t i = 0; i < v.n(); ++i) {
    Rational paid = 0;
    for (std::size_t j : s.Items(i)) paid += p[j];
    const Rational value = BuyerValue(v, s, i);
    if (value - paid < 0) {
      return EquilibriumReport::Violated(internal::MakeWitness(
          i, s.Items(i), value - paid, Rational(0), "individual rationality"));
    }
  }
  for (std::size_t i = 0; i < v.n(); ++i) {
    const Rational value = BuyerValue(v, s, i);
    if (v.is_symmetric()) {
      const std::size_t k = s.Counts()[i];
      std::vector<std::size_t> others;
      for (std::size_t j = 0; j < m; ++j) {
        if (s.owner(j) != i) others.push_back(j);
      }
      std::stable_sort(others.begin(), others.end(),
                       [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
      Rational cost = 0;
      for (std::size_t e = 1; e <= others.size(); ++e) {
        cost += p[others[e - 1]];
        const Rational gain = v.symmetric(i)(k + e);
        if (gain - cost > value) {
          std::vector<std::size_t> t = s.Items(i);
          t.insert(t.end(), others.begin(), others.begin() + static_cast<std::ptrdiff_t>(e));
          std::sort(t.begin(), t.end());
          Rational paid_own = 0;
          for (std::size_t j : s.Items(i)) paid_own += p[j];
          Witness w = internal::MakeWitness(i, std::move(t), value - paid_own,
                                            gain - cost - paid_own,
                                            "outward stability");
          w.count = k + e;
          return EquilibriumReport::Violated(std::move(w));
        }
      }
    } else {
      RequireGeneralSize(m, "is_ce");
      const Bundle own = s.BundleOf(i);
      const Bundle rest = FullBundle(m) & ~own;
      const std::vector<Rational> cost = internal::AdditiveTable(p);
      for (Bundle t = rest; t != 0; t = (t - 1) & rest) {
        const Rational gain = v.Value(i, own | t);
        if (gain - cost[t] > value) {
          return EquilibriumReport::Violated(internal::MakeWitness(
              i, internal::MaskItems(own | t, m), value - cost[own],
              gain - cost[own | t], "outward stability"));
        }
      }
    }
  }
  return EquilibriumReport::Ok();
}

inline Rational Welfare(const ValuationProfile& v, const Allocation& s) {
  CheckCompatible(v, s);
  Rational total = 0;
  if (v.is_symmetric()) {
    const std::vector<std::size_t> counts = s.Counts();
    for (std::size_t i = 0; i < v.n(); ++i) total += v.symmetric(i)(counts[i]);
  } else {
    for (std::size_t i = 0; i < v.n(); ++i) total += v.Value(i, s.BundleOf(i));
  }
  return total;
}

inline Rational Discrepancy(const ValuationProfile& v, const Allocation& s,
                            const TwoPriceSystem& p) {
  p.Validate(v.m());
  const Rational sw = Welfare(v, s);
  if (sw == 0) Fail(ErrorCode::kZeroWelfare, "discrepancy needs SW > 0");
  return p.Gap() / sw;
}

struct WelfareOptimum {
  Rational value;
  Allocation allocation;
};

// Symmetric profiles: DP over (buyer, items left); ties go to the
// lexicographically smallest count vector. General profiles: DP over
// (buyer, set of items left); ties go to the numerically smallest bundle for
// the earliest buyer.
inline WelfareOptimum OptWelfare(const ValuationProfile& v) {
  const std::size_t n = v.n();
  const std::size_t m = v.m();
  if (v.is_symmetric()) {
    std::vector<std::vector<Rational>> f(n, std::vector<Rational>(m + 1));
    for (std::size_t r = 0; r <= m; ++r) f[n - 1][r] = v.symmetric(n - 1)(r);
    for (std::size_t i = n - 1; i-- > 0;) {
      const SymmetricValuation& vi = v.symmetric(i);
      for (std::size_t r = 0; r <= m; ++r) {
        Rational best = f[i + 1][r];
        for (std::size_t k = 1; k <= r; ++k) {
          Rational cand = vi(k) + f[i + 1][r - k];
          if (cand > best) best = cand;
        }
        f[i][r] = best;
      }
    }
    std::vector<std::size_t> counts(n, 0);
    std::size_t r = m;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t k = 0; k <= r; ++k) {
        if (v.symmetric(i)(k) + f[i + 1][r - k] == f[i][r]) {
          counts[i] = k;
          r -= k;
          break;
        }
      }
    }
    counts[n - 1] = r;
    return WelfareOptimum{f[0][m], Allocation::FromCounts(counts)};
  }

  RequireGeneralSize(m, "opt_welfare");
  const Bundle full = FullBundle(m);
  const std::size_t size = std::size_t{1} << m;
  std::vector<std::vector<Rational>> f(n, std::vector<Rational>(size));
  for (Bundle s = 0; s <= full; ++s) f[n - 1][s] = v.Value(n - 1, s);
  for (std::size_t i = n - 1; i-- > 0;) {
    for (Bundle s = 0; s <= full; ++s) {
      Rational best = f[i + 1][s];
      for (Bundle t = s; t != 0; t = (t - 1) & s) {
        Rational cand = v.Value(i, t) + f[i + 1][s & ~t];
        if (cand > best) best = cand;
      }
      f[i][s] = best;
    }
  }
  std::vector<Bundle> bundles(n, 0);
  Bundle left = full;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (Bundle t = 0; t <= left; ++t) {
      if ((t & ~left) != 0) continue;
      if (v.Value(i, t) + f[i + 1][left & ~t] == f[i][left]) {
        bundles[i] = t;
        left &= ~t;
        break;
      }
    }
  }
  bundles[n - 1] = left;
  return WelfareOptimum{f[0][full], Allocation::FromBundles(bundles, m)};
}

// SW >= OPT / (1 + d) for a verified 2PE.
inline bool WelfareBoundCheck(const ValuationProfile& v, const Allocation& s,
                              const TwoPriceSystem& p) {
  if (!Is2pe(v, s, p).holds) {
    Fail(ErrorCode::kNotAnEquilibrium, "welfare bound needs a 2PE");
  }
  const Rational d = Discrepancy(v, s, p);
  return Welfare(v, s) * (1 + d) >= OptWelfare(v).value;
}

// Averages high and low prices inside each bundle. Discrepancy is unchanged
// because the per-bundle sums are.
inline std::pair<TwoPriceSystem, EquilibriumReport> Uniformize(
    const ValuationProfile& v, const Allocation& s, const TwoPriceSystem& p) {
  if (!v.is_symmetric()) {
    Fail(ErrorCode::kUnsupportedClass, "uniformize needs a symmetric profile");
  }
  if (!Is2pe(v, s, p).holds) {
    Fail(ErrorCode::kNotAnEquilibrium, "uniformize needs a 2PE");
  }
  UniformPrices u;
  for (std::size_t i = 0; i < v.n(); ++i) {
    const std::vector<std::size_t> items = s.Items(i);
    Rational hi = 0;
    Rational lo = 0;
    for (std::size_t j : items) {
      hi += p.high[j];
      lo += p.low[j];
    }
    if (!items.empty()) {
      hi /= internal::Count(items.size());
      lo /= internal::Count(items.size());
    }
    u.high.push_back(hi);
    u.low.push_back(lo);
  }
  TwoPriceSystem out = u.Expand(s);
  EquilibriumReport report = Is2pe(v, s, out);
  return {std::move(out), std::move(report)};
}

// Forward and backward slopes of one buyer at every k, with the undefined
// ends (forward at m, backward at 0) read as 0.
struct SlopeTable {
  std::vector<Rational> forward;
  std::vector<Rational> backward;

  explicit SlopeTable(const SymmetricValuation& v)
      : forward(ForwardSlopeValues(v)), backward(BackwardSlopeValues(v)) {
    forward.emplace_back(0);
  }
  const Rational& Forward(std::size_t k) const { return forward[k]; }
  const Rational& Backward(std::size_t k) const { return backward[k]; }
};

namespace internal {

inline void CheckCounts(const ValuationProfile& v,
                        const std::vector<std::size_t>& counts) {
  if (!v.is_symmetric()) {
    Fail(ErrorCode::kUnsupportedClass, "uniform prices need a symmetric profile");
  }
  if (counts.size() != v.n()) {
    Fail(ErrorCode::kDimensionMismatch, "one count per buyer");
  }
  std::size_t total = 0;
  for (std::size_t k : counts) total += k;
  if (total != v.m()) {
    Fail(ErrorCode::kCountMismatch, "counts sum to " + std::to_string(total) +
                                        ", m = " + std::to_string(v.m()));
  }
}

inline UniformPrices CanonicalPrices(const std::vector<SlopeTable>& slopes,
                                     const std::vector<std::size_t>& counts) {
  const std::size_t n = counts.size();
  UniformPrices u;
  u.high.assign(n, Rational(0));
  u.low.assign(n, Rational(0));
  if (n == 1) return u;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t o = 0; o < n; ++o) {
      if (o != i && slopes[o].Forward(counts[o]) > u.high[i]) {
        u.high[i] = slopes[o].Forward(counts[o]);
      }
    }
  }
  std::optional<Rational> min_high;
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] > 0 && (!min_high || u.high[i] < *min_high)) {
      min_high = u.high[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] == 0) continue;
    u.low[i] = std::min(slopes[i].Backward(counts[i]), *min_high);
  }
  return u;
}

}  // namespace internal

// The three per-buyer conditions for uniform prices: low at most every
// occupied bundle's high price, low at most the backward slope, and buying
// any number of extra items at the cheapest high prices not paying off.
inline EquilibriumReport U2peFeasible(const ValuationProfile& v,
                                      const std::vector<std::size_t>& counts,
                                      const UniformPrices& u) {
  internal::CheckCounts(v, counts);
  const std::size_t n = v.n();
  if (u.high.size() != n || u.low.size() != n) {
    Fail(ErrorCode::kDimensionMismatch, "one price pair per buyer");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (u.low[i] < 0 || u.high[i] < u.low[i]) {
      Fail(ErrorCode::kPriceOrderViolation,
           "buyer " + std::to_string(i) + ": need high >= low >= 0");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] == 0) continue;
    for (std::size_t o = 0; o < n; ++o) {
      if (o == i || counts[o] == 0) continue;
      if (u.low[i] > u.high[o]) {
        Witness w = internal::MakeWitness(i, {}, u.low[i], u.high[o],
                                          "low price above another bundle's high price");
        return EquilibriumReport::Violated(std::move(w));
      }
    }
    const SlopeQuery back = MinBackwardSlope(v.symmetric(i), counts[i]);
    if (u.low[i] > back.value) {
      Witness w = internal::MakeWitness(i, {}, back.value, u.low[i],
                                        "low price above backward slope");
      w.count = counts[i] - back.realizer;
      return EquilibriumReport::Violated(std::move(w));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<Rational, std::size_t>> offers;
    for (std::size_t o = 0; o < n; ++o) {
      if (o != i && counts[o] > 0) offers.emplace_back(u.high[o], counts[o]);
    }
    std::stable_sort(offers.begin(), offers.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    const SymmetricValuation& vi = v.symmetric(i);
    Rational cost = 0;
    std::size_t t = counts[i];
    for (const auto& [price, cap] : offers) {
      for (std::size_t c = 0; c < cap; ++c) {
        cost += price;
        ++t;
        const Rational gain = vi(t) - vi(counts[i]);
        if (cost < gain) {
          Witness w = internal::MakeWitness(i, {}, cost, gain,
                                            "extra items worth more than their high price");
          w.count = t;
          return EquilibriumReport::Violated(std::move(w));
        }
      }
    }
  }
  return EquilibriumReport::Ok();
}

// high_i = largest forward slope among the other buyers, low_i = min of own
// backward slope and the smallest high price of an occupied bundle.
inline UniformPrices U2peSufficientPrices(const ValuationProfile& v,
                                          const std::vector<std::size_t>& counts) {
  internal::CheckCounts(v, counts);
  std::vector<SlopeTable> slopes;
  for (const auto& vi : v.symmetric_buyers()) slopes.emplace_back(vi);
  return internal::CanonicalPrices(slopes, counts);
}

struct DiscrepancyOptimum {
  std::vector<std::size_t> counts;
  UniformPrices prices;
  Rational discrepancy;
  bool exact = false;
};

namespace internal {

// Smallest price gap over uniform prices for a two-buyer split. Each high
// price is bounded below by the other buyer's forward slope and each low price
// is best set to min(backward slope, both high prices), so the optimum sits on
// a breakpoint of a piecewise-linear function: every high price is one of the
// two lower bounds or the two backward slopes.
inline std::pair<UniformPrices, Rational> TwoBuyerOptimum(
    const std::vector<SlopeTable>& slopes, std::size_t k0, std::size_t k1) {
  const std::size_t k[2] = {k0, k1};
  const bool active[2] = {k0 > 0, k1 > 0};
  Rational lower[2] = {slopes[1].Forward(k1), slopes[0].Forward(k0)};
  Rational back[2] = {slopes[0].Backward(k0), slopes[1].Backward(k1)};

  std::vector<Rational> pool;
  for (int i = 0; i < 2; ++i) {
    if (!active[i]) continue;
    pool.push_back(lower[i]);
    pool.push_back(back[i]);
  }
  auto candidates = [&](int i) {
    std::vector<Rational> c;
    for (const Rational& x : pool) {
      if (x >= lower[i]) c.push_back(x);
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
  };
  const std::vector<Rational> c0 = active[0] ? candidates(0) : std::vector<Rational>{lower[0]};
  const std::vector<Rational> c1 = active[1] ? candidates(1) : std::vector<Rational>{lower[1]};

  std::optional<Rational> best;
  UniformPrices best_prices;
  for (const Rational& h0 : c0) {
    for (const Rational& h1 : c1) {
      Rational cap = active[0] && active[1] ? std::min(h0, h1) : (active[0] ? h0 : h1);
      Rational h[2] = {h0, h1};
      Rational gap = 0;
      UniformPrices u;
      u.high = {h0, h1};
      u.low = {Rational(0), Rational(0)};
      for (int i = 0; i < 2; ++i) {
        if (!active[i]) continue;
        u.low[i] = std::min(back[i], cap);
        gap += (h[i] - u.low[i]) * Count(k[i]);
      }
      if (!best || gap < *best) {
        best = gap;
        best_prices = u;
      }
    }
  }
  return {best_prices, *best};
}

inline std::size_t CompositionCount(std::size_t m, std::size_t n,
                                    std::size_t cap) {
  // C(m + n - 1, n - 1), saturating at cap + 1.
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), m + n - 1, n - 1);
  if (c > cap) return cap + 1;
  return c.get_ui();
}

}  // namespace internal

inline constexpr std::size_t kCompositionBudget = 2'000'000;

// Exact minimum over all splits for two buyers. For more buyers the canonical
// sufficient prices are scored over every composition and the result is only
// an upper bound (exact = false).
inline DiscrepancyOptimum MinDiscrepancy(const ValuationProfile& v) {
  if (!v.is_symmetric()) {
    Fail(ErrorCode::kUnsupportedClass, "min_discrepancy needs a symmetric profile");
  }
  const std::size_t n = v.n();
  const std::size_t m = v.m();
  std::vector<SlopeTable> slopes;
  for (const auto& vi : v.symmetric_buyers()) slopes.emplace_back(vi);

  DiscrepancyOptimum best;
  bool found = false;
  auto consider = [&](const std::vector<std::size_t>& counts,
                      const UniformPrices& u, const Rational& gap) {
    Rational sw = 0;
    for (std::size_t i = 0; i < n; ++i) sw += v.symmetric(i)(counts[i]);
    if (sw == 0) return;
    Rational d = gap / sw;
    if (!found || d < best.discrepancy) {
      best.counts = counts;
      best.prices = u;
      best.discrepancy = d;
      found = true;
    }
  };

  if (n == 1) {
    consider({m}, UniformPrices{{Rational(0)}, {Rational(0)}}, Rational(0));
    best.exact = true;
  } else if (n == 2) {
    for (std::size_t k0 = 0; k0 <= m; ++k0) {
      auto [u, gap] = internal::TwoBuyerOptimum(slopes, k0, m - k0);
      consider({k0, m - k0}, u, gap);
    }
    best.exact = true;
  } else {
    if (internal::CompositionCount(m, n, kCompositionBudget) > kCompositionBudget) {
      Fail(ErrorCode::kInstanceTooLarge,
           "more than " + std::to_string(kCompositionBudget) +
               " compositions of m items among n buyers");
    }
    std::vector<std::size_t> counts(n, 0);
    counts[n - 1] = m;
    // Compositions in lexicographic order, from (0, .., 0, m) to (m, 0, .., 0).
    while (true) {
      UniformPrices u = internal::CanonicalPrices(slopes, counts);
      consider(counts, u, u.Gap(counts));
      std::size_t q = n - 1;
      while (q > 0 && counts[q] == 0) --q;
      if (q == 0) break;
      ++counts[q - 1];
      const std::size_t tail = counts[q] - 1;
      counts[q] = 0;
      counts[n - 1] = tail;
    }
    best.exact = false;
  }
  if (!found) Fail(ErrorCode::kZeroWelfare, "every split has zero welfare");
  return best;
}

struct SymmetricWe {
  Allocation allocation;
  std::vector<std::size_t> counts;
  Rational price;
};

// Buyer i can take k items at a single price p iff backward(k) >= p (k > 0)
// and forward(k) <= p (k < m). For each candidate price a subset-sum over the
// buyers looks for counts adding up to m.
inline std::optional<SymmetricWe> WeExistsSymmetric(const ValuationProfile& v) {
  if (!v.is_symmetric()) {
    Fail(ErrorCode::kUnsupportedClass, "we_exists_symmetric needs a symmetric profile");
  }
  const std::size_t n = v.n();
  const std::size_t m = v.m();
  std::vector<SlopeTable> slopes;
  for (const auto& vi : v.symmetric_buyers()) slopes.emplace_back(vi);

  std::vector<Rational> prices{Rational(0)};
  for (const SlopeTable& t : slopes) {
    prices.insert(prices.end(), t.forward.begin(), t.forward.end());
  }
  std::sort(prices.begin(), prices.end());
  prices.erase(std::unique(prices.begin(), prices.end()), prices.end());

  for (const Rational& p : prices) {
    std::vector<std::vector<std::size_t>> feasible(n);
    bool empty = false;
    for (std::size_t i = 0; i < n && !empty; ++i) {
      for (std::size_t k = 0; k <= m; ++k) {
        if (k > 0 && slopes[i].Backward(k) < p) continue;
        if (k < m && slopes[i].Forward(k) > p) continue;
        feasible[i].push_back(k);
      }
      empty = feasible[i].empty();
    }
    if (empty) continue;
    // can[i][r]: buyers i..n-1 can absorb exactly r items.
    std::vector<std::vector<char>> can(n + 1, std::vector<char>(m + 1, 0));
    can[n][0] = 1;
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t r = 0; r <= m; ++r) {
        for (std::size_t k : feasible[i]) {
          if (k <= r && can[i + 1][r - k]) {
            can[i][r] = 1;
            break;
          }
        }
      }
    }
    if (!can[0][m]) continue;
    std::vector<std::size_t> counts(n, 0);
    std::size_t r = m;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k : feasible[i]) {
        if (k <= r && can[i + 1][r - k]) {
          counts[i] = k;
          r -= k;
          break;
        }
      }
    }
    Rational price = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (counts[i] < m && slopes[i].Forward(counts[i]) > price) {
        price = slopes[i].Forward(counts[i]);
      }
    }
    SymmetricWe we{Allocation::FromCounts(counts), counts, price};
    if (!IsWe(v, we.allocation, std::vector<Rational>(m, price)).holds) {
      Fail(ErrorCode::kNotAnEquilibrium,
           "slope-interval witness failed WE verification");
    }
    return we;
  }
  return std::nullopt;
}

namespace internal {

template <typename Visit>
void ForEachAllocation(std::size_t n, std::size_t m, Visit visit) {
  std::vector<std::size_t> owner(m, 0);
  while (true) {
    if (!visit(Allocation::FromOwners(owner, n))) return;
    std::size_t j = 0;
    while (j < m && ++owner[j] == n) owner[j++] = 0;
    if (j == m) return;
  }
}

inline std::vector<Rational> Indicator(Bundle b, std::size_t m, int sign = 1) {
  std::vector<Rational> c(m, Rational(0));
  for (std::size_t j = 0; j < m; ++j) {
    if (Contains(b, j)) c[j] = sign;
  }
  return c;
}

}  // namespace internal

struct PricedAllocation {
  Allocation allocation;
  std::vector<Rational> prices;
};

// Exhaustive over all n^m allocations; for each, CE prices are a linear
// feasibility problem (individual rationality and outward stability are both
// linear in p).
inline std::optional<PricedAllocation> CeExists(const ValuationProfile& v) {
  const ValuationProfile g = v.ToGeneral();
  const std::size_t m = g.m();
  RequireGeneralSize(m, "ce_exists");
  std::optional<PricedAllocation> found;
  internal::ForEachAllocation(g.n(), m, [&](const Allocation& s) {
    std::vector<lp::Constraint> rows;
    for (std::size_t i = 0; i < g.n(); ++i) {
      const Bundle own = s.BundleOf(i);
      const Rational base = g.Value(i, own);
      rows.push_back({internal::Indicator(own, m), lp::Relation::kLessEqual, base});
      const Bundle rest = FullBundle(m) & ~own;
      for (Bundle t = rest; t != 0; t = (t - 1) & rest) {
        Rational need = g.Value(i, own | t) - base;
        if (need > 0) {
          rows.push_back({internal::Indicator(t, m), lp::Relation::kGreaterEqual, need});
        }
      }
    }
    lp::Result r = lp::Maximize(std::vector<Rational>(m, Rational(0)), rows);
    if (r.status == lp::Status::kOptimal) {
      found = PricedAllocation{s, r.x};
      return false;
    }
    return true;
  });
  if (found && !IsCe(g, found->allocation, found->prices).holds) {
    Fail(ErrorCode::kNotAnEquilibrium, "LP prices failed CE verification");
  }
  return found;
}

// Exhaustive over welfare-optimal allocations (a WE allocation is always
// optimal); WE prices for a fixed allocation are a linear feasibility problem.
inline std::optional<PricedAllocation> WeExistsGeneral(const ValuationProfile& v) {
  const ValuationProfile g = v.ToGeneral();
  const std::size_t m = g.m();
  RequireGeneralSize(m, "we_exists_general");
  const Rational opt = OptWelfare(g).value;
  std::optional<PricedAllocation> found;
  internal::ForEachAllocation(g.n(), m, [&](const Allocation& s) {
    if (Welfare(g, s) != opt) return true;
    std::vector<lp::Constraint> rows;
    for (std::size_t i = 0; i < g.n(); ++i) {
      const Bundle own = s.BundleOf(i);
      for (Bundle t = 0; t <= FullBundle(m); ++t) {
        if (t == own) continue;
        Rational need = g.Value(i, t) - g.Value(i, own);
        std::vector<Rational> c(m, Rational(0));
        for (std::size_t j = 0; j < m; ++j) {
          if (Contains(t, j)) c[j] += 1;
          if (Contains(own, j)) c[j] -= 1;
        }
        rows.push_back({std::move(c), lp::Relation::kGreaterEqual, need});
      }
    }
    lp::Result r = lp::Maximize(std::vector<Rational>(m, Rational(0)), rows);
    if (r.status == lp::Status::kOptimal) {
      found = PricedAllocation{s, r.x};
      return false;
    }
    return true;
  });
  if (found && !IsWe(g, found->allocation, found->prices).holds) {
    Fail(ErrorCode::kNotAnEquilibrium, "LP prices failed WE verification");
  }
  return found;
}

struct PricedEquilibrium {
  Allocation allocation;
  TwoPriceSystem prices;
  Rational discrepancy;
};

// Optimal allocation; every item's high price is the value its owner gets
// from her whole bundle, low prices are 0.
inline PricedEquilibrium OptDiscrepancyUpperBound(const ValuationProfile& v) {
  if (!v.is_symmetric()) RequireGeneralSize(v.m(), "opt_discrepancy_upper_bound");
  WelfareOptimum opt = OptWelfare(v);
  const std::size_t m = v.m();
  std::vector<Rational> owner_value(v.n());
  for (std::size_t i = 0; i < v.n(); ++i) {
    owner_value[i] = BuyerValue(v, opt.allocation, i);
  }
  TwoPriceSystem p;
  p.low.assign(m, Rational(0));
  for (std::size_t j = 0; j < m; ++j) {
    p.high.push_back(owner_value[opt.allocation.owner(j)]);
  }
  PricedEquilibrium out{opt.allocation, p, Discrepancy(v, opt.allocation, p)};
  EquilibriumReport report = Is2pe(v, out.allocation, out.prices);
  if (!report.holds) {
    Fail(ErrorCode::kNotAnEquilibrium,
         "optimal-allocation prices are not a 2PE (buyer " +
             std::to_string(report.witness->buyer) + ")");
  }
  if (out.discrepancy > internal::Count(m)) {
    Fail(ErrorCode::kNotAnEquilibrium, "discrepancy exceeds m");
  }
  return out;
}

}  // namespace twoprice

#endif  // TWOPRICE_EQUILIBRIUM_HPP_
