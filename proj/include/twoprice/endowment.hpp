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

// Endowment equilibria: a buyer endowed with X values Y at
// v(Y) + g^X(X & Y), and an EE is a Walrasian equilibrium of those endowed
// valuations at the endowment allocation.

#ifndef TWOPRICE_ENDOWMENT_HPP_
#define TWOPRICE_ENDOWMENT_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "twoprice/equilibrium.hpp"
#include "twoprice/error.hpp"
#include "twoprice/market.hpp"
#include "twoprice/rational.hpp"
#include "twoprice/valuation.hpp"

namespace twoprice {

enum class GainKind { kIdentity, kAbsoluteLoss, kSupportingPrices, kExplicit };

inline std::string_view GainKindName(GainKind k) {
  switch (k) {
    case GainKind::kIdentity: return "id";
    case GainKind::kAbsoluteLoss: return "al";
    case GainKind::kSupportingPrices: return "sp";
    case GainKind::kExplicit: return "explicit";
  }
  return "explicit";
}

// Endowment X -> per-item supporting prices (zero outside X).
using SupportingPriceTable = std::map<Bundle, std::vector<Rational>>;

struct GainFunction {
  GainKind kind = GainKind::kExplicit;
  // Explicit: endowment X -> subset Z of X -> g^X(Z). Missing entries read 0.
  std::map<Bundle, std::map<Bundle, Rational>> table;
  // SupportingPrices: optional precomputed prices, shared read-only.
  std::shared_ptr<const SupportingPriceTable> prices;

  static GainFunction Zero() { return {}; }
  static GainFunction Identity() { return GainFunction{GainKind::kIdentity, {}, {}}; }
  static GainFunction AbsoluteLoss() {
    return GainFunction{GainKind::kAbsoluteLoss, {}, {}};
  }
  static GainFunction SupportingPrices(
      std::shared_ptr<const SupportingPriceTable> cache = nullptr) {
    return GainFunction{GainKind::kSupportingPrices, {}, std::move(cache)};
  }
  static GainFunction Explicit(std::map<Bundle, std::map<Bundle, Rational>> t) {
    return GainFunction{GainKind::kExplicit, std::move(t), {}};
  }
};

namespace internal {

inline bool IsSubset(Bundle z, Bundle x) { return (z & ~x) == 0; }

inline Rational PriceOf(const std::vector<Rational>& p, Bundle z) {
  Rational s = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (Contains(z, j)) s += p[j];
  }
  return s;
}

inline bool SatisfiesSupport(const GeneralValuation& v, Bundle x,
                             const std::vector<Rational>& p) {
  if (PriceOf(p, x) != v(x)) return false;
  for (Bundle z = x; z != 0; z = (z - 1) & x) {
    if (PriceOf(p, z) > v(z)) return false;
  }
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] < 0 || (!Contains(x, j) && p[j] != 0)) return false;
  }
  return true;
}

}  // namespace internal

// Supporting prices for X: the uniform clause v(X)/|X| when it works, else
// the exact LP optimum. Verified against both support conditions.
inline std::vector<Rational> SupportingPriceVector(const GeneralValuation& v,
                                                   Bundle x) {
  std::vector<Rational> p(v.m(), Rational(0));
  if (x == 0) return p;
  const Rational share = v(x) / internal::Count(static_cast<std::size_t>(Size(x)));
  for (std::size_t j = 0; j < v.m(); ++j) {
    if (Contains(x, j)) p[j] = share;
  }
  if (internal::SatisfiesSupport(v, x, p)) return p;
  std::optional<std::vector<Rational>> lp = SupportingPrices(v, x);
  if (!lp || !internal::SatisfiesSupport(v, x, *lp)) {
    Fail(ErrorCode::kNotXOS,
         "no supporting prices at bundle " + std::to_string(x));
  }
  return *lp;
}

inline std::shared_ptr<const SupportingPriceTable> PrecomputeSupportingPrices(
    const GeneralValuation& v, const std::vector<Bundle>& endowments) {
  auto table = std::make_shared<SupportingPriceTable>();
  for (Bundle x : endowments) {
    if (!table->count(x)) (*table)[x] = SupportingPriceVector(v, x);
  }
  return table;
}

inline Rational GainValue(const GainFunction& g, const GeneralValuation& v,
                          Bundle x, Bundle z) {
  if (!internal::IsSubset(z, x)) {
    Fail(ErrorCode::kIndexOutOfRange, "gain evaluated outside the endowment");
  }
  switch (g.kind) {
    case GainKind::kIdentity:
      return v(z);
    case GainKind::kAbsoluteLoss:
      return v(x) - v(x & ~z);
    case GainKind::kSupportingPrices: {
      if (g.prices) {
        auto it = g.prices->find(x);
        if (it != g.prices->end()) return internal::PriceOf(it->second, z);
      }
      return internal::PriceOf(SupportingPriceVector(v, x), z);
    }
    case GainKind::kExplicit: {
      auto it = g.table.find(x);
      if (it == g.table.end()) return 0;
      auto jt = it->second.find(z);
      return jt == it->second.end() ? Rational(0) : jt->second;
    }
  }
  return 0;
}

// g^X(Z | X \ Z).
inline Rational GainMarginal(const GainFunction& g, const GeneralValuation& v,
                             Bundle x, Bundle z) {
  return GainValue(g, v, x, x) - GainValue(g, v, x, x & ~z);
}

inline GeneralValuation EndowedValuation(const GeneralValuation& base, Bundle x,
                                         const GainFunction& g) {
  GainFunction gain = g;
  if (gain.kind == GainKind::kSupportingPrices &&
      !(gain.prices && gain.prices->count(x))) {
    gain.prices = PrecomputeSupportingPrices(base, {x});
  }
  std::vector<Rational> table(base.table().size());
  std::map<Bundle, Rational> memo;
  for (Bundle y = 0; y < table.size(); ++y) {
    const Bundle z = x & y;
    auto it = memo.find(z);
    if (it == memo.end()) it = memo.emplace(z, GainValue(gain, base, x, z)).first;
    table[y] = base(y) + it->second;
  }
  return GeneralValuation(base.m(), std::move(table));
}

namespace internal {

inline ValuationProfile RequireGeneral(const ValuationProfile& v,
                                       std::size_t cap, std::string_view what) {
  RequireGeneralSize(v.m(), what);
  if (v.m() > cap) {
    Fail(ErrorCode::kInstanceTooLarge,
         std::string(what) + " needs m <= " + std::to_string(cap));
  }
  return v.ToGeneral();
}

inline const GainFunction& GainFor(const std::vector<GainFunction>& g,
                                   std::size_t i) {
  if (g.size() == 1) return g[0];
  return g.at(i);
}

}  // namespace internal

// gains holds one function per buyer, or a single one shared by all.
inline EquilibriumReport IsEe(const ValuationProfile& v, const Allocation& s,
                              const std::vector<Rational>& prices,
                              const std::vector<GainFunction>& gains) {
  const ValuationProfile gv = internal::RequireGeneral(v, MaxGeneralItems(), "is_ee");
  CheckCompatible(gv, s);
  if (gains.size() != 1 && gains.size() != gv.n()) {
    Fail(ErrorCode::kDimensionMismatch, "need one gain function per buyer");
  }
  std::vector<GeneralValuation> endowed;
  for (std::size_t i = 0; i < gv.n(); ++i) {
    endowed.push_back(
        EndowedValuation(gv.general(i), s.BundleOf(i), internal::GainFor(gains, i)));
  }
  return IsWe(ValuationProfile(std::move(endowed)), s, prices);
}

// Buyer i must gain at least `required` from keeping `lost` on top of the
// rest of her bundle.
struct GainThreshold {
  std::size_t buyer = 0;
  Bundle lost = 0;
  Rational required;
};

struct EeFromTwoPrice {
  std::vector<Rational> prices;
  std::vector<GainFunction> gains;
  std::vector<GainThreshold> thresholds;
  EquilibriumReport report;
};

inline EeFromTwoPrice TwoPeToEe(const ValuationProfile& v, const Allocation& s,
                                const TwoPriceSystem& p) {
  const ValuationProfile gv = internal::RequireGeneral(v, MaxGeneralItems(), "2pe_to_ee");
  CheckCompatible(gv, s);
  p.Validate(gv.m());
  if (!Is2pe(gv, s, p).holds) {
    Fail(ErrorCode::kNotAnEquilibrium, "input is not a 2PE");
  }
  std::vector<Rational> delta(gv.m());
  for (std::size_t j = 0; j < gv.m(); ++j) delta[j] = p.high[j] - p.low[j];

  EeFromTwoPrice out;
  out.prices = p.high;
  for (std::size_t i = 0; i < gv.n(); ++i) {
    const Bundle x = s.BundleOf(i);
    std::map<Bundle, Rational> g;
    g[0] = 0;
    for (Bundle z = x; z != 0; z = (z - 1) & x) {
      g[z] = internal::PriceOf(delta, z);
      out.thresholds.push_back(GainThreshold{i, z, g[z]});
    }
    out.gains.push_back(GainFunction::Explicit({{x, std::move(g)}}));
  }
  out.report = IsEe(gv, s, out.prices, out.gains);
  if (!out.report.holds) {
    Fail(ErrorCode::kNotAnEquilibrium, "canonical gain did not yield an EE");
  }
  return out;
}

struct TwoPriceFromEe {
  TwoPriceSystem zero_low;  // (p̂, 0)
  TwoPriceSystem best;      // largest low prices found
  EquilibriumReport report;
};

namespace internal {

// Low prices on x are safe iff for every Z within x,
// l(Z) <= max{0, p̂(Z) - g(Z | x \ Z)}.
inline bool LowPricesSafe(const GeneralValuation& v, Bundle x,
                          const std::vector<Rational>& high,
                          const std::vector<Rational>& low,
                          const GainFunction& g) {
  for (Bundle z = x; z != 0; z = (z - 1) & x) {
    Rational cap = PriceOf(high, z) - GainMarginal(g, v, x, z);
    if (cap < 0) cap = 0;
    if (PriceOf(low, z) > cap) return false;
  }
  return true;
}

}  // namespace internal

// Per buyer, two candidates are scanned: the largest uniform low price and
// the per-item price p̂_j - g(j | rest). The valid one with the larger total
// is kept; zero low prices are always valid.
inline TwoPriceFromEe EeTo2pe(const ValuationProfile& v, const Allocation& s,
                              const std::vector<Rational>& high,
                              const std::vector<GainFunction>& gains) {
  const ValuationProfile gv = internal::RequireGeneral(v, MaxGeneralItems(), "ee_to_2pe");
  if (!IsEe(gv, s, high, gains).holds) {
    Fail(ErrorCode::kNotAnEquilibrium, "input is not an EE");
  }
  const std::size_t m = gv.m();
  TwoPriceFromEe out;
  out.zero_low = TwoPriceSystem{high, std::vector<Rational>(m, Rational(0))};
  out.best = out.zero_low;
  for (std::size_t i = 0; i < gv.n(); ++i) {
    const Bundle x = s.BundleOf(i);
    if (x == 0) continue;
    const GeneralValuation& vi = gv.general(i);
    const GainFunction& g = internal::GainFor(gains, i);

    std::optional<Rational> c;
    for (Bundle z = x; z != 0; z = (z - 1) & x) {
      Rational cap = internal::PriceOf(high, z) - GainMarginal(g, vi, x, z);
      if (cap < 0) cap = 0;
      cap /= internal::Count(static_cast<std::size_t>(Size(z)));
      if (!c || cap < *c) c = cap;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (Contains(x, j) && high[j] < *c) c = high[j];
    }
    std::vector<Rational> uniform(m), marginal(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (!Contains(x, j)) continue;
      uniform[j] = *c;
      Rational l = high[j] - GainMarginal(g, vi, x, Bundle{1} << j);
      marginal[j] = l < 0 ? Rational(0) : (l > high[j] ? high[j] : l);
    }
    const std::vector<Rational>* pick = &uniform;
    if (internal::LowPricesSafe(vi, x, high, marginal, g) &&
        internal::PriceOf(marginal, x) > internal::PriceOf(uniform, x)) {
      pick = &marginal;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (Contains(x, j)) out.best.low[j] = (*pick)[j];
    }
  }
  if (!Is2pe(gv, s, out.zero_low).holds) {
    Fail(ErrorCode::kNotAnEquilibrium, "(p̂, 0) failed 2PE verification");
  }
  out.report = Is2pe(gv, s, out.best);
  if (!out.report.holds) {
    Fail(ErrorCode::kNotAnEquilibrium, "recovered low prices failed 2PE verification");
  }
  return out;
}

// ID <= SP <= AL marginals over every Z within X, for the given prices.
inline bool GainOrderHolds(const GeneralValuation& v, Bundle x,
                           const std::vector<Rational>& prices) {
  for (Bundle z = x;; z = (z - 1) & x) {
    const Rational id = v(x) - v(x & ~z);
    const Rational sp = internal::PriceOf(prices, z);
    const Rational al = v(z);
    if (id > sp || sp > al) return false;
    if (z == 0) break;
  }
  return true;
}

inline bool GainOrderCheck(const GeneralValuation& v, Bundle x) {
  if (v.m() > 16) Fail(ErrorCode::kInstanceTooLarge, "gain_order_check needs m <= 16");
  if (!IsXOS(v)) Fail(ErrorCode::kNotXOS, "gain order needs an XOS valuation");
  return GainOrderHolds(v, x, SupportingPriceVector(v, x));
}

struct XosEe {
  Allocation allocation;
  std::vector<Rational> prices;
  std::vector<GainFunction> gains;
  EquilibriumReport two_price;
  EquilibriumReport endowment;
};

// Welfare-optimal allocation priced at each winner's supporting prices.
inline XosEe XosEeExists(const ValuationProfile& v) {
  const ValuationProfile gv = internal::RequireGeneral(v, 16, "xos_ee_exists");
  for (std::size_t i = 0; i < gv.n(); ++i) {
    if (!IsXOS(gv.general(i))) {
      Fail(ErrorCode::kNotXOS, "buyer " + std::to_string(i) + " is not XOS");
    }
  }
  XosEe out;
  out.allocation = OptWelfare(gv).allocation;
  out.prices.assign(gv.m(), Rational(0));
  for (std::size_t i = 0; i < gv.n(); ++i) {
    const Bundle x = out.allocation.BundleOf(i);
    auto cache = PrecomputeSupportingPrices(gv.general(i), {x});
    const std::vector<Rational>& p = cache->at(x);
    for (std::size_t j = 0; j < gv.m(); ++j) {
      if (Contains(x, j)) out.prices[j] = p[j];
    }
    out.gains.push_back(GainFunction::SupportingPrices(std::move(cache)));
  }
  const TwoPriceSystem zero{out.prices, std::vector<Rational>(gv.m(), Rational(0))};
  out.two_price = Is2pe(gv, out.allocation, zero);
  out.endowment = IsEe(gv, out.allocation, out.prices, out.gains);
  if (!out.two_price.holds || !out.endowment.holds) {
    Fail(ErrorCode::kNotAnEquilibrium, "supporting-price construction failed");
  }
  return out;
}

}  // namespace twoprice

#endif  // TWOPRICE_ENDOWMENT_HPP_
