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

// Runners for the published reference results. Each returns the computed
// table plus the first cell that disagrees with the published value.

#ifndef TWOPRICE_FIXTURES_HPP_
#define TWOPRICE_FIXTURES_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "twoprice/equilibrium.hpp"
#include "twoprice/error.hpp"
#include "twoprice/instances.hpp"
#include "twoprice/io.hpp"

namespace twoprice {

struct FixtureResult {
  std::string name;
  io::Json results;
  std::optional<std::string> mismatch;

  bool passed() const { return !mismatch; }
  void Require() const {
    if (mismatch) Fail(ErrorCode::kFixtureFailed, name + ": " + *mismatch);
  }
};

inline constexpr std::array<std::string_view, 4> kFixtures = {
    "table1", "thm7.2", "ex3.2", "prop4.3"};

namespace internal {

inline void Expect(FixtureResult& r, const std::string& cell,
                   const Rational& got, std::string_view want) {
  if (r.mismatch || want.empty()) return;
  if (got != ParseRational(want)) {
    r.mismatch = cell + ": got " + ToString(got) + ", expected " + std::string(want);
  }
}

inline void Expect(FixtureResult& r, const std::string& cell, bool ok) {
  if (!r.mismatch && !ok) r.mismatch = cell;
}

}  // namespace internal

inline FixtureResult ReproduceSplitTable() {
  FixtureResult r{"table1", io::Json::object(), std::nullopt};
  const SymmetricValuation v = SixStepValuation();
  const ValuationProfile market = ValuationProfile::Identical(v, 2);
  const SlopeTable s(v);
  const std::size_t m = v.m();
  auto fwd = [&](std::size_t k) -> io::Json {
    return k == m ? io::Json("n.a.") : io::Encode(s.Forward(k));
  };
  auto bwd = [&](std::size_t k) -> io::Json {
    return k == 0 ? io::Json("n.a.") : io::Encode(s.Backward(k));
  };
  io::Json rows = io::Json::array();
  std::optional<Rational> best;
  for (const SplitTableRow& row : kSplitTable) {
    const std::vector<std::size_t> counts = {row.k1, row.k2};
    const UniformPrices u = U2peSufficientPrices(market, counts);
    const Rational d = Discrepancy(market, Allocation::FromCounts(counts),
                                   u.Expand(Allocation::FromCounts(counts)));
    const std::string tag = "row (" + std::to_string(row.k1) + "," +
                            std::to_string(row.k2) + ") ";
    internal::Expect(r, tag + "feasibility", U2peFeasible(market, counts, u).holds);
    internal::Expect(r, tag + "high1", u.high[0], row.k1 ? row.high1 : "");
    internal::Expect(r, tag + "high2", u.high[1], row.high2);
    internal::Expect(r, tag + "low1", u.low[0], row.k1 ? row.low1 : "");
    internal::Expect(r, tag + "low2", u.low[1], row.low2);
    internal::Expect(r, tag + "d", d, row.d);
    if (!best || d < *best) best = d;

    io::Json j;
    j["k1"] = row.k1;
    j["k2"] = row.k2;
    j["forward1"] = fwd(row.k1);
    j["backward1"] = bwd(row.k1);
    j["forward2"] = fwd(row.k2);
    j["backward2"] = bwd(row.k2);
    j["high"] = io::Encode(u.high);
    j["low"] = io::Encode(u.low);
    j["discrepancy"] = io::Encode(d);
    rows.push_back(std::move(j));
  }
  internal::Expect(r, "minimum d", *best, "6/5");
  r.results["rows"] = std::move(rows);
  r.results["min_discrepancy"] = io::Encode(*best);
  return r;
}

inline FixtureResult ReproduceLargeScan() {
  FixtureResult r{"thm7.2", io::Json::object(), std::nullopt};
  const SymmetricValuation v = ThreePieceValuation();
  const ValuationProfile market = ValuationProfile::Identical(v, 2);
  internal::Expect(r, "valuation is subadditive", IsSubadditive(v));

  const DiscrepancyOptimum opt = MinDiscrepancy(market);
  const std::size_t k1 = opt.counts[0];
  r.results["m"] = v.m();
  r.results["splits"] = v.m() + 1;
  r.results["argmin"] = opt.counts;
  r.results["min_discrepancy"] = io::Encode(opt.discrepancy);
  r.results["min_discrepancy_approx"] = ToDouble(opt.discrepancy);
  r.results["high"] = io::Encode(opt.prices.high);
  r.results["low"] = io::Encode(opt.prices.low);
  r.results["exact"] = opt.exact;

  internal::Expect(r, "argmin split " + std::to_string(k1) + " not in {1, 3460}",
                   k1 == 1 || k1 == v.m() - 1);
  internal::Expect(r, "min d " + ToString(opt.discrepancy) + " not above 1.3895",
                   opt.discrepancy > ParseRational("1.3895"));
  internal::Expect(r, "min d " + ToString(opt.discrepancy) + " not below 1.39",
                   opt.discrepancy < ParseRational("1.39"));
  return r;
}

inline FixtureResult ReproduceNoCe() {
  FixtureResult r{"ex3.2", io::Json::object(), std::nullopt};
  const ValuationProfile v = NoCeProfile();
  const Allocation s = Allocation::FromBundles({15, 0}, 4);
  const TwoPriceSystem p =
      TwoPriceSystem::Constant(4, MakeRational(9, 10), MakeRational(1, 3));
  const bool no_ce = !CeExists(v).has_value();
  const EquilibriumReport two = Is2pe(v, s, p);
  const Rational d = Discrepancy(v, s, p);
  r.results["ce_exists"] = !no_ce;
  r.results["equilibrium"] = io::EquilibriumToJson(s, p);
  r.results["is_2pe"] = io::ReportToJson(two);
  r.results["discrepancy"] = io::Encode(d);
  internal::Expect(r, "a CE exists", no_ce);
  internal::Expect(r, "stated 2PE fails", two.holds);
  internal::Expect(r, "d", d, "17/15");
  return r;
}

inline FixtureResult ReproduceCrossedUnitDemand() {
  FixtureResult r{"prop4.3", io::Json::object(), std::nullopt};
  const ValuationProfile v = CrossedUnitDemandProfile();
  const Allocation s = Allocation::FromBundles({2, 1}, 2);
  const std::vector<Rational> p = {Rational(1), Rational(1)};
  const TwoPriceSystem zero{p, {Rational(0), Rational(0)}};
  const EquilibriumReport ce = IsCe(v, s, p);
  const Rational d = Discrepancy(v, s, zero);
  r.results["equilibrium"] = io::EquilibriumToJson(s, zero);
  r.results["is_ce"] = io::ReportToJson(ce);
  r.results["discrepancy"] = io::Encode(d);
  internal::Expect(r, "CE fails", ce.holds);
  internal::Expect(r, "(p, 0) is not a 2PE", Is2pe(v, s, zero).holds);
  internal::Expect(r, "d", d, "1");
  return r;
}

inline FixtureResult Reproduce(std::string_view name) {
  if (name == "table1") return ReproduceSplitTable();
  if (name == "thm7.2") return ReproduceLargeScan();
  if (name == "ex3.2") return ReproduceNoCe();
  if (name == "prop4.3") return ReproduceCrossedUnitDemand();
  Fail(ErrorCode::kUnknownInstance, "unknown fixture '" + std::string(name) + "'");
}

}  // namespace twoprice

#endif  // TWOPRICE_FIXTURES_HPP_
