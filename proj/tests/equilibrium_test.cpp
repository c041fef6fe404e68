#include "twoprice/equilibrium.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <set>
#include <vector>

#include "oracles.hpp"
#include "twoprice/geometry.hpp"
#include "twoprice/instances.hpp"

namespace {

using namespace twoprice;
using oracle::Q;

std::vector<Rational> RandomPrices(std::mt19937_64& rng, std::size_t m, int max_num) {
  std::vector<Rational> p(m);
  for (auto& x : p) x = Q(oracle::Draw(rng, 0, max_num), oracle::Draw(rng, 1, 3));
  return p;
}

TwoPriceSystem RandomSystem(std::mt19937_64& rng, std::size_t m) {
  TwoPriceSystem p;
  p.high = RandomPrices(rng, m, 8);
  for (const Rational& h : p.high) {
    p.low.push_back(oracle::Draw(rng, 0, 2) == 0 ? h : Rational(h * Q(oracle::Draw(rng, 0, 3), 3)));
  }
  return p;
}

Allocation RandomAllocation(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::vector<std::size_t> owner(m);
  for (auto& o : owner) o = static_cast<std::size_t>(oracle::Draw(rng, 0, static_cast<std::int64_t>(n) - 1));
  return Allocation::FromOwners(owner, n);
}

ValuationProfile RandomSymmetricProfile(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::vector<SymmetricValuation> vs;
  for (std::size_t i = 0; i < n; ++i) vs.push_back(oracle::RandomMonotone(rng, m, 4));
  return ValuationProfile(vs);
}

ValuationProfile RandomGeneralProfile(std::mt19937_64& rng, std::size_t n, std::size_t m) {
  std::vector<GeneralValuation> vs;
  for (std::size_t i = 0; i < n; ++i) vs.push_back(oracle::RandomGeneral(rng, m));
  return ValuationProfile(vs);
}

TEST(Equilibrium, Is2peMatchesOracleSymmetric) {
  std::mt19937_64 rng(1);
  int holds = 0;
  for (int t = 0; t < 1500; ++t) {
    const std::size_t n = 1 + t % 3;
    const std::size_t m = 1 + t % 6;
    auto v = RandomSymmetricProfile(rng, n, m);
    auto s = RandomAllocation(rng, n, m);
    auto p = RandomSystem(rng, m);
    const bool want = oracle::Is2pe(v, s, p);
    ASSERT_EQ(Is2pe(v, s, p).holds, want) << "trial " << t;
    holds += want;
  }
  EXPECT_GT(holds, 20);
}

TEST(Equilibrium, Is2peMatchesOracleGeneral) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 800; ++t) {
    const std::size_t n = 1 + t % 3;
    const std::size_t m = 1 + t % 5;
    auto v = RandomGeneralProfile(rng, n, m);
    auto s = RandomAllocation(rng, n, m);
    auto p = RandomSystem(rng, m);
    const EquilibriumReport r = Is2pe(v, s, p);
    ASSERT_EQ(r.holds, oracle::Is2pe(v, s, p)) << "trial " << t;
    if (!r.holds) {
      ASSERT_TRUE(r.witness.has_value());
      EXPECT_GT(r.witness->rhs, r.witness->lhs);
    }
  }
}

TEST(Equilibrium, WeAndCeMatchOracle) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 800; ++t) {
    const std::size_t n = 1 + t % 3;
    const std::size_t m = 1 + t % 5;
    auto v = t % 2 ? RandomSymmetricProfile(rng, n, m) : RandomGeneralProfile(rng, n, m);
    auto s = RandomAllocation(rng, n, m);
    auto p = RandomPrices(rng, m, 6);
    ASSERT_EQ(IsWe(v, s, p).holds, oracle::IsWe(v, s, p)) << "trial " << t;
    ASSERT_EQ(IsCe(v, s, p).holds, oracle::IsCe(v, s, p)) << "trial " << t;
  }
}

TEST(Equilibrium, ZeroPricesCe) {
  // At zero prices the only question is whether someone gains by grabbing more.
  auto v = ValuationProfile::Identical(SymmetricValuation::FromInts({0, 1, 2}), 2);
  auto s = Allocation::FromCounts({1, 1});
  EXPECT_FALSE(IsCe(v, s, {Q(0), Q(0)}).holds);
  auto u = ValuationProfile::Identical(SymmetricValuation::FromInts({0, 1, 1}), 2);
  EXPECT_TRUE(IsCe(u, s, {Q(0), Q(0)}).holds);
}

// A CE is a 2PE at zero low prices; the converse needs individual
// rationality, which zero low prices cannot enforce.
TEST(Equilibrium, CeVersusZeroLowTwoPrice) {
  std::mt19937_64 rng(4);
  int ir_only = 0;
  for (int t = 0; t < 1500; ++t) {
    const std::size_t n = 1 + t % 3;
    const std::size_t m = 1 + t % 4;
    auto v = t % 2 ? RandomSymmetricProfile(rng, n, m) : RandomGeneralProfile(rng, n, m);
    auto s = RandomAllocation(rng, n, m);
    auto p = RandomPrices(rng, m, 6);
    const TwoPriceSystem zero{p, std::vector<Rational>(m, Q(0))};
    const bool ce = IsCe(v, s, p).holds;
    const bool two = Is2pe(v, s, zero).holds;
    if (ce) ASSERT_TRUE(two);
    if (two && !ce) {
      const EquilibriumReport r = IsCe(v, s, p);
      ASSERT_EQ(r.witness->condition, "individual rationality");
      ++ir_only;
    }
  }
  auto one = ValuationProfile(std::vector<SymmetricValuation>{SymmetricValuation::FromInts({0, 1})});
  auto s = Allocation::FromCounts({1});
  EXPECT_TRUE(Is2pe(one, s, TwoPriceSystem{{Q(5)}, {Q(0)}}).holds);
  EXPECT_FALSE(IsCe(one, s, {Q(5)}).holds);
  EXPECT_GT(ir_only, 0);
}

TEST(Equilibrium, OptWelfareMatchesOracle) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + t % 3;
    const std::size_t m = 1 + t % 6;
    auto v = t % 2 ? RandomSymmetricProfile(rng, n, m) : RandomGeneralProfile(rng, n, m);
    const WelfareOptimum opt = OptWelfare(v);
    ASSERT_EQ(opt.value, oracle::OptWelfare(v)) << "trial " << t;
    ASSERT_EQ(Welfare(v, opt.allocation), opt.value);
  }
}

TEST(Equilibrium, DiscrepancyAndErrors) {
  auto v = NoCeProfile();
  auto s = Allocation::FromBundles({15, 0}, 4);
  auto p = TwoPriceSystem::Constant(4, Q(9, 10), Q(1, 3));
  EXPECT_EQ(Discrepancy(v, s, p), Q(17, 15));
  auto zero = ValuationProfile::Identical(SymmetricValuation::FromInts({0, 0}), 1);
  try {
    Discrepancy(zero, Allocation::FromCounts({1}), TwoPriceSystem::Constant(1, Q(0), Q(0)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroWelfare);
  }
  try {
    Is2pe(v, s, TwoPriceSystem::Constant(4, Q(1, 3), Q(9, 10)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPriceOrderViolation);
  }
}

TEST(Equilibrium, NoCeExample) {
  auto v = NoCeProfile();
  EXPECT_FALSE(CeExists(v).has_value());
  EXPECT_FALSE(WeExistsGeneral(v).has_value());
  auto s = Allocation::FromBundles({15, 0}, 4);
  EXPECT_TRUE(Is2pe(v, s, TwoPriceSystem::Constant(4, Q(9, 10), Q(1, 3))).holds);
  const PricedEquilibrium b = OptDiscrepancyUpperBound(v);
  EXPECT_EQ(b.discrepancy, 4);
}

TEST(Equilibrium, CrossedUnitDemandCe) {
  auto v = CrossedUnitDemandProfile();
  auto s = Allocation::FromBundles({2, 1}, 2);
  EXPECT_TRUE(IsCe(v, s, {Q(1), Q(1)}).holds);
  EXPECT_EQ(Discrepancy(v, s, TwoPriceSystem{{Q(1), Q(1)}, {Q(0), Q(0)}}), 1);
  auto found = CeExists(v);
  ASSERT_TRUE(found.has_value());
  EXPECT_TRUE(oracle::IsCe(v, found->allocation, found->prices));
}

TEST(Equilibrium, ExistenceSearchResultsVerify) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 60; ++t) {
    auto v = RandomGeneralProfile(rng, 2, 1 + t % 3);
    if (auto ce = CeExists(v)) {
      EXPECT_TRUE(oracle::IsCe(v, ce->allocation, ce->prices));
      if (Welfare(v, ce->allocation) == 0) continue;
      EXPECT_LE(Discrepancy(v, ce->allocation,
                            TwoPriceSystem{ce->prices, std::vector<Rational>(v.m(), Q(0))}),
                1);
    }
    if (auto we = WeExistsGeneral(v)) {
      EXPECT_TRUE(oracle::IsWe(v, we->allocation, we->prices));
      EXPECT_EQ(Welfare(v, we->allocation), oracle::OptWelfare(v));
    }
  }
}

// Every 2PE met in random search satisfies SW (1 + d) >= OPT.
TEST(Equilibrium, WelfareBoundOnRandomTwoPrice) {
  std::mt19937_64 rng(7);
  int seen = 0;
  for (int t = 0; t < 3000; ++t) {
    const std::size_t n = 1 + t % 3;
    const std::size_t m = 1 + t % 5;
    auto v = t % 2 ? RandomSymmetricProfile(rng, n, m) : RandomGeneralProfile(rng, n, m);
    auto s = RandomAllocation(rng, n, m);
    auto p = RandomSystem(rng, m);
    if (!oracle::Is2pe(v, s, p) || Welfare(v, s) == 0) continue;
    ++seen;
    ASSERT_TRUE(WelfareBoundCheck(v, s, p));
  }
  EXPECT_GT(seen, 50);
}

TEST(Equilibrium, UniformizeKeepsEquilibrium) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t m = 1 + t % 5;
    auto v = RandomSymmetricProfile(rng, 1 + t % 3, m);
    auto s = RandomAllocation(rng, v.n(), m);
    auto p = RandomSystem(rng, m);
    if (!oracle::Is2pe(v, s, p)) continue;
    auto [u, report] = Uniformize(v, s, p);
    EXPECT_EQ(u.Gap(), p.Gap());
    EXPECT_EQ(report.holds, oracle::Is2pe(v, s, u));
  }
}

TEST(Equilibrium, SplitTable) {
  const auto start = std::chrono::steady_clock::now();
  auto v = ValuationProfile::Identical(SixStepValuation(), 2);
  Rational best = 100;
  for (const SplitTableRow& row : kSplitTable) {
    const std::vector<std::size_t> counts = {row.k1, row.k2};
    const UniformPrices u = U2peSufficientPrices(v, counts);
    const Allocation s = Allocation::FromCounts(counts);
    const TwoPriceSystem p = u.Expand(s);
    EXPECT_TRUE(U2peFeasible(v, counts, u).holds);
    EXPECT_TRUE(Is2pe(v, s, p).holds);
    const Rational d = Discrepancy(v, s, p);
    EXPECT_EQ(d, ParseRational(row.d)) << row.k1;
    EXPECT_EQ(u.high[1], ParseRational(row.high2));
    EXPECT_EQ(u.low[1], ParseRational(row.low2));
    if (row.k1 > 0) {
      EXPECT_EQ(u.high[0], ParseRational(row.high1));
      EXPECT_EQ(u.low[0], ParseRational(row.low1));
    }
    best = std::min(best, d);
  }
  EXPECT_EQ(best, Q(6, 5));
  const DiscrepancyOptimum opt = MinDiscrepancy(v);
  EXPECT_EQ(opt.discrepancy, Q(6, 5));
  EXPECT_EQ(opt.counts, (std::vector<std::size_t>{6, 21}));
  EXPECT_TRUE(opt.exact);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(1));
}

// Uniform-price feasibility is sufficient for a 2PE.
TEST(Equilibrium, U2peFeasibleIsSound) {
  std::mt19937_64 rng(9);
  int feasible = 0;
  for (int t = 0; t < 3000; ++t) {
    const std::size_t n = 2 + t % 2;
    const std::size_t m = 2 + t % 5;
    auto v = RandomSymmetricProfile(rng, n, m);
    std::vector<std::size_t> counts(n, 0);
    for (std::size_t j = 0; j < m; ++j) ++counts[static_cast<std::size_t>(oracle::Draw(rng, 0, n - 1))];
    UniformPrices u;
    for (std::size_t i = 0; i < n; ++i) {
      Rational h = Q(oracle::Draw(rng, 0, 6), oracle::Draw(rng, 1, 2));
      u.high.push_back(h);
      u.low.push_back(h * Q(oracle::Draw(rng, 0, 2), 2));
    }
    const Allocation s = Allocation::FromCounts(counts);
    if (U2peFeasible(v, counts, u).holds) {
      ++feasible;
      ASSERT_TRUE(oracle::Is2pe(v, s, u.Expand(s))) << "trial " << t;
    }
    const UniformPrices c = U2peSufficientPrices(v, counts);
    if (U2peFeasible(v, counts, c).holds) ASSERT_TRUE(oracle::Is2pe(v, s, c.Expand(s)));
  }
  EXPECT_GT(feasible, 50);
}

// Two buyers: the exact minimizer against a grid made of every slope value.
TEST(Equilibrium, TwoBuyerMinimumMatchesGrid) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 120; ++t) {
    const std::size_t m = 1 + t % 5;
    auto v = RandomSymmetricProfile(rng, 2, m);
    bool positive = false;
    oracle::ForEachComposition(m, 2, [&](const std::vector<std::size_t>& c) {
      positive |= v.symmetric(0)(c[0]) + v.symmetric(1)(c[1]) > 0;
    });
    if (!positive) continue;
    std::set<Rational> pool = {Q(0)};
    for (std::size_t i = 0; i < 2; ++i) {
      for (const Rational& x : ForwardSlopeValues(v.symmetric(i))) pool.insert(x);
      for (const Rational& x : BackwardSlopeValues(v.symmetric(i))) pool.insert(x);
    }
    std::optional<Rational> best;
    oracle::ForEachComposition(m, 2, [&](const std::vector<std::size_t>& c) {
      const Rational sw = v.symmetric(0)(c[0]) + v.symmetric(1)(c[1]);
      if (sw == 0) return;
      const Allocation s = Allocation::FromCounts(c);
      for (const Rational& h0 : pool) {
        for (const Rational& h1 : pool) {
          for (const Rational& l0 : pool) {
            if (l0 > h0) continue;
            for (const Rational& l1 : pool) {
              if (l1 > h1) continue;
              UniformPrices u{{h0, h1}, {l0, l1}};
              const Rational d = u.Gap(c) / sw;
              if (best && d >= *best) continue;
              if (oracle::Is2pe(v, s, u.Expand(s))) best = d;
            }
          }
        }
      }
    });
    const DiscrepancyOptimum opt = MinDiscrepancy(v);
    ASSERT_TRUE(best.has_value());
    ASSERT_EQ(opt.discrepancy, *best) << "trial " << t;
    const Allocation s = Allocation::FromCounts(opt.counts);
    ASSERT_TRUE(oracle::Is2pe(v, s, opt.prices.Expand(s)));
    ASSERT_TRUE(opt.exact);
  }
}

TEST(Equilibrium, CanonicalPricesAreNotAlwaysMinimal) {
  auto v = ValuationProfile(std::vector<SymmetricValuation>{
      SymmetricValuation::FromInts({0, 10, 20, 21}), SymmetricValuation::FromInts({0, 5, 9, 12})});
  const std::vector<std::size_t> counts = {2, 1};
  const UniformPrices c = U2peSufficientPrices(v, counts);
  const std::vector<SlopeTable> slopes = {SlopeTable(v.symmetric(0)), SlopeTable(v.symmetric(1))};
  const auto [u, gap] = internal::TwoBuyerOptimum(slopes, 2, 1);
  EXPECT_LT(gap, c.Gap(counts));
  const Allocation s = Allocation::FromCounts(counts);
  EXPECT_TRUE(oracle::Is2pe(v, s, u.Expand(s)));
}

TEST(Equilibrium, MinDiscrepancyHeuristicForManyBuyers) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    auto v = RandomSymmetricProfile(rng, 3, 2 + t % 4);
    if (v.FullValue(0) + v.FullValue(1) + v.FullValue(2) == 0) continue;
    try {
      const DiscrepancyOptimum opt = MinDiscrepancy(v);
      EXPECT_FALSE(opt.exact);
      const Allocation s = Allocation::FromCounts(opt.counts);
      EXPECT_TRUE(oracle::Is2pe(v, s, opt.prices.Expand(s)));
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNotAnEquilibrium);
    }
  }
}

// The published minimum at the split (1, 3460) uses a low price of 1 for the
// single-item buyer, above the other bundle's high price of 1/30, so that
// buyer would swap her item for 29 of the other's. The best valid uniform
// system is 2077/1494 at (495, 2966).
TEST(Equilibrium, LargeInstanceScan) {
  const SymmetricValuation v = ThreePieceValuation();
  EXPECT_TRUE(IsSubadditive(v));
  const ValuationProfile market = ValuationProfile::Identical(v, 2);
  const DiscrepancyOptimum opt = MinDiscrepancy(market);
  EXPECT_EQ(opt.discrepancy, Q(2077, 1494));
  EXPECT_EQ(opt.counts, (std::vector<std::size_t>{495, 2966}));
  EXPECT_GT(opt.discrepancy, ParseRational("1.3895"));

  const SlopeTable s(v);
  const std::vector<std::size_t> counts = {1, 3460};
  UniformPrices uncapped{{s.Forward(3460), s.Forward(1)}, {s.Backward(1), s.Backward(3460)}};
  const Allocation a = Allocation::FromCounts(counts);
  const Rational d = uncapped.Gap(counts) / (v(1) + v(3460));
  EXPECT_GT(d, ParseRational("1.3895"));
  EXPECT_LT(d, ParseRational("1.39"));
  const EquilibriumReport r = Is2pe(market, a, uncapped.Expand(a));
  EXPECT_FALSE(r.holds);
  EXPECT_FALSE(U2peFeasible(market, counts, uncapped).holds);
}

TEST(Equilibrium, WeExistsSymmetricMatchesExhaustive) {
  std::mt19937_64 rng(12);
  int found = 0;
  for (int t = 0; t < 600; ++t) {
    const std::size_t n = 1 + t % 3;
    const std::size_t m = 1 + t % 12;
    std::vector<SymmetricValuation> vs;
    for (std::size_t i = 0; i < n; ++i) {
      vs.push_back(t % 3 == 0 ? RandomSymmetric(m, ValuationClass::kSubmodular, static_cast<std::uint64_t>(t * 7 + i))
                              : oracle::RandomSubadditive(rng, m, 3));
    }
    const ValuationProfile v(vs);
    std::set<Rational> prices = {Q(0)};
    for (const auto& vi : vs) {
      for (const Rational& x : ForwardSlopeValues(vi)) prices.insert(x);
      for (const Rational& x : BackwardSlopeValues(vi)) prices.insert(x);
    }
    bool exists = false;
    oracle::ForEachComposition(m, n, [&](const std::vector<std::size_t>& c) {
      if (exists) return;
      for (const Rational& p : prices) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
          const Rational own = vs[i](c[i]) - p * Q(static_cast<long>(c[i]));
          for (std::size_t k = 0; k <= m && ok; ++k) {
            ok = vs[i](k) - p * Q(static_cast<long>(k)) <= own;
          }
        }
        if (ok) {
          exists = true;
          return;
        }
      }
    });
    const auto we = WeExistsSymmetric(v);
    ASSERT_EQ(we.has_value(), exists) << "trial " << t;
    if (we) {
      ++found;
      ASSERT_TRUE(IsWe(v, we->allocation, std::vector<Rational>(m, we->price)).holds);
      ASSERT_EQ(Welfare(v, we->allocation), oracle::OptWelfareCounts(vs, m));
    }
  }
  EXPECT_GT(found, 50);
  EXPECT_FALSE(WeExistsSymmetric(ValuationProfile::Identical(SixStepValuation(), 2)).has_value());
}

TEST(Equilibrium, OptimalAllocationBoundOnGeneralMarkets) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 120; ++t) {
    const std::size_t m = 1 + t % 10;
    const std::size_t n = 2 + t % 2;
    std::vector<GeneralValuation> vs;
    for (std::size_t i = 0; i < n; ++i) vs.push_back(oracle::RandomGeneral(rng, m, 3));
    const ValuationProfile v(vs);
    if (OptWelfare(v).value == 0) continue;
    const PricedEquilibrium e = OptDiscrepancyUpperBound(v);
    if (m <= 7) ASSERT_TRUE(oracle::Is2pe(v, e.allocation, e.prices));
    ASSERT_LE(e.discrepancy, Q(static_cast<long>(m)));
  }
}

}  // namespace
