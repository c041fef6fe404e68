#include "twoprice/valuation.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "twoprice/instances.hpp"

namespace {

using namespace twoprice;
using oracle::Q;

bool Has(const ClassSet& s, ValuationClass c) { return s.count(c) > 0; }

TEST(Valuation, RejectsInvalidSymmetric) {
  EXPECT_THROW(SymmetricValuation({Q(1), Q(2)}), Error);
  EXPECT_THROW(SymmetricValuation({Q(0), Q(2), Q(1)}), Error);
  EXPECT_THROW(SymmetricValuation({Q(0)}), Error);
  try {
    SymmetricValuation({Q(0), Q(2), Q(1)});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidValuation);
  }
}

TEST(Valuation, RejectsInvalidGeneral) {
  EXPECT_THROW(GeneralValuation(2, {Q(0), Q(1), Q(1)}), Error);
  EXPECT_THROW(GeneralValuation(2, {Q(0), Q(2), Q(1), Q(1)}), Error);
}

TEST(Valuation, GeneralSizeCap) {
  EXPECT_NO_THROW(RequireGeneralSize(20, "x"));
  try {
    RequireGeneralSize(21, "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInstanceTooLarge);
  }
}

TEST(Valuation, ParseRationalForms) {
  EXPECT_EQ(ParseRational("7"), 7);
  EXPECT_EQ(ParseRational("3/6"), Q(1, 2));
  EXPECT_EQ(ParseRational("0.9"), Q(9, 10));
  EXPECT_EQ(ParseRational("-1.25"), Q(-5, 4));
  EXPECT_THROW(ParseRational("1e3"), Error);
  EXPECT_THROW(ParseRational("1/0"), Error);
  EXPECT_THROW(ParseRational(""), Error);
  EXPECT_EQ(ToString(Q(6, 4)), "3/2");
  EXPECT_EQ(ToString(Q(4, 2)), "2");
}

TEST(Valuation, ClassifySymmetricExamples) {
  auto additive = ClassifySymmetric(SymmetricValuation::FromInts({0, 2, 4, 6}));
  EXPECT_TRUE(Has(additive, ValuationClass::kAdditive));
  EXPECT_TRUE(Has(additive, ValuationClass::kSubmodular));
  EXPECT_TRUE(Has(additive, ValuationClass::kXOS));
  EXPECT_TRUE(Has(additive, ValuationClass::kSubadditive));

  auto unit = ClassifySymmetric(SymmetricValuation::FromInts({0, 1, 1, 1}));
  EXPECT_TRUE(Has(unit, ValuationClass::kUnitDemand));
  EXPECT_FALSE(Has(unit, ValuationClass::kAdditive));

  auto ae = ClassifySymmetric(SixStepValuation());
  EXPECT_TRUE(Has(ae, ValuationClass::kSubadditive));
  EXPECT_FALSE(Has(ae, ValuationClass::kXOS));

  auto super = ClassifySymmetric(SymmetricValuation::FromInts({0, 1, 3}));
  EXPECT_TRUE(Has(super, ValuationClass::kGeneral));
  EXPECT_FALSE(Has(super, ValuationClass::kSubadditive));
}

TEST(Valuation, NoCeBuyerOneIsSubadditiveOnly) {
  auto p = NoCeProfile();
  auto c = ClassifyGeneral(p.general(0));
  EXPECT_TRUE(Has(c, ValuationClass::kSubadditive));
  EXPECT_FALSE(Has(c, ValuationClass::kXOS));
  auto c2 = ClassifyGeneral(p.general(1));
  EXPECT_TRUE(Has(c2, ValuationClass::kUnitDemand));
  EXPECT_TRUE(Has(c2, ValuationClass::kXOS));
}

// Symmetric and lifted general classification agree.
TEST(Valuation, SymmetricAndLiftedClassesAgree) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + trial % 6;
    SymmetricValuation v = trial % 2 ? oracle::RandomSubadditive(rng, m)
                                     : oracle::RandomMonotone(rng, m);
    GeneralValuation g = SymmetricToGeneral(v);
    EXPECT_EQ(IsSubadditive(v), IsSubadditive(g));
    EXPECT_EQ(IsSubadditive(v), oracle::Subadditive(v));
    EXPECT_EQ(IsSubmodular(v), IsSubmodular(g));
    EXPECT_EQ(IsXOS(v), IsXOS(g)) << "trial " << trial;
  }
}

TEST(Valuation, GeneralSubadditiveMatchesOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    GeneralValuation g = oracle::RandomGeneral(rng, 1 + trial % 4);
    EXPECT_EQ(IsSubadditive(g), oracle::Subadditive(g));
    GeneralValuation s = oracle::RandomGeneralSubadditive(rng, 1 + trial % 4);
    EXPECT_TRUE(oracle::Subadditive(s));
    EXPECT_TRUE(IsSubadditive(s));
  }
}

TEST(Valuation, SupportingPricesOnRandomXos) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    GeneralValuation g = oracle::RandomXos(rng, 2 + trial % 4);
    EXPECT_TRUE(IsXOS(g));
    for (Bundle s = 0; s <= FullBundle(g.m()); ++s) {
      auto p = SupportingPrices(g, s);
      ASSERT_TRUE(p.has_value());
      Rational total = 0;
      for (std::size_t j = 0; j < g.m(); ++j) {
        if (Contains(s, j)) total += (*p)[j];
        else EXPECT_EQ((*p)[j], 0);
      }
      EXPECT_EQ(total, g(s));
      for (Bundle z = s; z != 0; z = (z - 1) & s) {
        Rational pz = 0;
        for (std::size_t j = 0; j < g.m(); ++j) {
          if (Contains(z, j)) pz += (*p)[j];
        }
        EXPECT_LE(pz, g(z));
      }
    }
  }
}

TEST(Valuation, NonXosHasNoSupportAtFullBundle) {
  auto p = NoCeProfile();
  EXPECT_FALSE(SupportingPrices(p.general(0), 15).has_value());
}

TEST(Valuation, RandomSymmetricRespectsClass) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    for (auto cls : {ValuationClass::kAdditive, ValuationClass::kSubmodular,
                     ValuationClass::kXOS, ValuationClass::kSubadditive}) {
      SymmetricValuation v = RandomSymmetric(1 + seed % 15, cls, seed);
      EXPECT_TRUE(Has(ClassifySymmetric(v), cls)) << ClassName(cls) << " seed " << seed;
      EXPECT_EQ(v, RandomSymmetric(1 + seed % 15, cls, seed));
    }
  }
  EXPECT_THROW(RandomSymmetric(4, ValuationClass::kGeneral, 0), Error);
}

TEST(Valuation, ProfileAccessors) {
  auto v = ValuationProfile::Identical(SymmetricValuation::FromInts({0, 3, 5}), 3);
  EXPECT_EQ(v.n(), 3u);
  EXPECT_EQ(v.m(), 2u);
  EXPECT_TRUE(v.AllIdentical());
  EXPECT_EQ(v.Value(1, 0b11), 5);
  EXPECT_EQ(v.FullValue(2), 5);
  auto g = v.ToGeneral();
  EXPECT_FALSE(g.is_symmetric());
  EXPECT_EQ(g.Value(0, 0b01), 3);
  // Symmetric profiles above the bundle-mask range still report v(m).
  std::vector<std::int64_t> big(41, 1);
  big[0] = 0;
  auto large = ValuationProfile::Identical(SymmetricValuation::FromInts(big), 2);
  EXPECT_EQ(large.FullValue(0), 1);
}

}  // namespace
