#include "twoprice/io.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "twoprice/fixtures.hpp"
#include "twoprice/instances.hpp"

namespace {

using namespace twoprice;
using io::Json;
using oracle::Q;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kMalformedInput;
}

TEST(Io, ParseValueForms) {
  EXPECT_EQ(io::ParseValue(Json("3/4")), Q(3, 4));
  EXPECT_EQ(io::ParseValue(Json(7)), 7);
  EXPECT_EQ(io::ParseValue(Json("0.25")), Q(1, 4));
  EXPECT_EQ(CodeOf([] { io::ParseValue(Json(0.5)); }), ErrorCode::kMalformedInput);
  EXPECT_EQ(CodeOf([] { io::ParseValue(Json(true)); }), ErrorCode::kMalformedInput);
}

TEST(Io, SymmetricMarketRoundTrip) {
  const Json j = Json::parse(R"({"m": 3, "buyers": [
      {"kind": "symmetric", "values": [0, "1/2", 1, 1]},
      {"kind": "symmetric", "values": ["0", 2, 3, "7/2"]}]})");
  const ValuationProfile v = io::ParseMarket(j);
  ASSERT_TRUE(v.is_symmetric());
  EXPECT_EQ(v.symmetric(1)(3), Q(7, 2));
  const ValuationProfile again = io::ParseMarket(io::MarketToJson(v));
  EXPECT_EQ(again.symmetric(0), v.symmetric(0));
  EXPECT_EQ(again.symmetric(1), v.symmetric(1));
}

TEST(Io, MixedMarketLiftsToGeneral) {
  const Json j = Json::parse(R"({"m": 2, "buyers": [
      {"kind": "symmetric", "values": [0, 1, 2]},
      {"kind": "general", "values": {"1": 3, "3": 4}}]})");
  const ValuationProfile v = io::ParseMarket(j);
  ASSERT_FALSE(v.is_symmetric());
  EXPECT_EQ(v.Value(0, 0b10), 1);
  // Missing bundle 2 inherits from the empty set, bundle 3 is given.
  EXPECT_EQ(v.Value(1, 0b10), 0);
  EXPECT_EQ(v.Value(1, 0b11), 4);
  const ValuationProfile again = io::ParseMarket(io::MarketToJson(v));
  EXPECT_EQ(again.general(1).table(), v.general(1).table());
}

TEST(Io, SparseFillIsMonotone) {
  const GeneralValuation g = io::ParseGeneral(Json::parse(R"({"1": 2, "2": 5})"), 3);
  EXPECT_EQ(g(0b011), 5);
  EXPECT_EQ(g(0b111), 5);
  EXPECT_EQ(g(0b100), 0);
}

TEST(Io, MalformedMarkets) {
  EXPECT_EQ(CodeOf([] { io::ParseMarket(Json::parse(R"({"m": 2})")); }),
            ErrorCode::kMalformedInput);
  EXPECT_EQ(CodeOf([] { io::ParseMarket(Json::parse(R"({"m": 2, "buyers": []})")); }),
            ErrorCode::kMalformedInput);
  EXPECT_EQ(CodeOf([] {
              io::ParseMarket(Json::parse(R"({"m": 2, "buyers": [{"kind": "x", "values": []}]})"));
            }),
            ErrorCode::kMalformedInput);
  EXPECT_EQ(CodeOf([] {
              io::ParseMarket(
                  Json::parse(R"({"m": 2, "buyers": [{"kind": "symmetric", "values": [0, 1]}]})"));
            }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([] {
              io::ParseMarket(Json::parse(
                  R"({"m": 2, "buyers": [{"kind": "symmetric", "values": [0, 2, 1]}]})"));
            }),
            ErrorCode::kInvalidValuation);
  EXPECT_EQ(CodeOf([] { io::ParseGeneral(Json::parse(R"({"x1": 1})"), 2); }),
            ErrorCode::kMalformedInput);
  EXPECT_EQ(CodeOf([] { io::ParseGeneral(Json::parse(R"({"4": 1})"), 2); }),
            ErrorCode::kMalformedInput);
  EXPECT_EQ(CodeOf([] { io::ParseGeneral(Json::parse("{}"), 21); }),
            ErrorCode::kInstanceTooLarge);
  EXPECT_EQ(CodeOf([] { io::ReadFile("/nonexistent/market.json"); }),
            ErrorCode::kMalformedInput);
}

TEST(Io, EquilibriumForms) {
  const io::EquilibriumFile owners = io::ParseEquilibrium(
      Json::parse(R"({"allocation": [1, 0, 1], "high": [1, 1, 2], "low": [0, "1/2", 1]})"), 2, 3);
  const io::EquilibriumFile lists = io::ParseEquilibrium(
      Json::parse(R"({"allocation": [[1], [0, 2]], "high": [1, 1, 2], "low": [0, "1/2", 1]})"), 2, 3);
  EXPECT_TRUE(owners.allocation == lists.allocation);
  EXPECT_EQ(owners.prices.low, lists.prices.low);
  const io::EquilibriumFile single =
      io::ParseEquilibrium(Json::parse(R"({"allocation": [0], "high": [3]})"), 1, 1);
  EXPECT_EQ(single.prices.low, single.prices.high);
  const Json back = io::EquilibriumToJson(owners.allocation, owners.prices);
  const io::EquilibriumFile again = io::ParseEquilibrium(back, 2, 3);
  EXPECT_TRUE(again.allocation == owners.allocation);
  EXPECT_EQ(again.prices.high, owners.prices.high);

  EXPECT_EQ(CodeOf([] {
              io::ParseEquilibrium(Json::parse(R"({"allocation": [[0], [0]], "high": [1]})"), 2, 1);
            }),
            ErrorCode::kCountMismatch);
  EXPECT_EQ(CodeOf([] {
              io::ParseEquilibrium(Json::parse(R"({"allocation": [[0], []], "high": [1, 1]})"), 2, 2);
            }),
            ErrorCode::kCountMismatch);
  EXPECT_EQ(CodeOf([] {
              io::ParseEquilibrium(Json::parse(R"({"allocation": [0], "high": [1], "low": [2]})"), 1, 1);
            }),
            ErrorCode::kPriceOrderViolation);
  EXPECT_EQ(CodeOf([] {
              io::ParseEquilibrium(Json::parse(R"({"allocation": [5], "high": [1]})"), 2, 1);
            }),
            ErrorCode::kIndexOutOfRange);
}

TEST(Io, BidsAndGainsRoundTrip) {
  const BidProfile b{{{Q(1, 3), Q(2)}, {Q(0), Q(5, 2)}}};
  const BidProfile again = io::ParseBids(io::BidsToJson(b));
  EXPECT_EQ(again.bids, b.bids);
  EXPECT_EQ(CodeOf([] { io::ParseBids(Json::parse(R"({"bid": []})")); }),
            ErrorCode::kMalformedInput);

  const std::vector<GainFunction> g = {
      GainFunction::Explicit({{3, {{1, Q(1, 2)}, {3, Q(1)}}}}),
      GainFunction::Explicit({{4, {{4, Q(2)}}}})};
  const std::vector<GainFunction> g2 = io::ParseGains(io::GainsToJson(g));
  ASSERT_EQ(g2.size(), 2u);
  EXPECT_EQ(g2[0].table, g[0].table);
  EXPECT_EQ(g2[1].table, g[1].table);
  EXPECT_EQ(CodeOf([] { io::ParseGains(Json::parse(R"({"gains": [{"1": {"2": 1}}]})")); }),
            ErrorCode::kMalformedInput);
}

TEST(Io, ReportJson) {
  const ValuationProfile v = NoCeProfile();
  const Allocation s = Allocation::FromBundles({0, 15}, 4);
  const EquilibriumReport r = Is2pe(v, s, TwoPriceSystem::Constant(4, Q(0), Q(0)));
  const Json j = io::ReportToJson(r);
  EXPECT_FALSE(j["holds"].get<bool>());
  EXPECT_EQ(j["witness"]["condition"], "utility maximization");
  EXPECT_TRUE(io::ReportToJson(EquilibriumReport::Ok())["holds"].get<bool>());
}

TEST(Io, DigestIsFnv1a) {
  EXPECT_EQ(io::HexDigest(io::Digest("")), "cbf29ce484222325");
  EXPECT_EQ(io::HexDigest(io::Digest("a")), "af63dc4c8601ec8c");
  EXPECT_EQ(io::Digest("market"), io::Digest("market"));
  EXPECT_NE(io::Digest("market"), io::Digest("markeT"));
}

TEST(Fixtures, KnownFixturesPass) {
  for (const char* name : {"table1", "ex3.2", "prop4.3"}) {
    const FixtureResult r = Reproduce(name);
    EXPECT_TRUE(r.passed()) << name << ": " << r.mismatch.value_or("");
  }
  EXPECT_THROW(Reproduce("nope"), Error);
}

// The published split and value cannot be met by a valid price system.
TEST(Fixtures, LargeInstanceMismatchIsReported) {
  const FixtureResult r = Reproduce("thm7.2");
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(CodeOf([&] { r.Require(); }), ErrorCode::kFixtureFailed);
  EXPECT_EQ(r.results["min_discrepancy"], "2077/1494");
}

}  // namespace
