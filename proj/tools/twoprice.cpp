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

// twoprice: command-line front end.
//
// Exit codes: 0 success, 2 verification failed, 3 malformed input,
// 4 instance too large.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twoprice/allocation.hpp"
#include "twoprice/auctions.hpp"
#include "twoprice/endowment.hpp"
#include "twoprice/equilibrium.hpp"
#include "twoprice/fixtures.hpp"
#include "twoprice/geometry.hpp"
#include "twoprice/instances.hpp"
#include "twoprice/io.hpp"
#include "twoprice/valuation.hpp"

namespace {

using twoprice::Allocation;
using twoprice::ErrorCode;
using twoprice::Fail;
using twoprice::Rational;
using twoprice::ValuationProfile;
using twoprice::io::Encode;
using twoprice::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 2;
constexpr int kExitMalformed = 3;
constexpr int kExitTooLarge = 4;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotAnEquilibrium:
    case ErrorCode::kFixtureFailed:
      return kExitVerification;
    case ErrorCode::kInstanceTooLarge:
      return kExitTooLarge;
    default:
      return kExitMalformed;
  }
}

// Mirror of a results tree with every rational string turned into a double.
Json Approximate(const Json& j) {
  if (j.is_object()) {
    Json out = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = Approximate(it.value());
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const Json& x : j) out.push_back(Approximate(x));
    return out;
  }
  if (j.is_string()) {
    try {
      return twoprice::ToDouble(twoprice::ParseRational(j.get<std::string>()));
    } catch (const twoprice::Error&) {
      return j;
    }
  }
  return j;
}

struct Session {
  std::vector<std::string> argv;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
  bool approx = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Json Load(const std::string& path) {
    Json j = twoprice::io::ReadFile(path);
    inputs.emplace_back(path, twoprice::io::HexDigest(twoprice::io::Digest(j.dump())));
    // Reports from earlier runs can be fed back directly.
    if (j.is_object() && j.contains("command") && j.contains("results")) {
      return j["results"];
    }
    return j;
  }

  ValuationProfile Market(const std::string& path) {
    return twoprice::io::ParseMarket(Load(path));
  }

  void Emit(Json results) const {
    Json report;
    std::string echo;
    for (const std::string& a : argv) echo += (echo.empty() ? "" : " ") + a;
    report["command"] = echo;
    Json in = Json::object();
    for (const auto& [path, digest] : inputs) in[path] = digest;
    report["inputs"] = std::move(in);
    if (approx) report["approx"] = Approximate(results);
    report["results"] = std::move(results);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    report["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    std::cout << report.dump(2) << "\n";
  }
};

Json ClassesOf(const twoprice::ClassSet& set) {
  Json a = Json::array();
  for (auto c : set) a.push_back(std::string(twoprice::ClassName(c)));
  return a;
}

Json Classify(const ValuationProfile& v) {
  Json buyers = Json::array();
  for (std::size_t i = 0; i < v.n(); ++i) {
    buyers.push_back(ClassesOf(v.is_symmetric()
                                   ? twoprice::ClassifySymmetric(v.symmetric(i))
                                   : twoprice::ClassifyGeneral(v.general(i))));
  }
  return buyers;
}

Json CertificateToJson(const twoprice::AllocationCertificate& c) {
  Json out;
  out["counts"] = c.counts;
  out["high"] = Encode(c.prices.high);
  out["low"] = Encode(c.prices.low);
  out["discrepancy"] = Encode(c.discrepancy);
  out["bound"] = Encode(c.bound);
  out["price_case"] = c.price_case;
  Json trace = Json::array();
  for (const auto& s : c.trace) {
    Json t;
    t["buyer"] = s.buyer;
    t["slope"] = Encode(s.slope);
    t["triangle_length"] = s.triangle_length;
    t["remaining"] = s.remaining;
    t["taken"] = s.taken;
    if (s.partner) {
      t["partner"] = *s.partner;
      t["partner_taken"] = s.partner_taken;
    }
    trace.push_back(std::move(t));
  }
  out["trace"] = std::move(trace);
  return out;
}

const twoprice::SymmetricValuation& Buyer(const ValuationProfile& v, std::size_t i) {
  if (!v.is_symmetric()) Fail(ErrorCode::kUnsupportedClass, "buyer must be symmetric");
  if (i >= v.n()) Fail(ErrorCode::kIndexOutOfRange, "buyer index out of range");
  return v.symmetric(i);
}

Json Geometry(const twoprice::SymmetricValuation& v) {
  const twoprice::TriangleDecomposition d = twoprice::SmClosure(v);
  Json out;
  out["m"] = v.m();
  out["values"] = Encode(v.values());
  out["closure"] = Encode(d.closure);
  out["intersection_indices"] = d.intersection_indices;
  out["triangle_slopes"] = Encode(d.slopes);
  Json fwd = Json::array();
  for (const auto& q : twoprice::AllForwardSlopes(v)) {
    fwd.push_back({{"k", q.k}, {"value", Encode(q.value)}, {"realizer", q.realizer}});
  }
  Json bwd = Json::array();
  for (const auto& q : twoprice::AllBackwardSlopes(v)) {
    if (q.k == 0) continue;
    bwd.push_back({{"k", q.k}, {"value", Encode(q.value)}, {"realizer", q.realizer}});
  }
  out["forward"] = std::move(fwd);
  out["backward"] = std::move(bwd);
  out["sorted_forward"] = Encode(twoprice::SortedForwardSlopes(v));
  return out;
}

void PlotData(const twoprice::SymmetricValuation& v, bool approx) {
  const std::size_t m = v.m();
  const twoprice::TriangleDecomposition d = twoprice::SmClosure(v);
  const std::vector<Rational> fwd = twoprice::ForwardSlopeValues(v);
  const std::vector<Rational> bwd = twoprice::BackwardSlopeValues(v);
  const std::vector<Rational> flat = twoprice::FlatSlopes(v);
  std::cout << "k,v,closure,forward_slope,backward_slope,flat_slope";
  if (approx) std::cout << ",v_approx,closure_approx";
  std::cout << "\n";
  for (std::size_t k = 0; k <= m; ++k) {
    std::cout << k << "," << twoprice::ToString(v(k)) << ","
              << twoprice::ToString(d.closure[k]) << ","
              << (k < m ? twoprice::ToString(fwd[k]) : "") << ","
              << (k > 0 ? twoprice::ToString(bwd[k]) : "") << ","
              << (k < m ? twoprice::ToString(flat[k]) : "");
    if (approx) {
      std::cout << "," << twoprice::ToDouble(v(k)) << ","
                << twoprice::ToDouble(d.closure[k]);
    }
    std::cout << "\n";
  }
}

twoprice::AllocationCertificate Allocate(const ValuationProfile& v, bool identical) {
  if (identical || v.AllIdentical()) {
    if (!v.AllIdentical()) {
      Fail(ErrorCode::kMalformedInput, "--identical needs identical symmetric buyers");
    }
    if (v.n() == 2) return twoprice::TwoBuyerSplit(v.symmetric(0));
    return twoprice::AllocateIdentical(v.n(), v.symmetric(0));
  }
  return twoprice::AllocateHeterogeneous(v);
}

std::vector<twoprice::GainFunction> ParseGainFlag(Session& s, const std::string& flag) {
  if (flag == "id") return {twoprice::GainFunction::Identity()};
  if (flag == "al") return {twoprice::GainFunction::AbsoluteLoss()};
  if (flag == "sp") return {twoprice::GainFunction::SupportingPrices()};
  if (flag.rfind("file:", 0) == 0) return twoprice::io::ParseGains(s.Load(flag.substr(5)));
  Fail(ErrorCode::kMalformedInput, "--gain must be id, al, sp or file:<path>");
}

Json Pipeline(const ValuationProfile& v, bool pne) {
  Json out;
  out["classes"] = Classify(v);
  Allocation s;
  twoprice::TwoPriceSystem p;
  std::string route;
  bool subadditive = true;
  if (v.is_symmetric()) {
    for (const auto& b : v.symmetric_buyers()) subadditive &= twoprice::IsSubadditive(b);
  }
  std::optional<twoprice::SymmetricWe> we;
  if (v.is_symmetric()) we = twoprice::WeExistsSymmetric(v);
  if (we) {
    route = "walrasian";
    s = we->allocation;
    p = twoprice::TwoPriceSystem::Constant(v.m(), we->price, we->price);
  } else if (v.is_symmetric() && subadditive && v.n() >= 2) {
    const twoprice::AllocationCertificate c = Allocate(v, false);
    route = v.AllIdentical() ? (v.n() == 2 ? "two-buyer split" : "identical")
                             : "heterogeneous";
    out["certificate"] = CertificateToJson(c);
    s = c.allocation();
    p = c.prices.Expand(s);
  } else {
    route = "optimal allocation";
    twoprice::PricedEquilibrium e = twoprice::OptDiscrepancyUpperBound(v);
    s = e.allocation;
    p = e.prices;
  }
  out["route"] = route;
  out["equilibrium"] = twoprice::io::EquilibriumToJson(s, p);
  const twoprice::EquilibriumReport report = twoprice::Is2pe(v, s, p);
  out["is_2pe"] = twoprice::io::ReportToJson(report);
  if (!report.holds) Fail(ErrorCode::kNotAnEquilibrium, "pipeline produced a non-2PE");
  const Rational d = twoprice::Discrepancy(v, s, p);
  const Rational sw = twoprice::Welfare(v, s);
  const Rational opt = twoprice::OptWelfare(v).value;
  out["discrepancy"] = Encode(d);
  out["welfare"] = Encode(sw);
  out["opt_welfare"] = Encode(opt);
  out["welfare_bound_holds"] = sw * (1 + d) >= opt;
  if (pne) {
    out["bids"] = twoprice::io::BidsToJson(twoprice::TwoPeToPne(v, s, p))["bids"];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Session session;
  session.argv.assign(argv, argv + argc);

  CLI::App app{"Two-price equilibria in combinatorial markets"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--approx", session.approx, "Add decimal approximations");

  std::string market_path, eq_path, bids_path, name, kind = "2pe", tiebreak = "index",
              gain = "", action;
  std::size_t buyer = 0;
  bool identical = false, pne = false;

  auto* classify = app.add_subcommand("classify", "Classify every buyer");
  classify->add_option("market", market_path)->required();

  auto* geometry = app.add_subcommand("geometry", "Slopes and concave closure of a buyer");
  geometry->add_option("market", market_path)->required();
  geometry->add_option("--buyer", buyer);

  auto* allocate = app.add_subcommand("allocate", "Run the allocation algorithms");
  allocate->add_option("market", market_path)->required();
  allocate->add_flag("--identical", identical);

  auto* verify = app.add_subcommand("verify", "Check an equilibrium");
  verify->add_option("--kind", kind)->check(CLI::IsMember({"2pe", "we", "ce"}));
  verify->add_option("market", market_path)->required();
  verify->add_option("equilibrium", eq_path)->required();

  auto* mindisc = app.add_subcommand("min-discrepancy", "Smallest uniform-price discrepancy");
  mindisc->add_option("market", market_path)->required();

  auto* auction = app.add_subcommand("auction", "Second-price auctions");
  auction->add_option("action", action)
      ->required()
      ->check(CLI::IsMember({"resolve", "check", "to-2pe", "from-2pe"}));
  auction->add_option("market", market_path)->required();
  auction->add_option("input", bids_path, "bids.json, or equilibrium.json for from-2pe")
      ->required();
  auction->add_option("--tiebreak", tiebreak)->check(CLI::IsMember({"alloc", "index"}));
  auction->add_option("--allocation", eq_path, "Equilibrium file naming the preferred allocation");

  auto* endowment = app.add_subcommand("endowment", "Endowment equilibria");
  endowment->add_option("action", action)->required()->check(CLI::IsMember({"check", "convert"}));
  endowment->add_option("market", market_path)->required();
  endowment->add_option("equilibrium", eq_path)->required();
  endowment->add_option("--gain", gain);

  auto* instance = app.add_subcommand("paper-instance", "Print a reference market");
  instance->add_option("name", name)->required();

  auto* reproduce = app.add_subcommand("reproduce", "Re-run a reference result");
  reproduce->add_option("name", name)->required();

  auto* plot = app.add_subcommand("plotdata", "CSV of values, closure and slopes");
  plot->add_option("market", market_path)->required();
  plot->add_option("--buyer", buyer);

  auto* pipeline = app.add_subcommand("pipeline", "Classify, allocate, verify, bound");
  pipeline->add_option("market", market_path)->required();
  pipeline->add_flag("--pne", pne, "Also emit S2PA bids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitMalformed;
  }

  try {
    if (*classify) {
      const ValuationProfile v = session.Market(market_path);
      session.Emit(Json{{"classes", Classify(v)}});
    } else if (*geometry) {
      const ValuationProfile v = session.Market(market_path);
      session.Emit(Geometry(Buyer(v, buyer)));
    } else if (*allocate) {
      const ValuationProfile v = session.Market(market_path);
      session.Emit(CertificateToJson(Allocate(v, identical)));
    } else if (*verify) {
      const ValuationProfile v = session.Market(market_path);
      auto eq = twoprice::io::ParseEquilibrium(session.Load(eq_path), v.n(), v.m());
      twoprice::EquilibriumReport r;
      if (kind == "2pe") r = twoprice::Is2pe(v, eq.allocation, eq.prices);
      if (kind == "we") r = twoprice::IsWe(v, eq.allocation, eq.prices.high);
      if (kind == "ce") r = twoprice::IsCe(v, eq.allocation, eq.prices.high);
      Json out = twoprice::io::ReportToJson(r);
      out["kind"] = kind;
      if (kind == "2pe" && r.holds) {
        out["discrepancy"] = Encode(twoprice::Discrepancy(v, eq.allocation, eq.prices));
      }
      session.Emit(std::move(out));
      return r.holds ? kExitOk : kExitVerification;
    } else if (*mindisc) {
      const ValuationProfile v = session.Market(market_path);
      const twoprice::DiscrepancyOptimum o = twoprice::MinDiscrepancy(v);
      session.Emit(Json{{"split", o.counts},
                        {"prices", {{"high", Encode(o.prices.high)}, {"low", Encode(o.prices.low)}}},
                        {"discrepancy", Encode(o.discrepancy)},
                        {"exact", o.exact}});
    } else if (*auction) {
      const ValuationProfile v = session.Market(market_path);
      if (action == "from-2pe") {
        auto eq = twoprice::io::ParseEquilibrium(session.Load(bids_path), v.n(), v.m());
        session.Emit(twoprice::io::BidsToJson(
            twoprice::TwoPeToPne(v, eq.allocation, eq.prices)));
        return kExitOk;
      }
      const twoprice::BidProfile b = twoprice::io::ParseBids(session.Load(bids_path));
      twoprice::TieBreak tie = twoprice::TieBreak::LowestIndex();
      if (tiebreak == "alloc") {
        if (eq_path.empty()) {
          Fail(ErrorCode::kMalformedInput, "--tiebreak alloc needs --allocation");
        }
        tie = twoprice::TieBreak::Prefer(
            twoprice::io::ParseEquilibrium(session.Load(eq_path), v.n(), v.m()).allocation);
      }
      if (action == "resolve") {
        const twoprice::AuctionOutcome o = twoprice::Resolve(v, b, tie);
        session.Emit(Json{{"allocation", twoprice::io::AllocationToJson(o.allocation)},
                          {"payments", Encode(o.payments)},
                          {"tiebreak", o.tiebreak}});
      } else if (action == "check") {
        const twoprice::EquilibriumReport r = twoprice::IsPne(v, b, tie);
        session.Emit(twoprice::io::ReportToJson(r));
        return r.holds ? kExitOk : kExitVerification;
      } else {
        auto [s, p] = twoprice::PneTo2pe(v, b, tie);
        session.Emit(twoprice::io::EquilibriumToJson(s, p));
      }
    } else if (*endowment) {
      const ValuationProfile v = session.Market(market_path);
      auto eq = twoprice::io::ParseEquilibrium(session.Load(eq_path), v.n(), v.m());
      if (action == "check") {
        if (gain.empty()) Fail(ErrorCode::kMalformedInput, "check needs --gain");
        const auto gains = ParseGainFlag(session, gain);
        const twoprice::EquilibriumReport r =
            twoprice::IsEe(v, eq.allocation, eq.prices.high, gains);
        session.Emit(twoprice::io::ReportToJson(r));
        return r.holds ? kExitOk : kExitVerification;
      }
      if (gain.empty()) {
        const twoprice::EeFromTwoPrice e = twoprice::TwoPeToEe(v, eq.allocation, eq.prices);
        Json out = twoprice::io::GainsToJson(e.gains);
        out["prices"] = Encode(e.prices);
        out["is_ee"] = twoprice::io::ReportToJson(e.report);
        session.Emit(std::move(out));
      } else {
        const auto gains = ParseGainFlag(session, gain);
        const twoprice::TwoPriceFromEe t =
            twoprice::EeTo2pe(v, eq.allocation, eq.prices.high, gains);
        Json out = twoprice::io::EquilibriumToJson(eq.allocation, t.best);
        out["zero_low"] = Encode(t.zero_low.low);
        out["is_2pe"] = twoprice::io::ReportToJson(t.report);
        session.Emit(std::move(out));
      }
    } else if (*instance) {
      std::cout << twoprice::io::MarketToJson(twoprice::BuildPaperInstance(name)).dump(2)
                << "\n";
    } else if (*reproduce) {
      const twoprice::FixtureResult r = twoprice::Reproduce(name);
      Json out = r.results;
      out["passed"] = r.passed();
      if (r.mismatch) out["mismatch"] = *r.mismatch;
      session.Emit(std::move(out));
      r.Require();
    } else if (*plot) {
      const ValuationProfile v = session.Market(market_path);
      PlotData(Buyer(v, buyer), session.approx);
    } else if (*pipeline) {
      const ValuationProfile v = session.Market(market_path);
      session.Emit(Pipeline(v, pne));
    }
  } catch (const twoprice::Error& e) {
    std::cerr << "twoprice: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  }
  return kExitOk;
}
