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

// JSON encoding of markets, equilibria, bids and gain tables. Rationals are
// always strings ("3/2", "7"); inputs also accept decimals and JSON integers.

#ifndef TWOPRICE_IO_HPP_
#define TWOPRICE_IO_HPP_

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "twoprice/auctions.hpp"
#include "twoprice/endowment.hpp"
#include "twoprice/error.hpp"
#include "twoprice/market.hpp"
#include "twoprice/rational.hpp"
#include "twoprice/valuation.hpp"

namespace twoprice::io {

using Json = nlohmann::ordered_json;

inline Rational ParseValue(const Json& j) {
  if (j.is_string()) return ParseRational(j.get<std::string>());
  if (j.is_number_integer()) return MakeRational(j.get<std::int64_t>());
  Fail(ErrorCode::kMalformedInput,
       "expected a rational string or integer, got " + j.dump());
}

inline std::vector<Rational> ParseVector(const Json& j) {
  if (!j.is_array()) Fail(ErrorCode::kMalformedInput, "expected an array");
  std::vector<Rational> out;
  for (const Json& x : j) out.push_back(ParseValue(x));
  return out;
}

inline Json Encode(const Rational& r) { return ToString(r); }

inline Json Encode(const std::vector<Rational>& xs) {
  Json a = Json::array();
  for (const Rational& x : xs) a.push_back(ToString(x));
  return a;
}

inline std::size_t ParseIndex(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    Fail(ErrorCode::kMalformedInput, std::string(what) + " must be a non-negative integer");
  }
  return j.get<std::size_t>();
}

inline Bundle ParseMask(const std::string& key) {
  if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos ||
      key.size() > 10) {
    Fail(ErrorCode::kMalformedInput, "bundle key '" + key + "' is not a bitmask");
  }
  const unsigned long long x = std::stoull(key);
  if (x > 0xffffffffULL) Fail(ErrorCode::kMalformedInput, "bundle key too large");
  return static_cast<Bundle>(x);
}

inline Json ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kMalformedInput, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kMalformedInput, path + ": " + e.what());
  }
}

// A missing general entry is filled from its largest listed subset, which
// keeps sparse tables monotone.
inline GeneralValuation ParseGeneral(const Json& values, std::size_t m) {
  RequireGeneralSize(m, "general valuation");
  if (!values.is_object()) {
    Fail(ErrorCode::kMalformedInput, "general values must be an object");
  }
  const std::size_t size = std::size_t{1} << m;
  std::vector<std::optional<Rational>> given(size);
  for (auto it = values.begin(); it != values.end(); ++it) {
    const Bundle b = ParseMask(it.key());
    if (b >= size) Fail(ErrorCode::kMalformedInput, "bundle key exceeds 2^m");
    given[b] = ParseValue(it.value());
  }
  std::vector<Rational> table(size);
  for (Bundle s = 0; s < size; ++s) {
    if (given[s]) {
      table[s] = *given[s];
      continue;
    }
    Rational best = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (Contains(s, j) && table[s & ~(Bundle{1} << j)] > best) {
        best = table[s & ~(Bundle{1} << j)];
      }
    }
    table[s] = best;
  }
  return GeneralValuation(m, std::move(table));
}

inline ValuationProfile ParseMarket(const Json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("buyers")) {
    Fail(ErrorCode::kMalformedInput, "market needs \"m\" and \"buyers\"");
  }
  const std::size_t m = ParseIndex(j["m"], "m");
  const Json& buyers = j["buyers"];
  if (!buyers.is_array() || buyers.empty()) {
    Fail(ErrorCode::kMalformedInput, "\"buyers\" must be a non-empty array");
  }
  std::vector<SymmetricValuation> sym;
  bool any_general = false;
  for (const Json& b : buyers) {
    const std::string kind = b.value("kind", "");
    if (kind == "general") {
      any_general = true;
    } else if (kind != "symmetric") {
      Fail(ErrorCode::kMalformedInput, "buyer kind must be symmetric or general");
    }
  }
  if (!any_general) {
    for (const Json& b : buyers) {
      std::vector<Rational> v = ParseVector(b.at("values"));
      if (v.size() != m + 1) {
        Fail(ErrorCode::kDimensionMismatch, "symmetric values need m + 1 entries");
      }
      sym.emplace_back(std::move(v));
    }
    return ValuationProfile(std::move(sym));
  }
  std::vector<GeneralValuation> gen;
  for (const Json& b : buyers) {
    if (b["kind"] == "general") {
      gen.push_back(ParseGeneral(b.at("values"), m));
    } else {
      std::vector<Rational> v = ParseVector(b.at("values"));
      if (v.size() != m + 1) {
        Fail(ErrorCode::kDimensionMismatch, "symmetric values need m + 1 entries");
      }
      gen.push_back(SymmetricToGeneral(SymmetricValuation(std::move(v))));
    }
  }
  return ValuationProfile(std::move(gen));
}

inline Json MarketToJson(const ValuationProfile& v) {
  Json out;
  out["m"] = v.m();
  Json buyers = Json::array();
  for (std::size_t i = 0; i < v.n(); ++i) {
    Json b;
    if (v.is_symmetric()) {
      b["kind"] = "symmetric";
      b["values"] = Encode(v.symmetric(i).values());
    } else {
      b["kind"] = "general";
      Json t = Json::object();
      const auto& table = v.general(i).table();
      for (Bundle s = 0; s < table.size(); ++s) t[std::to_string(s)] = ToString(table[s]);
      b["values"] = std::move(t);
    }
    buyers.push_back(std::move(b));
  }
  out["buyers"] = std::move(buyers);
  return out;
}

struct EquilibriumFile {
  Allocation allocation;
  TwoPriceSystem prices;
};

// "allocation" is either the owner of each item or one item list per buyer.
// A missing "low" means a single price vector.
inline EquilibriumFile ParseEquilibrium(const Json& j, std::size_t n, std::size_t m) {
  if (!j.is_object() || !j.contains("allocation") || !j.contains("high")) {
    Fail(ErrorCode::kMalformedInput, "equilibrium needs \"allocation\" and \"high\"");
  }
  const Json& a = j["allocation"];
  if (!a.is_array()) Fail(ErrorCode::kMalformedInput, "allocation must be an array");
  EquilibriumFile out;
  if (!a.empty() && a[0].is_array()) {
    if (a.size() != n) Fail(ErrorCode::kDimensionMismatch, "one item list per buyer");
    std::vector<std::optional<std::size_t>> owner(m);
    for (std::size_t i = 0; i < n; ++i) {
      for (const Json& x : a[i]) {
        const std::size_t item = ParseIndex(x, "item");
        if (item >= m) Fail(ErrorCode::kIndexOutOfRange, "item index >= m");
        if (owner[item]) Fail(ErrorCode::kCountMismatch, "item allocated twice");
        owner[item] = i;
      }
    }
    std::vector<std::size_t> flat(m);
    for (std::size_t jx = 0; jx < m; ++jx) {
      if (!owner[jx]) Fail(ErrorCode::kCountMismatch, "item " + std::to_string(jx) + " not allocated");
      flat[jx] = *owner[jx];
    }
    out.allocation = Allocation::FromOwners(std::move(flat), n);
  } else {
    if (a.size() != m) Fail(ErrorCode::kDimensionMismatch, "one owner per item");
    std::vector<std::size_t> owner;
    for (const Json& x : a) owner.push_back(ParseIndex(x, "owner"));
    out.allocation = Allocation::FromOwners(std::move(owner), n);
  }
  out.prices.high = ParseVector(j["high"]);
  out.prices.low = j.contains("low") ? ParseVector(j["low"]) : out.prices.high;
  out.prices.Validate(m);
  return out;
}

inline Json AllocationToJson(const Allocation& s) {
  Json a = Json::array();
  for (std::size_t o : s.owners()) a.push_back(o);
  return a;
}

inline Json EquilibriumToJson(const Allocation& s, const TwoPriceSystem& p) {
  Json out;
  out["allocation"] = AllocationToJson(s);
  out["high"] = Encode(p.high);
  out["low"] = Encode(p.low);
  return out;
}

inline BidProfile ParseBids(const Json& j) {
  if (!j.is_object() || !j.contains("bids") || !j["bids"].is_array()) {
    Fail(ErrorCode::kMalformedInput, "bids file needs a \"bids\" matrix");
  }
  BidProfile b;
  for (const Json& row : j["bids"]) b.bids.push_back(ParseVector(row));
  return b;
}

inline Json BidsToJson(const BidProfile& b) {
  Json rows = Json::array();
  for (const auto& row : b.bids) rows.push_back(Encode(row));
  Json out;
  out["bids"] = std::move(rows);
  return out;
}

// {"gains": [{"<X>": {"<Z>": "g"}}, ...]}, one object per buyer.
inline std::vector<GainFunction> ParseGains(const Json& j) {
  if (!j.is_object() || !j.contains("gains") || !j["gains"].is_array()) {
    Fail(ErrorCode::kMalformedInput, "gain file needs a \"gains\" array");
  }
  std::vector<GainFunction> out;
  for (const Json& buyer : j["gains"]) {
    if (!buyer.is_object()) Fail(ErrorCode::kMalformedInput, "gain entry must be an object");
    std::map<Bundle, std::map<Bundle, Rational>> table;
    for (auto it = buyer.begin(); it != buyer.end(); ++it) {
      const Bundle x = ParseMask(it.key());
      for (auto zt = it.value().begin(); zt != it.value().end(); ++zt) {
        const Bundle z = ParseMask(zt.key());
        if ((z & ~x) != 0) Fail(ErrorCode::kMalformedInput, "gain subset outside endowment");
        table[x][z] = ParseValue(zt.value());
      }
    }
    out.push_back(GainFunction::Explicit(std::move(table)));
  }
  return out;
}

inline Json GainsToJson(const std::vector<GainFunction>& gains) {
  Json arr = Json::array();
  for (const GainFunction& g : gains) {
    Json buyer = Json::object();
    for (const auto& [x, zs] : g.table) {
      Json inner = Json::object();
      for (const auto& [z, val] : zs) inner[std::to_string(z)] = ToString(val);
      buyer[std::to_string(x)] = std::move(inner);
    }
    arr.push_back(std::move(buyer));
  }
  Json out;
  out["gains"] = std::move(arr);
  return out;
}

inline Json ReportToJson(const EquilibriumReport& r) {
  Json out;
  out["holds"] = r.holds;
  if (r.witness) {
    Json w;
    w["buyer"] = r.witness->buyer;
    w["bundle"] = r.witness->bundle;
    if (r.witness->count) w["count"] = *r.witness->count;
    w["lhs"] = ToString(r.witness->lhs);
    w["rhs"] = ToString(r.witness->rhs);
    w["condition"] = r.witness->condition;
    out["witness"] = std::move(w);
  }
  return out;
}

// 64-bit FNV-1a.
inline std::uint64_t Digest(std::string_view bytes,
                            std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string HexDigest(std::uint64_t h) {
  static const char* kHex = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = kHex[h & 0xf];
  return s;
}

}  // namespace twoprice::io

#endif  // TWOPRICE_IO_HPP_
