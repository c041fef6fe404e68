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

#ifndef TWOPRICE_INSTANCES_HPP_
#define TWOPRICE_INSTANCES_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "twoprice/error.hpp"
#include "twoprice/rational.hpp"
#include "twoprice/valuation.hpp"

namespace twoprice {

inline constexpr std::array<std::string_view, 5> kPaperInstances = {
    "ex3.2", "prop4.3", "fig1", "appendixE", "thm7.2"};

// Step function over 27 items: 1 on 1..4, 2 on 5..10, 3 on 11..16, 4 on
// 17..22, 5 on 23..26, 6 at 27.
inline SymmetricValuation SixStepValuation() {
  std::vector<std::int64_t> v(28, 0);
  for (std::int64_t k = 1; k <= 27; ++k) {
    if (k <= 4) v[k] = 1;
    else if (k <= 10) v[k] = 2;
    else if (k <= 16) v[k] = 3;
    else if (k <= 22) v[k] = 4;
    else if (k <= 26) v[k] = 5;
    else v[k] = 6;
  }
  return SymmetricValuation::FromInts(v);
}

// Three staircases over 3461 items with step widths 30, 50, 30.
inline SymmetricValuation ThreePieceValuation() {
  constexpr std::int64_t m = 3461;
  std::vector<std::int64_t> v(m + 1, 0);
  for (std::int64_t k = 1; k <= m; ++k) {
    if (k <= 480) v[k] = (k - 1) / 30 + 1;
    else if (k <= 2980) v[k] = (k - 481) / 50 + 17;
    else v[k] = (k - 2981) / 30 + 67;
  }
  return SymmetricValuation::FromInts(v);
}

// Shape-faithful only: the ordinates are chosen so that the touching set of
// the concave majorant is {0, 1, 2, 3, 4, 5, 13, 21, 22, 23}, with the last two
// triangles flat.
inline SymmetricValuation ClosureSketchValuation() {
  std::vector<std::int64_t> v = {0, 4, 7, 9, 10, 11};
  for (int k = 6; k <= 12; ++k) v.push_back(11);
  v.push_back(15);
  for (int k = 14; k <= 20; ++k) v.push_back(15);
  v.push_back(17);
  v.push_back(17);
  v.push_back(17);
  return SymmetricValuation::FromInts(v);
}

inline ValuationProfile NoCeProfile() {
  std::vector<Rational> b1(16);
  std::vector<Rational> b2(16);
  for (Bundle s = 1; s < 16; ++s) {
    b1[s] = Size(s) == 4 ? 2 : 1;
    b2[s] = MakeRational(9, 10);
  }
  return ValuationProfile(
      std::vector<GeneralValuation>{GeneralValuation(4, b1), GeneralValuation(4, b2)});
}

// Items x = 0 and y = 1; crossed unit-demand buyers.
inline ValuationProfile CrossedUnitDemandProfile() {
  std::vector<Rational> b1 = {Rational(0), Rational(2), Rational(1), Rational(2)};
  std::vector<Rational> b2 = {Rational(0), Rational(1), Rational(2), Rational(2)};
  return ValuationProfile(
      std::vector<GeneralValuation>{GeneralValuation(2, b1), GeneralValuation(2, b2)});
}

// Published two-buyer split table for the 27-item instance; empty strings
// stand for buyers with no items.
struct SplitTableRow {
  std::size_t k1;
  std::size_t k2;
  std::string_view high1;
  std::string_view high2;
  std::string_view low1;
  std::string_view low2;
  std::string_view d;
};

inline constexpr std::array<SplitTableRow, 14> kSplitTable = {{
    {0, 27, "", "1", "", "2/11", "81/22"},
    {1, 26, "1", "1/4", "1/4", "0", "29/24"},
    {2, 25, "1/2", "1/3", "0", "0", "14/9"},
    {3, 24, "1/3", "1/2", "0", "0", "13/6"},
    {4, 23, "1/4", "1", "0", "1/6", "121/36"},
    {5, 22, "1", "2/11", "2/11", "0", "89/66"},
    {6, 21, "1/2", "1/5", "0", "0", "6/5"},
    {7, 20, "1/3", "1/4", "0", "0", "11/9"},
    {8, 19, "1/4", "1/3", "0", "0", "25/18"},
    {9, 18, "2/9", "1/2", "0", "0", "11/6"},
    {10, 17, "1/5", "1", "0", "1/6", "97/36"},
    {11, 16, "1", "3/16", "1/6", "0", "73/36"},
    {12, 15, "1/2", "1/5", "0", "0", "3/2"},
    {13, 14, "1/3", "1/4", "0", "0", "47/36"},
}};

inline ValuationProfile BuildPaperInstance(std::string_view name) {
  if (name == "ex3.2") return NoCeProfile();
  if (name == "prop4.3") return CrossedUnitDemandProfile();
  if (name == "fig1") return ValuationProfile(std::vector<SymmetricValuation>{ClosureSketchValuation()});
  if (name == "appendixE") return ValuationProfile::Identical(SixStepValuation(), 2);
  if (name == "thm7.2") return ValuationProfile::Identical(ThreePieceValuation(), 2);
  std::string known;
  for (std::string_view k : kPaperInstances) known += " " + std::string(k);
  Fail(ErrorCode::kUnknownInstance,
       "unknown instance '" + std::string(name) + "'; known:" + known);
}

}  // namespace twoprice

#endif  // TWOPRICE_INSTANCES_HPP_
