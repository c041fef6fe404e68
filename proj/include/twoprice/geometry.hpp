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

// Slope geometry of symmetric valuations.
//
// Forward slope at k: the best average gain per item from buying 1..r more.
// Backward slope at k: the smallest average loss per item from giving up 1..r.
// Both are tangents from (k, v(k)) to the upper hull of the points on one
// side, so all m slopes come out of a single monotone-chain sweep.

#ifndef TWOPRICE_GEOMETRY_HPP_
#define TWOPRICE_GEOMETRY_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "twoprice/error.hpp"
#include "twoprice/rational.hpp"
#include "twoprice/valuation.hpp"

namespace twoprice {

struct SlopeQuery {
  std::size_t k = 0;
  std::size_t r = 0;
  Rational value;
  std::size_t realizer = 0;  // smallest l attaining the extremum
};

inline SlopeQuery MaxForwardSlope(const SymmetricValuation& v, std::size_t k,
                                  std::optional<std::size_t> horizon = {}) {
  const std::size_t m = v.m();
  if (k >= m) {
    Fail(ErrorCode::kIndexOutOfRange,
         "forward slope needs k < m; k = " + std::to_string(k));
  }
  const std::size_t r = horizon.value_or(m - k);
  if (r < 1 || r > m - k) {
    Fail(ErrorCode::kIndexOutOfRange,
         "forward horizon r = " + std::to_string(r) + " outside 1.." +
             std::to_string(m - k));
  }
  SlopeQuery q{k, r, v(k + 1) - v(k), 1};
  for (std::size_t l = 2; l <= r; ++l) {
    Rational s = (v(k + l) - v(k)) / Rational(static_cast<unsigned long>(l));
    if (s > q.value) {
      q.value = s;
      q.realizer = l;
    }
  }
  return q;
}

inline SlopeQuery MinBackwardSlope(const SymmetricValuation& v, std::size_t k,
                                   std::optional<std::size_t> horizon = {}) {
  const std::size_t m = v.m();
  if (k == 0 || k > m) {
    Fail(ErrorCode::kIndexOutOfRange,
         "backward slope needs 0 < k <= m; k = " + std::to_string(k));
  }
  const std::size_t r = horizon.value_or(k);
  if (r < 1 || r > k) {
    Fail(ErrorCode::kIndexOutOfRange,
         "backward horizon r = " + std::to_string(r) + " outside 1.." +
             std::to_string(k));
  }
  SlopeQuery q{k, r, v(k) - v(k - 1), 1};
  for (std::size_t l = 2; l <= r; ++l) {
    Rational s = (v(k) - v(k - l)) / Rational(static_cast<unsigned long>(l));
    if (s < q.value) {
      q.value = s;
      q.realizer = l;
    }
  }
  return q;
}

namespace internal {

inline Rational Chord(const SymmetricValuation& v, std::size_t a, std::size_t b) {
  return (v(b) - v(a)) / Rational(static_cast<unsigned long>(b - a));
}

}  // namespace internal

// Entry k (k = 0..m-1) is the untruncated forward slope at k.
inline std::vector<SlopeQuery> AllForwardSlopes(const SymmetricValuation& v) {
  const std::size_t m = v.m();
  std::vector<SlopeQuery> out(m);
  std::vector<std::size_t> hull{m};  // back() is the leftmost point
  for (std::size_t k = m; k-- > 0;) {
    // Collinear points stay so the nearest tangent point wins ties.
    while (hull.size() >= 2 &&
           internal::Chord(v, k, hull.back()) <
               internal::Chord(v, hull.back(), hull[hull.size() - 2])) {
      hull.pop_back();
    }
    out[k] = SlopeQuery{k, m - k, internal::Chord(v, k, hull.back()),
                        hull.back() - k};
    hull.push_back(k);
  }
  return out;
}

// Entry k (k = 1..m) is the untruncated backward slope at k; entry 0 is a
// placeholder with value 0.
inline std::vector<SlopeQuery> AllBackwardSlopes(const SymmetricValuation& v) {
  const std::size_t m = v.m();
  std::vector<SlopeQuery> out(m + 1);
  std::vector<std::size_t> hull{0};  // back() is the rightmost point
  for (std::size_t k = 1; k <= m; ++k) {
    while (hull.size() >= 2 &&
           internal::Chord(v, hull[hull.size() - 2], hull.back()) <
               internal::Chord(v, hull.back(), k)) {
      hull.pop_back();
    }
    out[k] = SlopeQuery{k, k, internal::Chord(v, hull.back(), k),
                        k - hull.back()};
    hull.push_back(k);
  }
  return out;
}

inline std::vector<Rational> ForwardSlopeValues(const SymmetricValuation& v) {
  std::vector<Rational> out;
  out.reserve(v.m());
  for (const SlopeQuery& q : AllForwardSlopes(v)) out.push_back(q.value);
  return out;
}

inline std::vector<Rational> BackwardSlopeValues(const SymmetricValuation& v) {
  std::vector<Rational> out;
  out.reserve(v.m() + 1);
  for (const SlopeQuery& q : AllBackwardSlopes(v)) out.push_back(q.value);
  return out;
}

struct TriangleDecomposition {
  std::vector<std::size_t> intersection_indices;
  std::vector<Rational> slopes;  // slopes[l] spans indices l and l + 1
  std::vector<Rational> closure;

  bool IsIntersection(std::size_t k) const {
    return std::binary_search(intersection_indices.begin(),
                              intersection_indices.end(), k);
  }

  // Triangle l with i_l <= k < i_{l+1}; k must be < m.
  std::size_t TriangleOf(std::size_t k) const {
    auto it = std::upper_bound(intersection_indices.begin(),
                               intersection_indices.end(), k);
    return static_cast<std::size_t>(it - intersection_indices.begin()) - 1;
  }

  std::size_t TriangleStart(std::size_t l) const {
    return intersection_indices[l];
  }
  std::size_t TriangleLength(std::size_t l) const {
    return intersection_indices[l + 1] - intersection_indices[l];
  }
};

// Least concave majorant of k -> v(k). Every index where v touches it is
// reported, including points in the interior of a straight hull edge.
inline TriangleDecomposition SmClosure(const SymmetricValuation& v) {
  const std::size_t m = v.m();
  std::vector<std::size_t> hull;
  for (std::size_t k = 0; k <= m; ++k) {
    while (hull.size() >= 2 &&
           internal::Chord(v, hull[hull.size() - 2], hull.back()) <
               internal::Chord(v, hull.back(), k)) {
      hull.pop_back();
    }
    hull.push_back(k);
  }
  TriangleDecomposition d;
  d.intersection_indices = hull;
  d.closure.assign(m + 1, Rational(0));
  for (std::size_t l = 0; l + 1 < hull.size(); ++l) {
    const std::size_t a = hull[l];
    const std::size_t b = hull[l + 1];
    Rational alpha = internal::Chord(v, a, b);
    d.slopes.push_back(alpha);
    for (std::size_t k = a; k < b; ++k) {
      d.closure[k] = v(a) + alpha * Rational(static_cast<unsigned long>(k - a));
    }
  }
  d.closure[m] = v(m);
  return d;
}

inline std::vector<Rational> SortedForwardSlopes(const SymmetricValuation& v) {
  std::vector<Rational> s = ForwardSlopeValues(v);
  std::sort(s.begin(), s.end());
  return s;
}

// Slopes of the flat function that is 0 below m and v(m) at m.
inline std::vector<Rational> FlatSlopes(const SymmetricValuation& v) {
  const std::size_t m = v.m();
  std::vector<Rational> out;
  out.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    out.push_back(v(m) / Rational(static_cast<unsigned long>(m - k)));
  }
  return out;
}

inline std::size_t CountCBad(const SymmetricValuation& v, const Rational& c) {
  if (c < 1) Fail(ErrorCode::kIndexOutOfRange, "c must be at least 1");
  const Rational threshold =
      c * v(v.m()) / Rational(static_cast<unsigned long>(v.m()));
  std::size_t count = 0;
  for (const Rational& s : ForwardSlopeValues(v)) {
    if (s > threshold) ++count;
  }
  return count;
}

// m - floor(((c - 1) / c) m) - 1.
inline std::size_t CBadBound(std::size_t m, const Rational& c) {
  const mpz_class f = Floor((c - 1) / c * Rational(static_cast<unsigned long>(m)));
  return m - static_cast<std::size_t>(f.get_ui()) - 1;
}

// k times the smallest forward slope before k; at most v(k) when v is
// subadditive.
inline Rational LowerBoundValue(const SymmetricValuation& v, std::size_t k) {
  if (k == 0 || k > v.m()) {
    Fail(ErrorCode::kIndexOutOfRange, "lower_bound_value needs 0 < k <= m");
  }
  if (!IsSubadditive(v)) {
    Fail(ErrorCode::kNotSubadditive, "lower_bound_value needs subadditive v");
  }
  std::vector<Rational> f = ForwardSlopeValues(v);
  Rational lo = *std::min_element(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(k));
  return lo * Rational(static_cast<unsigned long>(k));
}

}  // namespace twoprice

#endif  // TWOPRICE_GEOMETRY_HPP_
