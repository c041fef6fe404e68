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

// Greedy triangle allocation for symmetric subadditive buyers.
//
// Both algorithms hand out whole triangles of the submodular closure, always
// to the buyer with the steepest forward slope, until the next triangle no
// longer fits. The leftover r items are then split between the chosen buyer x
// and the runner-up y so that neither forward slope grows by more than a
// factor c (c = 2 for identical buyers, c = 3 with l_x >= r/2 otherwise).

#ifndef TWOPRICE_ALLOCATION_HPP_
#define TWOPRICE_ALLOCATION_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "twoprice/equilibrium.hpp"
#include "twoprice/error.hpp"
#include "twoprice/geometry.hpp"
#include "twoprice/market.hpp"
#include "twoprice/rational.hpp"
#include "twoprice/valuation.hpp"

namespace twoprice {

struct GoodPair {
  std::size_t l_x = 0;
  std::size_t l_y = 0;
  Rational c;
  std::size_t k_x = 0;
  std::size_t k_y = 0;
  std::size_t r = 0;
};

struct TraceStep {
  std::size_t buyer = 0;
  Rational slope;
  std::size_t triangle_length = 0;
  std::size_t remaining = 0;  // before the step
  std::optional<std::size_t> partner;
  std::size_t taken = 0;
  std::size_t partner_taken = 0;
};

struct AllocationCertificate {
  std::vector<std::size_t> counts;
  UniformPrices prices;
  Rational discrepancy;
  Rational bound;
  std::string price_case;
  std::vector<TraceStep> trace;

  Allocation allocation() const { return Allocation::FromCounts(counts); }
};

// Smallest l_x (from ceil(r/2) when half_constraint) such that both forward
// slopes after the split stay within c times the slopes at the anchors.
inline GoodPair FindGoodPair(const SymmetricValuation& vx,
                             const SymmetricValuation& vy, std::size_t kx,
                             std::size_t ky, std::size_t r, const Rational& c,
                             bool half_constraint) {
  if (kx + ky + r > vx.m() || vx.m() != vy.m()) {
    Fail(ErrorCode::kIndexOutOfRange, "good pair anchors exceed m");
  }
  const SlopeTable sx(vx);
  const SlopeTable sy(vy);
  const Rational cap_x = c * sx.Forward(kx);
  const Rational cap_y = c * sy.Forward(ky);
  const std::size_t start = half_constraint ? (r + 1) / 2 : 0;
  for (std::size_t lx = start; lx <= r; ++lx) {
    const std::size_t ly = r - lx;
    if (sx.Forward(kx + lx) <= cap_x && sy.Forward(ky + ly) <= cap_y) {
      return GoodPair{lx, ly, c, kx, ky, r};
    }
  }
  std::string table = "no good pair for k_x = " + std::to_string(kx) +
                      ", k_y = " + std::to_string(ky) + ", r = " +
                      std::to_string(r) + "; slopes (l: x, y):";
  for (std::size_t lx = 0; lx <= r; ++lx) {
    table += " " + std::to_string(lx) + ": " + ToString(sx.Forward(kx + lx)) +
             ", " + ToString(sy.Forward(ky + r - lx)) + ";";
  }
  Fail(ErrorCode::kNoPairFound, table);
}

namespace internal {

inline void RequireSubadditive(const SymmetricValuation& v, std::size_t i) {
  if (!IsSubadditive(v)) {
    Fail(ErrorCode::kNotSubadditive,
         "buyer " + std::to_string(i) + " is not subadditive");
  }
}

inline void Certify(const ValuationProfile& v, AllocationCertificate& cert) {
  Rational sw = 0;
  for (std::size_t i = 0; i < v.n(); ++i) sw += v.symmetric(i)(cert.counts[i]);
  if (sw == 0) Fail(ErrorCode::kZeroWelfare, "allocation has zero welfare");
  cert.discrepancy = cert.prices.Gap(cert.counts) / sw;
  EquilibriumReport report = U2peFeasible(v, cert.counts, cert.prices);
  if (!report.holds) {
    Fail(ErrorCode::kNotAnEquilibrium,
         "certificate prices violate: " + report.witness->condition +
             " (buyer " + std::to_string(report.witness->buyer) + ")");
  }
  if (cert.discrepancy > cert.bound) {
    Fail(ErrorCode::kNotAnEquilibrium,
         "discrepancy " + ToString(cert.discrepancy) + " exceeds bound " +
             ToString(cert.bound));
  }
}

// Argmax of forward slope over buyers that still have room, ties to fewer
// items and then lower index (when prefer_fewer) or to lower index only.
inline std::optional<std::size_t> SteepestBuyer(
    const std::vector<SlopeTable>& slopes, const std::vector<std::size_t>& k,
    std::size_t m, std::optional<std::size_t> exclude, bool prefer_fewer) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i == exclude || k[i] >= m) continue;
    if (!best) {
      best = i;
      continue;
    }
    const Rational& a = slopes[i].Forward(k[i]);
    const Rational& b = slopes[*best].Forward(k[*best]);
    if (a > b || (prefer_fewer && a == b && k[i] < k[*best])) best = i;
  }
  return best;
}

struct GreedyRun {
  std::vector<std::size_t> counts;
  std::vector<TraceStep> trace;
  std::size_t x = 0;
  Rational theta_x;
  std::optional<std::size_t> y;
  std::vector<std::size_t> before_split;  // counts when the leftover branch ran
};

inline GreedyRun RunGreedy(const ValuationProfile& v, const Rational& c,
                           bool identical) {
  const std::size_t n = v.n();
  const std::size_t m = v.m();
  std::vector<SlopeTable> slopes;
  std::vector<TriangleDecomposition> tri;
  for (const auto& vi : v.symmetric_buyers()) {
    slopes.emplace_back(vi);
    tri.push_back(SmClosure(vi));
  }
  GreedyRun run;
  run.counts.assign(n, 0);
  std::size_t r = m;
  while (r > 0) {
    const std::size_t x = *SteepestBuyer(slopes, run.counts, m, std::nullopt, identical);
    const std::size_t kx = run.counts[x];
    const std::size_t t = tri[x].TriangleLength(tri[x].TriangleOf(kx));
    TraceStep step;
    step.buyer = x;
    step.slope = slopes[x].Forward(kx);
    step.triangle_length = t;
    step.remaining = r;
    run.x = x;
    run.theta_x = step.slope;
    if (r >= t) {
      run.counts[x] += t;
      r -= t;
      step.taken = t;
      run.trace.push_back(step);
      continue;
    }
    const std::size_t y = *SteepestBuyer(slopes, run.counts, m, x, identical);
    run.before_split = run.counts;
    GoodPair pair = FindGoodPair(v.symmetric(x), v.symmetric(y), kx,
                                 run.counts[y], r, c, !identical);
    run.counts[x] += pair.l_x;
    run.counts[y] += pair.l_y;
    run.y = y;
    step.partner = y;
    step.taken = pair.l_x;
    step.partner_taken = pair.l_y;
    run.trace.push_back(step);
    r = 0;
  }
  return run;
}

}  // namespace internal

// Two identical buyers: the split minimizing discrepancy among those where
// both forward slopes are at most 2 v(m) / m, with high price of each bundle
// equal to the other side's forward slope and zero low prices.
inline AllocationCertificate TwoBuyerSplit(const SymmetricValuation& v) {
  internal::RequireSubadditive(v, 0);
  const std::size_t m = v.m();
  if (v(m) == 0) Fail(ErrorCode::kZeroWelfare, "v(m) = 0");
  const SlopeTable s(v);
  const Rational limit = 2 * v(m) / internal::Count(m);
  std::optional<AllocationCertificate> best;
  for (std::size_t k1 = 0; k1 <= m; ++k1) {
    const std::size_t k2 = m - k1;
    if (s.Forward(k1) > limit || s.Forward(k2) > limit) continue;
    AllocationCertificate cert;
    cert.counts = {k1, k2};
    cert.prices.high = {s.Forward(k2), s.Forward(k1)};
    cert.prices.low = {Rational(0), Rational(0)};
    cert.discrepancy = cert.prices.Gap(cert.counts) / (v(k1) + v(k2));
    if (!best || cert.discrepancy < best->discrepancy) best = std::move(cert);
  }
  if (!best) Fail(ErrorCode::kNoPairFound, "no 2-good split exists");
  best->bound = 2;
  best->price_case = "two-buyer split";
  internal::Certify(ValuationProfile::Identical(v, 2), *best);
  return *best;
}

inline Rational IdenticalBound(std::size_t n) {
  Rational b = Rational(static_cast<unsigned long>(n + 2)) /
               Rational(static_cast<unsigned long>(n - 1));
  return std::max(Rational(2), b);
}

inline AllocationCertificate AllocateIdentical(std::size_t n,
                                               const SymmetricValuation& v) {
  if (n < 2) Fail(ErrorCode::kIndexOutOfRange, "allocate_identical needs n >= 2");
  internal::RequireSubadditive(v, 0);
  const ValuationProfile profile = ValuationProfile::Identical(v, n);
  internal::GreedyRun run = internal::RunGreedy(profile, Rational(2), true);

  AllocationCertificate cert;
  cert.counts = run.counts;
  cert.trace = run.trace;
  cert.bound = IdenticalBound(n);
  const Rational theta = run.theta_x;
  if (!run.y) {
    cert.price_case = "no leftover";
    cert.prices.high.assign(n, theta);
    cert.prices.low.assign(n, theta);
  } else {
    const std::size_t x = run.x;
    const std::size_t y = *run.y;
    bool shared = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != x && run.before_split[i] == run.before_split[x]) shared = true;
    }
    cert.prices.high.assign(n, 2 * theta);
    cert.prices.low.assign(n, Rational(0));
    if (shared) {
      cert.price_case = "shared current triangle";
    } else {
      cert.price_case = "lone current triangle";
      for (std::size_t i = 0; i < n; ++i) {
        if (i != x && i != y) cert.prices.low[i] = theta;
      }
    }
  }
  internal::Certify(profile, cert);
  return cert;
}

inline AllocationCertificate AllocateHeterogeneous(const ValuationProfile& v) {
  if (!v.is_symmetric()) {
    Fail(ErrorCode::kUnsupportedClass, "allocate_heterogeneous needs symmetric buyers");
  }
  if (v.n() < 2) Fail(ErrorCode::kIndexOutOfRange, "allocate_heterogeneous needs n >= 2");
  for (std::size_t i = 0; i < v.n(); ++i) {
    internal::RequireSubadditive(v.symmetric(i), i);
  }
  internal::GreedyRun run = internal::RunGreedy(v, Rational(3), false);
  AllocationCertificate cert;
  cert.counts = run.counts;
  cert.trace = run.trace;
  std::vector<SlopeTable> slopes;
  for (const auto& vi : v.symmetric_buyers()) slopes.emplace_back(vi);
  const std::size_t n = v.n();
  cert.prices.high.assign(n, Rational(0));
  cert.prices.low.assign(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t o = 0; o < n; ++o) {
      if (o != i && slopes[o].Forward(cert.counts[o]) > cert.prices.high[i]) {
        cert.prices.high[i] = slopes[o].Forward(cert.counts[o]);
      }
    }
  }
  cert.bound = run.y ? Rational(6) : Rational(1);
  cert.price_case = run.y ? "leftover split" : "no leftover";
  internal::Certify(v, cert);
  return cert;
}

}  // namespace twoprice

#endif  // TWOPRICE_ALLOCATION_HPP_
