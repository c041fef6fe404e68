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

// Small dense two-phase simplex over exact rationals.
//
// Used for the handful of places where a decision is a linear feasibility
// question: XOS membership and supporting prices (does an additive clause
// touch v at S?), and existence of CE/WE prices for a fixed allocation in
// general markets. Problems are tiny (tens of variables), so a dense tableau
// with Bland's rule is enough; constraint families with 2^m members are fed
// through MaximizeLazily, which adds violated rows on demand.

#ifndef TWOPRICE_LP_HPP_
#define TWOPRICE_LP_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "twoprice/rational.hpp"

namespace twoprice::lp {

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

struct Constraint {
  std::vector<Rational> coeffs;
  Relation relation = Relation::kLessEqual;
  Rational rhs;
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Result {
  Status status = Status::kInfeasible;
  Rational objective;
  std::vector<Rational> x;
};

namespace internal {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cells_(rows, std::vector<Rational>(cols + 1)), basis_(rows, 0) {}

  std::size_t rows() const { return cells_.size(); }
  std::size_t cols() const { return cells_.empty() ? 0 : cells_[0].size() - 1; }
  Rational& at(std::size_t r, std::size_t c) { return cells_[r][c]; }
  Rational& rhs(std::size_t r) { return cells_[r].back(); }
  std::size_t& basis(std::size_t r) { return basis_[r]; }

  // Maximizes cost . x over the current basis. Columns with allowed[c] ==
  // false never enter. Returns false when unbounded.
  bool Optimize(const std::vector<Rational>& cost,
                const std::vector<bool>& allowed) {
    const std::size_t n = cols();
    std::vector<Rational> z(n + 1);
    auto recompute = [&] {
      for (std::size_t c = 0; c <= n; ++c) {
        Rational acc = 0;
        for (std::size_t r = 0; r < rows(); ++r) {
          const Rational& cb = cost[basis_[r]];
          if (cb != 0) acc += cb * cells_[r][c];
        }
        z[c] = (c < n) ? acc - cost[c] : acc;
      }
    };
    recompute();
    while (true) {
      std::optional<std::size_t> entering;
      for (std::size_t c = 0; c < n; ++c) {
        if (allowed[c] && z[c] < 0) {
          entering = c;
          break;
        }
      }
      if (!entering) return true;
      const std::size_t e = *entering;
      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t r = 0; r < rows(); ++r) {
        if (cells_[r][e] <= 0) continue;
        Rational ratio = cells_[r].back() / cells_[r][e];
        if (!leaving || ratio < best_ratio ||
            (ratio == best_ratio && basis_[r] < basis_[*leaving])) {
          leaving = r;
          best_ratio = ratio;
        }
      }
      if (!leaving) return false;
      Pivot(*leaving, e);
      const Rational factor = z[e];
      for (std::size_t c = 0; c <= n; ++c) {
        z[c] -= factor * cells_[*leaving][c];
      }
    }
  }

  void Pivot(std::size_t pr, std::size_t pc) {
    const std::size_t n = cols();
    const Rational pivot = cells_[pr][pc];
    for (std::size_t c = 0; c <= n; ++c) cells_[pr][c] /= pivot;
    for (std::size_t r = 0; r < rows(); ++r) {
      if (r == pr || cells_[r][pc] == 0) continue;
      const Rational factor = cells_[r][pc];
      for (std::size_t c = 0; c <= n; ++c) {
        if (cells_[pr][c] != 0) cells_[r][c] -= factor * cells_[pr][c];
      }
    }
    basis_[pr] = pc;
  }

  void DropRow(std::size_t r) {
    cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

 private:
  std::vector<std::vector<Rational>> cells_;
  std::vector<std::size_t> basis_;
};

}  // namespace internal

// maximize objective . x  subject to rows, x >= 0.
inline Result Maximize(const std::vector<Rational>& objective,
                       const std::vector<Constraint>& rows) {
  const std::size_t nvars = objective.size();
  std::size_t nslack = 0;
  std::size_t nart = 0;
  std::vector<Constraint> norm = rows;
  for (Constraint& row : norm) {
    if (row.coeffs.size() != nvars) {
      Fail(ErrorCode::kDimensionMismatch, "LP row width differs from objective");
    }
    if (row.rhs < 0) {
      for (Rational& a : row.coeffs) a = -a;
      row.rhs = -row.rhs;
      if (row.relation == Relation::kLessEqual) {
        row.relation = Relation::kGreaterEqual;
      } else if (row.relation == Relation::kGreaterEqual) {
        row.relation = Relation::kLessEqual;
      }
    }
    if (row.relation != Relation::kEqual) ++nslack;
    if (row.relation != Relation::kLessEqual) ++nart;
  }

  const std::size_t total = nvars + nslack + nart;
  internal::Tableau tab(norm.size(), total);
  std::size_t next_slack = nvars;
  std::size_t next_art = nvars + nslack;
  for (std::size_t r = 0; r < norm.size(); ++r) {
    for (std::size_t c = 0; c < nvars; ++c) tab.at(r, c) = norm[r].coeffs[c];
    tab.rhs(r) = norm[r].rhs;
    switch (norm[r].relation) {
      case Relation::kLessEqual:
        tab.at(r, next_slack) = 1;
        tab.basis(r) = next_slack++;
        break;
      case Relation::kGreaterEqual:
        tab.at(r, next_slack++) = -1;
        tab.at(r, next_art) = 1;
        tab.basis(r) = next_art++;
        break;
      case Relation::kEqual:
        tab.at(r, next_art) = 1;
        tab.basis(r) = next_art++;
        break;
    }
  }

  Result result;
  std::vector<bool> allowed(total, true);
  if (nart > 0) {
    std::vector<Rational> phase1(total);
    for (std::size_t c = nvars + nslack; c < total; ++c) phase1[c] = -1;
    tab.Optimize(phase1, allowed);
    Rational infeasibility = 0;
    for (std::size_t r = 0; r < tab.rows(); ++r) {
      if (tab.basis(r) >= nvars + nslack) infeasibility += tab.rhs(r);
    }
    if (infeasibility != 0) {
      result.status = Status::kInfeasible;
      return result;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t r = 0; r < tab.rows();) {
      if (tab.basis(r) < nvars + nslack) {
        ++r;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t c = 0; c < nvars + nslack; ++c) {
        if (tab.at(r, c) != 0) {
          col = c;
          break;
        }
      }
      if (col) {
        tab.Pivot(r, *col);
        ++r;
      } else {
        tab.DropRow(r);
      }
    }
    for (std::size_t c = nvars + nslack; c < total; ++c) allowed[c] = false;
  }

  std::vector<Rational> cost(total);
  for (std::size_t c = 0; c < nvars; ++c) cost[c] = objective[c];
  if (!tab.Optimize(cost, allowed)) {
    result.status = Status::kUnbounded;
    return result;
  }
  result.status = Status::kOptimal;
  result.x.assign(nvars, Rational(0));
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    if (tab.basis(r) < nvars) result.x[tab.basis(r)] = tab.rhs(r);
  }
  result.objective = 0;
  for (std::size_t c = 0; c < nvars; ++c) {
    result.objective += objective[c] * result.x[c];
  }
  return result;
}

// Returns a constraint violated by x, or nullopt when x satisfies the full
// (implicit) family.
using Separator = std::function<std::optional<Constraint>(const std::vector<Rational>&)>;

// Cutting-plane driver: solves over `rows`, asks `separate` for a violated
// member of the implicit family, appends it, and repeats. Terminates because
// the family is finite and a returned cut is never satisfied by the current
// optimum.
inline Result MaximizeLazily(const std::vector<Rational>& objective,
                             std::vector<Constraint> rows,
                             const Separator& separate) {
  while (true) {
    Result r = Maximize(objective, rows);
    if (r.status != Status::kOptimal) return r;
    std::optional<Constraint> cut = separate(r.x);
    if (!cut) return r;
    rows.push_back(std::move(*cut));
  }
}

inline bool Satisfies(const Constraint& row, const std::vector<Rational>& x) {
  Rational lhs = 0;
  for (std::size_t c = 0; c < x.size(); ++c) {
    if (row.coeffs[c] != 0) lhs += row.coeffs[c] * x[c];
  }
  switch (row.relation) {
    case Relation::kLessEqual: return lhs <= row.rhs;
    case Relation::kGreaterEqual: return lhs >= row.rhs;
    case Relation::kEqual: return lhs == row.rhs;
  }
  return false;
}

}  // namespace twoprice::lp

#endif  // TWOPRICE_LP_HPP_
