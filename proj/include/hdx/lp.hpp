#pragma once

/**
 * Exact rational linear programming.
 *
 * Solves  min c.x  subject to  A x = b, x >= 0  with a dense two-phase
 * tableau simplex. Arithmetic is exact: the solver runs first over
 * checked 64-bit fractions (Rat) and transparently restarts over
 * arbitrary-precision rationals (BigRat) if any intermediate overflows.
 * Certificates produced from LP output are therefore exact by
 * construction; no floating point enters.
 *
 * Pivoting: Dantzig's rule (most negative reduced cost) for speed, with a
 * hard switch to Bland's rule after a fixed pivot budget so cycling is
 * impossible. Ties in the ratio test break by smallest row index, making
 * runs deterministic.
 *
 * The system is preprocessed by exact Gauss-Jordan elimination on [A | b]:
 * dependent rows are dropped and inconsistency is detected there, so
 * "infeasible" is decided by elimination, never inferred from a failed
 * phase one alone.
 */

#include <cstddef>
#include <utility>
#include <vector>

#include "hdx/exact_linalg.hpp"
#include "hdx/rational.hpp"

namespace hdx {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  BigRat objective;      // valid when optimal
  RatVec solution;       // length = #variables, valid when optimal
  long long pivots = 0;  // phase 1 + phase 2 pivot count
  bool escalated = false;  // true when the 64-bit pass overflowed
};

namespace lp_detail {

// Phase budget before abandoning Dantzig pricing for Bland's rule.
constexpr long long kDantzigBudget = 2000;
// Absolute pivot cap; exceeding it is a logic error, not an input property.
constexpr long long kPivotCap = 2000000;

template <class Q>
struct Tableau {
  // Row 0..m-1: constraints. Last row: reduced costs (objective row).
  // Column layout: structural+artificial variables, then RHS.
  std::vector<std::vector<Q>> t;
  std::vector<int> basis;  // basis[r] = column basic in row r
  int m = 0;               // constraint rows
  int n = 0;               // variable columns (excludes RHS)

  Q& at(int r, int c) { return t[r][c]; }
  const Q& at(int r, int c) const { return t[r][c]; }
  Q& rhs(int r) { return t[r][n]; }

  void pivot(int pr, int pc) {
    std::vector<Q>& prow = t[pr];
    const Q piv = prow[pc];
    for (int c = 0; c <= n; ++c) {
      if (sign_of(prow[c]) != 0) prow[c] /= piv;
    }
    for (int r = 0; r <= m; ++r) {
      if (r == pr) continue;
      const Q f = t[r][pc];
      if (sign_of(f) == 0) continue;
      std::vector<Q>& row = t[r];
      for (int c = 0; c <= n; ++c) {
        if (sign_of(prow[c]) != 0) row[c] -= f * prow[c];
      }
    }
    basis[pr] = pc;
  }

  // Entering column: Dantzig within budget, then Bland. Returns -1 at
  // optimality. `allowed(c)` masks columns (used to bar artificials).
  template <class Allowed>
  int choose_entering(long long pivots_so_far, const Allowed& allowed) const {
    const std::vector<Q>& obj = t[m];
    if (pivots_so_far < kDantzigBudget) {
      int best = -1;
      for (int c = 0; c < n; ++c) {
        if (!allowed(c) || sign_of(obj[c]) >= 0) continue;
        if (best == -1 || obj[c] < obj[best]) best = c;
      }
      if (best != -1) return best;
      return -1;
    }
    for (int c = 0; c < n; ++c) {
      if (allowed(c) && sign_of(obj[c]) < 0) return c;
    }
    return -1;
  }

  // Ratio test; returns -1 when the column is unbounded.
  int choose_leaving(int pc) const {
    int best = -1;
    Q best_ratio{};
    for (int r = 0; r < m; ++r) {
      if (sign_of(t[r][pc]) <= 0) continue;
      Q ratio = t[r][n] / t[r][pc];
      if (best == -1 || ratio < best_ratio ||
          (ratio == best_ratio && basis[r] < basis[best])) {
        best = r;
        best_ratio = ratio;
      }
    }
    return best;
  }
};

/**
 * Core simplex over rational type Q on a full-row-rank system.
 * Rows of `a` must be linearly independent and b >= 0 is NOT assumed
 * (rows are sign-normalized here).
 */
template <class Q>
LpResult simplex_full_rank(const RatMat& a, const RatVec& b, const RatVec& c) {
  const int m = static_cast<int>(a.size());
  const int n = m == 0 ? static_cast<int>(c.size()) : static_cast<int>(a[0].size());

  if (m == 0) {
    // No constraints: minimum is 0 at x = 0 unless some cost is negative.
    for (const BigRat& ci : c)
      if (ci < 0) return {LpStatus::unbounded, BigRat(0), {}, 0, false};
    LpResult res;
    res.status = LpStatus::optimal;
    res.objective = BigRat(0);
    res.solution.assign(c.size(), BigRat(0));
    return res;
  }

  Tableau<Q> tab;
  tab.m = m;
  tab.n = n + m;  // structural + one artificial per row
  tab.t.assign(m + 1, std::vector<Q>(tab.n + 1, Q(0)));
  tab.basis.assign(m, 0);

  for (int r = 0; r < m; ++r) {
    const bool flip = b[r] < 0;
    for (int cidx = 0; cidx < n; ++cidx) {
      Q v = q_from_bigrat<Q>(a[r][cidx]);
      tab.at(r, cidx) = flip ? Q(-v) : v;
    }
    Q rv = q_from_bigrat<Q>(b[r]);
    tab.rhs(r) = flip ? Q(-rv) : rv;
    tab.at(r, n + r) = Q(1);
    tab.basis[r] = n + r;
  }

  long long pivots = 0;

  // Phase 1: minimize the sum of artificials. Objective row = -sum of
  // constraint rows on structural columns (artificials priced to zero).
  for (int cidx = 0; cidx <= tab.n; ++cidx) {
    Q s(0);
    for (int r = 0; r < m; ++r) s += tab.at(r, cidx);
    tab.at(m, cidx) = (cidx >= n && cidx < tab.n) ? Q(0) : Q(-s);
  }
  // Artificial columns start basic with reduced cost zero already ensured.
  {
    auto allowed = [&](int cidx) { return cidx < n; };
    while (true) {
      int pc = tab.choose_entering(pivots, allowed);
      if (pc == -1) break;
      int pr = tab.choose_leaving(pc);
      if (pr == -1) break;  // phase-1 objective bounded below by 0 anyway
      tab.pivot(pr, pc);
      if (++pivots > kPivotCap)
        throw std::runtime_error("lp: pivot cap exceeded in phase 1");
    }
  }
  if (sign_of(tab.rhs(m)) != 0) {
    // Residual infeasibility. Preprocessing certifies inconsistency
    // exactly, so with full-row-rank input this indicates x >= 0 cuts off
    // the affine solution set: genuinely infeasible.
    return {LpStatus::infeasible, BigRat(0), {}, pivots, false};
  }
  // Drive leftover artificials out of the basis. Full row rank guarantees
  // each such row has a nonzero structural entry.
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] < n) continue;
    int pc = -1;
    for (int cidx = 0; cidx < n; ++cidx) {
      if (sign_of(tab.at(r, cidx)) != 0) {
        pc = cidx;
        break;
      }
    }
    if (pc == -1)
      throw std::runtime_error("lp: dependent row survived preprocessing");
    tab.pivot(r, pc);
    ++pivots;
  }

  // Phase 2: install the real objective, price out the basis.
  for (int cidx = 0; cidx < n; ++cidx) tab.at(m, cidx) = q_from_bigrat<Q>(c[cidx]);
  for (int cidx = n; cidx <= tab.n; ++cidx) tab.at(m, cidx) = Q(0);
  for (int r = 0; r < m; ++r) {
    const Q f = tab.at(m, tab.basis[r]);
    if (sign_of(f) == 0) continue;
    for (int cidx = 0; cidx <= tab.n; ++cidx) {
      if (sign_of(tab.at(r, cidx)) != 0) tab.at(m, cidx) -= f * tab.at(r, cidx);
    }
  }
  {
    auto allowed = [&](int cidx) { return cidx < n; };  // artificials stay out
    while (true) {
      int pc = tab.choose_entering(pivots, allowed);
      if (pc == -1) break;
      int pr = tab.choose_leaving(pc);
      if (pr == -1) return {LpStatus::unbounded, BigRat(0), {}, pivots, false};
      tab.pivot(pr, pc);
      if (++pivots > kPivotCap)
        throw std::runtime_error("lp: pivot cap exceeded in phase 2");
    }
  }

  LpResult res;
  res.status = LpStatus::optimal;
  res.pivots = pivots;
  res.solution.assign(n, BigRat(0));
  for (int r = 0; r < m; ++r) {
    if (tab.basis[r] < n) res.solution[tab.basis[r]] = to_bigrat(tab.rhs(r));
  }
  res.objective = -to_bigrat(tab.rhs(m));
  return res;
}

struct Preprocessed {
  RatMat a;       // independent rows only
  RatVec b;
  bool infeasible = false;  // [A|b] elimination produced 0 = nonzero
};

/** Exact row reduction of [A | b]: drop dependent rows, certify 0=c rows. */
inline Preprocessed preprocess(const RatMat& a, const RatVec& b) {
  const int m = static_cast<int>(a.size());
  const int n = m == 0 ? 0 : static_cast<int>(a[0].size());
  RatMat aug(m, RatVec(n + 1, BigRat(0)));
  for (int r = 0; r < m; ++r) {
    for (int cidx = 0; cidx < n; ++cidx) aug[r][cidx] = a[r][cidx];
    aug[r][n] = b[r];
  }
  std::vector<int> pivots = rref(aug);
  Preprocessed out;
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    if (pivots[k] == n) {
      out.infeasible = true;  // pivot landed in the b column
      return out;
    }
    RatVec row(aug[k].begin(), aug[k].begin() + n);
    out.a.push_back(std::move(row));
    out.b.push_back(aug[k][n]);
  }
  return out;
}

}  // namespace lp_detail

/**
 * min c.x  s.t.  A x = b, x >= 0, all data exact rationals.
 * Runs over 64-bit fractions first; restarts over BigRat on overflow.
 */
inline LpResult lp_solve_min(const RatMat& a, const RatVec& b, const RatVec& c) {
  if (a.size() != b.size())
    throw std::invalid_argument("lp_solve_min: row count mismatch");
  for (const auto& row : a)
    if (row.size() != c.size())
      throw std::invalid_argument("lp_solve_min: column count mismatch");

  lp_detail::Preprocessed pre = lp_detail::preprocess(a, b);
  if (pre.infeasible) return {LpStatus::infeasible, BigRat(0), {}, 0, false};

  try {
    return lp_detail::simplex_full_rank<Rat>(pre.a, pre.b, c);
  } catch (const RatOverflow&) {
    LpResult res = lp_detail::simplex_full_rank<BigRat>(pre.a, pre.b, c);
    res.escalated = true;
    return res;
  }
}

}  // namespace hdx
