#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hdx/complex.hpp"
#include "hdx/rational.hpp"

namespace hdx {

/**
 * Finite abelian group presented by cyclic factors (each >= 2, in
 * divisibility order). Elements are flat indices into the lexicographic
 * tuple enumeration, so 0 is the identity.
 */
struct FiniteAbelianGroup {
  std::vector<long long> factors;

  long long order() const;
  std::vector<long long> tuple(long long g) const;
  long long index(const std::vector<long long>& t) const;
  long long add(long long g, long long h) const;
  long long neg(long long g) const;
};

/**
 * The universal abelian cover of a complex with finite H_1(X, Z).
 *
 * Construction: spanning tree by BFS from vertex 0; every non-tree edge
 * is labeled by its H_1 class (SNF coordinates of the relation matrix of
 * 2-cell boundaries on non-tree edges); tree edges carry the identity.
 * Total cells are (base cell, sheet) pairs indexed base * order + sheet,
 * with ids "<base id>@<sheet>". Lifted incidence follows the labels:
 * edges cross sheets by their label, 2-cells by walking their boundary
 * (Eulerian circuit over the incidence darts), higher cells by sheet
 * propagation across shared ridges, which requires unit coefficients.
 */
struct CoverComplex {
  CellComplex base;
  FiniteAbelianGroup group;
  std::vector<long long> edge_labels;  // group element per base edge
  std::vector<char> tree_edge;         // spanning tree indicator per edge
  CellComplex total;
  // deck[h][d][c] = image of total cell c of dimension d under sheet shift h
  std::vector<std::vector<std::vector<int>>> deck;

  long long sheets() const { return group.order(); }
  int lift_index(int base_cell, long long sheet) const {
    return static_cast<int>(base_cell * sheets() + sheet);
  }
};

/**
 * Build the universal abelian cover. Throws std::invalid_argument when X
 * is disconnected, when H_1(X, Z) is infinite, or when the cell structure
 * cannot be lifted (loop edges off a one-vertex complex, non-unit
 * incidence above dimension 2); CapExceeded when the total would be huge.
 */
CoverComplex universal_abelian_cover(const CellComplex& X);

/**
 * Independent checks on a built cover: group shape, deck action freeness
 * and transitivity on fibers, incidence equivariance, multiplicative
 * Euler characteristic, and cell-level quotient recovery. Throws
 * std::runtime_error on the first violation.
 */
void verify_cover(const CoverComplex& cc);

struct TorsDiameterRow {
  std::string name;
  long long h1_order = 1;   // |H_1(X, Z)|
  int diam_base = 0;        // 1-skeleton diameter of X
  int diam_total = 0;       // 1-skeleton diameter of the cover
  double ratio = 0.0;       // diam_total / max(1, diam_base)
  bool ratio_le_order = false;
};

struct TorsDiameterReport {
  std::vector<TorsDiameterRow> rows;
  // least-squares slope of log(diam_total) against log |H_1| over the
  // rows with |H_1| >= 2 (0 when fewer than two such rows)
  double loglog_slope = 0.0;
  std::string str() const;  // aligned text table plus the slope line
};

/**
 * Diameter growth table across a family of complexes. Each row records
 * base and cover diameters. The report asserts the combinatorially
 * forced bound diam(total) <= |H_1| * (2 diam(base) + 1) on every row
 * (sheets are joined by generator loops of length <= 2 diam + 1 and the
 * sheet graph has diameter < |H_1|) and throws if it ever fails; sharper
 * growth claims are only measured, via ratio_le_order and the slope.
 */
TorsDiameterReport torsdiameter_report(const std::vector<CellComplex>& xs);

}  // namespace hdx
