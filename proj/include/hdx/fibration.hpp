#pragma once

#include <string>
#include <vector>

#include "hdx/chain.hpp"
#include "hdx/complex.hpp"
#include "hdx/filling.hpp"
#include "hdx/rational.hpp"

namespace hdx {

/** A vertex fiber pulled out as its own complex, with index maps back. */
struct FiberPiece {
  CellComplex complex;        // augmented graph on the fiber
  std::vector<int> vertices;  // local vertex -> total-space vertex
  std::vector<int> edges;     // local edge -> total-space edge
};

/**
 * A surjective cellular map between connected graphs whose vertex fibers
 * are connected subgraphs. vertex_map sends total-space vertices to base
 * vertices; edge_map sends edges to base edges, or to -1 when the edge
 * collapses inside a fiber.
 */
struct GraphFibration {
  CellComplex total;                     // E
  CellComplex base;                      // B
  std::vector<int> vertex_map;           // E vertex -> B vertex
  std::vector<int> edge_map;             // E edge -> B edge, -1 = collapsed
  std::vector<std::vector<int>> fibers;  // B vertex -> E vertices above it
  int max_degree = 1;      // D: largest vertex degree across E and B
  int max_fiber_size = 1;  // C: largest vertex fiber

  FiberPiece fiber(int v) const;
};

/**
 * Validate the fibration: graphs are connected, the maps are total,
 * surjective and cellular (an edge maps onto the edge spanned by its
 * endpoints' images, or collapses when those agree), every fiber subgraph
 * is connected, and the stored D and C match the data. Throws
 * std::invalid_argument on the first violation.
 */
void check_fibration(const GraphFibration& F);

/** pi = identity on B; every fiber is a single vertex. */
GraphFibration identity_fibration(const CellComplex& B);

/** E = B x edge (a prism over B); every fiber is one edge. */
GraphFibration prism_fibration(const CellComplex& B);

/** E = B x F (box product of graphs), projected onto the first factor. */
GraphFibration product_fibration(const CellComplex& B, const CellComplex& F);

/** Dispatcher: kind is "identity", "prism" or "product" (needs fib). */
GraphFibration build_fibration(const std::string& kind, const CellComplex& base,
                               const CellComplex* fib = nullptr);

/** One side of the comparison: chain h_0 or cochain coexact h^1. */
struct LeraySerreSide {
  BigRat lhs;            // 1/h of the total space (0 for an empty family)
  BigRat rhs;            // the comparison bound
  BigRat inv_base;       // 1/h of the base
  BigRat max_inv_fiber;  // worst 1/h across vertex fibers
  bool holds = false;
  // Constructed witness: a filling of the total space's extremal cycle
  // assembled from a base filling plus fiberwise corrections (chain side),
  // or the dual cofilling (cochain side).
  bool witness_valid = false;       // its (co)boundary equation is exact
  bool witness_within_rhs = false;  // its norm ratio stays within rhs
  BigRat witness_ratio;             // |witness| / |alpha|, 0 when vacuous
};

struct LeraySerreReport {
  int D = 1;
  int C = 1;
  LeraySerreSide chain;    // 1/h_0(E) <= 2D (1/h_0(B) + 1) max_v(1/h_0(fib) + 1)
  LeraySerreSide cochain;  // 1/h^1_co(E) <= C (1/h^1_co(B) + 1) max_v(1/h^1_co(fib) + 1)
  std::string str() const;
};

/**
 * Evaluate both comparison inequalities with exact L1 Cheeger values and
 * rebuild the constructive witnesses behind them.
 *
 * Only the L1 norm is accepted: it is the one regime where the brute
 * Cheeger values are exact on both sides, so a violated inequality is a
 * genuine counterexample rather than enumeration slack. Throws
 * std::logic_error when an inequality fails or a constructed witness does
 * not satisfy its boundary equation; the witness norm ratios are reported
 * as flags, not thrown on.
 */
LeraySerreReport leray_serre_check(const GraphFibration& F, const NormSpec& ns,
                                   const CheegerOptions& opts = {});

}  // namespace hdx
