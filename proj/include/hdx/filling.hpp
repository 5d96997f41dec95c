#pragma once

/**
 * Filling norms and L^p Cheeger constants.
 *
 * min_filling solves  min ||beta||_p  s.t.  boundary(beta) = alpha  with
 * exact rational LP for p in {1, inf} and an exact least-norm solve for
 * p = 2 (the witness is rational; only the reported norm is a float).
 * Feasibility is always decided by exact elimination on [B | alpha],
 * never inferred from LP behavior.
 *
 * cheeger() computes h_i (chain side) and h^i (cochain side, via the
 * formal transpose complex) with three methods:
 *
 *   brute      p in {1, inf}: enumerate the elementary vectors (circuits)
 *              of the relevant cycle space and take the exact minimum of
 *              ||alpha|| / minfill(alpha). Exact for p = 1, where the
 *              infimum is attained at an extreme point of the L^1 unit
 *              ball of the cycle space, i.e. at an elementary vector.
 *              For p = inf the same enumeration is only an upper bound
 *              (the L^inf ball has non-elementary extreme points) and the
 *              result is flagged as a bound.
 *              p = 2: exhaustive variational minimization of the Rayleigh
 *              quotient ||alpha||^2 / ||minfill(alpha)||^2 over an exact
 *              rational basis of the cycle space (a generalized symmetric
 *              eigenproblem; no sampling, but float eigenvalues).
 *   lp_enum    evaluate the ratio on a deterministic exact kernel basis
 *              of the cycle space (and pairwise combinations); an upper
 *              bound on h, flagged.
 *   heuristic  random sampled cycles; an upper bound on h, flagged.
 *              Sampling can only exhibit cycles with large filling cost,
 *              so it bounds h from above (equivalently 1/h from below).
 *
 * Variants restrict the infimum: plain = all cycles, exact_only = image
 * of the next boundary, coexact_only = image of the coboundary from one
 * degree down. Cochain-side constants reuse the chain-side machinery on
 * transpose_complex(X), where coexact becomes exact.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hdx/chain.hpp"
#include "hdx/complex.hpp"
#include "hdx/exact_linalg.hpp"

namespace hdx {

struct FillingResult {
  bool feasible = false;   // alpha is a boundary (certified exactly)
  BigRat value;            // exact for p in {1, inf}; 0 when infeasible
  BigRat value_sq;         // exact squared L2 norm (p = 2 only)
  double value_d = 0.0;    // float view of the value (sqrt for p = 2)
  Chain witness;           // beta with boundary(beta) = alpha, exact
  bool escalated = false;  // LP needed arbitrary-precision restart

  bool infinite() const { return !feasible; }
};

/** min ||beta||_p s.t. boundary(beta) = alpha, beta in degree dim+1. */
FillingResult min_filling(const CellComplex& X, const Chain& alpha,
                          const NormSpec& ns);

/** Exact check: witness boundary equals alpha and norm equals value. */
void verify_filling(const CellComplex& X, const Chain& alpha,
                    const FillingResult& fr, const NormSpec& ns);

/**
 * Formal transpose complex: degree j of the result is degree D - j of X,
 * with transposed incidence. An augmented X contributes one extra top
 * cell whose incidence column is all ones (the augmentation row, turned
 * on its side); the result itself is never augmented. Cochain-side
 * constants of X are chain-side constants of the transpose:
 * h^i(X) = h_{D'-...}: see cheeger_up.
 */
CellComplex transpose_complex(const CellComplex& X);

enum class CheegerVariant { plain, exact_only, coexact_only };
enum class CheegerMethod { brute, lp_enum, heuristic };
enum class CheegerSide { down, up };  // h_i vs h^i

struct CheegerOptions {
  int cell_cap = 30;             // brute: max cells in the enumeration degree
  long long node_cap = 8000000;  // brute: max DFS dependency tests
  int samples = 200;             // heuristic: sampled cycles
  std::uint64_t seed = 1;        // heuristic sampling seed
};

struct CheegerValue {
  int dim = 0;
  CheegerSide side = CheegerSide::down;
  Lp p = Lp::l1;
  CheegerVariant variant = CheegerVariant::plain;
  CheegerMethod method = CheegerMethod::brute;

  bool infinite = false;     // empty infimum (no nonzero cycles)
  bool zero = false;         // relevant homology is nonzero (exact rank)
  bool is_upper_bound = false;  // heuristic / lp_enum / brute at p = inf
  bool escalated = false;

  BigRat value;              // exact for p in {1, inf} (when finite)
  BigRat value_sq;           // exact ratio of squares for p = 2 witnesses
  double value_d = 0.0;      // float view (0 when zero, inf flag separate)

  Chain witness_cycle;       // achieving cycle (brute / best sample)
  Chain witness_filling;     // its minimal filling
  long long cycles_enumerated = 0;

  std::string str() const;
};

/** h_i(X, p) over the chosen cycle family. */
CheegerValue cheeger(const CellComplex& X, int i, const NormSpec& ns,
                     CheegerVariant variant, CheegerMethod method,
                     const CheegerOptions& opts = {});

/** Chain-side h_i: alias of cheeger(). */
CheegerValue cheeger_down(const CellComplex& X, int i, const NormSpec& ns,
                          CheegerVariant variant = CheegerVariant::plain,
                          CheegerMethod method = CheegerMethod::brute,
                          const CheegerOptions& opts = {});

/**
 * Cochain-side h^i: runs cheeger on transpose_complex(X) in the degree
 * carrying C^i, mapping variant coexact_only <-> exact_only. Witnesses
 * come back indexed by X's i-cells (transposition preserves cell order).
 */
CheegerValue cheeger_up(const CellComplex& X, int i, const NormSpec& ns,
                        CheegerVariant variant = CheegerVariant::plain,
                        CheegerMethod method = CheegerMethod::brute,
                        const CheegerOptions& opts = {});

/** Degree of transpose_complex(X) holding C^i of X. */
int transpose_degree(const CellComplex& X, int i);

/**
 * Minimal decomposition alpha = d(beta) + gamma with gamma closed:
 * minimizes ||beta||_p + ||gamma||_p. For p = 2 the decomposition into
 * image-of-d plus kernel-of-boundary is unique and orthogonal, so the
 * solver reduces to a projection plus a least-norm primitive.
 */
struct TildeDecomposition {
  // Always solvable: over Q the 2-chains split as (image of d) + (kernel
  // of boundary), a direct sum, so every alpha admits a decomposition.
  Chain beta;               // degree 1 primitive
  Chain gamma;              // closed degree 2 part
  BigRat cost;              // ||beta||_p + ||gamma||_p, exact p in {1,inf}
  double cost_d = 0.0;      // float view (p = 2: sum of the two l2 norms)
  bool escalated = false;
};

TildeDecomposition tilde_h2_decompose(const CellComplex& X, const Chain& alpha,
                                      const NormSpec& ns);

/**
 * Modified second constant: 1/h~2 = sup over nonzero 2-chains of
 * (decomposition cost)/||alpha||. For p = 1 the cost is a norm, so the
 * supremum is attained at a unit 2-cell and the brute method is exact.
 * For p = inf the brute method enumerates sign patterns up to a cap.
 */
CheegerValue tilde_h2(const CellComplex& X, const NormSpec& ns,
                      CheegerMethod method = CheegerMethod::brute,
                      const CheegerOptions& opts = {});

/**
 * Elementary vectors (circuits) of {x : M x = 0}: minimal-support
 * nonzero kernel vectors, one primitive integer representative each,
 * enumerated deterministically in lexicographic support order. `ncols`
 * is passed explicitly so constraint matrices with zero rows (kernel =
 * everything, circuits = unit vectors) keep their shape. Throws
 * CapExceeded past node_cap dependency tests.
 */
std::vector<std::vector<BigInt>> elementary_kernel_vectors(
    const RatMat& m, int ncols, long long node_cap = 8000000);

}  // namespace hdx
