#pragma once

#include <Eigen/Dense>

#include <vector>

#include "hdx/complex.hpp"
#include "hdx/complex_io.hpp"
#include "hdx/filling.hpp"

/**
 * Hodge Laplacians, spectral gaps, and L2 Cheeger constants.
 *
 * All eigencomputations run in double precision, but zero eigenvalues are
 * never classified by magnitude alone: the expected multiplicity of the
 * zero eigenspace is computed exactly over the rationals (betti numbers /
 * matrix ranks) and the float spectrum must agree with it, or the routine
 * throws. Every eigensolve is followed by a residual self-check.
 */

namespace hdx {

/** Delta_i = B_i^T B_i + B_{i+1} B_{i+1}^T; includes the augmentation
 *  term in Delta_0 when the complex is augmented. */
Eigen::MatrixXd hodge_laplacian(const CellComplex& X, int i);

struct SpectralReport {
  int dim = 0;
  /** Smallest nonzero eigenvalue of (boundary compose coboundary) on
   *  i-cycles; +inf when the restricted spectrum is all zero or empty. */
  double gap_exact = 0.0;
  /** Smallest nonzero eigenvalue of (coboundary compose boundary) on
   *  i-cocycles; +inf sentinel as above. */
  double gap_coexact = 0.0;
  /** Spectral gap (smallest nonzero eigenvalue) of Delta_i. */
  double hodge_gap = 0.0;
  /** Exact rational betti number: the required zero multiplicity. */
  int betti_check = 0;
  /** Zero-detection threshold that was used. */
  double tolerance = 0.0;
  /** Full spectrum of Delta_i, ascending. */
  std::vector<double> spectrum;
};

SpectralReport spectral_report(const CellComplex& X, int i);

/** JSON form; eigenvalue list included only when full_spectrum is set.
 *  Floats are rounded to 12 significant digits for stable hashing. */
Json spectral_report_json(const SpectralReport& r, bool full_spectrum);

/**
 * L2 Cheeger constant h_i: sqrt of the smallest eigenvalue of the
 * up-Laplacian restricted to the variant's cycle family.
 * Returns 0 when the relevant homology is nonzero (decided by exact
 * rank), +inf when the family has no nonzero chains.
 * Variants follow the chain-language convention of cheeger():
 * exact_only restricts to boundaries, coexact_only to the coboundary
 * image (the latter is degenerate for the down constant: such chains
 * are never boundaries, so the value is 0 whenever the family is
 * nonempty).
 */
double cheeger_l2_down(const CellComplex& X, int i,
                       CheegerVariant variant = CheegerVariant::plain);

/** Dual constant h^i with boundary and coboundary exchanged; the
 *  meaningful restricted variant here is coexact_only. */
double cheeger_l2_up(const CellComplex& X, int i,
                     CheegerVariant variant = CheegerVariant::plain);

struct TildeL2 {
  bool infinite = false;      // no 2-cells: empty infimum
  double value = 0.0;         // tilde h^2 under the L2 norm
  double sigma_min = 0.0;     // smallest positive singular value of B_2
  bool kernel_nonzero = false;  // ker B_2 != 0, decided by exact rank
  bool h2_vanishing = false;    // H^2(X, R) != 0: the sandwich bound's
                                // hypothesis on the ambient complex fails
};

/**
 * tilde h^2 under the L2 norm, via the closed form from the orthogonal
 * decomposition C_2 = im(coboundary) (+) ker(boundary):
 *   1/value = sqrt(s^2 + 1)  when ker B_2 != 0,
 *           = s              when ker B_2 = 0 and B_2 != 0,
 *           = 1              when B_2 = 0,
 * with s = 1/sigma_min^+(B_2). The value depends only on B_2, so it is
 * unchanged by attaching higher cells. Before returning, the routine
 * recomputes s through an independent eigensolve of B_2^T B_2 and
 * asserts the sandwich s <= 1/value <= s + 1.
 */
TildeL2 tilde_h2_l2(const CellComplex& X);

}  // namespace hdx
