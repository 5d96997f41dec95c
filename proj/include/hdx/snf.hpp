#pragma once

/**
 * Smith normal form over the integers.
 *
 * Decomposes an integer matrix M as U M V = D with U, V unimodular and D
 * diagonal, d_1 | d_2 | ... | d_r. Row and column operations are tracked so
 * callers can convert between original and diagonal coordinates (used for
 * torsion generators and cover edge labels).
 */

#include <vector>

#include "hdx/rational.hpp"
#include "hdx/sparse_int.hpp"

namespace hdx {

using IntMat = std::vector<std::vector<BigInt>>;

struct SmithForm {
  IntMat u;                      // rows(M) x rows(M), unimodular
  IntMat v;                      // cols(M) x cols(M), unimodular
  std::vector<BigInt> diagonal;  // nonnegative, divisibility chain, rank entries nonzero
  int rank = 0;                  // number of nonzero diagonal entries

  /** Invariant factors greater than one (the torsion part). */
  std::vector<BigInt> torsion() const;
};

IntMat to_bigint(const SparseInt& m);
IntMat int_identity(int n);
IntMat int_mul(const IntMat& a, const IntMat& b);
std::vector<BigInt> int_mul_vec(const IntMat& a, const std::vector<BigInt>& x);

/** Smith normal form; verifies U M V = D and |det U| = |det V| = 1. */
SmithForm smith_normal_form(const SparseInt& m);
SmithForm smith_normal_form(const IntMat& m);

}  // namespace hdx
