#pragma once

/**
 * Exact linear algebra over the integers and rationals.
 *
 * Dense routines on small matrices: fraction-free Bareiss elimination for
 * ranks and determinants over BigInt, Gauss-Jordan over BigRat for kernels,
 * images, and linear solves. Everything here is exact; callers needing
 * floating point convert afterwards.
 */

#include <optional>
#include <vector>

#include "hdx/rational.hpp"
#include "hdx/sparse_int.hpp"

namespace hdx {

/** Dense rational matrix, row-major. */
using RatMat = std::vector<std::vector<BigRat>>;
using RatVec = std::vector<BigRat>;

RatMat to_rational(const SparseInt& m);
RatMat rat_transpose(const RatMat& m);
RatVec rat_mul_vec(const RatMat& m, const RatVec& v);
RatMat rat_mul(const RatMat& a, const RatMat& b);

/** Rank over Q via fraction-free Bareiss elimination on integer input. */
int rank_bareiss(const SparseInt& m);

/** Determinant of a square integer matrix (Bareiss). */
BigInt det_bareiss(const std::vector<std::vector<BigInt>>& m);

/**
 * Reduced row echelon form in place. Returns pivot column per pivot row.
 * Rows beyond the returned size are zero.
 */
std::vector<int> rref(RatMat& m);

/** Basis of the right kernel {x : m x = 0}, one vector per free column. */
std::vector<RatVec> kernel_basis(const RatMat& m);
std::vector<RatVec> kernel_basis(const SparseInt& m);

/** Basis of the left kernel {y : y m = 0}. */
std::vector<RatVec> left_kernel_basis(const SparseInt& m);

/**
 * Any solution of m x = b, or nullopt if inconsistent. `m` is dense
 * rational; the solution sets free variables to zero.
 */
std::optional<RatVec> solve(const RatMat& m, const RatVec& b);
std::optional<RatVec> solve(const SparseInt& m, const RatVec& b);

/** True when b lies in the column span of m. */
bool in_column_span(const SparseInt& m, const RatVec& b);

/**
 * Scale a rational vector to a primitive integer vector (entries coprime,
 * first nonzero positive). Zero vector maps to itself.
 */
std::vector<BigInt> primitive_integer_vector(const RatVec& v);

}  // namespace hdx
