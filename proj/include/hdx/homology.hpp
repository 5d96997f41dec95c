#pragma once

/**
 * Integral and rational homology of a cell complex.
 *
 * Betti numbers come from exact ranks over Q; torsion subgroups from the
 * Smith normal form of the next boundary matrix. Indices follow the chain
 * grading of CellComplex: with augmentation on, H_0 is reduced homology.
 */

#include <string>
#include <vector>

#include "hdx/complex.hpp"
#include "hdx/snf.hpp"

namespace hdx {

struct HomologyGroup {
  int dim = 0;
  int betti = 0;
  std::vector<BigInt> torsion;  // invariant factors > 1, divisibility order

  bool trivial() const { return betti == 0 && torsion.empty(); }
  BigInt torsion_order() const;  // product of invariant factors
  std::string str() const;       // "Z^b + Z/d1 + Z/d2 ..."
};

/** Rank of boundary_matrix(i) over Q (0 outside grading range). */
int boundary_rank(const CellComplex& X, int i);

/** Betti number b_i = dim ker d_i - rank d_{i+1} over Q. */
int betti_number(const CellComplex& X, int i);

HomologyGroup homology(const CellComplex& X, int i);
std::vector<HomologyGroup> homology_all(const CellComplex& X);

/**
 * Fundamental class of the top dimension: the primitive integer generator
 * of ker(boundary) in degree dims(), when that kernel is one-dimensional.
 * Throws when the kernel dimension differs from one.
 */
Chain fundamental_class(const CellComplex& X);

}  // namespace hdx
