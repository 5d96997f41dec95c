#pragma once

#include <string>
#include <vector>

#include "hdx/chain.hpp"
#include "hdx/complex.hpp"
#include "hdx/homology.hpp"
#include "hdx/rational.hpp"

namespace hdx {

/** One tetrahedron's contribution: z_r = r - H(boundary r) = k_r * [X]. */
struct ProbeRow {
  std::string cell;
  BigRat k;       // multiple of the fundamental class carried by z_r
  BigRat z_norm;  // |z_r|_1
  BigRat h_norm;  // |H(boundary r)|_1
};

/**
 * Result of driving a chain contraction through a rational homology
 * 3-sphere. H is built degree by degree with L1-minimal rational fillings,
 * so every z_r is an exact rational multiple of the orientation cycle, and
 * the rows sum to the fundamental class itself when the probe completes.
 */
struct ProbeReport {
  std::string complex_name;
  HomologyGroup h1;        // integral H_1, the torsion source
  BigInt torsion_lcm = 1;  // N, lcm of the H_1 invariant factors
  Chain fundamental;       // the all-unit orientation 3-cycle
  std::vector<ProbeRow> rows;
  BigRat k_sum;  // sum of k_r over the rows; exactly 1 when complete
  BigRat max_h0_norm, max_h1_norm, max_h2_norm;  // largest contraction chains
  BigInt h_denominator_lcm = 1;  // lcm of denominators across the H chains
  BigRat min_nonzero_z_norm;     // smallest nonzero |z_r|_1, 0 if none
  BigRat norm_floor;             // n_3 / N, the scale the z_r are held against
  bool partial = false;          // a filling cap ended the probe early
  std::string partial_reason;
  std::string str() const;  // human-readable summary table
};

/**
 * Build a chain contraction H on the 0-, 1- and 2-skeleta of a closed
 * oriented rational homology 3-sphere and decompose the fundamental class
 * as the exact sum of per-tetrahedron cycles z_r = r - H(boundary r).
 *
 * H sends a vertex to the BFS tree path from vertex 0, and an edge or
 * triangle c to an L1-minimal rational filling of c - H(boundary c); both
 * fillings exist because the rational homology vanishes in degrees 1 and
 * 2. Each z_r is a cycle, hence an exact multiple k_r of [X], and the k_r
 * sum to 1, so at least one tetrahedron carries a nonzero multiple; its
 * size against norm_floor mirrors the volume over torsion lower bound.
 *
 * Throws std::invalid_argument unless X is connected, 3-dimensional, has
 * the rational homology of a 3-sphere, and its top boundary kernel is
 * generated by an all-unit orientation vector. A filling cap ends the
 * probe early with a partial report instead of an error.
 */
ProbeReport chain_contraction_probe(const CellComplex& X);

}  // namespace hdx
