#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hdx/complex.hpp"

namespace hdx {

/**
 * Downward closure of a facet list into a simplicial chain complex.
 * Cells are ordered lexicographically by sorted vertex tuple within each
 * dimension, ids are dotted vertex tuples, and incidence uses the
 * alternating-sign face convention. Rebuilding the same facet list gives
 * a bit-identical complex.
 */
CellComplex build_simplicial(const std::vector<std::vector<int>>& facets,
                             const std::string& name = "simplicial",
                             bool augmented = true);

/** Boundary of the n-simplex on vertices 0..n (an (n-1)-sphere). */
CellComplex simplex_boundary(int n, bool augmented = true);

/**
 * k-skeleton of the solid deg-cube {0,1}^deg with cubical cells,
 * 0 <= k <= min(3, deg). Cell ids are base-vertex bitstrings plus the
 * list of free coordinates.
 */
CellComplex hypercube_skeleton(int deg, int k, bool augmented = true);

/**
 * Canonical id of a cubical cell: base vertex bitmask (bits on the free
 * coordinates must be clear) plus the ascending free-coordinate list.
 * Matches the ids produced by hypercube_skeleton.
 */
std::string hypercube_cell_id(int deg, int base, const std::vector<int>& coords);

/**
 * Fixture library. Accepts:
 *   rp2-6, torus-7, klein-8, moore-z2, rp3-quotient,
 *   zn-presentation(n), moore-z2-wedge(k),
 *   simplex-boundary(n), hypercube(deg,k),
 *   cycle(n), path(n), complete(n)
 */
CellComplex named_complex(const std::string& spec);

/** Names accepted by named_complex (parameterized ones shown with args). */
std::vector<std::string> named_complex_catalog();

/**
 * Seeded random complex: full (dim-1)-skeleton of the simplex on n
 * vertices plus each dim-cell independently with probability p.
 * Identical (n, dim, p, seed) give bit-identical complexes.
 */
CellComplex random_complex(int n, int dim, double p, std::uint64_t seed,
                           bool augmented = true);

/** Seeded connected graph: random attachment tree plus extra distinct edges. */
CellComplex random_connected_graph(int n, int extra_edges, std::uint64_t seed);

/** Cone over a seeded connected graph (contractible 2-complex). */
CellComplex cone_over_random_graph(int n, int extra_edges, std::uint64_t seed);

/**
 * Quotient of a simplicial complex by a free involution given on vertex
 * labels. Orientation signs are the sorting parities of the permuted
 * tuples; the result is the chain complex of the quotient space.
 */
CellComplex quotient_by_involution(const std::vector<std::vector<int>>& facets,
                                   const std::vector<int>& sigma,
                                   const std::string& name,
                                   bool augmented = true);

}  // namespace hdx
