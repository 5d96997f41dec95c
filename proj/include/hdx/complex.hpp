#pragma once

#include <string>
#include <vector>

#include "hdx/chain.hpp"
#include "hdx/sparse_int.hpp"

namespace hdx {

/**
 * A finite polyhedral chain complex: cells per dimension plus signed
 * integer incidence matrices with boundary-of-boundary zero.
 *
 * When `augmented` is set, dimension -1 is a rank one group and the
 * boundary of every vertex is the augmentation generator, so reduced
 * quantities (h_0 = 2/diam, vanishing H_0 for connected complexes) come
 * out of the same machinery as the higher degrees.
 */
class CellComplex {
 public:
  CellComplex() = default;
  CellComplex(std::string name, std::vector<std::vector<std::string>> cell_ids,
              std::vector<SparseInt> incidence, bool augmented,
              bool allow_boundaryless = false);

  int dims() const { return static_cast<int>(cell_ids_.size()) - 1; }
  int n_cells(int i) const {
    if (i < 0 || i > dims()) return 0;
    return static_cast<int>(cell_ids_[i].size());
  }
  long long total_cells() const;

  const std::string& name() const { return name_; }
  void set_name(const std::string& n) { name_ = n; }

  bool augmented() const { return augmented_; }
  void set_augmented(bool a) { augmented_ = a; }
  bool allow_boundaryless() const { return allow_boundaryless_; }

  const std::vector<std::string>& cell_ids(int i) const;
  const std::string& cell_id(int i, int j) const { return cell_ids(i).at(j); }
  int cell_index(int i, const std::string& id) const;  // -1 when absent

  /** Incidence matrix for i in [1, dims]. */
  const SparseInt& incidence(int i) const;

  /**
   * Boundary matrix B_i : C_i -> C_{i-1}.
   * i = 0 yields the augmentation row (1 x n0) when augmented, else 0 x n0.
   * i = dims()+1 yields an empty n_dims x 0 matrix.
   */
  SparseInt boundary_matrix(int i) const;

  /** Full structural validation; throws std::invalid_argument on defects. */
  void validate() const;

  long long euler_characteristic() const;

  CellComplex skeleton(int k) const;

  /** Relabeled copy: perms[i][old_index] = new_index in each dimension. */
  CellComplex permuted(const std::vector<std::vector<int>>& perms) const;

  /** 1-skeleton adjacency: vertex -> list of (neighbor, edge index). */
  std::vector<std::vector<std::pair<int, int>>> one_skeleton_adjacency() const;

  /** Diameter of the 1-skeleton; -1 when disconnected or empty. */
  int graph_diameter() const;

  bool connected() const;

 private:
  std::string name_;
  std::vector<std::vector<std::string>> cell_ids_;
  std::vector<SparseInt> incidence_;  // incidence_[i-1] is B_i, i = 1..dims
  bool augmented_ = true;
  bool allow_boundaryless_ = false;
};

/** d c for an i-chain: apply B_i. Result lives in degree i-1. */
Chain apply_boundary(const CellComplex& X, const Chain& c, double drop_tol = 0.0);

/** Coboundary d c for an i-chain via the transposed incidence; degree i+1. */
Chain apply_coboundary(const CellComplex& X, const Chain& c, double drop_tol = 0.0);

/** BFS distances in the 1-skeleton from a source vertex (-1 = unreachable). */
std::vector<int> bfs_distances(const CellComplex& X, int source);

/**
 * (source, target) vertex pair per edge, read off the incidence column
 * (-1 entry is the source). A zero column is a loop, representable only
 * on a single-vertex complex; any other pattern throws.
 */
std::vector<std::pair<int, int>> edge_endpoints(const CellComplex& X);

}  // namespace hdx
