#include "hdx/complex.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <set>
#include <stdexcept>

namespace hdx {

CellComplex::CellComplex(std::string name,
                         std::vector<std::vector<std::string>> cell_ids,
                         std::vector<SparseInt> incidence, bool augmented,
                         bool allow_boundaryless)
    : name_(std::move(name)),
      cell_ids_(std::move(cell_ids)),
      incidence_(std::move(incidence)),
      augmented_(augmented),
      allow_boundaryless_(allow_boundaryless) {
  if (cell_ids_.empty())
    throw std::invalid_argument("CellComplex: need at least dimension 0");
  if (incidence_.size() + 1 != cell_ids_.size())
    throw std::invalid_argument("CellComplex: incidence count must be dims");
}

long long CellComplex::total_cells() const {
  long long t = 0;
  for (const auto& lvl : cell_ids_) t += static_cast<long long>(lvl.size());
  return t;
}

const std::vector<std::string>& CellComplex::cell_ids(int i) const {
  if (i < 0 || i > dims()) throw std::out_of_range("CellComplex::cell_ids");
  return cell_ids_[i];
}

int CellComplex::cell_index(int i, const std::string& id) const {
  const auto& ids = cell_ids(i);
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) return -1;
  return static_cast<int>(it - ids.begin());
}

const SparseInt& CellComplex::incidence(int i) const {
  if (i < 1 || i > dims()) throw std::out_of_range("CellComplex::incidence");
  return incidence_[i - 1];
}

SparseInt CellComplex::boundary_matrix(int i) const {
  if (i == 0)
    return augmented_ ? SparseInt::ones_row(n_cells(0)) : SparseInt(0, n_cells(0));
  if (i == dims() + 1) return SparseInt(n_cells(dims()), 0);
  return incidence(i);
}

void CellComplex::validate() const {
  for (int i = 0; i <= dims(); ++i) {
    std::set<std::string> seen;
    for (const auto& id : cell_ids_[i]) {
      if (id.empty())
        throw std::invalid_argument("CellComplex: empty cell id in dim " +
                                    std::to_string(i));
      if (!seen.insert(id).second)
        throw std::invalid_argument("CellComplex: duplicate cell id '" + id +
                                    "' in dim " + std::to_string(i));
    }
  }
  for (int i = 1; i <= dims(); ++i) {
    const SparseInt& b = incidence(i);
    if (b.rows() != n_cells(i - 1) || b.cols() != n_cells(i))
      throw std::invalid_argument("CellComplex: incidence shape mismatch at dim " +
                                  std::to_string(i));
    if (!allow_boundaryless_) {
      for (int c = 0; c < b.cols(); ++c)
        if (b.column(c).empty())
          throw std::invalid_argument(
              "CellComplex: boundaryless cell " + cell_ids_[i][c] + " in dim " +
              std::to_string(i) + " (set allow_boundaryless to accept)");
    }
  }
  for (int i = 1; i <= dims() + 1; ++i) {
    SparseInt upper = boundary_matrix(i);
    SparseInt lower = boundary_matrix(i - 1);
    if (lower.cols() != upper.rows()) continue;  // unreachable after shape checks
    if (!lower.mul(upper).is_zero())
      throw std::invalid_argument(
          "CellComplex: boundary of boundary is nonzero between dims " +
          std::to_string(i) + " and " + std::to_string(i - 2));
  }
}

long long CellComplex::euler_characteristic() const {
  long long chi = 0;
  for (int i = 0; i <= dims(); ++i) chi += (i % 2 == 0 ? 1LL : -1LL) * n_cells(i);
  return chi;
}

CellComplex CellComplex::skeleton(int k) const {
  if (k < 0) throw std::invalid_argument("CellComplex::skeleton: negative k");
  k = std::min(k, dims());
  std::vector<std::vector<std::string>> ids(cell_ids_.begin(),
                                            cell_ids_.begin() + k + 1);
  std::vector<SparseInt> inc(incidence_.begin(), incidence_.begin() + k);
  CellComplex out(name_ + "/skel" + std::to_string(k), std::move(ids),
                  std::move(inc), augmented_, allow_boundaryless_);
  return out;
}

CellComplex CellComplex::permuted(const std::vector<std::vector<int>>& perms) const {
  if (static_cast<int>(perms.size()) != dims() + 1)
    throw std::invalid_argument("CellComplex::permuted: need one perm per dim");
  std::vector<std::vector<std::string>> ids(dims() + 1);
  for (int i = 0; i <= dims(); ++i) {
    if (static_cast<int>(perms[i].size()) != n_cells(i))
      throw std::invalid_argument("CellComplex::permuted: perm size mismatch");
    ids[i].resize(n_cells(i));
    for (int j = 0; j < n_cells(i); ++j) ids[i][perms[i][j]] = cell_ids_[i][j];
  }
  std::vector<SparseInt> inc;
  for (int i = 1; i <= dims(); ++i) {
    SparseInt m(n_cells(i - 1), n_cells(i));
    incidence(i).for_each([&](int r, int c, std::int64_t v) {
      m.add(perms[i - 1][r], perms[i][c], v);
    });
    inc.push_back(std::move(m));
  }
  return CellComplex(name_, std::move(ids), std::move(inc), augmented_,
                     allow_boundaryless_);
}

std::vector<std::vector<std::pair<int, int>>> CellComplex::one_skeleton_adjacency()
    const {
  std::vector<std::vector<std::pair<int, int>>> adj(n_cells(0));
  if (dims() < 1) return adj;
  const SparseInt& b1 = incidence(1);
  for (int e = 0; e < b1.cols(); ++e) {
    const auto& col = b1.column(e);
    if (col.size() == 2) {
      adj[col[0].first].push_back({col[1].first, e});
      adj[col[1].first].push_back({col[0].first, e});
    }
    // Loop edges cancel to an empty column and do not affect distances.
  }
  return adj;
}

std::vector<int> bfs_distances(const CellComplex& X, int source) {
  auto adj = X.one_skeleton_adjacency();
  std::vector<int> dist(adj.size(), -1);
  if (source < 0 || source >= static_cast<int>(adj.size())) return dist;
  std::queue<int> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (const auto& [v, e] : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

int CellComplex::graph_diameter() const {
  int n = n_cells(0);
  if (n == 0) return -1;
  int best = 0;
  for (int s = 0; s < n; ++s) {
    auto d = bfs_distances(*this, s);
    for (int v = 0; v < n; ++v) {
      if (d[v] < 0) return -1;
      best = std::max(best, d[v]);
    }
  }
  return best;
}

bool CellComplex::connected() const {
  int n = n_cells(0);
  if (n == 0) return true;
  auto d = bfs_distances(*this, 0);
  for (int v = 0; v < n; ++v)
    if (d[v] < 0) return false;
  return true;
}

Chain apply_boundary(const CellComplex& X, const Chain& c, double drop_tol) {
  SparseInt b = X.boundary_matrix(c.dim());
  Chain out(c.dim() - 1, c.mode());
  for (const auto& [j, v] : c.coeffs()) {
    if (j < 0 || j >= b.cols())
      throw std::out_of_range("apply_boundary: cell index out of range");
    for (const auto& [r, w] : b.column(j)) out.add(r, BigRat(w) * v);
  }
  if (c.mode() == ChainMode::float64 && drop_tol > 0) out.prune(drop_tol);
  return out;
}

std::vector<std::pair<int, int>> edge_endpoints(const CellComplex& X) {
  std::vector<std::pair<int, int>> out;
  if (X.dims() < 1) return out;
  const SparseInt b = X.boundary_matrix(1);
  out.reserve(b.cols());
  for (int e = 0; e < b.cols(); ++e) {
    const auto& col = b.column(e);
    if (col.empty()) {
      if (X.n_cells(0) != 1)
        throw std::invalid_argument(
            "edge_endpoints: loop edge on a multi-vertex complex");
      out.push_back({0, 0});
      continue;
    }
    if (col.size() != 2 || col[0].second + col[1].second != 0 ||
        std::abs(col[0].second) != 1)
      throw std::invalid_argument(
          "edge_endpoints: edge boundary is not a signed vertex pair");
    int src = col[0].second < 0 ? col[0].first : col[1].first;
    int dst = col[0].second < 0 ? col[1].first : col[0].first;
    out.push_back({src, dst});
  }
  return out;
}

Chain apply_coboundary(const CellComplex& X, const Chain& c, double drop_tol) {
  SparseInt b = X.boundary_matrix(c.dim() + 1);
  Chain out(c.dim() + 1, c.mode());
  for (int col = 0; col < b.cols(); ++col) {
    BigRat acc(0);
    for (const auto& [r, w] : b.column(col)) acc += BigRat(w) * c.at(r);
    if (acc != 0) out.set(col, acc);
  }
  if (c.mode() == ChainMode::float64 && drop_tol > 0) out.prune(drop_tol);
  return out;
}

}  // namespace hdx
