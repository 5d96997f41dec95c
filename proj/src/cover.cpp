#include "hdx/cover.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "hdx/homology.hpp"
#include "hdx/snf.hpp"
#include "hdx/util.hpp"

namespace hdx {

long long FiniteAbelianGroup::order() const {
  long long o = 1;
  for (long long f : factors) {
    if (f < 2) throw std::logic_error("FiniteAbelianGroup: factor below 2");
    if (o > (1LL << 41) / f) throw CapExceeded("FiniteAbelianGroup: order too large");
    o *= f;
  }
  return o;
}

std::vector<long long> FiniteAbelianGroup::tuple(long long g) const {
  if (g < 0 || g >= order())
    throw std::out_of_range("FiniteAbelianGroup: element out of range");
  std::vector<long long> t(factors.size());
  for (std::size_t i = factors.size(); i-- > 0;) {
    t[i] = g % factors[i];
    g /= factors[i];
  }
  return t;
}

long long FiniteAbelianGroup::index(const std::vector<long long>& t) const {
  if (t.size() != factors.size())
    throw std::invalid_argument("FiniteAbelianGroup: tuple arity mismatch");
  long long g = 0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (t[i] < 0 || t[i] >= factors[i])
      throw std::out_of_range("FiniteAbelianGroup: tuple entry out of range");
    g = g * factors[i] + t[i];
  }
  return g;
}

long long FiniteAbelianGroup::add(long long g, long long h) const {
  std::vector<long long> a = tuple(g), b = tuple(h);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = (a[i] + b[i]) % factors[i];
  return index(a);
}

long long FiniteAbelianGroup::neg(long long g) const {
  std::vector<long long> a = tuple(g);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = (factors[i] - a[i]) % factors[i];
  return index(a);
}

namespace {

long long to_ll(const BigInt& x) { return x.convert_to<long long>(); }

// One traversal of a base edge inside a 2-cell boundary walk. `rel` is the
// sheet the lifted edge occupies relative to the sheet of the walk's start.
struct LiftDart {
  int edge = 0;
  int sign = 0;
  long long rel = 0;
};

// Sheet chart of a lifted cell: for each ridge in its boundary, the sheet
// displacement between the cell's own sheet and that ridge's lift. Only
// available when the boundary has unit coefficients and a single circuit.
struct FaceOffsets {
  bool valid = false;
  std::map<int, long long> w;
};

/**
 * Decompose the boundary multiset of 2-cell f into closed edge walks, one
 * per Eulerian component, recording for every traversal the sheet offset
 * of the lifted edge it crosses. A dart with positive sign runs source to
 * target. Throws when a walk component fails to close in the group: the
 * attaching circle then has nonzero monodromy and no lift exists.
 */
std::vector<std::vector<LiftDart>> boundary_walks(
    const CellComplex& X, const std::vector<std::pair<int, int>>& ends,
    const FiniteAbelianGroup& G, const std::vector<long long>& labels, int f) {
  struct Dart {
    int edge;
    int sign;
  };
  std::vector<Dart> darts;
  for (const auto& [e, c] : X.incidence(2).column(f)) {
    int s = c > 0 ? 1 : -1;
    for (std::int64_t k = 0; k < std::llabs(c); ++k) darts.push_back({e, s});
  }
  std::sort(darts.begin(), darts.end(), [](const Dart& a, const Dart& b) {
    return a.edge != b.edge ? a.edge < b.edge : a.sign > b.sign;
  });
  const int nd = static_cast<int>(darts.size());
  auto depart = [&](int i) {
    return darts[i].sign > 0 ? ends[darts[i].edge].first : ends[darts[i].edge].second;
  };
  auto arrive = [&](int i) {
    return darts[i].sign > 0 ? ends[darts[i].edge].second : ends[darts[i].edge].first;
  };
  std::map<int, std::vector<int>> out;
  for (int i = 0; i < nd; ++i) out[depart(i)].push_back(i);
  std::map<int, std::size_t> cursor;
  std::vector<char> used(nd, 0);

  std::vector<std::vector<LiftDart>> comps;
  for (int s0 = 0; s0 < nd; ++s0) {
    if (used[s0]) continue;
    // Hierholzer's algorithm; the popped darts give the circuit reversed.
    std::vector<std::pair<int, int>> stack{{depart(s0), -1}};
    std::vector<int> circuit;
    while (!stack.empty()) {
      auto [v, din] = stack.back();
      const auto& lst = out[v];
      std::size_t& cur = cursor[v];
      while (cur < lst.size() && used[lst[cur]]) ++cur;
      if (cur < lst.size()) {
        int d = lst[cur];
        used[d] = 1;
        stack.emplace_back(arrive(d), d);
      } else {
        if (din >= 0) circuit.push_back(din);
        stack.pop_back();
      }
    }
    std::reverse(circuit.begin(), circuit.end());
    if (circuit.empty() || depart(circuit.front()) != arrive(circuit.back()))
      throw std::invalid_argument("cover: 2-cell " + X.cell_id(2, f) +
                                  " has an unbalanced boundary walk");
    std::vector<LiftDart> walk;
    long long o = 0;
    for (int d : circuit) {
      long long L = labels[darts[d].edge];
      if (darts[d].sign > 0) {
        walk.push_back({darts[d].edge, 1, o});
        o = G.add(o, L);
      } else {
        o = G.add(o, G.neg(L));
        walk.push_back({darts[d].edge, -1, o});
      }
    }
    if (o != 0)
      throw std::invalid_argument("cover: 2-cell " + X.cell_id(2, f) +
                                  " attaches along a circle with nonzero monodromy");
    comps.push_back(std::move(walk));
  }
  return comps;
}

}  // namespace

CoverComplex universal_abelian_cover(const CellComplex& X) {
  if (X.n_cells(0) == 0) throw std::invalid_argument("cover: empty complex");
  if (!X.connected()) throw std::invalid_argument("cover: complex is disconnected");

  const int D = X.dims();
  const int n0 = X.n_cells(0), n1 = X.n_cells(1), n2 = X.n_cells(2);

  CoverComplex cc;
  cc.base = X;

  std::vector<std::pair<int, int>> ends = edge_endpoints(X);

  // Spanning tree by BFS from vertex 0, scanning edges in creation order.
  cc.tree_edge.assign(n1, 0);
  {
    auto adj = X.one_skeleton_adjacency();
    for (auto& lst : adj)
      std::sort(lst.begin(), lst.end(),
                [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<char> vis(n0, 0);
    std::queue<int> q;
    vis[0] = 1;
    q.push(0);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (auto [w, e] : adj[v])
        if (!vis[w]) {
          vis[w] = 1;
          cc.tree_edge[e] = 1;
          q.push(w);
        }
    }
  }

  // H_1 presented on the non-tree edges: relations are the 2-cell boundary
  // columns restricted to those rows. U M V = D turns the class of the j-th
  // generator into column j of U read modulo the invariant factors.
  std::vector<int> pos(n1, -1);
  std::vector<int> gens;
  for (int e = 0; e < n1; ++e)
    if (!cc.tree_edge[e]) {
      pos[e] = static_cast<int>(gens.size());
      gens.push_back(e);
    }
  const int m = static_cast<int>(gens.size());
  cc.edge_labels.assign(n1, 0);
  if (m > 0) {
    if (n2 == 0)
      throw std::invalid_argument("cover: H_1 is infinite (free rank " +
                                  std::to_string(m) + ")");
    IntMat R(m, std::vector<BigInt>(n2));
    for (int c = 0; c < n2; ++c)
      for (const auto& [r, v] : X.incidence(2).column(c))
        if (pos[r] >= 0) R[pos[r]][c] = v;
    SmithForm sf = smith_normal_form(R);
    if (sf.rank < m)
      throw std::invalid_argument("cover: H_1 is infinite (free rank " +
                                  std::to_string(m - sf.rank) + ")");
    std::vector<int> kept;
    for (int i = 0; i < m; ++i)
      if (sf.diagonal[i] > 1) {
        kept.push_back(i);
        cc.group.factors.push_back(to_ll(sf.diagonal[i]));
      }
    for (int j = 0; j < m; ++j) {
      std::vector<long long> t(kept.size());
      for (std::size_t i = 0; i < kept.size(); ++i) {
        BigInt d = sf.diagonal[kept[i]];
        BigInt r = sf.u[kept[i]][j] % d;
        if (r < 0) r += d;
        t[i] = to_ll(r);
      }
      cc.edge_labels[gens[j]] = cc.group.index(t);
    }
  }

  const long long O = cc.group.order();
  if (O * X.total_cells() > 5000000)
    throw CapExceeded("cover: " + std::to_string(O) + " sheets over " +
                      std::to_string(X.total_cells()) + " cells is too large");

  std::vector<std::vector<std::string>> ids(D + 1);
  for (int d = 0; d <= D; ++d) {
    ids[d].reserve(static_cast<std::size_t>(X.n_cells(d)) * O);
    for (int c = 0; c < X.n_cells(d); ++c)
      for (long long g = 0; g < O; ++g)
        ids[d].push_back(X.cell_id(d, c) + "@" + std::to_string(g));
  }

  std::vector<SparseInt> inc;

  if (D >= 1) {
    SparseInt B(static_cast<int>(n0 * O), static_cast<int>(n1 * O));
    for (int e = 0; e < n1; ++e) {
      auto [a, b] = ends[e];
      long long L = cc.edge_labels[e];
      for (long long g = 0; g < O; ++g) {
        long long gb = cc.group.add(g, L);
        if (a == b && gb == g) continue;  // label-0 loop lifts to plain loops
        B.add(static_cast<int>(a * O + g), static_cast<int>(e * O + g), -1);
        B.add(static_cast<int>(b * O + gb), static_cast<int>(e * O + g), +1);
      }
    }
    inc.push_back(std::move(B));
  }

  // Sheet charts per cell, reused when lifting the next dimension up.
  std::vector<std::vector<FaceOffsets>> offs(std::max(D + 1, 3));

  if (D >= 2) {
    offs[2].resize(n2);
    SparseInt B(static_cast<int>(n1 * O), static_cast<int>(n2 * O));
    for (int f = 0; f < n2; ++f) {
      auto comps = boundary_walks(X, ends, cc.group, cc.edge_labels, f);
      bool unit = true;
      for (const auto& [r, v] : X.incidence(2).column(f))
        if (v != 1 && v != -1) unit = false;
      if (comps.size() <= 1 && unit) {
        offs[2][f].valid = true;
        for (const auto& comp : comps)
          for (const auto& ld : comp) offs[2][f].w[ld.edge] = ld.rel;
      }
      for (long long g = 0; g < O; ++g) {
        std::map<long long, long long> acc;
        for (const auto& comp : comps)
          for (const auto& ld : comp)
            acc[ld.edge * O + cc.group.add(g, ld.rel)] += ld.sign;
        for (const auto& [r, v] : acc)
          if (v != 0) B.add(static_cast<int>(r), static_cast<int>(f * O + g), v);
      }
    }
    inc.push_back(std::move(B));
  }

  for (int d = 3; d <= D; ++d) {
    offs[d].resize(X.n_cells(d));
    SparseInt B(static_cast<int>(X.n_cells(d - 1) * O),
                static_cast<int>(X.n_cells(d) * O));
    for (int s = 0; s < X.n_cells(d); ++s) {
      const auto& col = X.incidence(d).column(s);
      for (const auto& [t, v] : col)
        if (v != 1 && v != -1)
          throw std::invalid_argument(
              "cover: cells above dimension 2 need unit incidence (cell " +
              X.cell_id(d, s) + ")");
      FaceOffsets fo;
      fo.valid = true;
      if (!col.empty()) {
        // Faces must agree on the sheet of every shared ridge. Fix the
        // least face at displacement 0 and propagate; any closed chain of
        // faces whose displacements disagree means the cell has no lift.
        std::map<int, std::vector<int>> byridge;
        int t0 = col.front().first;
        for (const auto& [t, v] : col) {
          t0 = std::min(t0, t);
          const FaceOffsets& fp = offs[d - 1][t];
          if (!fp.valid)
            throw std::invalid_argument("cover: face " + X.cell_id(d - 1, t) +
                                        " has no sheet chart; cannot lift " +
                                        X.cell_id(d, s));
          for (const auto& [mu, w] : fp.w) byridge[mu].push_back(t);
        }
        fo.w[t0] = 0;
        std::queue<int> bfs;
        bfs.push(t0);
        while (!bfs.empty()) {
          int t = bfs.front();
          bfs.pop();
          for (const auto& [mu, w] : offs[d - 1][t].w) {
            long long sheet_mu = cc.group.add(fo.w.at(t), w);
            for (int t2 : byridge[mu]) {
              long long need =
                  cc.group.add(sheet_mu, cc.group.neg(offs[d - 1][t2].w.at(mu)));
              auto it = fo.w.find(t2);
              if (it == fo.w.end()) {
                fo.w[t2] = need;
                bfs.push(t2);
              } else if (it->second != need) {
                throw std::invalid_argument(
                    "cover: inconsistent sheet propagation at cell " +
                    X.cell_id(d, s));
              }
            }
          }
        }
        if (fo.w.size() != col.size())
          throw std::invalid_argument("cover: faces of " + X.cell_id(d, s) +
                                      " do not connect through shared ridges");
      }
      for (long long g = 0; g < O; ++g)
        for (const auto& [t, v] : col)
          B.add(static_cast<int>(t * O + cc.group.add(g, fo.w.at(t))),
                static_cast<int>(s * O + g), v);
      offs[d][s] = std::move(fo);
    }
    inc.push_back(std::move(B));
  }

  cc.total = CellComplex(X.name() + "~ab", std::move(ids), std::move(inc),
                         X.augmented(), X.allow_boundaryless());
  cc.total.validate();

  cc.deck.assign(O, std::vector<std::vector<int>>(D + 1));
  for (long long h = 0; h < O; ++h)
    for (int d = 0; d <= D; ++d) {
      auto& perm = cc.deck[h][d];
      perm.resize(static_cast<std::size_t>(X.n_cells(d)) * O);
      for (int c = 0; c < X.n_cells(d); ++c)
        for (long long g = 0; g < O; ++g)
          perm[c * O + g] = static_cast<int>(c * O + cc.group.add(g, h));
    }
  return cc;
}

void verify_cover(const CoverComplex& cc) {
  auto fail = [](const std::string& msg) {
    throw std::runtime_error("verify_cover: " + msg);
  };
  const FiniteAbelianGroup& G = cc.group;
  for (std::size_t i = 0; i < G.factors.size(); ++i) {
    if (G.factors[i] < 2) fail("group factor below 2");
    if (i + 1 < G.factors.size() && G.factors[i + 1] % G.factors[i] != 0)
      fail("group factors out of divisibility order");
  }
  const long long O = G.order();
  const CellComplex& B = cc.base;
  const CellComplex& T = cc.total;
  if (T.dims() != B.dims()) fail("dimension mismatch");
  const int D = B.dims();
  for (int d = 0; d <= D; ++d)
    if (static_cast<long long>(T.n_cells(d)) != B.n_cells(d) * O)
      fail("cell count is not sheets * base at dim " + std::to_string(d));
  if (!T.connected()) fail("total space is disconnected");

  if (static_cast<long long>(cc.deck.size()) != O) fail("deck table size");
  for (long long h = 0; h < O; ++h) {
    if (static_cast<int>(cc.deck[h].size()) != D + 1) fail("deck dimension levels");
    for (int d = 0; d <= D; ++d) {
      const auto& perm = cc.deck[h][d];
      if (static_cast<int>(perm.size()) != T.n_cells(d)) fail("deck permutation size");
      std::vector<char> seen(perm.size(), 0);
      for (std::size_t c = 0; c < perm.size(); ++c) {
        int im = perm[c];
        if (im < 0 || im >= static_cast<int>(perm.size()) || seen[im])
          fail("deck entry is not a permutation");
        seen[im] = 1;
        if (h == 0 && im != static_cast<int>(c)) fail("identity element acts nontrivially");
        if (h != 0 && im == static_cast<int>(c)) fail("deck action has a fixed cell");
      }
    }
  }
  for (int d = 0; d <= D; ++d)
    for (int c = 0; c < B.n_cells(d); ++c)
      for (long long h = 0; h < O; ++h)
        if (cc.deck[h][d][cc.lift_index(c, 0)] != cc.lift_index(c, h))
          fail("deck action is not transitive on fibers");

  for (int d = 1; d <= D; ++d) {
    const SparseInt& Bt = T.incidence(d);
    for (long long h = 0; h < O; ++h)
      for (int c = 0; c < T.n_cells(d); ++c) {
        const auto& col = Bt.column(c);
        const auto& colh = Bt.column(cc.deck[h][d][c]);
        if (col.size() != colh.size()) fail("deck action changes boundary support");
        for (const auto& [r, v] : col)
          if (Bt.at(cc.deck[h][d - 1][r], cc.deck[h][d][c]) != v)
            fail("deck action does not commute with the boundary");
      }
  }

  if (T.euler_characteristic() != O * B.euler_characteristic())
    fail("Euler characteristic is not multiplicative");

  // Quotient recovery: collapsing each fiber block of a lifted column must
  // reproduce the base column exactly.
  for (int d = 1; d <= D; ++d) {
    const SparseInt& Bt = T.incidence(d);
    const SparseInt& Bb = B.incidence(d);
    for (int c = 0; c < B.n_cells(d); ++c)
      for (long long g = 0; g < O; ++g) {
        std::map<int, long long> sums;
        for (const auto& [r, v] : Bt.column(cc.lift_index(c, g)))
          sums[static_cast<int>(r / O)] += v;
        for (auto it = sums.begin(); it != sums.end();)
          it = it->second == 0 ? sums.erase(it) : std::next(it);
        std::map<int, long long> want;
        for (const auto& [r, v] : Bb.column(c)) want[r] = v;
        if (sums != want) fail("quotient of a lifted column does not match the base");
      }
  }
}

TorsDiameterReport torsdiameter_report(const std::vector<CellComplex>& xs) {
  TorsDiameterReport rep;
  for (const CellComplex& X : xs) {
    CoverComplex cc = universal_abelian_cover(X);
    HomologyGroup h1 = homology(X, 1);
    if (h1.betti != 0 || h1.torsion_order() != BigInt(cc.sheets()))
      throw std::logic_error("torsdiameter_report: sheet count disagrees with H_1");
    int db = X.graph_diameter();
    int dt = cc.total.graph_diameter();
    if (db < 0 || dt < 0)
      throw std::runtime_error("torsdiameter_report: disconnected 1-skeleton");
    TorsDiameterRow row;
    row.name = X.name();
    row.h1_order = cc.sheets();
    row.diam_base = db;
    row.diam_total = dt;
    row.ratio = static_cast<double>(dt) / std::max(1, db);
    row.ratio_le_order = dt <= row.h1_order * std::max(1, db);
    // Forced bound: tree lifts stay inside a sheet, each generator loop
    // costs at most 2 diam + 1 steps, and the sheet graph on the generator
    // labels is a connected Cayley graph, so its diameter is below |H_1|.
    long long forced = row.h1_order * (2LL * db + 1);
    if (dt > forced)
      throw std::runtime_error("torsdiameter_report: cover diameter " +
                               std::to_string(dt) + " exceeds the forced bound " +
                               std::to_string(forced) + " for " + X.name());
    rep.rows.push_back(std::move(row));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : rep.rows) {
    if (r.h1_order < 2) continue;
    double x = std::log(static_cast<double>(r.h1_order));
    double y = std::log(static_cast<double>(std::max(1, r.diam_total)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  double den = n * sxx - sx * sx;
  rep.loglog_slope = (n >= 2 && std::abs(den) > 1e-12) ? (n * sxy - sx * sy) / den : 0.0;
  return rep;
}

std::string TorsDiameterReport::str() const {
  std::size_t w = 4;
  for (const auto& r : rows) w = std::max(w, r.name.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w) + 2) << "name" << std::right
     << std::setw(8) << "|H1|" << std::setw(7) << "diam" << std::setw(7) << "cover"
     << std::setw(9) << "ratio" << "  ratio<=|H1|\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(static_cast<int>(w) + 2) << r.name << std::right
       << std::setw(8) << r.h1_order << std::setw(7) << r.diam_base << std::setw(7)
       << r.diam_total << std::setw(9) << std::fixed << std::setprecision(3)
       << r.ratio << "  " << (r.ratio_le_order ? "yes" : "NO") << "\n";
  }
  os << "log-log slope of cover diameter against |H1|: " << std::fixed
     << std::setprecision(3) << loglog_slope << "\n";
  return os.str();
}

}  // namespace hdx
