#include "hdx/probe.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "hdx/filling.hpp"
#include "hdx/util.hpp"

namespace hdx {

namespace {

BigRat l1(const Chain& c) { return c.norm_exact(NormSpec::l1()); }

}  // namespace

ProbeReport chain_contraction_probe(const CellComplex& X) {
  if (X.dims() != 3)
    throw std::invalid_argument("probe: expected a 3-dimensional complex");
  if (X.n_cells(0) == 0 || !X.connected())
    throw std::invalid_argument("probe: complex must be nonempty and connected");

  ProbeReport rep;
  rep.complex_name = X.name();
  rep.h1 = homology(X, 1);
  HomologyGroup h2 = homology(X, 2), h3 = homology(X, 3);
  if (rep.h1.betti != 0 || h2.betti != 0 || h3.betti != 1)
    throw std::invalid_argument(
        "probe: not a rational homology 3-sphere (betti 1..3 = " +
        std::to_string(rep.h1.betti) + "," + std::to_string(h2.betti) + "," +
        std::to_string(h3.betti) + ")");
  for (const BigInt& t : rep.h1.torsion)
    rep.torsion_lcm = boost::multiprecision::lcm(rep.torsion_lcm, t);

  rep.fundamental = fundamental_class(X);
  const int n3 = X.n_cells(3);
  if (static_cast<int>(rep.fundamental.coeffs().size()) != n3)
    throw std::invalid_argument("probe: orientation cycle misses a tetrahedron");
  for (const auto& [i, v] : rep.fundamental.coeffs())
    if (v != 1 && v != -1)
      throw std::invalid_argument("probe: orientation cycle is not all unit");
  rep.norm_floor = BigRat(n3) / BigRat(rep.torsion_lcm);

  // H on vertices: the BFS tree path from vertex 0, so boundary(H v) = v - base.
  const int n0 = X.n_cells(0), n1 = X.n_cells(1), n2 = X.n_cells(2);
  std::vector<Chain> h0(n0, Chain(1));
  {
    auto ends = edge_endpoints(X);
    auto adj = X.one_skeleton_adjacency();
    for (auto& lst : adj)
      std::sort(lst.begin(), lst.end(),
                [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<int> parent_edge(n0, -1), parent(n0, -1);
    std::vector<char> vis(n0, 0);
    std::queue<int> q;
    vis[0] = 1;
    q.push(0);
    std::vector<int> order{0};
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (auto [w, e] : adj[v])
        if (!vis[w]) {
          vis[w] = 1;
          parent[w] = v;
          parent_edge[w] = e;
          q.push(w);
          order.push_back(w);
        }
    }
    for (int v : order) {
      if (v == 0) continue;
      h0[v] = h0[parent[v]];
      int e = parent_edge[v];
      h0[v].add(e, ends[e].second == v ? BigRat(1) : BigRat(-1));
    }
  }

  // H on edges and triangles: L1-minimal fillings of c - H(boundary c).
  auto track = [&rep](const Chain& c, BigRat& peak) {
    peak = std::max(peak, l1(c));
    for (const auto& [i, v] : c.coeffs())
      rep.h_denominator_lcm = boost::multiprecision::lcm(
          rep.h_denominator_lcm, boost::multiprecision::denominator(v));
  };
  for (const Chain& c : h0) track(c, rep.max_h0_norm);

  const NormSpec ns = NormSpec::l1();
  auto apply = [](const std::vector<Chain>& table, const Chain& c, int dim) {
    Chain out(dim);
    for (const auto& [i, v] : c.coeffs()) out += v * table[i];
    return out;
  };
  std::vector<Chain> h1c(n1, Chain(2)), h2c(n2, Chain(3));
  try {
    for (int e = 0; e < n1; ++e) {
      Chain unit(1);
      unit.set(e, 1);
      Chain target = unit - apply(h0, apply_boundary(X, unit), 1);
      FillingResult fr = min_filling(X, target, ns);
      if (!fr.feasible)
        throw std::logic_error("probe: unfillable 1-cycle despite trivial H_1");
      h1c[e] = fr.witness;
      track(h1c[e], rep.max_h1_norm);
    }
    for (int f = 0; f < n2; ++f) {
      Chain unit(2);
      unit.set(f, 1);
      Chain target = unit - apply(h1c, apply_boundary(X, unit), 2);
      FillingResult fr = min_filling(X, target, ns);
      if (!fr.feasible)
        throw std::logic_error("probe: unfillable 2-cycle despite trivial H_2");
      h2c[f] = fr.witness;
      track(h2c[f], rep.max_h2_norm);
    }
  } catch (const CapExceeded& e) {
    rep.partial = true;
    rep.partial_reason = e.what();
    return rep;
  }

  // z_r = r - H(boundary r) with r carrying its orientation sign. Each is a
  // 3-cycle, hence an exact multiple of the fundamental class, and the sum
  // over all tetrahedra telescopes to the fundamental class itself.
  Chain total(3);
  for (int r = 0; r < n3; ++r) {
    Chain rt(3);
    rt.set(r, rep.fundamental.at(r));
    Chain hb = apply(h2c, apply_boundary(X, rt), 3);
    Chain z = rt - hb;
    if (!apply_boundary(X, z).is_zero())
      throw std::logic_error("probe: z_r is not a cycle");
    BigRat k = 0;
    for (const auto& [i, v] : z.coeffs()) {
      k = v / rep.fundamental.at(i);
      break;
    }
    if (z != k * rep.fundamental)
      throw std::logic_error("probe: z_r is not a multiple of the fundamental class");
    total += z;
    rep.k_sum += k;
    ProbeRow row;
    row.cell = X.cell_id(3, r);
    row.k = k;
    row.z_norm = l1(z);
    row.h_norm = l1(hb);
    if (row.z_norm != 0)
      rep.min_nonzero_z_norm = rep.min_nonzero_z_norm == 0
                                   ? row.z_norm
                                   : std::min(rep.min_nonzero_z_norm, row.z_norm);
    rep.rows.push_back(std::move(row));
  }
  if (total != rep.fundamental || rep.k_sum != 1)
    throw std::logic_error("probe: rows do not sum to the fundamental class");
  return rep;
}

std::string ProbeReport::str() const {
  std::ostringstream os;
  os << "chain contraction probe: " << complex_name << "\n";
  os << "  H_1 = " << h1.str() << ", torsion lcm N = " << torsion_lcm.str()
     << ", tetrahedra = " << fundamental.coeffs().size() << "\n";
  os << "  max contraction norms: |H v| <= " << bigrat_str(max_h0_norm)
     << ", |H e| <= " << bigrat_str(max_h1_norm) << ", |H f| <= "
     << bigrat_str(max_h2_norm) << "\n";
  os << "  H chain denominator lcm = " << h_denominator_lcm.str() << "\n";
  if (partial) {
    os << "  PARTIAL: " << partial_reason << "\n";
    return os.str();
  }
  int nonzero = 0;
  for (const auto& r : rows)
    if (r.k != 0) ++nonzero;
  os << "  nonzero multiples: " << nonzero << "/" << rows.size()
     << ", k sum = " << bigrat_str(k_sum) << "\n";
  os << "  min nonzero |z_r| = " << bigrat_str(min_nonzero_z_norm)
     << " against n3/N = " << bigrat_str(norm_floor) << "\n";
  for (const auto& r : rows)
    os << "    " << r.cell << ": k = " << bigrat_str(r.k)
       << ", |z| = " << bigrat_str(r.z_norm) << ", |H dr| = "
       << bigrat_str(r.h_norm) << "\n";
  return os.str();
}

}  // namespace hdx
