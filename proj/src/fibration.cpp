#include "hdx/fibration.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hdx {

namespace {

void require_graph(const CellComplex& X, const char* what) {
  if (X.dims() > 1)
    throw std::invalid_argument(std::string("fibration: ") + what +
                                " must be a graph (dimension <= 1)");
  if (X.n_cells(0) == 0)
    throw std::invalid_argument(std::string("fibration: ") + what + " is empty");
  if (!X.connected())
    throw std::invalid_argument(std::string("fibration: ") + what +
                                " is disconnected");
}

int max_vertex_degree(const CellComplex& X) {
  std::vector<int> deg(X.n_cells(0), 0);
  for (auto [a, b] : edge_endpoints(X)) {
    ++deg[a];
    ++deg[b];
  }
  int d = 1;
  for (int v : deg) d = std::max(d, v);
  return d;
}

}  // namespace

FiberPiece GraphFibration::fiber(int v) const {
  FiberPiece pc;
  pc.vertices = fibers.at(v);
  std::map<int, int> local;
  std::vector<std::string> vids;
  for (int w : pc.vertices) {
    local[w] = static_cast<int>(vids.size());
    vids.push_back(total.cell_id(0, w));
  }
  auto ends = edge_endpoints(total);
  for (int e = 0; e < total.n_cells(1); ++e)
    if (edge_map[e] == -1 && vertex_map[ends[e].first] == v)
      pc.edges.push_back(e);
  std::vector<std::string> eids;
  SparseInt b1(static_cast<int>(pc.vertices.size()),
               static_cast<int>(pc.edges.size()));
  for (std::size_t c = 0; c < pc.edges.size(); ++c) {
    auto [a, b] = ends[pc.edges[c]];
    eids.push_back(total.cell_id(1, pc.edges[c]));
    b1.add(local.at(a), static_cast<int>(c), -1);
    b1.add(local.at(b), static_cast<int>(c), +1);
  }
  std::vector<std::vector<std::string>> ids{vids};
  std::vector<SparseInt> inc;
  if (!eids.empty()) {
    ids.push_back(eids);
    inc.push_back(std::move(b1));
  }
  pc.complex = CellComplex(total.name() + "|fiber" + std::to_string(v),
                           std::move(ids), std::move(inc), true, false);
  return pc;
}

void check_fibration(const GraphFibration& F) {
  require_graph(F.total, "total space");
  require_graph(F.base, "base");
  const int ne0 = F.total.n_cells(0), ne1 = F.total.n_cells(1);
  const int nb0 = F.base.n_cells(0), nb1 = F.base.n_cells(1);
  if (static_cast<int>(F.vertex_map.size()) != ne0)
    throw std::invalid_argument("fibration: vertex_map size mismatch");
  if (static_cast<int>(F.edge_map.size()) != ne1)
    throw std::invalid_argument("fibration: edge_map size mismatch");
  if (static_cast<int>(F.fibers.size()) != nb0)
    throw std::invalid_argument("fibration: fiber index size mismatch");

  std::vector<char> vhit(nb0, 0);
  for (int v : F.vertex_map) {
    if (v < 0 || v >= nb0)
      throw std::invalid_argument("fibration: vertex_map out of range");
    vhit[v] = 1;
  }
  for (char h : vhit)
    if (!h) throw std::invalid_argument("fibration: vertex map is not surjective");

  auto endsE = edge_endpoints(F.total);
  auto endsB = edge_endpoints(F.base);
  std::vector<char> ehit(nb1, 0);
  for (int e = 0; e < ne1; ++e) {
    int eb = F.edge_map[e];
    int ia = F.vertex_map[endsE[e].first], ib = F.vertex_map[endsE[e].second];
    if (eb == -1) {
      if (ia != ib)
        throw std::invalid_argument(
            "fibration: collapsed edge spans two fibers");
      continue;
    }
    if (eb < 0 || eb >= nb1)
      throw std::invalid_argument("fibration: edge_map out of range");
    auto [ba, bb] = endsB[eb];
    if (ba == bb)
      throw std::invalid_argument("fibration: base loop edges are not cellular images");
    if (!((ia == ba && ib == bb) || (ia == bb && ib == ba)))
      throw std::invalid_argument(
          "fibration: edge does not map onto its endpoints' image edge");
    ehit[eb] = 1;
  }
  for (char h : ehit)
    if (!h) throw std::invalid_argument("fibration: edge map is not surjective");

  std::vector<int> owner(ne0, -1);
  for (int v = 0; v < nb0; ++v)
    for (int w : F.fibers[v]) {
      if (w < 0 || w >= ne0 || owner[w] != -1)
        throw std::invalid_argument("fibration: fiber index is not a partition");
      owner[w] = v;
    }
  for (int w = 0; w < ne0; ++w)
    if (owner[w] != F.vertex_map[w])
      throw std::invalid_argument("fibration: fiber index disagrees with vertex_map");

  int C = 1, D = std::max(max_vertex_degree(F.total), max_vertex_degree(F.base));
  for (int v = 0; v < nb0; ++v) {
    C = std::max(C, static_cast<int>(F.fibers[v].size()));
    if (!F.fiber(v).complex.connected())
      throw std::invalid_argument("fibration: fiber over " + F.base.cell_id(0, v) +
                                  " is disconnected");
  }
  if (F.max_degree != D)
    throw std::invalid_argument("fibration: stored max degree is wrong");
  if (F.max_fiber_size != C)
    throw std::invalid_argument("fibration: stored max fiber size is wrong");
}

GraphFibration identity_fibration(const CellComplex& B) {
  require_graph(B, "base");
  GraphFibration F;
  F.total = B;
  F.total.set_name(B.name() + "~id");
  F.base = B;
  F.vertex_map.resize(B.n_cells(0));
  for (int v = 0; v < B.n_cells(0); ++v) {
    F.vertex_map[v] = v;
    F.fibers.push_back({v});
  }
  F.edge_map.resize(B.n_cells(1));
  for (int e = 0; e < B.n_cells(1); ++e) F.edge_map[e] = e;
  F.max_degree = max_vertex_degree(B);
  F.max_fiber_size = 1;
  check_fibration(F);
  return F;
}

GraphFibration product_fibration(const CellComplex& B, const CellComplex& Fib) {
  require_graph(B, "base");
  require_graph(Fib, "fiber");
  const int nb0 = B.n_cells(0), nb1 = B.n_cells(1);
  const int nf0 = Fib.n_cells(0), nf1 = Fib.n_cells(1);
  auto endsB = edge_endpoints(B);
  auto endsF = edge_endpoints(Fib);

  GraphFibration F;
  F.base = B;
  std::vector<std::string> vids;
  for (int b = 0; b < nb0; ++b)
    for (int f = 0; f < nf0; ++f)
      vids.push_back(B.cell_id(0, b) + "*" + Fib.cell_id(0, f));
  auto vx = [nf0](int b, int f) { return b * nf0 + f; };

  std::vector<std::string> eids;
  SparseInt b1(nb0 * nf0, nb1 * nf0 + nf1 * nb0);
  int col = 0;
  for (int eb = 0; eb < nb1; ++eb)
    for (int f = 0; f < nf0; ++f) {
      eids.push_back(B.cell_id(1, eb) + "*" + Fib.cell_id(0, f));
      b1.add(vx(endsB[eb].first, f), col, -1);
      b1.add(vx(endsB[eb].second, f), col, +1);
      F.edge_map.push_back(eb);
      ++col;
    }
  for (int ef = 0; ef < nf1; ++ef)
    for (int b = 0; b < nb0; ++b) {
      eids.push_back(B.cell_id(0, b) + "*" + Fib.cell_id(1, ef));
      b1.add(vx(b, endsF[ef].first), col, -1);
      b1.add(vx(b, endsF[ef].second), col, +1);
      F.edge_map.push_back(-1);
      ++col;
    }
  F.total = CellComplex(B.name() + "x" + Fib.name(), {vids, eids}, {b1},
                        true, false);
  F.vertex_map.resize(nb0 * nf0);
  F.fibers.resize(nb0);
  for (int b = 0; b < nb0; ++b)
    for (int f = 0; f < nf0; ++f) {
      F.vertex_map[vx(b, f)] = b;
      F.fibers[b].push_back(vx(b, f));
    }
  F.max_degree = std::max(max_vertex_degree(F.total), max_vertex_degree(B));
  F.max_fiber_size = nf0;
  check_fibration(F);
  return F;
}

GraphFibration prism_fibration(const CellComplex& B) {
  SparseInt b1(2, 1);
  b1.add(0, 0, -1);
  b1.add(1, 0, +1);
  CellComplex seg("segment", {{"p0", "p1"}, {"p01"}}, {b1}, true, false);
  return product_fibration(B, seg);
}

GraphFibration build_fibration(const std::string& kind, const CellComplex& base,
                               const CellComplex* fib) {
  if (kind == "identity") return identity_fibration(base);
  if (kind == "prism") return prism_fibration(base);
  if (kind == "product") {
    if (fib == nullptr)
      throw std::invalid_argument("fibration: product kind needs a fiber graph");
    return product_fibration(base, *fib);
  }
  throw std::invalid_argument("fibration: unknown kind '" + kind + "'");
}

namespace {

BigRat inv_value(const CheegerValue& cv) {
  if (cv.zero)
    throw std::logic_error(
        "leray_serre_check: vanishing Cheeger constant on a connected graph");
  if (cv.infinite) return 0;
  if (cv.is_upper_bound)
    throw std::logic_error("leray_serre_check: inexact Cheeger value");
  return BigRat(1) / cv.value;
}

}  // namespace

LeraySerreReport leray_serre_check(const GraphFibration& F, const NormSpec& ns,
                                   const CheegerOptions& opts) {
  check_fibration(F);
  if (ns.p != Lp::l1 || !ns.weights.empty())
    throw std::invalid_argument(
        "leray_serre_check: only the unweighted L1 norm is supported");

  LeraySerreReport rep;
  rep.D = F.max_degree;
  rep.C = F.max_fiber_size;
  const int nb0 = F.base.n_cells(0);
  std::vector<FiberPiece> pieces;
  for (int v = 0; v < nb0; ++v) pieces.push_back(F.fiber(v));
  auto endsE = edge_endpoints(F.total);
  auto endsB = edge_endpoints(F.base);

  // Chain side: fill the extremal 0-cycle through the base and the fibers.
  CheegerValue cE = cheeger_down(F.total, 0, ns, CheegerVariant::plain,
                                 CheegerMethod::brute, opts);
  CheegerValue cB = cheeger_down(F.base, 0, ns, CheegerVariant::plain,
                                 CheegerMethod::brute, opts);
  rep.chain.lhs = inv_value(cE);
  rep.chain.inv_base = inv_value(cB);
  for (const auto& pc : pieces) {
    CheegerValue cf = cheeger_down(pc.complex, 0, ns, CheegerVariant::plain,
                                   CheegerMethod::brute, opts);
    rep.chain.max_inv_fiber = std::max(rep.chain.max_inv_fiber, inv_value(cf));
  }
  rep.chain.rhs = BigRat(2 * rep.D) * (rep.chain.inv_base + 1) *
                  (rep.chain.max_inv_fiber + 1);
  rep.chain.holds = rep.chain.lhs <= rep.chain.rhs;
  if (!rep.chain.holds)
    throw std::logic_error("leray_serre_check: chain inequality failed, 1/h0(E) = " +
                           bigrat_str(rep.chain.lhs) + " > " +
                           bigrat_str(rep.chain.rhs));

  if (cE.infinite) {
    rep.chain.witness_valid = true;
    rep.chain.witness_within_rhs = true;
  } else {
    const Chain& alpha = cE.witness_cycle;
    Chain palpha(0);
    for (const auto& [i, val] : alpha.coeffs()) palpha.add(F.vertex_map[i], val);
    FillingResult eta = min_filling(F.base, palpha, ns);
    if (!eta.feasible)
      throw std::logic_error("leray_serre_check: base filling infeasible");
    std::vector<int> lift(F.base.n_cells(1), -1), liftsign(F.base.n_cells(1), 1);
    for (int e = 0; e < F.total.n_cells(1); ++e) {
      int eb = F.edge_map[e];
      if (eb < 0 || lift[eb] >= 0) continue;
      lift[eb] = e;
      liftsign[eb] = F.vertex_map[endsE[e].first] == endsB[eb].first ? 1 : -1;
    }
    Chain fill(1);
    for (const auto& [eb, val] : eta.witness.coeffs())
      fill.add(lift[eb], BigRat(liftsign[eb]) * val);
    Chain rho = apply_boundary(F.total, fill) - alpha;
    for (int v = 0; v < nb0; ++v) {
      const FiberPiece& pc = pieces[v];
      Chain rv(0);
      BigRat fsum = 0;
      for (std::size_t k = 0; k < pc.vertices.size(); ++k) {
        BigRat val = rho.at(pc.vertices[k]);
        rv.set(static_cast<int>(k), val);
        fsum += val;
      }
      if (fsum != 0)
        throw std::logic_error(
            "leray_serre_check: fiber restriction is not a 0-cycle");
      if (rv.is_zero()) continue;
      FillingResult bv = min_filling(pc.complex, rv, ns);
      if (!bv.feasible)
        throw std::logic_error("leray_serre_check: fiber filling infeasible");
      for (const auto& [le, val] : bv.witness.coeffs())
        fill.add(pc.edges[le], -val);
    }
    if (apply_boundary(F.total, fill) != alpha)
      throw std::logic_error("leray_serre_check: constructed filling is wrong");
    rep.chain.witness_valid = true;
    rep.chain.witness_ratio = fill.norm_exact(ns) / alpha.norm_exact(ns);
    rep.chain.witness_within_rhs = rep.chain.witness_ratio <= rep.chain.rhs;
  }

  // Cochain side: cofill the extremal coexact 1-cochain fiberwise, then
  // push the fiber-constant remainder down to the base and cofill there.
  auto up_inv = [&](const CellComplex& X) {
    std::pair<BigRat, CheegerValue> out{BigRat(0), CheegerValue{}};
    if (X.n_cells(1) == 0) {
      out.second.infinite = true;
      return out;
    }
    out.second = cheeger_up(X, 1, ns, CheegerVariant::coexact_only,
                            CheegerMethod::brute, opts);
    out.first = inv_value(out.second);
    return out;
  };
  auto [invE1, uE] = up_inv(F.total);
  auto [invB1, uB] = up_inv(F.base);
  rep.cochain.lhs = invE1;
  rep.cochain.inv_base = invB1;
  for (const auto& pc : pieces)
    rep.cochain.max_inv_fiber =
        std::max(rep.cochain.max_inv_fiber, up_inv(pc.complex).first);
  rep.cochain.rhs =
      BigRat(rep.C) * (rep.cochain.inv_base + 1) * (rep.cochain.max_inv_fiber + 1);
  rep.cochain.holds = rep.cochain.lhs <= rep.cochain.rhs;
  if (!rep.cochain.holds)
    throw std::logic_error(
        "leray_serre_check: cochain inequality failed, 1/h1co(E) = " +
        bigrat_str(rep.cochain.lhs) + " > " + bigrat_str(rep.cochain.rhs));

  if (uE.infinite) {
    rep.cochain.witness_valid = true;
    rep.cochain.witness_within_rhs = true;
  } else {
    const Chain& alpha = uE.witness_cycle;  // 1-cochain over total edges
    Chain cofill(0);
    for (int v = 0; v < nb0; ++v) {
      const FiberPiece& pc = pieces[v];
      if (pc.edges.empty()) continue;
      Chain a0(0);
      for (std::size_t le = 0; le < pc.edges.size(); ++le)
        a0.set(static_cast<int>(le), alpha.at(pc.edges[le]));
      if (a0.is_zero()) continue;
      CellComplex tf = transpose_complex(pc.complex);
      FillingResult bf = min_filling(tf, a0, ns);
      if (!bf.feasible)
        throw std::logic_error("leray_serre_check: fiber cofilling infeasible");
      for (const auto& [lv, val] : bf.witness.coeffs())
        cofill.add(pc.vertices[lv], val);
    }
    Chain aprime = alpha - apply_coboundary(F.total, cofill);
    std::vector<char> seen(F.base.n_cells(1), 0);
    std::vector<BigRat> gval(F.base.n_cells(1));
    for (int e = 0; e < F.total.n_cells(1); ++e) {
      int eb = F.edge_map[e];
      BigRat val = aprime.at(e);
      if (eb < 0) {
        if (val != 0)
          throw std::logic_error(
              "leray_serre_check: cofilling residue on a fiber edge");
        continue;
      }
      int se = F.vertex_map[endsE[e].first] == endsB[eb].first ? 1 : -1;
      BigRat want = BigRat(se) * val;
      if (!seen[eb]) {
        seen[eb] = 1;
        gval[eb] = want;
      } else if (gval[eb] != want) {
        throw std::logic_error(
            "leray_serre_check: lifts of a base edge disagree");
      }
    }
    for (char s : seen)
      if (!s) throw std::logic_error("leray_serre_check: unreached base edge");
    Chain gamma0(0);
    for (int eb = 0; eb < F.base.n_cells(1); ++eb) gamma0.set(eb, gval[eb]);
    if (!gamma0.is_zero()) {
      CellComplex tb = transpose_complex(F.base);
      FillingResult ef = min_filling(tb, gamma0, ns);
      if (!ef.feasible)
        throw std::logic_error("leray_serre_check: base cofilling infeasible");
      for (const auto& [bv, val] : ef.witness.coeffs())
        for (int w : F.fibers[bv]) cofill.add(w, val);
    }
    if (apply_coboundary(F.total, cofill) != alpha)
      throw std::logic_error("leray_serre_check: constructed cofilling is wrong");
    rep.cochain.witness_valid = true;
    rep.cochain.witness_ratio = cofill.norm_exact(ns) / alpha.norm_exact(ns);
    rep.cochain.witness_within_rhs = rep.cochain.witness_ratio <= rep.cochain.rhs;
  }
  return rep;
}

std::string LeraySerreReport::str() const {
  auto side = [](const char* name, const LeraySerreSide& s) {
    std::ostringstream os;
    os << "  " << name << ": 1/h = " << bigrat_str(s.lhs)
       << " <= " << bigrat_str(s.rhs) << " (base " << bigrat_str(s.inv_base)
       << ", worst fiber " << bigrat_str(s.max_inv_fiber) << ") "
       << (s.holds ? "ok" : "VIOLATED") << "; witness "
       << (s.witness_valid ? "exact" : "BROKEN") << ", ratio "
       << bigrat_str(s.witness_ratio) << " "
       << (s.witness_within_rhs ? "within bound" : "ABOVE BOUND") << "\n";
    return os.str();
  };
  std::ostringstream os;
  os << "comparison with D = " << D << ", C = " << C << "\n"
     << side("h0 chain side", chain) << side("h1 coexact side", cochain);
  return os.str();
}

}  // namespace hdx
