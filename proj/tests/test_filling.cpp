#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "hdx/constructors.hpp"
#include "hdx/exact_linalg.hpp"
#include "hdx/filling.hpp"
#include "hdx/homology.hpp"
#include "hdx/util.hpp"

using namespace hdx;

namespace {

Chain unit(int dim, int idx, BigRat v = BigRat(1)) {
  Chain c(dim);
  c.set(idx, v);
  return c;
}

CheegerValue brute_down(const CellComplex& X, int i, Lp p,
                        CheegerVariant v = CheegerVariant::plain) {
  return cheeger_down(X, i, NormSpec{p, {}}, v, CheegerMethod::brute, {});
}

}  // namespace

TEST_CASE("minimal fillings of hand-sized chains") {
  // path 0--1--2--3: filling v0 - v3 routes one unit of mass down the
  // line, so the L1 cost is the distance and the Linf cost is 1
  CellComplex P = named_complex("path(4)");
  Chain z = unit(0, 0) + unit(0, 3, BigRat(-1));
  FillingResult f1 = min_filling(P, z, NormSpec::l1());
  REQUIRE(f1.feasible);
  CHECK(f1.value == BigRat(3));
  verify_filling(P, z, f1, NormSpec::l1());
  FillingResult fi = min_filling(P, z, NormSpec::linf());
  REQUIRE(fi.feasible);
  CHECK(fi.value == BigRat(1));

  // square cycle: v0 - v2 has two routes of length 2; total transported
  // mass is 2 however it splits, and splitting evenly halves the peak
  CellComplex C = named_complex("cycle(4)");
  Chain w = unit(0, 0) + unit(0, 2, BigRat(-1));
  CHECK(min_filling(C, w, NormSpec::l1()).value == BigRat(2));
  CHECK(min_filling(C, w, NormSpec::linf()).value == BigRat(1, 2));

  // degree-2 attaching map: the loop needs only half the 2-cell
  CellComplex M = named_complex("moore-z2");
  FillingResult fm = min_filling(M, unit(1, 0), NormSpec::l1());
  REQUIRE(fm.feasible);
  CHECK(fm.value == BigRat(1, 2));
}

TEST_CASE("a homologically nontrivial cycle has no filling") {
  CellComplex T = named_complex("torus-7");
  // some 1-cycle with nonzero class: take a cycle from the kernel, then
  // subtract boundaries; easiest certified pick is any cycle the filler
  // rejects while betti_1 > 0 guarantees one exists. Scan unit-sum edge
  // cycles found by walking a triangle, then a noncontractible loop.
  REQUIRE(betti_number(T, 1) == 2);
  bool saw_infeasible = false;
  // triangle boundaries are always fillable
  Chain tri = apply_boundary(T, unit(2, 0));
  CHECK(min_filling(T, tri, NormSpec::l1()).feasible);
  // exhaust a few elementary cycles; at least one must be infeasible
  auto circuits =
      elementary_kernel_vectors(to_rational(T.boundary_matrix(1)),
                                T.n_cells(1));
  for (const auto& v : circuits) {
    Chain z(1);
    for (int j = 0; j < T.n_cells(1); ++j)
      if (v[j] != 0) z.set(j, BigRat(v[j]));
    if (!min_filling(T, z, NormSpec::l1()).feasible) {
      saw_infeasible = true;
      break;
    }
  }
  CHECK(saw_infeasible);
}

TEST_CASE("filling verification catches tampered witnesses") {
  CellComplex P = named_complex("path(4)");
  Chain z = unit(0, 0) + unit(0, 3, BigRat(-1));
  FillingResult f = min_filling(P, z, NormSpec::l1());
  REQUIRE(f.feasible);
  FillingResult bad = f;
  bad.value = f.value + 1;
  CHECK_THROWS(verify_filling(P, z, bad, NormSpec::l1()));
  FillingResult bad2 = f;
  bad2.witness.set(0, bad2.witness.coeffs().count(0)
                          ? bad2.witness.coeffs().at(0) + 1
                          : BigRat(1));
  CHECK_THROWS(verify_filling(P, z, bad2, NormSpec::l1()));
}

TEST_CASE("h0 equals two over the diameter") {
  // diameters: path(7) = 6, cycle(9) = 4, complete(5) = 1
  CHECK(brute_down(named_complex("path(7)"), 0, Lp::l1).value == BigRat(2, 6));
  CHECK(brute_down(named_complex("cycle(9)"), 0, Lp::l1).value == BigRat(1, 2));
  CHECK(brute_down(named_complex("complete(5)"), 0, Lp::l1).value == BigRat(2));
}

TEST_CASE("first Cheeger constants of the torsion fixtures") {
  // minima over all elementary cycles with exact LP filling certificates,
  // recomputed independently: 197 circuits for the 6-vertex projective
  // plane, 7 for the tetrahedron boundary, 86 for the quotient 3-sphere
  // (whose doubled edges admit parallel-pair 2-cycles of ratio 1)
  CHECK(brute_down(named_complex("rp2-6"), 1, Lp::l1).value == BigRat(3, 5));
  CHECK(brute_down(named_complex("simplex-boundary(3)"), 1, Lp::l1).value ==
        BigRat(2));
  CHECK(brute_down(named_complex("rp3-quotient"), 1, Lp::l1).value == BigRat(1));
  // one vertex, one loop, one disc attached with degree 2
  CHECK(brute_down(named_complex("moore-z2"), 1, Lp::l1).value == BigRat(2));
}

TEST_CASE("zero and infinite flags track homology exactly") {
  // free H_1 forces h_1 = 0 without any enumeration
  CheegerValue t = brute_down(named_complex("torus-7"), 1, Lp::l1);
  CHECK(t.zero);
  CHECK_FALSE(t.infinite);
  CHECK(t.value_d == 0.0);
  CHECK(brute_down(named_complex("cycle(8)"), 1, Lp::l1).zero);

  // trees have no 1-cycles at all
  CheegerValue p = brute_down(named_complex("path(5)"), 1, Lp::l1);
  CHECK(p.infinite);
  CHECK_FALSE(p.zero);
}

TEST_CASE("method agreement and ordering on small fixtures") {
  for (const char* n : {"rp2-6", "simplex-boundary(3)"}) {
    CellComplex X = named_complex(n);
    CheegerValue b = brute_down(X, 1, Lp::l1);
    // lp-enum restricts to a kernel basis, so it can only overshoot brute.
    CheegerValue e = cheeger_down(X, 1, NormSpec::l1(), CheegerVariant::plain,
                                  CheegerMethod::lp_enum, {});
    CHECK(e.is_upper_bound);
    CHECK(e.value >= b.value);
    CheegerOptions opts;
    opts.samples = 60;
    opts.seed = 4;
    CheegerValue h = cheeger_down(X, 1, NormSpec::l1(), CheegerVariant::plain,
                                  CheegerMethod::heuristic, opts);
    CHECK(h.is_upper_bound);
    CHECK(h.value >= b.value);  // sampling can only overshoot the infimum
  }
  // On a one-dimensional kernel the basis is the whole cycle family, so the
  // two methods must coincide exactly.
  CellComplex M = named_complex("moore-z2");
  CheegerValue mb = brute_down(M, 1, Lp::l1);
  CheegerValue me = cheeger_down(M, 1, NormSpec::l1(), CheegerVariant::plain,
                                 CheegerMethod::lp_enum, {});
  CHECK(mb.value == me.value);
  CHECK(mb.value == BigRat(2));
}

TEST_CASE("the sup-norm brute value is flagged as an upper bound") {
  CheegerValue v = brute_down(named_complex("rp2-6"), 1, Lp::linf);
  CHECK(v.is_upper_bound);
  CHECK(v.value > 0);
  CheegerValue w = brute_down(named_complex("cycle(6)"), 0, Lp::linf);
  CHECK(w.is_upper_bound);
}

TEST_CASE("restricting the cycle family can only raise the infimum") {
  CellComplex X = named_complex("rp2-6");
  CheegerValue plain = brute_down(X, 1, Lp::l1);
  CheegerValue exact = brute_down(X, 1, Lp::l1, CheegerVariant::exact_only);
  REQUIRE_FALSE(exact.infinite);
  CHECK(exact.value >= plain.value);
}

TEST_CASE("up constants run on the transpose in the matching degree") {
  CellComplex X = named_complex("rp2-6");
  CheegerValue up = cheeger_up(X, 1, NormSpec::l1(), CheegerVariant::plain,
                               CheegerMethod::brute, {});
  CellComplex T = transpose_complex(X);
  CheegerValue dn = cheeger_down(T, transpose_degree(X, 1), NormSpec::l1(),
                                 CheegerVariant::plain, CheegerMethod::brute,
                                 {});
  CHECK(up.infinite == dn.infinite);
  CHECK(up.zero == dn.zero);
  if (!up.infinite && !up.zero) CHECK(up.value == dn.value);
}

TEST_CASE("witnesses achieve the reported ratio") {
  CellComplex X = named_complex("rp2-6");
  CheegerValue v = brute_down(X, 1, Lp::l1);
  REQUIRE_FALSE(v.infinite);
  REQUIRE_FALSE(v.zero);
  Chain cyc = v.witness_cycle;
  FillingResult f = min_filling(X, cyc, NormSpec::l1());
  REQUIRE(f.feasible);
  CHECK(v.value * f.value == cyc.norm_exact(NormSpec::l1()));
  CHECK(apply_boundary(X, v.witness_filling) == cyc);
}

TEST_CASE("tilde decomposition reconstructs and the brute value is exact") {
  CellComplex X = named_complex("rp2-6");
  Rng rng(31);
  for (int t = 0; t < 6; ++t) {
    Chain a(2);
    for (int k = 0; k < 4; ++k)
      a.set(static_cast<int>(rng.below(X.n_cells(2))),
            BigRat(rng.range(-3, 3)));
    if (a.coeffs().empty()) continue;
    TildeDecomposition d = tilde_h2_decompose(X, a, NormSpec::l1());
    Chain back = apply_coboundary(X, d.beta) + d.gamma;
    CHECK(back == a);
    CHECK(apply_boundary(X, d.gamma).coeffs().empty());
    CHECK(d.cost == d.beta.norm_exact(NormSpec::l1()) +
                        d.gamma.norm_exact(NormSpec::l1()));
  }

  // the L1 value is an infimum over unit cells; replay it directly
  CheegerValue tv = tilde_h2(X, NormSpec::l1());
  REQUIRE_FALSE(tv.infinite);
  BigRat worst(0);
  for (int j = 0; j < X.n_cells(2); ++j) {
    TildeDecomposition d = tilde_h2_decompose(X, unit(2, j), NormSpec::l1());
    if (d.cost > worst) worst = d.cost;
  }
  CHECK(tv.value * worst == BigRat(1));
}

TEST_CASE("weighted norms are accepted for plain fillings") {
  CellComplex P = named_complex("path(4)");
  NormSpec ns{Lp::l1, {BigRat(1), BigRat(5), BigRat(1)}};
  Chain z = unit(0, 0) + unit(0, 3, BigRat(-1));
  FillingResult f = min_filling(P, z, ns);
  REQUIRE(f.feasible);
  CHECK(f.value == BigRat(7));  // 1 + 5 + 1 along the only route
}
