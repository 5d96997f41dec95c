#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "hdx/constructors.hpp"
#include "hdx/homology.hpp"
#include "hdx/snf.hpp"
#include "hdx/util.hpp"

using namespace hdx;

namespace {

IntMat mat(std::vector<std::vector<long long>> rows) {
  IntMat m;
  for (auto& r : rows) m.emplace_back(r.begin(), r.end());
  return m;
}

bool is_diagonal(const IntMat& d) {
  for (std::size_t r = 0; r < d.size(); ++r)
    for (std::size_t c = 0; c < d[r].size(); ++c)
      if (r != c && d[r][c] != 0) return false;
  return true;
}

// checks U M V = D entry by entry and the divisibility chain
void check_smith(const IntMat& m, const SmithForm& s) {
  IntMat umv = int_mul(int_mul(s.u, m), s.v);
  REQUIRE(is_diagonal(umv));
  for (std::size_t k = 0; k < s.diagonal.size(); ++k) {
    CHECK(umv[k][k] == s.diagonal[k]);
    CHECK(s.diagonal[k] >= 0);
    if (k + 1 < s.diagonal.size() && s.diagonal[k + 1] != 0) {
      REQUIRE(s.diagonal[k] != 0);
      CHECK(s.diagonal[k + 1] % s.diagonal[k] == 0);
    }
  }
  int nz = 0;
  for (const auto& d : s.diagonal)
    if (d != 0) ++nz;
  CHECK(nz == s.rank);
}

std::vector<long long> torsion_of(const CellComplex& X, int i) {
  std::vector<long long> out;
  for (const auto& hg : homology_all(X))
    if (hg.dim == i)
      for (const auto& t : hg.torsion)
        out.push_back(static_cast<long long>(t));
  return out;
}

}  // namespace

TEST_CASE("smith normal form of pinned matrices") {
  // invariant factors computed separately with a computer algebra system
  struct Pin {
    IntMat m;
    std::vector<long long> diag;
  };
  std::vector<Pin> pins = {
      {mat({{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}}), {2, 2, 156}},
      {mat({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}), {1, 3, 0}},
      {mat({{6, 0}, {0, 10}, {0, 0}}), {2, 30}},
      {mat({{0, 0}, {0, 0}}), {0, 0}},
  };
  for (const auto& pin : pins) {
    SmithForm s = smith_normal_form(pin.m);
    REQUIRE(s.diagonal.size() == pin.diag.size());
    for (std::size_t k = 0; k < pin.diag.size(); ++k)
      CHECK(s.diagonal[k] == pin.diag[k]);
    check_smith(pin.m, s);
  }
}

TEST_CASE("smith normal form on random matrices") {
  Rng rng(99);
  for (int t = 0; t < 120; ++t) {
    int r = 1 + static_cast<int>(rng.below(6));
    int c = 1 + static_cast<int>(rng.below(6));
    IntMat m(r, std::vector<BigInt>(c));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m[i][j] = rng.range(-9, 9);
    check_smith(m, smith_normal_form(m));
  }
}

TEST_CASE("homology of the named fixtures") {
  // betti/torsion verified separately via Smith reduction in a CAS;
  // they also match the textbook values for the underlying spaces
  struct Want {
    const char* name;
    std::vector<int> betti;
    std::vector<std::vector<long long>> torsion;
  };
  std::vector<Want> wants = {
      {"rp2-6", {0, 0, 0}, {{}, {2}, {}}},
      {"torus-7", {0, 2, 1}, {{}, {}, {}}},
      {"klein-8", {0, 1, 0}, {{}, {2}, {}}},
      {"moore-z2", {0, 0, 0}, {{}, {2}, {}}},
      {"zn-presentation(12)", {0, 0, 0}, {{}, {12}, {}}},
      {"simplex-boundary(4)", {0, 0, 0, 1}, {{}, {}, {}, {}}},
      {"rp3-quotient", {0, 0, 0, 1}, {{}, {2}, {}, {}}},
  };
  for (const auto& w : wants) {
    CellComplex X = named_complex(w.name);
    auto all = homology_all(X);
    REQUIRE(static_cast<int>(all.size()) == X.dims() + 1);
    for (int i = 0; i <= X.dims(); ++i) {
      CHECK_MESSAGE(all[i].betti == w.betti[i], w.name, " dim ", i);
      CHECK_MESSAGE(torsion_of(X, i) == w.torsion[i], w.name, " dim ", i);
      CHECK(betti_number(X, i) == all[i].betti);
    }
  }
}

TEST_CASE("zn presentation first homology is cyclic of order n") {
  for (int n : {2, 3, 5, 17, 64}) {
    CellComplex X = named_complex("zn-presentation(" + std::to_string(n) + ")");
    auto t = torsion_of(X, 1);
    REQUIRE(t.size() == 1);
    CHECK(t[0] == n);
    CHECK(betti_number(X, 1) == 0);
  }
}

TEST_CASE("wedges of Moore spaces stack their torsion") {
  CellComplex X = named_complex("moore-z2-wedge(3)");
  CHECK(torsion_of(X, 1) == std::vector<long long>{2, 2, 2});
  CHECK(betti_number(X, 1) == 0);
}

TEST_CASE("betti of the hypercube 2-skeleton counts missing 3-cells") {
  // deg 4: chi = 16 - 32 + 24 and H_0 = H_1 = 0 (reduced), so b_2 = 7;
  // the 2-skeleton's top homology is the kernel of d_2, rank 24 - 17
  CellComplex X = named_complex("hypercube(4,2)");
  CHECK(betti_number(X, 2) == 7);
  CHECK(betti_number(X, 1) == 0);
  CHECK(betti_number(X, 0) == 0);
}

TEST_CASE("homology is invariant under cell permutation") {
  CellComplex X = named_complex("klein-8");
  Rng rng(5);
  std::vector<std::vector<int>> perms;
  for (int i = 0; i <= X.dims(); ++i) {
    std::vector<int> p(X.n_cells(i));
    for (int j = 0; j < X.n_cells(i); ++j) p[j] = j;
    rng.shuffle(p);
    perms.push_back(p);
  }
  CellComplex P = X.permuted(perms);
  auto a = homology_all(X);
  auto b = homology_all(P);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].betti == b[i].betti);
    CHECK(a[i].torsion == b[i].torsion);
  }
}

TEST_CASE("group strings render betti and torsion") {
  CellComplex X = named_complex("klein-8");
  auto all = homology_all(X);
  CHECK(all[1].str() == "Z + Z/2");
  CHECK(all[0].str() == "0");
  CHECK(homology_all(named_complex("torus-7"))[1].str() == "Z^2");
}

TEST_CASE("reduced homology vanishes on trees and cones") {
  for (const auto& X :
       {named_complex("path(6)"), cone_over_random_graph(7, 3, 21)}) {
    for (int i = 0; i <= X.dims(); ++i) {
      CHECK(betti_number(X, i) == 0);
      CHECK(torsion_of(X, i).empty());
    }
  }
}

TEST_CASE("smith form of sparse incidence equals the dense path") {
  CellComplex X = named_complex("rp2-6");
  SmithForm a = smith_normal_form(X.boundary_matrix(2));
  SmithForm b = smith_normal_form(to_bigint(X.boundary_matrix(2)));
  CHECK(a.diagonal == b.diagonal);
  CHECK(a.rank == b.rank);
  CHECK(a.torsion() == std::vector<BigInt>{2});
}
