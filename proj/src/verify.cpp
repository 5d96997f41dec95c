#include "hdx/verify.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hdx/complex_io.hpp"
#include "hdx/constructors.hpp"
#include "hdx/cover.hpp"
#include "hdx/fibration.hpp"
#include "hdx/filling.hpp"
#include "hdx/homology.hpp"
#include "hdx/snf.hpp"
#include "hdx/spectral.hpp"
#include "hdx/surgery.hpp"
#include "hdx/transport.hpp"

namespace hdx {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::string where(const CellComplex& X, int i) {
  return X.name() + " dim " + std::to_string(i);
}

/** Determinant by fraction-based Gaussian elimination, for rechecking
 *  integer results through a different code path than the SNF. */
BigRat rational_det(const IntMat& m) {
  int n = static_cast<int>(m.size());
  std::vector<std::vector<BigRat>> a(n, std::vector<BigRat>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = BigRat(m[i][j]);
  BigRat det(1);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (a[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return BigRat(0);
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      BigRat f = a[r][c] / a[c][c];
      for (int j = c; j < n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

BigInt rat_to_int(const BigRat& v) {
  if (boost::multiprecision::denominator(v) != 1)
    fail("expected an integer, got " + bigrat_str(v));
  return boost::multiprecision::numerator(v);
}

long long choose_ll(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

FramedLink random_link(std::mt19937_64& rng, int n) {
  FramedLink link;
  link.lk.assign(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      long long v = static_cast<long long>(rng() % 7) - 3;
      link.lk[i][j] = v;
      link.lk[j][i] = v;
    }
  return link;
}

// ---- spectral -----------------------------------------------------------

void check_hodge_gap_matches_cheeger() {
  std::vector<CellComplex> xs;
  xs.push_back(build_simplicial({{0, 1, 2, 3}}, "solid-tetrahedron"));
  xs.push_back(cone_over_random_graph(5, 2, 21));
  xs.push_back(cone_over_random_graph(6, 3, 22));
  for (const auto& X : xs)
    for (int i = 0; i < X.dims(); ++i) {
      if (betti_number(X, i) != 0 || X.n_cells(i) == 0) continue;
      SpectralReport r = spectral_report(X, i);
      double h = std::min(cheeger_l2_down(X, i), cheeger_l2_up(X, i));
      if (std::isinf(r.hodge_gap) != std::isinf(h))
        fail("hodge gap finiteness mismatch on " + where(X, i));
      if (std::isinf(h)) continue;
      double scale = r.spectrum.empty() ? 1.0 : std::max(1.0, r.spectrum.back());
      if (std::abs(r.hodge_gap - h * h) > 1e-9 * scale)
        fail("hodge gap " + std::to_string(r.hodge_gap) + " != min(h)^2 = " +
             std::to_string(h * h) + " on " + where(X, i));
    }
}

void check_l2_up_down_shift() {
  std::vector<CellComplex> xs;
  xs.push_back(build_simplicial({{0, 1, 2, 3}}, "solid-tetrahedron"));
  xs.push_back(build_simplicial({{0, 1, 2, 3, 4}}, "solid-4-simplex"));
  xs.push_back(cone_over_random_graph(5, 2, 31));
  for (const auto& X : xs)
    for (int i = 0; i < X.dims(); ++i) {
      if (betti_number(X, i) != 0 || betti_number(X, i + 1) != 0) continue;
      double down = cheeger_l2_down(X, i), up = cheeger_l2_up(X, i + 1);
      if (std::isinf(down) && std::isinf(up)) continue;
      if (std::abs(down - up) > 1e-9 * std::max(1.0, down))
        fail("h_" + std::to_string(i) + " = " + std::to_string(down) +
             " but h^" + std::to_string(i + 1) + " = " + std::to_string(up) +
             " on " + X.name());
    }
}

void check_harmonic_dimension_is_betti() {
  std::vector<CellComplex> xs{named_complex("rp2-6"), named_complex("torus-7"),
                              named_complex("klein-8"),
                              named_complex("zn-presentation(5)"),
                              simplex_boundary(3), hypercube_skeleton(3, 2)};
  for (const auto& X : xs)
    for (int i = 0; i <= X.dims(); ++i) {
      SpectralReport r = spectral_report(X, i);
      int zeros = 0;
      for (double ev : r.spectrum)
        if (ev < r.tolerance) ++zeros;
      int b = betti_number(X, i);
      if (zeros != b || r.betti_check != b)
        fail("zero eigenvalue multiplicity " + std::to_string(zeros) +
             " vs betti " + std::to_string(b) + " on " + where(X, i));
    }
}

void check_eigenpair_residuals() {
  std::vector<std::pair<CellComplex, int>> cases{
      {named_complex("rp2-6"), 1},
      {named_complex("torus-7"), 1},
      {simplex_boundary(3), 0},
      {simplex_boundary(3), 1},
      {simplex_boundary(3), 2}};
  for (const auto& [X, i] : cases) {
    Eigen::MatrixXd lap = hodge_laplacian(X, i);
    if (lap.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
    double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (int k = 0; k < lap.rows(); ++k) {
      Eigen::VectorXd v = es.eigenvectors().col(k);
      double resid = (lap * v - es.eigenvalues()[k] * v).norm();
      if (resid > 1e-8 * scale)
        fail("eigenpair residual " + std::to_string(resid) + " on " +
             where(X, i) + " pair " + std::to_string(k));
    }
  }
}

// ---- filling ------------------------------------------------------------

void check_coboundary_is_transpose() {
  std::vector<CellComplex> xs{named_complex("rp2-6"), named_complex("torus-7"),
                              named_complex("zn-presentation(4)"),
                              simplex_boundary(3)};
  for (const auto& X : xs) {
    for (int i = 0; i < X.dims(); ++i) {
      SparseInt b = X.boundary_matrix(i + 1);
      for (int j = 0; j < X.n_cells(i); ++j) {
        Chain e(i);
        e.set(j, 1);
        Chain d = apply_coboundary(X, e);
        for (int c = 0; c < b.cols(); ++c)
          if (d.at(c) != BigRat(b.at(j, c)))
            fail("coboundary of cell " + std::to_string(j) + " differs from " +
                 "transposed incidence at column " + std::to_string(c) +
                 " on " + where(X, i));
      }
    }
    CellComplex T = transpose_complex(X);
    for (int i = 0; i < X.dims(); ++i) {
      Chain c(i);
      for (int j = 0; j < X.n_cells(i); ++j)
        c.set(j, BigRat(2 * j + 1, j + 2));
      Chain up = apply_coboundary(X, c);
      Chain ct(transpose_degree(X, i));
      for (const auto& [j, v] : c.coeffs()) ct.set(j, v);
      Chain down = apply_boundary(T, ct);
      if (up.coeffs() != down.coeffs())
        fail("coboundary on " + where(X, i) +
             " disagrees with the transpose complex boundary");
    }
  }
}

void check_chain_norm_comparison() {
  std::mt19937_64 rng(7);
  const int N = 12;
  for (int t = 0; t < 30; ++t) {
    Chain c(1);
    for (int k = 0; k < N; ++k)
      if (rng() % 2)
        c.set(k, BigRat(static_cast<int>(rng() % 19) - 9,
                        1 + static_cast<int>(rng() % 7)));
    if (c.is_zero()) continue;
    BigRat l1 = c.norm_exact(NormSpec::l1());
    BigRat li = c.norm_exact(NormSpec::linf());
    if (!(li <= l1 && l1 <= BigRat(N) * li))
      fail("L1/Linf comparison failed: |c|_1 = " + bigrat_str(l1) +
           ", |c|_inf = " + bigrat_str(li) + ", N = " + std::to_string(N));
    double l1d = c.norm(NormSpec::l1()), l2d = c.norm(NormSpec::l2());
    double lid = c.norm(NormSpec::linf());
    double rt = std::sqrt(double(N)), s = 1 + 1e-9;
    if (!(l2d <= l1d * s && l1d <= rt * l2d * s && lid <= l2d * s &&
          l2d <= rt * lid * s))
      fail("L2 norm comparison failed at trial " + std::to_string(t));
  }
}

void check_filling_witness_exact() {
  CellComplex X = simplex_boundary(3);
  for (int f = 0; f < 2; ++f) {
    Chain cell(2);
    cell.set(f, 1);
    Chain alpha = apply_boundary(X, cell);
    for (const NormSpec& ns :
         {NormSpec::l1(), NormSpec::linf(), NormSpec::l2()}) {
      FillingResult fr = min_filling(X, alpha, ns);
      if (!fr.feasible) fail("boundary cycle reported unfillable on " + X.name());
      verify_filling(X, alpha, fr, ns);
    }
  }
  std::vector<std::pair<CellComplex, int>> cases{{named_complex("rp2-6"), 1},
                                                 {named_complex("torus-7"), 0}};
  for (const auto& [Y, i] : cases) {
    CheegerValue cv = cheeger_down(Y, i, NormSpec::l1());
    if (cv.zero || cv.infinite) fail("expected a finite constant on " + where(Y, i));
    if (apply_boundary(Y, cv.witness_filling) != cv.witness_cycle)
      fail("brute witness filling does not bound the witness cycle on " +
           where(Y, i));
    FillingResult mf = min_filling(Y, cv.witness_cycle, NormSpec::l1());
    if (!mf.feasible || cv.value * mf.value != cv.witness_cycle.norm_exact(NormSpec::l1()))
      fail("brute witness does not achieve the reported ratio on " + where(Y, i));
  }
}

void check_vanishing_tracks_homology() {
  std::vector<std::pair<CellComplex, int>> cases{
      {named_complex("torus-7"), 1},
      {named_complex("klein-8"), 1},
      {named_complex("rp2-6"), 1},
      {named_complex("zn-presentation(3)"), 1},
      {simplex_boundary(3), 2}};
  for (const auto& [X, i] : cases) {
    bool nonzero_homology = betti_number(X, i) != 0;
    for (const NormSpec& ns : {NormSpec::l1(), NormSpec::linf()}) {
      CheegerValue cv = cheeger_down(X, i, ns);
      if (cv.zero != nonzero_homology)
        fail("h_" + std::to_string(i) + " zero flag " +
             std::to_string(cv.zero) + " but betti " +
             std::to_string(betti_number(X, i)) + " on " + X.name());
      if (!cv.zero && !cv.infinite && !(cv.value > 0))
        fail("finite constant is not positive on " + where(X, i));
    }
    double z = cheeger_l2_down(X, i);
    if ((z == 0.0) != nonzero_homology)
      fail("L2 constant " + std::to_string(z) + " vs betti " +
           std::to_string(betti_number(X, i)) + " on " + X.name());
  }
}

void check_cheeger_norm_comparison() {
  std::vector<std::pair<CellComplex, int>> cases{
      {named_complex("rp2-6"), 0},
      {named_complex("rp2-6"), 1},
      {named_complex("cycle(5)"), 0},
      {simplex_boundary(2), 0},
      {simplex_boundary(3), 1}};
  for (const auto& [X, i] : cases) {
    CheegerValue h1 = cheeger_down(X, i, NormSpec::l1());
    CheegerValue hi = cheeger_down(X, i, NormSpec::linf());
    CheegerValue h2 = cheeger_down(X, i, NormSpec::l2());
    if (h1.zero || h1.infinite) fail("expected a finite value on " + where(X, i));
    BigRat N(X.n_cells(i) + X.n_cells(i + 1));
    if (!(h1.value <= N * hi.value && hi.value <= N * h1.value))
      fail("h(1) = " + bigrat_str(h1.value) + " and h(inf) = " +
           bigrat_str(hi.value) + " violate the N = " + bigrat_str(N) +
           " comparison on " + where(X, i));
    double rt = std::sqrt(as_double(N)), s = 1 + 1e-6;
    double a = h1.value_d, b = h2.value_d, c = hi.value_d;
    if (!(a <= rt * b * s && b <= rt * a * s && b <= rt * c * s &&
          c <= rt * b * s))
      fail("L2 constant comparison failed on " + where(X, i));
  }
}

void check_l2_brute_matches_spectral() {
  std::vector<std::pair<CellComplex, int>> cases{{simplex_boundary(2), 0},
                                                 {simplex_boundary(3), 1},
                                                 {named_complex("rp2-6"), 0},
                                                 {named_complex("cycle(6)"), 0}};
  for (const auto& [X, i] : cases) {
    CheegerValue cv = cheeger(X, i, NormSpec::l2(), CheegerVariant::plain,
                              CheegerMethod::brute);
    double sp = cheeger_l2_down(X, i);
    if (cv.infinite != std::isinf(sp) || cv.zero != (sp == 0.0))
      fail("L2 brute flags disagree with spectral on " + where(X, i));
    if (!cv.infinite && !cv.zero &&
        std::abs(cv.value_d - sp) > 1e-7 * std::max(1.0, sp))
      fail("L2 brute " + std::to_string(cv.value_d) + " vs spectral " +
           std::to_string(sp) + " on " + where(X, i));
  }
}

void check_up_constant_via_transpose() {
  std::vector<std::pair<CellComplex, int>> cases{
      {named_complex("rp2-6"), 1},
      {named_complex("zn-presentation(4)"), 1},
      {simplex_boundary(3), 1}};
  for (const auto& [X, i] : cases) {
    CheegerValue a = cheeger_up(X, i, NormSpec::l1());
    CellComplex T = transpose_complex(X);
    CheegerValue b = cheeger_down(T, transpose_degree(X, i), NormSpec::l1());
    if (a.zero != b.zero || a.infinite != b.infinite)
      fail("up-constant flags differ from the transpose complex on " +
           where(X, i));
    if (!a.zero && !a.infinite && a.value != b.value)
      fail("h^" + std::to_string(i) + " = " + bigrat_str(a.value) +
           " but the transpose gives " + bigrat_str(b.value) + " on " +
           X.name());
  }
}

// ---- transport ----------------------------------------------------------

void check_hypercube_cell_counts() {
  for (int deg = 1; deg <= 10; ++deg) {
    int kmax = std::min(deg, deg >= 9 ? 2 : 3);
    for (int k = 0; k <= kmax; ++k) {
      CellComplex X = hypercube_skeleton(deg, k);
      for (int i = 0; i <= k; ++i) {
        long long want = choose_ll(deg, i) * (1LL << (deg - i));
        if (X.n_cells(i) != want)
          fail("hypercube(" + std::to_string(deg) + ", " + std::to_string(k) +
               ") has " + std::to_string(X.n_cells(i)) + " cells in dim " +
               std::to_string(i) + ", expected " + std::to_string(want));
      }
    }
  }
}

void check_certificate_replay() {
  ContractionResult cr = hypercube_contract_word(random_closed_word(4, 12, 99));
  verify_transport(cr.complex, cr.certificate);

  CellComplex X = hypercube_skeleton(4, 3);
  Chain cell(3);
  cell.set(0, 1);
  Chain alpha = apply_boundary(X, cell);
  StepOracle oracle = hypercube_averaging_oracle(X, 4);
  BigRat r = hypercube_averaging_ratio(4);

  auto [next, mid] = oracle(alpha);
  TransportCertificate head;
  head.steps.push_back(
      {alpha, next, mid,
       mid.norm_exact(NormSpec::l1()) / alpha.norm_exact(NormSpec::l1())});
  refresh_certificate(head);
  verify_transport(X, head);

  ExpfillResult er = expfill(X, oracle, next, r, r, BigRat(1, 1000000));
  if (!er.ok) fail("expfill failed: " + er.failure);
  verify_transport(X, er.certificate);
  TransportCertificate both = compose_transport(head, er.certificate);
  verify_transport(X, both);
  if (both.initial() != alpha) fail("composed certificate lost its start");
}

void check_contraction_square_budget() {
  for (int deg = 3; deg <= 6; ++deg) {
    const int len = 16;
    ContractionResult cr =
        hypercube_contract_word(random_closed_word(deg, len, 7 * deg));
    if (cr.squares > static_cast<long long>(deg) * len)
      fail("contraction emitted " + std::to_string(cr.squares) +
           " squares on a length-" + std::to_string(len) + " word, deg " +
           std::to_string(deg));
    if (apply_boundary(cr.complex, cr.filling) != cr.cycle)
      fail("contraction filling boundary mismatch at deg " +
           std::to_string(deg));
    if (cr.filling.norm_exact(NormSpec::l1()) > BigRat(2 * deg * len))
      fail("contraction filling norm above 2*deg*len at deg " +
           std::to_string(deg));
  }
}

void check_decomposition_contraction_ratio() {
  for (int deg : {4, 5}) {
    CellComplex X = hypercube_skeleton(deg, 3);
    std::mt19937_64 rng(13 * deg);
    Chain c(2);
    for (int k = 0; k < 6; ++k)
      c.set(static_cast<int>(rng() % X.n_cells(2)),
            BigRat(1 + static_cast<int>(rng() % 3)));
    DecomposeResult dr = hypercube_decompose(deg, c, BigRat(1, 1000));
    for (std::size_t k = 0; k < dr.rounds.size(); ++k)
      if (dr.rounds[k].norm_after > dr.ratio_bound * dr.rounds[k].norm_before)
        fail("decomposition round " + std::to_string(k) +
             " contracted slower than (deg-2)/(deg+2) at deg " +
             std::to_string(deg));
    Chain back = apply_coboundary(dr.complex, dr.x) + dr.y + dr.residual;
    if (back != c) fail("decomposition does not reassemble the input at deg " +
                        std::to_string(deg));
    if (!apply_boundary(dr.complex, dr.y).is_zero())
      fail("decomposition y part is not closed at deg " + std::to_string(deg));
  }
}

void check_expfill_norm_bound() {
  const int deg = 5;
  CellComplex X = hypercube_skeleton(deg, 3);
  Chain cell(3);
  cell.set(2, 1);
  Chain alpha = apply_boundary(X, cell);
  BigRat r = hypercube_averaging_ratio(deg), tol(1, 1000000);
  ExpfillResult er = expfill(X, hypercube_averaging_oracle(X, deg), alpha, r,
                             r, tol);
  if (!er.ok) fail("expfill failed: " + er.failure);
  if (apply_boundary(X, er.filling) != alpha)
    fail("expfill filling boundary mismatch");
  if (er.cost_bound != r / (BigRat(1) - r)) fail("expfill cost bound is wrong");
  if (er.filling_norm > er.cost_bound * alpha.norm_exact(NormSpec::l1()) + tol)
    fail("expfill filling norm " + bigrat_str(er.filling_norm) +
         " exceeds the geometric series bound");
}

// ---- homology -----------------------------------------------------------

void check_boundary_squares_zero() {
  std::vector<CellComplex> xs;
  for (int deg = 3; deg <= 6; ++deg)
    xs.push_back(hypercube_skeleton(deg, std::min(deg, 3)));
  for (int n = 2; n <= 5; ++n) xs.push_back(simplex_boundary(n));
  for (const char* name :
       {"rp2-6", "torus-7", "klein-8", "moore-z2", "rp3-quotient",
        "zn-presentation(5)", "moore-z2-wedge(3)", "cycle(6)", "complete(5)",
        "path(4)"})
    xs.push_back(named_complex(name));
  for (std::uint64_t s = 0; s < 4; ++s)
    xs.push_back(random_complex(7, 2, 0.5, 100 + s));
  xs.push_back(random_complex(6, 3, 0.4, 200));
  for (const auto& X : xs) {
    X.validate();
    for (int i = X.augmented() ? 0 : 1; i < X.dims(); ++i) {
      SparseInt a = X.boundary_matrix(i), b = X.boundary_matrix(i + 1);
      for (int c = 0; c < b.cols(); ++c) {
        std::map<int, BigInt> acc;
        for (auto [r, v] : b.column(c))
          for (auto [rr, vv] : a.column(r)) acc[rr] += BigInt(v) * vv;
        for (const auto& [row, v] : acc)
          if (v != 0)
            fail("boundary^2 entry (" + std::to_string(row) + ", " +
                 std::to_string(c) + ") = " + v.str() + " in dim " +
                 std::to_string(i + 1) + " of " + X.name());
      }
    }
  }
}

void check_rebuild_determinism() {
  auto same = [](const CellComplex& a, const CellComplex& b) {
    return complex_hash(a) == complex_hash(b) &&
           canonical_dump(complex_to_json(a)) == canonical_dump(complex_to_json(b));
  };
  if (!same(named_complex("rp2-6"), named_complex("rp2-6")))
    fail("rebuilding rp2-6 changed its hash");
  if (!same(random_complex(9, 2, 0.45, 17), random_complex(9, 2, 0.45, 17)))
    fail("random_complex is not reproducible under a fixed seed");
  if (!same(random_connected_graph(8, 3, 5), random_connected_graph(8, 3, 5)))
    fail("random_connected_graph is not reproducible under a fixed seed");
  if (!same(hypercube_skeleton(4, 2), hypercube_skeleton(4, 2)))
    fail("hypercube_skeleton is not reproducible");
  Json a{{"value", 1.5}, {"runtime_ms", 3.25}};
  Json b{{"value", 1.5}, {"runtime_ms", 99.0}};
  Json c{{"value", 2.5}, {"runtime_ms", 3.25}};
  if (report_hash(a) != report_hash(b))
    fail("report hash depends on runtime_ms");
  if (report_hash(a) == report_hash(c))
    fail("report hash ignores payload changes");
}

void check_smith_form_certified() {
  auto recheck = [](const IntMat& m, const std::string& tag) {
    int rows = static_cast<int>(m.size());
    int cols = rows ? static_cast<int>(m[0].size()) : 0;
    SmithForm sf = smith_normal_form(m);
    IntMat umv = int_mul(int_mul(sf.u, m), sf.v);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        BigInt want = (i == j && i < static_cast<int>(sf.diagonal.size()))
                          ? sf.diagonal[i]
                          : BigInt(0);
        if (umv[i][j] != want)
          fail("U M V misses the diagonal form at (" + std::to_string(i) +
               ", " + std::to_string(j) + ") for " + tag);
      }
    for (std::size_t k = 0; k + 1 < sf.diagonal.size(); ++k)
      if (sf.diagonal[k + 1] != 0 && sf.diagonal[k] != 0 &&
          sf.diagonal[k + 1] % sf.diagonal[k] != 0)
        fail("divisibility chain broken at " + std::to_string(k) + " for " + tag);
    int nonzero = 0;
    for (const auto& d : sf.diagonal)
      if (d != 0) ++nonzero;
    if (nonzero != sf.rank) fail("rank disagrees with the diagonal for " + tag);
    BigRat du = rational_det(sf.u), dv = rational_det(sf.v);
    if (!((du == 1 || du == -1) && (dv == 1 || dv == -1)))
      fail("transform determinant is not a unit for " + tag);
  };
  std::mt19937_64 rng(4242);
  for (int t = 0; t < 40; ++t) {
    int rows = 1 + static_cast<int>(rng() % 6);
    int cols = 1 + static_cast<int>(rng() % 6);
    IntMat m(rows, std::vector<BigInt>(cols));
    for (auto& row : m)
      for (auto& v : row) v = static_cast<int>(rng() % 19) - 9;
    recheck(m, "random matrix " + std::to_string(t));
  }
  for (const char* name : {"rp2-6", "klein-8", "zn-presentation(6)", "torus-7"}) {
    CellComplex X = named_complex(name);
    recheck(to_bigint(X.boundary_matrix(2)), std::string(name) + " boundary");
  }
}

void check_torsion_order_consistency() {
  std::vector<std::pair<std::string, int>> cases{
      {"rp2-6", 2}, {"moore-z2", 2}, {"rp3-quotient", 2}};
  for (int n = 3; n <= 6; ++n)
    cases.push_back({"zn-presentation(" + std::to_string(n) + ")", n});
  for (const auto& [name, order] : cases) {
    CellComplex X = named_complex(name);
    HomologyGroup hg = homology(X, 1);
    if (hg.betti != 0 || hg.torsion_order() != BigInt(order))
      fail("H_1 of " + name + " is " + hg.str() + ", expected torsion order " +
           std::to_string(order));
    CoverComplex cc = universal_abelian_cover(X);
    if (cc.group.order() != order || cc.sheets() != order)
      fail("cover of " + name + " has " + std::to_string(cc.sheets()) +
           " sheets, expected " + std::to_string(order));
  }
  try {
    universal_abelian_cover(named_complex("klein-8"));
    fail("klein-8 has infinite H_1 but the cover builder accepted it");
  } catch (const std::invalid_argument&) {
  }
}

void check_cover_deck_action() {
  for (const char* name : {"rp2-6", "zn-presentation(5)", "moore-z2"}) {
    CoverComplex cc = universal_abelian_cover(named_complex(name));
    verify_cover(cc);
    if (cc.total.euler_characteristic() !=
        cc.sheets() * cc.base.euler_characteristic())
      fail("Euler characteristic is not multiplicative for the cover of " +
           std::string(name));
  }
}

void check_fundamental_class_integral() {
  std::vector<CellComplex> xs{simplex_boundary(3), simplex_boundary(4),
                              named_complex("torus-7")};
  for (const auto& X : xs) {
    int top = X.dims();
    if (betti_number(X, top) != 1)
      fail("top betti of " + X.name() + " is not 1");
    Chain fc = fundamental_class(X);
    if (static_cast<int>(fc.support_size()) != X.n_cells(top))
      fail("fundamental class of " + X.name() + " misses a top cell");
    for (const auto& [i, v] : fc.coeffs())
      if (v != 1 && v != -1)
        fail("fundamental class of " + X.name() + " has coefficient " +
             bigrat_str(v) + " at cell " + std::to_string(i));
    if (!apply_boundary(X, fc).is_zero())
      fail("fundamental class of " + X.name() + " is not a cycle");
  }
}

// ---- surgery ------------------------------------------------------------

void check_surgery_det_matches_torsion() {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 10; ++t) {
    FramedLink link = random_link(rng, 2 + static_cast<int>(rng() % 4));
    long long mds = min_dominant_slope(link);
    for (long long q : {mds, mds + 3, mds + 6}) {
      BigRat det = rational_det(presentation_matrix(link, q));
      BigInt order = surgery_h1_order(link, q);
      BigInt want = rat_to_int(det);
      if (want < 0) want = -want;
      if (order != want)
        fail("surgery order " + order.str() + " but |det| = " + want.str() +
             " at q = " + std::to_string(q) + ", trial " + std::to_string(t));
      HomologyGroup hg = surgery_h1(link, q);
      if ((hg.betti == 0) != (want != 0) ||
          (want != 0 && hg.torsion_order() != want))
        fail("surgery homology " + hg.str() + " disagrees with det at q = " +
             std::to_string(q) + ", trial " + std::to_string(t));
    }
  }
}

void check_dominant_links_nonsingular() {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 12; ++t) {
    FramedLink link = random_link(rng, 2 + static_cast<int>(rng() % 4));
    long long q = min_dominant_slope(link);
    if (rational_det(presentation_matrix(link, q)) == 0)
      fail("diagonally dominant presentation is singular at trial " +
           std::to_string(t) + ", q = " + std::to_string(q));
  }
}

void check_meridian_contraction_certified() {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 6; ++t) {
    FramedLink link = random_link(rng, 2 + static_cast<int>(rng() % 3));
    long long rowsum = 0;
    for (const auto& row : link.lk) {
      long long s = 0;
      for (long long v : row) s += std::llabs(v);
      rowsum = std::max(rowsum, s);
    }
    if (rowsum == 0) {
      link.lk[0][0] = 1;
      rowsum = 1;
    }
    std::vector<BigRat> a(link.size(), BigRat(0));
    a[0] = 1;
    MeridianResult mr = meridian_contraction(link, 2 * rowsum, a);
    const MeridianCertificate& c = mr.certificate;
    if (c.factor_bound != BigRat(1, 2) || !c.paper_halving || !c.contracting)
      fail("factor bound at q = 2*rowsum is " + bigrat_str(c.factor_bound) +
           ", expected 1/2, trial " + std::to_string(t));
    if (c.max_observed_ratio > c.factor_bound)
      fail("observed ratio " + bigrat_str(c.max_observed_ratio) +
           " above the certified bound, trial " + std::to_string(t));
    if (!c.converged)
      fail("halving iteration did not converge at trial " + std::to_string(t));
  }
}

void check_presentation_roundtrip() {
  std::mt19937_64 rng(31);
  FramedLink link = random_link(rng, 4);
  long long mds = min_dominant_slope(link);
  IntMat m = presentation_matrix(link, mds + 1);
  for (int i = 0; i < link.size(); ++i)
    for (int j = 0; j < link.size(); ++j) {
      BigInt want = link.lk[i][j] + (i == j ? mds + 1 : 0);
      if (m[i][j] != want)
        fail("presentation entry (" + std::to_string(i) + ", " +
             std::to_string(j) + ") is not Lk + q*I");
    }
  auto rows = torsion_growth_table(link, mds, mds + 4);
  if (rows.size() != 5) fail("growth table has the wrong number of rows");
  for (const auto& row : rows) {
    BigInt order = surgery_h1_order(link, row.q);
    if (row.h1_order != order ||
        row.rational_homology_sphere != (order != 0))
      fail("growth table row at q = " + std::to_string(row.q) +
           " disagrees with the direct computation");
  }
}

// ---- fibration ----------------------------------------------------------

void check_fibration_witnesses_exact() {
  auto expect_witnesses = [](const GraphFibration& F, const std::string& tag) {
    LeraySerreReport rep = leray_serre_check(F, NormSpec::l1());
    if (!rep.chain.witness_valid || !rep.cochain.witness_valid)
      fail("constructed witness failed on " + tag);
    if (!rep.chain.witness_within_rhs || !rep.cochain.witness_within_rhs)
      fail("constructed witness norm exceeds the bound on " + tag);
  };
  expect_witnesses(prism_fibration(named_complex("cycle(3)")),
                   "prism over cycle(3)");
  expect_witnesses(product_fibration(random_connected_graph(3, 1, 11),
                                     random_connected_graph(2, 0, 12)),
                   "product of seeded graphs");
}

void check_leray_serre_inequalities() {
  LeraySerreReport rep =
      leray_serre_check(identity_fibration(random_connected_graph(5, 2, 7)),
                        NormSpec::l1());
  if (!rep.chain.holds || !rep.cochain.holds)
    fail("comparison failed on the identity fibration");
  if (!(rep.chain.rhs > 0) || !(rep.cochain.rhs > 0))
    fail("degenerate bound on the identity fibration");
  LeraySerreReport rep2 =
      leray_serre_check(prism_fibration(named_complex("cycle(4)")),
                        NormSpec::l1());
  if (!rep2.chain.holds || !rep2.cochain.holds)
    fail("comparison failed on the prism over cycle(4)");
}

// ---- registry -----------------------------------------------------------

using CheckFn = void (*)();

struct Registered {
  std::string_view name;
  std::string_view suite;
  CheckFn fn;
};

constexpr std::array<Registered, 28> registry{{
    {"hodge-gap-matches-cheeger", "spectral", &check_hodge_gap_matches_cheeger},
    {"l2-up-down-shift", "spectral", &check_l2_up_down_shift},
    {"harmonic-dimension-is-betti", "spectral", &check_harmonic_dimension_is_betti},
    {"eigenpair-residuals", "spectral", &check_eigenpair_residuals},
    {"coboundary-is-transpose", "filling", &check_coboundary_is_transpose},
    {"chain-norm-comparison", "filling", &check_chain_norm_comparison},
    {"filling-witness-exact", "filling", &check_filling_witness_exact},
    {"vanishing-tracks-homology", "filling", &check_vanishing_tracks_homology},
    {"cheeger-norm-comparison", "filling", &check_cheeger_norm_comparison},
    {"l2-brute-matches-spectral", "filling", &check_l2_brute_matches_spectral},
    {"up-constant-via-transpose", "filling", &check_up_constant_via_transpose},
    {"hypercube-cell-counts", "transport", &check_hypercube_cell_counts},
    {"certificate-replay", "transport", &check_certificate_replay},
    {"contraction-square-budget", "transport", &check_contraction_square_budget},
    {"decomposition-contraction-ratio", "transport",
     &check_decomposition_contraction_ratio},
    {"expfill-norm-bound", "transport", &check_expfill_norm_bound},
    {"boundary-squares-zero", "homology", &check_boundary_squares_zero},
    {"rebuild-determinism", "homology", &check_rebuild_determinism},
    {"smith-form-certified", "homology", &check_smith_form_certified},
    {"torsion-order-consistency", "homology", &check_torsion_order_consistency},
    {"cover-deck-action", "homology", &check_cover_deck_action},
    {"fundamental-class-integral", "homology", &check_fundamental_class_integral},
    {"surgery-det-matches-torsion", "surgery", &check_surgery_det_matches_torsion},
    {"dominant-links-nonsingular", "surgery", &check_dominant_links_nonsingular},
    {"meridian-contraction-certified", "surgery",
     &check_meridian_contraction_certified},
    {"presentation-roundtrip", "surgery", &check_presentation_roundtrip},
    {"fibration-witnesses-exact", "fibration", &check_fibration_witnesses_exact},
    {"leray-serre-inequalities", "fibration", &check_leray_serre_inequalities},
}};

constexpr bool registry_matches_manifest() {
  if (registry.size() != verify_manifest.size()) return false;
  for (const auto& m : verify_manifest) {
    bool found = false;
    for (const auto& r : registry)
      if (r.name == m.name) {
        if (r.suite != m.suite) return false;
        found = true;
      }
    if (!found) return false;
  }
  for (const auto& r : registry) {
    bool found = false;
    for (const auto& m : verify_manifest)
      if (m.name == r.name) found = true;
    if (!found) return false;
  }
  return true;
}
static_assert(registry_matches_manifest(),
              "every manifest entry needs exactly one registered check and "
              "every check needs a manifest entry");

}  // namespace

std::vector<CheckResult> run_verify(const std::string& suite) {
  bool all = suite == "all";
  if (!all) {
    bool known = false;
    for (auto s : verify_suites)
      if (s == suite) known = true;
    if (!known) throw std::invalid_argument("unknown verify suite: " + suite);
  }
  std::vector<CheckResult> out;
  for (const auto& r : registry) {
    if (!all && suite != r.suite) continue;
    CheckResult cr{std::string(r.name), std::string(r.suite), false, "", 0.0};
    auto t0 = std::chrono::steady_clock::now();
    try {
      r.fn();
      cr.passed = true;
    } catch (const std::exception& e) {
      cr.detail = e.what();
    }
    cr.runtime_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    out.push_back(std::move(cr));
  }
  return out;
}

std::string verify_report(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  std::size_t ok = 0;
  for (const auto& r : results) {
    os << (r.passed ? "pass" : "FAIL") << "  " << r.name << " [" << r.suite
       << "]";
    if (!r.passed) os << ": " << r.detail;
    os << "\n";
    if (r.passed) ++ok;
  }
  os << ok << "/" << results.size() << " checks passed\n";
  return os.str();
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace hdx
