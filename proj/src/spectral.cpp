#include "hdx/spectral.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hdx/exact_linalg.hpp"
#include "hdx/homology.hpp"
#include "hdx/util.hpp"

namespace hdx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double one_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

/** Eigendecomposition with the residual self-check from the contract. */
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigensolve(
    const Eigen::MatrixXd& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error(std::string(what) + ": eigensolver failed");
  const double scale = std::max(1.0, one_norm(m));
  for (int k = 0; k < m.rows(); ++k) {
    const double res =
        (m * es.eigenvectors().col(k) -
         es.eigenvalues()(k) * es.eigenvectors().col(k))
            .norm();
    if (res > 1e-8 * scale)
      throw std::runtime_error(std::string(what) + ": eigenpair residual " +
                               std::to_string(res) + " exceeds tolerance");
  }
  return es;
}

/**
 * Smallest nonzero eigenvalue given the exact zero multiplicity. The
 * float spectrum must match the rational count: everything below the
 * threshold is zero, everything above is not, and the counts agree.
 */
double gap_with_multiplicity(const Eigen::VectorXd& eigs, int zeros,
                             double tol, const char* what) {
  const int n = static_cast<int>(eigs.size());
  if (zeros > n)
    throw std::runtime_error(std::string(what) +
                             ": zero multiplicity exceeds dimension");
  for (int k = 0; k < zeros; ++k)
    if (std::abs(eigs(k)) >= tol)
      throw std::runtime_error(
          std::string(what) + ": expected zero eigenvalue, found " +
          std::to_string(eigs(k)) + " (exact betti disagrees with spectrum)");
  if (zeros == n) return kInf;
  if (std::abs(eigs(zeros)) < tol)
    throw std::runtime_error(
        std::string(what) + ": eigenvalue " + std::to_string(eigs(zeros)) +
        " below zero threshold but exact betti says nonzero");
  return std::max(0.0, eigs(zeros));
}

struct SplitBasis {
  Eigen::MatrixXd range;   // orthonormal basis of the row space of M
  Eigen::MatrixXd kernel;  // orthonormal basis of ker M
  int rank = 0;
};

/** QR of M^T with the rank pinned by exact elimination over Q. */
SplitBasis row_space_split(const SparseInt& m) {
  SplitBasis out;
  const int n = m.cols();
  out.rank = (m.rows() == 0 || m.nnz() == 0) ? 0 : rank_bareiss(m);
  if (out.rank == 0) {
    out.range = Eigen::MatrixXd::Zero(n, 0);
    out.kernel = Eigen::MatrixXd::Identity(n, n);
    return out;
  }
  const Eigen::MatrixXd at = m.to_dense_double().transpose();  // n x rows
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(at);
  const Eigen::MatrixXd q = qr.householderQ();
  out.range = q.leftCols(out.rank);
  out.kernel = q.rightCols(n - out.rank);
  return out;
}

Eigen::MatrixXd up_laplacian(const CellComplex& X, int i) {
  const Eigen::MatrixXd b = X.boundary_matrix(i + 1).to_dense_double();
  return b * b.transpose();
}

Eigen::MatrixXd down_laplacian(const CellComplex& X, int i) {
  const Eigen::MatrixXd b = X.boundary_matrix(i).to_dense_double();
  return b.transpose() * b;
}

double zero_tol(const Eigen::MatrixXd& m) {
  return 1e-9 * std::max(1.0, one_norm(m));
}

/** sqrt(lambda_min) of Q^T L Q with the exact zero count `zeros`. */
double restricted_root_gap(const Eigen::MatrixXd& L, const Eigen::MatrixXd& Q,
                           int zeros, const char* what) {
  if (Q.cols() == 0) return kInf;
  const Eigen::MatrixXd M = Q.transpose() * L * Q;
  const auto es = eigensolve(M, what);
  const double gap =
      gap_with_multiplicity(es.eigenvalues(), zeros, zero_tol(L), what);
  return std::isinf(gap) ? kInf : std::sqrt(gap);
}

}  // namespace

Eigen::MatrixXd hodge_laplacian(const CellComplex& X, int i) {
  if (i < 0 || i > X.dims())
    throw std::out_of_range("hodge_laplacian: degree out of range");
  return down_laplacian(X, i) + up_laplacian(X, i);
}

SpectralReport spectral_report(const CellComplex& X, int i) {
  if (i < 0 || i > X.dims())
    throw std::out_of_range("spectral_report: degree out of range");
  SpectralReport rep;
  rep.dim = i;
  rep.betti_check = betti_number(X, i);
  const int n = X.n_cells(i);
  if (n == 0) {
    rep.gap_exact = rep.gap_coexact = rep.hodge_gap = kInf;
    return rep;
  }

  const Eigen::MatrixXd up = up_laplacian(X, i);
  const Eigen::MatrixXd down = down_laplacian(X, i);
  const Eigen::MatrixXd delta = up + down;
  rep.tolerance = zero_tol(delta);

  const auto es = eigensolve(delta, "spectral_report: hodge");
  rep.spectrum.assign(es.eigenvalues().data(),
                      es.eigenvalues().data() + es.eigenvalues().size());
  rep.hodge_gap = gap_with_multiplicity(es.eigenvalues(), rep.betti_check,
                                        rep.tolerance,
                                        "spectral_report: hodge zeros");

  // Harmonic chains are exactly the zero modes of both restrictions.
  const Eigen::MatrixXd cycles = row_space_split(X.boundary_matrix(i)).kernel;
  const Eigen::MatrixXd cocycles =
      row_space_split(X.boundary_matrix(i + 1).transposed()).kernel;
  double g = restricted_root_gap(up, cycles, rep.betti_check,
                                 "spectral_report: gap_exact");
  rep.gap_exact = std::isinf(g) ? kInf : g * g;
  g = restricted_root_gap(down, cocycles, rep.betti_check,
                          "spectral_report: gap_coexact");
  rep.gap_coexact = std::isinf(g) ? kInf : g * g;

  // Hodge splitting: the nonzero spectrum of Delta is the union of the
  // two restricted nonzero spectra, so the gaps must be consistent.
  const double expect = std::min(rep.gap_exact, rep.gap_coexact);
  if (std::isfinite(expect) != std::isfinite(rep.hodge_gap) ||
      (std::isfinite(expect) &&
       std::abs(expect - rep.hodge_gap) >
           1e-6 * std::max(1.0, one_norm(delta))))
    throw std::runtime_error(
        "spectral_report: hodge gap disagrees with restricted gaps");
  return rep;
}

Json spectral_report_json(const SpectralReport& r, bool full_spectrum) {
  auto num = [](double v) -> Json {
    if (std::isinf(v)) return Json("inf");
    return Json(round_sig(v));
  };
  Json j;
  j["dim"] = r.dim;
  j["gap_exact"] = num(r.gap_exact);
  j["gap_coexact"] = num(r.gap_coexact);
  j["hodge_gap"] = num(r.hodge_gap);
  j["betti_check"] = r.betti_check;
  j["tolerance"] = round_sig(r.tolerance);
  if (full_spectrum) {
    Json arr = Json::array();
    for (double v : r.spectrum) arr.push_back(round_sig(v));
    j["spectrum"] = arr;
  }
  return j;
}

double cheeger_l2_down(const CellComplex& X, int i, CheegerVariant variant) {
  if (i < 0 || i > X.dims())
    throw std::out_of_range("cheeger_l2_down: degree out of range");
  if (X.n_cells(i) == 0) return kInf;

  switch (variant) {
    case CheegerVariant::plain: {
      if (betti_number(X, i) > 0) return 0.0;
      const Eigen::MatrixXd cycles =
          row_space_split(X.boundary_matrix(i)).kernel;
      return restricted_root_gap(up_laplacian(X, i), cycles, 0,
                                 "cheeger_l2_down");
    }
    case CheegerVariant::exact_only: {
      const Eigen::MatrixXd range =
          row_space_split(X.boundary_matrix(i + 1).transposed()).range;
      return restricted_root_gap(up_laplacian(X, i), range, 0,
                                 "cheeger_l2_down exact");
    }
    case CheegerVariant::coexact_only: {
      // A coboundary is never itself a boundary (the two images are
      // orthogonal), so no chain in the family can be filled.
      const int r = row_space_split(X.boundary_matrix(i)).rank;
      return r == 0 ? kInf : 0.0;
    }
  }
  throw std::logic_error("cheeger_l2_down: unreachable");
}

double cheeger_l2_up(const CellComplex& X, int i, CheegerVariant variant) {
  if (i < 0 || i > X.dims())
    throw std::out_of_range("cheeger_l2_up: degree out of range");
  if (X.n_cells(i) == 0) return kInf;

  switch (variant) {
    case CheegerVariant::plain: {
      if (betti_number(X, i) > 0) return 0.0;
      const Eigen::MatrixXd cocycles =
          row_space_split(X.boundary_matrix(i + 1).transposed()).kernel;
      return restricted_root_gap(down_laplacian(X, i), cocycles, 0,
                                 "cheeger_l2_up");
    }
    case CheegerVariant::coexact_only: {
      const Eigen::MatrixXd range = row_space_split(X.boundary_matrix(i)).range;
      return restricted_root_gap(down_laplacian(X, i), range, 0,
                                 "cheeger_l2_up coexact");
    }
    case CheegerVariant::exact_only: {
      // Dual degenerate case: boundaries are never coboundaries.
      const int r =
          row_space_split(X.boundary_matrix(i + 1).transposed()).rank;
      return r == 0 ? kInf : 0.0;
    }
  }
  throw std::logic_error("cheeger_l2_up: unreachable");
}

TildeL2 tilde_h2_l2(const CellComplex& X) {
  TildeL2 out;
  if (X.dims() < 2 || X.n_cells(2) == 0) {
    out.infinite = true;
    out.value = kInf;
    return out;
  }
  const SparseInt B2 = X.boundary_matrix(2);
  const int n2 = B2.cols();
  const int r = (B2.nnz() == 0) ? 0 : rank_bareiss(B2);
  out.kernel_nonzero = (n2 - r) > 0;

  // H^2(X, R) from X's own coboundary out of degree 2.
  const SparseInt B3 = X.boundary_matrix(3);
  const int r3 = (B3.rows() == 0 || B3.nnz() == 0) ? 0 : rank_bareiss(B3);
  out.h2_vanishing = (n2 - r3 - r) > 0;

  double inv_value;  // 1 / tilde h^2
  if (r == 0) {
    out.sigma_min = 0.0;
    inv_value = 1.0;  // every 2-chain is closed: cost(alpha) = ||alpha||
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B2.to_dense_double());
    const Eigen::VectorXd sv = svd.singularValues();  // descending
    const double tol = 1e-9 * std::max(1.0, sv(0));
    if (sv(r - 1) < tol)
      throw std::runtime_error(
          "tilde_h2_l2: exact rank disagrees with singular spectrum");
    if (r < sv.size() && sv(r) >= tol)
      throw std::runtime_error(
          "tilde_h2_l2: singular value above threshold beyond exact rank");
    out.sigma_min = sv(r - 1);
    const double s = 1.0 / out.sigma_min;
    inv_value = out.kernel_nonzero ? std::sqrt(s * s + 1.0) : s;
  }
  out.value = 1.0 / inv_value;

  // Independent recomputation of sigma via the coexact gap of B2^T B2,
  // then the sandwich s <= 1/value <= s + 1 from the decomposition bound.
  {
    const Eigen::MatrixXd dtd =
        B2.to_dense_double().transpose() * B2.to_dense_double();
    const auto es = eigensolve(dtd, "tilde_h2_l2: check");
    const double gap = gap_with_multiplicity(
        es.eigenvalues(), n2 - r, zero_tol(dtd), "tilde_h2_l2: check zeros");
    const double s_check = std::isinf(gap) ? 0.0 : 1.0 / std::sqrt(gap);
    const double slack = 1e-9 * std::max(1.0, s_check);
    if (inv_value < s_check - slack || inv_value > s_check + 1.0 + slack)
      throw std::logic_error("tilde_h2_l2: sandwich bound violated");
  }
  return out;
}

}  // namespace hdx
