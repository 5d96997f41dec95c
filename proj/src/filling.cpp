#include "hdx/filling.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hdx/homology.hpp"
#include "hdx/lp.hpp"
#include "hdx/util.hpp"

namespace hdx {

namespace {

BigRat weight_of(const NormSpec& ns, int j) {
  if (ns.weights.empty()) return BigRat(1);
  if (j < 0 || j >= static_cast<int>(ns.weights.size()))
    throw std::out_of_range("NormSpec: weight index");
  return ns.weights[j];
}

Chain vec_to_chain(int dim, const RatVec& v, ChainMode mode = ChainMode::rational) {
  Chain c(dim, mode);
  for (std::size_t j = 0; j < v.size(); ++j)
    if (!v[j].is_zero()) c.set(static_cast<int>(j), v[j]);
  return c;
}

Chain bigint_to_chain(int dim, const std::vector<BigInt>& v) {
  Chain c(dim);
  for (std::size_t j = 0; j < v.size(); ++j)
    if (v[j] != 0) c.set(static_cast<int>(j), BigRat(v[j]));
  return c;
}

Chain retag(const Chain& c, int dim) {
  Chain out(dim, c.mode());
  for (const auto& [j, v] : c.coeffs()) out.set(j, v);
  return out;
}

/** Exact boundary application: B_{dim} * (vector of c). */
RatVec apply_sparse(const SparseInt& b, const Chain& c) {
  return b.mul_vec(c.to_vector(b.cols()));
}

double sqrt_rat(const BigRat& r) { return std::sqrt(as_double(r)); }

}  // namespace

// ---------------------------------------------------------------------------
// min_filling

FillingResult min_filling(const CellComplex& X, const Chain& alpha,
                          const NormSpec& ns) {
  const int i = alpha.dim();
  if (i < 0 || i > X.dims())
    throw std::out_of_range("min_filling: chain degree out of range");
  const int n = X.n_cells(i);
  const int m = X.n_cells(i + 1);

  FillingResult out;
  out.witness = Chain(i + 1);

  if (alpha.is_zero()) {
    out.feasible = true;
    return out;
  }

  const SparseInt B = X.boundary_matrix(i + 1);
  const RatVec av = alpha.to_vector(n);

  // Feasibility by exact elimination, never by LP behavior.
  const std::optional<RatVec> any = solve(B, av);
  if (!any) {
    out.feasible = false;  // alpha is not a boundary: value = +infinity
    return out;
  }
  out.feasible = true;

  if (ns.p == Lp::l2) {
    if (!ns.weights.empty())
      throw std::invalid_argument("min_filling: weighted l2 not supported");
    // Least-norm solution: beta = B^T z with (B B^T) z = alpha. The witness
    // lies in the row space of B, which certifies optimality exactly.
    const RatMat Bd = to_rational(B);
    const RatMat Bt = rat_transpose(Bd);
    const std::optional<RatVec> z = solve(rat_mul(Bd, Bt), av);
    if (!z) throw std::logic_error("min_filling: Gram system inconsistent");
    const RatVec beta = rat_mul_vec(Bt, *z);
    out.witness = vec_to_chain(i + 1, beta);
    out.value_sq = out.witness.l2_sq();
    out.value_d = sqrt_rat(out.value_sq);
  } else {
    // Split beta = beta+ - beta-; both parts nonnegative LP variables.
    const RatMat Bd = to_rational(B);
    RatMat A;
    RatVec b;
    RatVec cost;
    if (ns.p == Lp::l1) {
      A.assign(n, RatVec(2 * m, BigRat(0)));
      for (int r = 0; r < n; ++r)
        for (int j = 0; j < m; ++j) {
          A[r][j] = Bd[r][j];
          A[r][m + j] = -Bd[r][j];
        }
      b = av;
      cost.assign(2 * m, BigRat(0));
      for (int j = 0; j < m; ++j) cost[j] = cost[m + j] = weight_of(ns, j);
    } else {  // linf: minimize t with w_j (beta+_j + beta-_j) <= t
      const int nv = 2 * m + 1 + m;  // beta+/-, t, slacks
      A.assign(n + m, RatVec(nv, BigRat(0)));
      for (int r = 0; r < n; ++r)
        for (int j = 0; j < m; ++j) {
          A[r][j] = Bd[r][j];
          A[r][m + j] = -Bd[r][j];
        }
      for (int j = 0; j < m; ++j) {
        const BigRat w = weight_of(ns, j);
        A[n + j][j] = w;
        A[n + j][m + j] = w;
        A[n + j][2 * m] = BigRat(-1);
        A[n + j][2 * m + 1 + j] = BigRat(1);
      }
      b = av;
      b.resize(n + m, BigRat(0));
      cost.assign(nv, BigRat(0));
      cost[2 * m] = BigRat(1);
    }
    const LpResult lp = lp_solve_min(A, b, cost);
    if (lp.status != LpStatus::optimal)
      throw std::logic_error("min_filling: LP failed on a certified-feasible system");
    out.escalated = lp.escalated;
    Chain beta(i + 1);
    for (int j = 0; j < m; ++j) beta.set(j, lp.solution[j] - lp.solution[m + j]);
    out.witness = beta;
    out.value = lp.objective;
    out.value_d = as_double(out.value);
  }

  verify_filling(X, alpha, out, ns);
  return out;
}

void verify_filling(const CellComplex& X, const Chain& alpha,
                    const FillingResult& fr, const NormSpec& ns) {
  if (!fr.feasible) {
    // Re-certify: alpha must lie outside the column span.
    const SparseInt B = X.boundary_matrix(alpha.dim() + 1);
    if (in_column_span(B, alpha.to_vector(X.n_cells(alpha.dim()))))
      throw std::logic_error("verify_filling: infeasible result for a boundary");
    return;
  }
  const SparseInt B = X.boundary_matrix(alpha.dim() + 1);
  const RatVec bd = apply_sparse(B, fr.witness);
  const RatVec av = alpha.to_vector(X.n_cells(alpha.dim()));
  if (bd != av)
    throw std::logic_error("verify_filling: witness boundary mismatch");
  if (ns.p == Lp::l2) {
    if (fr.witness.l2_sq() != fr.value_sq)
      throw std::logic_error("verify_filling: witness l2 norm mismatch");
  } else {
    if (fr.witness.norm_exact(ns) != fr.value)
      throw std::logic_error("verify_filling: witness norm mismatch");
  }
}

// ---------------------------------------------------------------------------
// Transpose complex

CellComplex transpose_complex(const CellComplex& X) {
  const int D = X.dims();
  const int top = X.augmented() ? D + 1 : D;
  std::vector<std::vector<std::string>> cells(top + 1);
  std::vector<SparseInt> incidence;
  for (int j = 0; j <= top; ++j) {
    if (j <= D)
      cells[j] = X.cell_ids(D - j);
    else
      cells[j] = {"aug"};
  }
  for (int j = 1; j <= top; ++j) {
    if (j <= D) {
      incidence.push_back(X.boundary_matrix(D - j + 1).transposed());
    } else {
      // The augmentation row of X, turned into one top cell's column.
      SparseInt col(X.n_cells(0), 1);
      for (int r = 0; r < X.n_cells(0); ++r) col.add(r, 0, 1);
      incidence.push_back(col);
    }
  }
  // Rows of boundary matrices may vanish, so transposed columns may be
  // empty; that is legitimate here (e.g. an isolated vertex of X).
  return CellComplex(X.name() + "-transpose", cells, incidence,
                     /*augmented=*/false, /*allow_boundaryless=*/true);
}

int transpose_degree(const CellComplex& X, int i) {
  if (i < 0 || i > X.dims())
    throw std::out_of_range("transpose_degree: degree out of range");
  return X.dims() - i;
}

// ---------------------------------------------------------------------------
// Elementary vectors (circuits) of a kernel

namespace {

struct ElimEntry {
  RatVec reduced;  // normalized so reduced[pivot] == 1
  int pivot = 0;
  RatVec expansion;  // reduced = sum expansion[s] * original column S[s]
};

struct CircuitDfs {
  const RatMat& m;
  int rows;
  int ncols;
  int rank;
  long long node_cap;
  long long nodes = 0;
  std::vector<int> chosen{};
  std::vector<ElimEntry> elim{};
  std::vector<std::vector<BigInt>> out{};

  RatVec column(int j) const {
    RatVec v(rows, BigRat(0));
    for (int r = 0; r < rows; ++r) v[r] = m[r][j];
    return v;
  }

  void run() {
    descend(0);
  }

  void descend(int start) {
    for (int j = start; j < ncols; ++j) {
      if (++nodes > node_cap)
        throw CapExceeded("circuit enumeration: node cap exceeded");
      RatVec w = column(j);
      RatVec lambda(elim.size(), BigRat(0));
      for (std::size_t k = 0; k < elim.size(); ++k) {
        const BigRat f = w[elim[k].pivot];
        if (f.is_zero()) continue;
        lambda[k] = f;
        for (int r = 0; r < rows; ++r)
          if (!elim[k].reduced[r].is_zero()) w[r] -= f * elim[k].reduced[r];
      }
      bool zero = true;
      for (const BigRat& x : w)
        if (!x.is_zero()) {
          zero = false;
          break;
        }
      if (zero) {
        // Dependent: coefficients on the chosen columns.
        RatVec coeff(chosen.size(), BigRat(0));
        for (std::size_t k = 0; k < elim.size(); ++k) {
          if (lambda[k].is_zero()) continue;
          for (std::size_t s = 0; s < elim[k].expansion.size(); ++s)
            coeff[s] += lambda[k] * elim[k].expansion[s];
        }
        bool full = true;
        for (const BigRat& x : coeff)
          if (x.is_zero()) {
            full = false;
            break;
          }
        if (full) {
          RatVec x(ncols, BigRat(0));
          x[j] = BigRat(1);
          for (std::size_t s = 0; s < chosen.size(); ++s) x[chosen[s]] = -coeff[s];
          out.push_back(primitive_integer_vector(x));
        }
      } else if (static_cast<int>(chosen.size()) < rank) {
        ElimEntry e;
        e.pivot = 0;
        while (w[e.pivot].is_zero()) ++e.pivot;
        const BigRat norm = w[e.pivot];
        e.reduced = w;
        for (BigRat& x : e.reduced)
          if (!x.is_zero()) x /= norm;
        e.expansion.assign(chosen.size() + 1, BigRat(0));
        e.expansion[chosen.size()] = BigRat(1) / norm;
        for (std::size_t k = 0; k < elim.size(); ++k) {
          if (lambda[k].is_zero()) continue;
          for (std::size_t s = 0; s < elim[k].expansion.size(); ++s)
            e.expansion[s] -= lambda[k] * elim[k].expansion[s] / norm;
        }
        chosen.push_back(j);
        elim.push_back(std::move(e));
        descend(j + 1);
        elim.pop_back();
        chosen.pop_back();
      }
    }
  }
};

}  // namespace

std::vector<std::vector<BigInt>> elementary_kernel_vectors(const RatMat& m,
                                                           int ncols,
                                                           long long node_cap) {
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != ncols)
      throw std::invalid_argument("elementary_kernel_vectors: shape mismatch");
  if (ncols == 0) return {};
  if (m.empty()) {
    // Kernel is everything; circuits are the unit vectors.
    std::vector<std::vector<BigInt>> out;
    for (int j = 0; j < ncols; ++j) {
      std::vector<BigInt> v(ncols, BigInt(0));
      v[j] = 1;
      out.push_back(std::move(v));
    }
    return out;
  }
  RatMat copy = m;
  const int rank = static_cast<int>(rref(copy).size());
  CircuitDfs dfs{m, static_cast<int>(m.size()), ncols, rank, node_cap};
  dfs.run();
  return dfs.out;
}

// ---------------------------------------------------------------------------
// Cheeger constants

namespace {

/** Constraint matrix whose kernel is the cycle family of the variant. */
RatMat variant_constraint(const CellComplex& X, int i, CheegerVariant variant) {
  switch (variant) {
    case CheegerVariant::plain:
      return to_rational(X.boundary_matrix(i));
    case CheegerVariant::exact_only: {
      // image of B_{i+1} = kernel of its left-kernel rows
      std::vector<RatVec> rows = left_kernel_basis(X.boundary_matrix(i + 1));
      return RatMat(rows.begin(), rows.end());
    }
    case CheegerVariant::coexact_only: {
      // image of B_i^T = orthogonal complement of ker B_i
      std::vector<RatVec> rows = kernel_basis(X.boundary_matrix(i));
      return RatMat(rows.begin(), rows.end());
    }
  }
  throw std::logic_error("variant_constraint: unreachable");
}

std::vector<RatVec> subspace_basis(const RatMat& constraint, int ncols) {
  if (constraint.empty()) {
    std::vector<RatVec> basis;
    for (int j = 0; j < ncols; ++j) {
      RatVec v(ncols, BigRat(0));
      v[j] = BigRat(1);
      basis.push_back(std::move(v));
    }
    return basis;
  }
  return kernel_basis(constraint);
}

struct RatioBest {
  bool any = false;
  BigRat ratio;     // exact for p in {1, inf}
  BigRat ratio_sq;  // exact for p = 2 witnesses
  Chain cycle;
  Chain filling;
  bool escalated = false;
};

/** Evaluate ||alpha|| / minfill(alpha); returns false when unfillable. */
bool consider_cycle(const CellComplex& X, const Chain& alpha, const NormSpec& ns,
                    RatioBest& best) {
  const FillingResult fr = min_filling(X, alpha, ns);
  if (!fr.feasible) return false;
  if (ns.p == Lp::l2) {
    const BigRat rsq = alpha.l2_sq() / fr.value_sq;
    if (!best.any || rsq < best.ratio_sq) {
      best.any = true;
      best.ratio_sq = rsq;
      best.cycle = alpha;
      best.filling = fr.witness;
      best.escalated |= fr.escalated;
    }
  } else {
    const BigRat r = alpha.norm_exact(ns) / fr.value;
    if (!best.any || r < best.ratio) {
      best.any = true;
      best.ratio = r;
      best.cycle = alpha;
      best.filling = fr.witness;
      best.escalated |= fr.escalated;
    }
  }
  return true;
}

CheegerValue zero_value(CheegerValue cv, const Chain& witness) {
  cv.zero = true;
  cv.value = BigRat(0);
  cv.value_d = 0.0;
  cv.witness_cycle = witness;
  return cv;
}

/** A cycle that is not a boundary (exists when betti > 0). */
Chain unfillable_cycle(const CellComplex& X, int i) {
  const std::vector<RatVec> cycles = kernel_basis(X.boundary_matrix(i));
  const SparseInt Bnext = X.boundary_matrix(i + 1);
  for (const RatVec& v : cycles) {
    if (!in_column_span(Bnext, v))
      return bigint_to_chain(i, primitive_integer_vector(v));
  }
  throw std::logic_error("unfillable_cycle: betti check disagreed with spans");
}

CheegerValue brute_l2_variational(const CellComplex& X, int i, const NormSpec& ns,
                                  const RatMat& constraint, CheegerValue cv) {
  const int n = X.n_cells(i);
  const std::vector<RatVec> basis = subspace_basis(constraint, n);
  const int s = static_cast<int>(basis.size());
  if (s == 0) {
    cv.infinite = true;
    return cv;
  }
  // Least-norm fillings of the basis vectors. The least-norm filling map
  // is linear, so these span the fillings of the whole family.
  std::vector<RatVec> fills;
  for (const RatVec& k : basis) {
    const FillingResult fr = min_filling(X, vec_to_chain(i, k), ns);
    if (!fr.feasible) return zero_value(cv, vec_to_chain(i, k));
    fills.push_back(fr.witness.to_vector(X.n_cells(i + 1)));
  }
  // min over y of (y^T K^T K y)/(y^T W^T W y): generalized eigenproblem.
  Eigen::MatrixXd A(s, s), Bm(s, s);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) {
      BigRat ka(0), wa(0);
      for (int r = 0; r < n; ++r) ka += basis[a][r] * basis[b][r];
      for (std::size_t r = 0; r < fills[a].size(); ++r)
        wa += fills[a][r] * fills[b][r];
      A(a, b) = as_double(ka);
      Bm(a, b) = as_double(wa);
    }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(A, Bm);
  if (ges.info() != Eigen::Success)
    throw std::runtime_error("cheeger: generalized eigensolver failed");
  const double lam = std::max(0.0, ges.eigenvalues()(0));
  cv.value_d = std::sqrt(lam);
  Eigen::VectorXd y = ges.eigenvectors().col(0);
  Chain cyc(i, ChainMode::float64), fil(i + 1, ChainMode::float64);
  for (int r = 0; r < n; ++r) {
    double x = 0;
    for (int a = 0; a < s; ++a) x += as_double(basis[a][r]) * y(a);
    if (x != 0.0) cyc.set(r, BigRat(x));
  }
  for (int r = 0; r < X.n_cells(i + 1); ++r) {
    double x = 0;
    for (int a = 0; a < s; ++a) x += as_double(fills[a][r]) * y(a);
    if (x != 0.0) fil.set(r, BigRat(x));
  }
  cyc.prune(1e-13);
  fil.prune(1e-13);
  cv.witness_cycle = cyc;
  cv.witness_filling = fil;
  cv.cycles_enumerated = s;
  return cv;
}

}  // namespace

CheegerValue cheeger(const CellComplex& X, int i, const NormSpec& ns,
                     CheegerVariant variant, CheegerMethod method,
                     const CheegerOptions& opts) {
  if (i < 0 || i > X.dims())
    throw std::out_of_range("cheeger: degree out of range");
  if (!ns.weights.empty())
    throw std::invalid_argument("cheeger: weighted norms not supported here");

  CheegerValue cv;
  cv.dim = i;
  cv.side = CheegerSide::down;
  cv.p = ns.p;
  cv.variant = variant;
  cv.method = method;

  const int n = X.n_cells(i);
  if (n == 0) {
    cv.infinite = true;  // empty infimum
    return cv;
  }

  // h_i = 0 iff H_i != 0, decided by exact rank, never by LP outcomes.
  if (variant == CheegerVariant::plain && betti_number(X, i) > 0)
    return zero_value(cv, unfillable_cycle(X, i));

  const RatMat constraint = variant_constraint(X, i, variant);

  if (method == CheegerMethod::brute && ns.p == Lp::l2)
    return brute_l2_variational(X, i, ns, constraint, cv);

  RatioBest best;
  if (method == CheegerMethod::brute) {
    if (n > opts.cell_cap)
      throw CapExceeded(
          "cheeger brute: " + std::to_string(n) + " cells exceed the cap of " +
          std::to_string(opts.cell_cap) + "; use lp-enum or heuristic");
    const auto circuits = elementary_kernel_vectors(constraint, n, opts.node_cap);
    cv.cycles_enumerated = static_cast<long long>(circuits.size());
    if (circuits.empty()) {
      cv.infinite = true;
      return cv;
    }
    for (const auto& circ : circuits) {
      const Chain alpha = bigint_to_chain(i, circ);
      if (!consider_cycle(X, alpha, ns, best)) return zero_value(cv, alpha);
    }
    cv.is_upper_bound = (ns.p == Lp::linf);
  } else {
    const std::vector<RatVec> basis = subspace_basis(constraint, n);
    if (basis.empty()) {
      cv.infinite = true;
      return cv;
    }
    std::vector<Chain> candidates;
    for (const RatVec& v : basis)
      candidates.push_back(bigint_to_chain(i, primitive_integer_vector(v)));
    if (method == CheegerMethod::heuristic) {
      Rng rng(opts.seed);
      for (int t = 0; t < opts.samples; ++t) {
        RatVec v(n, BigRat(0));
        for (const RatVec& k : basis) {
          const int coef = rng.range(-2, 2);
          if (coef == 0) continue;
          for (int r = 0; r < n; ++r) v[r] += BigRat(coef) * k[r];
        }
        bool zero = true;
        for (const BigRat& x : v)
          if (!x.is_zero()) {
            zero = false;
            break;
          }
        if (!zero) candidates.push_back(bigint_to_chain(i, primitive_integer_vector(v)));
      }
    }
    cv.cycles_enumerated = static_cast<long long>(candidates.size());
    for (const Chain& alpha : candidates) {
      if (!consider_cycle(X, alpha, ns, best)) return zero_value(cv, alpha);
    }
    cv.is_upper_bound = true;
  }

  if (!best.any) {
    cv.infinite = true;
    return cv;
  }
  cv.escalated = best.escalated;
  cv.witness_cycle = best.cycle;
  cv.witness_filling = best.filling;
  if (ns.p == Lp::l2) {
    cv.value_sq = best.ratio_sq;
    cv.value_d = sqrt_rat(best.ratio_sq);
  } else {
    cv.value = best.ratio;
    cv.value_d = as_double(best.ratio);
  }
  return cv;
}

CheegerValue cheeger_down(const CellComplex& X, int i, const NormSpec& ns,
                          CheegerVariant variant, CheegerMethod method,
                          const CheegerOptions& opts) {
  return cheeger(X, i, ns, variant, method, opts);
}

CheegerValue cheeger_up(const CellComplex& X, int i, const NormSpec& ns,
                        CheegerVariant variant, CheegerMethod method,
                        const CheegerOptions& opts) {
  const CellComplex T = transpose_complex(X);
  const int j = transpose_degree(X, i);
  CheegerVariant mapped = variant;
  if (variant == CheegerVariant::coexact_only) mapped = CheegerVariant::exact_only;
  else if (variant == CheegerVariant::exact_only) mapped = CheegerVariant::coexact_only;
  CheegerValue cv = cheeger(T, j, ns, mapped, method, opts);
  cv.side = CheegerSide::up;
  cv.dim = i;
  cv.variant = variant;
  if (!cv.witness_cycle.is_zero() || cv.zero)
    cv.witness_cycle = retag(cv.witness_cycle, i);
  if (!cv.witness_filling.is_zero())
    cv.witness_filling = retag(cv.witness_filling, i - 1);
  return cv;
}

std::string CheegerValue::str() const {
  std::ostringstream os;
  os << (side == CheegerSide::down ? "h_" : "h^") << dim;
  os << "(p=" << (p == Lp::l1 ? "1" : p == Lp::l2 ? "2" : "inf");
  os << ", "
     << (variant == CheegerVariant::plain
             ? "plain"
             : variant == CheegerVariant::exact_only ? "exact" : "coexact");
  os << ", "
     << (method == CheegerMethod::brute
             ? "brute"
             : method == CheegerMethod::lp_enum ? "lp-enum" : "heuristic")
     << ") = ";
  if (infinite)
    os << "inf";
  else if (zero)
    os << "0";
  else if (p == Lp::l2)
    os << value_d;
  else
    os << bigrat_str(value);
  if (is_upper_bound) os << " (upper bound)";
  return os.str();
}

// ---------------------------------------------------------------------------
// tilde h^2

TildeDecomposition tilde_h2_decompose(const CellComplex& X, const Chain& alpha,
                                      const NormSpec& ns) {
  if (X.dims() < 2)
    throw std::invalid_argument("tilde_h2_decompose: complex has no 2-cells");
  if (alpha.dim() != 2)
    throw std::invalid_argument("tilde_h2_decompose: alpha must be a 2-chain");
  if (!ns.weights.empty())
    throw std::invalid_argument("tilde_h2_decompose: weighted norms not supported");

  const int n1 = X.n_cells(1);
  const int n2 = X.n_cells(2);
  TildeDecomposition out;
  out.beta = Chain(1);
  out.gamma = Chain(2);
  if (n2 == 0 || alpha.is_zero()) {
    if (!alpha.is_zero())
      throw std::logic_error("tilde_h2_decompose: nonzero chain on no cells");
    return out;
  }
  const SparseInt B2 = X.boundary_matrix(2);
  const RatVec av = alpha.to_vector(n2);

  if (n1 == 0) {
    // No edges: every 2-chain is closed, beta lives in a zero space.
    out.gamma = alpha;
    if (ns.p == Lp::l2)
      out.cost_d = std::sqrt(as_double(alpha.l2_sq()));
    else {
      out.cost = alpha.norm_exact(ns);
      out.cost_d = as_double(out.cost);
    }
    return out;
  }

  if (ns.p == Lp::l2) {
    // Unique orthogonal split: alpha = d(beta) + gamma with gamma in ker B2,
    // d(beta) in im B2^T; beta is the least-norm primitive.
    const RatMat Bd = to_rational(B2);       // n1 x n2
    const RatMat d = rat_transpose(Bd);      // n2 x n1
    const std::optional<RatVec> z = solve(rat_mul(Bd, d), rat_mul_vec(Bd, av));
    if (!z) throw std::logic_error("tilde_h2_decompose: projection solve failed");
    const RatVec alpha_im = rat_mul_vec(d, *z);
    RatVec gv(n2);
    for (int k = 0; k < n2; ++k) gv[k] = av[k] - alpha_im[k];
    const std::optional<RatVec> w = solve(rat_mul(d, Bd), alpha_im);
    if (!w) throw std::logic_error("tilde_h2_decompose: primitive solve failed");
    const RatVec beta = rat_mul_vec(Bd, *w);
    out.beta = vec_to_chain(1, beta);
    out.gamma = vec_to_chain(2, gv);
    out.cost_d = std::sqrt(as_double(out.beta.l2_sq())) +
                 std::sqrt(as_double(out.gamma.l2_sq()));
  } else {
    const RatMat Bd = to_rational(B2);   // n1 x n2
    const RatMat dd = rat_transpose(Bd);  // n2 x n1
    RatMat A;
    RatVec b;
    RatVec cost;
    const int vb = 2 * n1;  // beta+/-
    const int vg = 2 * n2;  // gamma+/-
    if (ns.p == Lp::l1) {
      A.assign(n2 + n1, RatVec(vb + vg, BigRat(0)));
      for (int k = 0; k < n2; ++k) {
        for (int j = 0; j < n1; ++j) {
          A[k][j] = dd[k][j];
          A[k][n1 + j] = -dd[k][j];
        }
        A[k][vb + k] = BigRat(1);
        A[k][vb + n2 + k] = BigRat(-1);
      }
      for (int r = 0; r < n1; ++r)
        for (int k = 0; k < n2; ++k) {
          A[n2 + r][vb + k] = Bd[r][k];
          A[n2 + r][vb + n2 + k] = -Bd[r][k];
        }
      b = av;
      b.resize(n2 + n1, BigRat(0));
      cost.assign(vb + vg, BigRat(1));
    } else {  // linf
      const int tb = vb + vg, tg = tb + 1;
      const int sb = tg + 1, sg = sb + n1;
      const int nv = sg + n2;
      A.assign(n2 + n1 + n1 + n2, RatVec(nv, BigRat(0)));
      for (int k = 0; k < n2; ++k) {
        for (int j = 0; j < n1; ++j) {
          A[k][j] = dd[k][j];
          A[k][n1 + j] = -dd[k][j];
        }
        A[k][vb + k] = BigRat(1);
        A[k][vb + n2 + k] = BigRat(-1);
      }
      for (int r = 0; r < n1; ++r)
        for (int k = 0; k < n2; ++k) {
          A[n2 + r][vb + k] = Bd[r][k];
          A[n2 + r][vb + n2 + k] = -Bd[r][k];
        }
      for (int j = 0; j < n1; ++j) {
        A[n2 + n1 + j][j] = BigRat(1);
        A[n2 + n1 + j][n1 + j] = BigRat(1);
        A[n2 + n1 + j][tb] = BigRat(-1);
        A[n2 + n1 + j][sb + j] = BigRat(1);
      }
      for (int k = 0; k < n2; ++k) {
        A[n2 + n1 + n1 + k][vb + k] = BigRat(1);
        A[n2 + n1 + n1 + k][vb + n2 + k] = BigRat(1);
        A[n2 + n1 + n1 + k][tg] = BigRat(-1);
        A[n2 + n1 + n1 + k][sg + k] = BigRat(1);
      }
      b = av;
      b.resize(n2 + n1 + n1 + n2, BigRat(0));
      cost.assign(nv, BigRat(0));
      cost[tb] = BigRat(1);
      cost[tg] = BigRat(1);
    }
    const LpResult lp = lp_solve_min(A, b, cost);
    if (lp.status != LpStatus::optimal)
      throw std::logic_error("tilde_h2_decompose: LP failed (always feasible)");
    out.escalated = lp.escalated;
    Chain beta(1), gamma(2);
    for (int j = 0; j < n1; ++j) beta.set(j, lp.solution[j] - lp.solution[n1 + j]);
    for (int k = 0; k < n2; ++k)
      gamma.set(k, lp.solution[vb + k] - lp.solution[vb + n2 + k]);
    out.beta = beta;
    out.gamma = gamma;
    out.cost = lp.objective;
    out.cost_d = as_double(out.cost);
  }

  // Exact verification of the decomposition equations.
  {
    const RatVec dbeta = X.boundary_matrix(2).transposed().mul_vec(
        out.beta.to_vector(n1));
    const RatVec gv = out.gamma.to_vector(n2);
    for (int k = 0; k < n2; ++k)
      if (dbeta[k] + gv[k] != av[k])
        throw std::logic_error("tilde_h2_decompose: decomposition mismatch");
    const RatVec bg = B2.mul_vec(gv);
    for (const BigRat& x : bg)
      if (!x.is_zero())
        throw std::logic_error("tilde_h2_decompose: gamma is not closed");
    if (ns.p != Lp::l2) {
      if (out.beta.norm_exact(ns) + out.gamma.norm_exact(ns) != out.cost)
        throw std::logic_error("tilde_h2_decompose: cost mismatch");
    }
  }
  return out;
}

CheegerValue tilde_h2(const CellComplex& X, const NormSpec& ns,
                      CheegerMethod method, const CheegerOptions& opts) {
  if (X.dims() < 2)
    throw std::invalid_argument("tilde_h2: complex has no 2-cells");
  if (ns.p == Lp::l2)
    throw std::invalid_argument("tilde_h2: use tilde_h2_l2 for the l2 norm");
  if (method == CheegerMethod::lp_enum)
    throw std::invalid_argument("tilde_h2: supported methods are brute and heuristic");

  CheegerValue cv;
  cv.dim = 2;
  cv.side = CheegerSide::up;
  cv.p = ns.p;
  cv.variant = CheegerVariant::plain;
  cv.method = method;

  const int n2 = X.n_cells(2);
  if (n2 == 0) {
    cv.infinite = true;
    return cv;
  }

  BigRat worst(-1);
  Chain worst_alpha;
  Chain worst_beta;
  auto offer = [&](const Chain& alpha) {
    const TildeDecomposition td = tilde_h2_decompose(X, alpha, ns);
    const BigRat r = td.cost / alpha.norm_exact(ns);
    if (r > worst) {
      worst = r;
      worst_alpha = alpha;
      worst_beta = td.beta;
    }
    cv.escalated |= td.escalated;
  };

  if (method == CheegerMethod::brute) {
    if (ns.p == Lp::l1) {
      // Decomposition cost is a norm on C_2, so cost/||.||_1 peaks at a
      // unit cell (extreme point of the l1 ball).
      for (int k = 0; k < n2; ++k) {
        Chain e(2);
        e.set(k, BigRat(1));
        offer(e);
      }
      cv.cycles_enumerated = n2;
    } else {
      // Extreme points of the linf ball: sign vectors, up to global sign.
      if (n2 > 16)
        throw CapExceeded("tilde_h2 brute at p=inf: more than 16 two-cells");
      const long long total = 1LL << (n2 - 1);
      for (long long mask = 0; mask < total; ++mask) {
        Chain alpha(2);
        alpha.set(0, BigRat(1));
        for (int k = 1; k < n2; ++k)
          alpha.set(k, (mask >> (k - 1)) & 1 ? BigRat(-1) : BigRat(1));
        offer(alpha);
      }
      cv.cycles_enumerated = total;
    }
  } else {
    Chain seed(2);
    seed.set(0, BigRat(1));
    offer(seed);  // guarantees a finite estimate even if sampling degenerates
    Rng rng(opts.seed);
    for (int t = 0; t < opts.samples; ++t) {
      Chain alpha(2);
      for (int k = 0; k < n2; ++k) {
        const int c = rng.range(-2, 2);
        if (c != 0) alpha.set(k, BigRat(c));
      }
      if (!alpha.is_zero()) offer(alpha);
    }
    cv.cycles_enumerated = opts.samples + 1;
    cv.is_upper_bound = true;
  }

  cv.value = BigRat(1) / worst;
  cv.value_d = as_double(cv.value);
  cv.witness_cycle = worst_alpha;
  cv.witness_filling = worst_beta;
  return cv;
}

}  // namespace hdx
