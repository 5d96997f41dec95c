#include "hdx/exact_linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace hdx {

RatMat to_rational(const SparseInt& m) {
  RatMat out(m.rows(), RatVec(m.cols(), BigRat(0)));
  m.for_each([&](int r, int c, std::int64_t v) { out[r][c] = BigRat(v); });
  return out;
}

RatMat rat_transpose(const RatMat& m) {
  if (m.empty()) return {};
  RatMat out(m[0].size(), RatVec(m.size(), BigRat(0)));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m[r].size(); ++c) out[c][r] = m[r][c];
  return out;
}

RatVec rat_mul_vec(const RatMat& m, const RatVec& v) {
  RatVec out(m.size(), BigRat(0));
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].size() != v.size())
      throw std::invalid_argument("rat_mul_vec: shape mismatch");
    for (std::size_t c = 0; c < v.size(); ++c)
      if (!v[c].is_zero() && !m[r][c].is_zero()) out[r] += m[r][c] * v[c];
  }
  return out;
}

RatMat rat_mul(const RatMat& a, const RatMat& b) {
  const std::size_t inner = b.size();
  for (const auto& row : a)
    if (row.size() != inner) throw std::invalid_argument("rat_mul: shape mismatch");
  const std::size_t cols = inner == 0 ? 0 : b[0].size();
  RatMat out(a.size(), RatVec(cols, BigRat(0)));
  for (std::size_t r = 0; r < a.size(); ++r)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[r][k].is_zero()) continue;
      for (std::size_t c = 0; c < cols; ++c)
        if (!b[k][c].is_zero()) out[r][c] += a[r][k] * b[k][c];
    }
  return out;
}

int rank_bareiss(const SparseInt& m) {
  int rows = m.rows(), cols = m.cols();
  if (rows == 0 || cols == 0) return 0;
  std::vector<std::vector<BigInt>> a(rows, std::vector<BigInt>(cols, 0));
  m.for_each([&](int r, int c, std::int64_t v) { a[r][c] = v; });
  BigInt prev = 1;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[rank], a[piv]);
    for (int r = rank + 1; r < rows; ++r) {
      for (int c = col + 1; c < cols; ++c)
        a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) / prev;
      a[r][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

BigInt det_bareiss(const std::vector<std::vector<BigInt>>& m) {
  int n = static_cast<int>(m.size());
  if (n == 0) return 1;
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("det_bareiss: matrix not square");
  auto a = m;
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int piv = -1;
      for (int r = k + 1; r < n; ++r)
        if (a[r][k] != 0) {
          piv = r;
          break;
        }
      if (piv < 0) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (int r = k + 1; r < n; ++r) {
      for (int c = k + 1; c < n; ++c)
        a[r][c] = (a[k][k] * a[r][c] - a[r][k] * a[k][c]) / prev;
      a[r][k] = 0;
    }
    prev = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

std::vector<int> rref(RatMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  int rows = static_cast<int>(m.size());
  int cols = static_cast<int>(m[0].size());
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int piv = -1;
    for (int r = row; r < rows; ++r)
      if (!m[r][col].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[row], m[piv]);
    BigRat inv = BigRat(1) / m[row][col];
    for (int c = col; c < cols; ++c) m[row][c] *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      BigRat f = m[r][col];
      for (int c = col; c < cols; ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<RatVec> kernel_basis(const RatMat& m_in) {
  if (m_in.empty()) return {};
  RatMat m = m_in;
  int cols = static_cast<int>(m[0].size());
  std::vector<int> pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<RatVec> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVec v(cols, BigRat(0));
    v[free] = BigRat(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<RatVec> kernel_basis(const SparseInt& m) {
  if (m.cols() == 0) return {};
  if (m.rows() == 0) {
    std::vector<RatVec> basis;
    for (int c = 0; c < m.cols(); ++c) {
      RatVec v(m.cols(), BigRat(0));
      v[c] = BigRat(1);
      basis.push_back(std::move(v));
    }
    return basis;
  }
  return kernel_basis(to_rational(m));
}

std::vector<RatVec> left_kernel_basis(const SparseInt& m) {
  SparseInt t = m.transposed();
  return kernel_basis(t);
}

std::optional<RatVec> solve(const RatMat& m, const RatVec& b) {
  int rows = static_cast<int>(m.size());
  if (rows == 0) return RatVec{};
  int cols = static_cast<int>(m[0].size());
  if (static_cast<int>(b.size()) != rows)
    throw std::invalid_argument("solve: rhs length mismatch");
  RatMat aug(rows, RatVec(cols + 1, BigRat(0)));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) aug[r][c] = m[r][c];
    aug[r][cols] = b[r];
  }
  std::vector<int> pivots = rref(aug);
  for (std::size_t r = 0; r < pivots.size(); ++r)
    if (pivots[r] == cols) return std::nullopt;  // row [0 ... 0 | 1]
  RatVec x(cols, BigRat(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][cols];
  return x;
}

std::optional<RatVec> solve(const SparseInt& m, const RatVec& b) {
  if (m.rows() == 0) return RatVec(m.cols(), BigRat(0));
  return solve(to_rational(m), b);
}

bool in_column_span(const SparseInt& m, const RatVec& b) {
  return solve(m, b).has_value();
}

std::vector<BigInt> primitive_integer_vector(const RatVec& v) {
  std::vector<BigInt> out(v.size(), 0);
  BigInt lcm_den = 1;
  for (const auto& q : v)
    lcm_den = boost::multiprecision::lcm(lcm_den, boost::multiprecision::denominator(q));
  BigInt gcd_num = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = boost::multiprecision::numerator(v[i]) *
             (lcm_den / boost::multiprecision::denominator(v[i]));
    gcd_num = boost::multiprecision::gcd(gcd_num, out[i]);
  }
  if (gcd_num == 0) return out;
  int lead_sign = 0;
  for (auto& x : out) {
    x /= gcd_num;
    if (lead_sign == 0 && x != 0) lead_sign = x > 0 ? 1 : -1;
  }
  if (lead_sign < 0)
    for (auto& x : out) x = -x;
  return out;
}

}  // namespace hdx
