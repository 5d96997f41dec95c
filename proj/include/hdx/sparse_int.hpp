#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "hdx/rational.hpp"

namespace hdx {

/**
 * Sparse integer matrix in column-major form.
 *
 * This is the storage for incidence (boundary) matrices. Entries are
 * int64 with overflow-checked products; algorithms needing unbounded
 * growth (Smith normal form, exact elimination) copy into BigInt/BigRat
 * dense arrays first.
 */
class SparseInt {
 public:
  SparseInt() = default;
  SparseInt(int rows, int cols) : rows_(rows), cols_(cols), data_(cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("SparseInt: negative shape");
  }

  static SparseInt ones_row(int cols) {
    SparseInt m(1, cols);
    for (int c = 0; c < cols; ++c) m.data_[c].push_back({0, 1});
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void add(int r, int c, std::int64_t v) {
    check_index(r, c);
    if (v == 0) return;
    auto& col = data_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const Entry& e, int row) { return e.first < row; });
    if (it != col.end() && it->first == r) {
      it->second = checked_add(it->second, v);
      if (it->second == 0) col.erase(it);
    } else {
      col.insert(it, {r, v});
    }
  }

  std::int64_t at(int r, int c) const {
    check_index(r, c);
    const auto& col = data_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const Entry& e, int row) { return e.first < row; });
    if (it != col.end() && it->first == r) return it->second;
    return 0;
  }

  const std::vector<std::pair<int, std::int64_t>>& column(int c) const {
    if (c < 0 || c >= cols_) throw std::out_of_range("SparseInt::column");
    return data_[c];
  }

  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& col : data_) n += col.size();
    return n;
  }

  bool is_zero() const { return nnz() == 0; }

  void for_each(const std::function<void(int, int, std::int64_t)>& fn) const {
    for (int c = 0; c < cols_; ++c)
      for (const auto& [r, v] : data_[c]) fn(r, c, v);
  }

  SparseInt transposed() const {
    SparseInt t(cols_, rows_);
    for (int c = 0; c < cols_; ++c)
      for (const auto& [r, v] : data_[c]) t.data_[r].push_back({c, v});
    for (auto& col : t.data_)
      std::sort(col.begin(), col.end());
    return t;
  }

  /** Exact sparse product this * other (overflow checked). */
  SparseInt mul(const SparseInt& other) const {
    if (cols_ != other.rows_)
      throw std::invalid_argument("SparseInt::mul: shape mismatch");
    SparseInt out(rows_, other.cols_);
    std::map<int, std::int64_t> acc;
    for (int c = 0; c < other.cols_; ++c) {
      acc.clear();
      for (const auto& [k, v] : other.data_[c]) {
        for (const auto& [r, w] : data_[k]) {
          acc[r] = checked_add(acc.count(r) ? acc[r] : 0, checked_mul(v, w));
        }
      }
      for (const auto& [r, v] : acc)
        if (v != 0) out.data_[c].push_back({r, v});
    }
    return out;
  }

  std::vector<BigRat> mul_vec(const std::vector<BigRat>& x) const {
    if (static_cast<int>(x.size()) != cols_)
      throw std::invalid_argument("SparseInt::mul_vec: size mismatch");
    std::vector<BigRat> y(rows_, BigRat(0));
    for (int c = 0; c < cols_; ++c) {
      if (x[c] == 0) continue;
      for (const auto& [r, v] : data_[c]) y[r] += BigRat(v) * x[c];
    }
    return y;
  }

  std::int64_t max_abs() const {
    std::int64_t m = 0;
    for (const auto& col : data_)
      for (const auto& [r, v] : col) m = std::max(m, std::abs(v));
    (void)m;
    return m;
  }

  /** max over columns of the L1 column mass (sum of |entries|). */
  std::int64_t max_col_l1() const {
    std::int64_t best = 0;
    for (const auto& col : data_) {
      std::int64_t s = 0;
      for (const auto& [r, v] : col) s = checked_add(s, std::abs(v));
      best = std::max(best, s);
    }
    return best;
  }

  std::int64_t max_row_l1() const { return transposed().max_col_l1(); }

  /** Bound A with ||M c||_p <= A ||c||_p for p in {1, 2, inf}. */
  std::int64_t operator_norm_bound() const {
    return std::max(max_col_l1(), max_row_l1());
  }

  Eigen::MatrixXd to_dense_double() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows_, cols_);
    for (int c = 0; c < cols_; ++c)
      for (const auto& [r, v] : data_[c]) m(r, c) = static_cast<double>(v);
    return m;
  }

  std::vector<std::vector<BigInt>> to_dense_bigint() const {
    std::vector<std::vector<BigInt>> m(rows_, std::vector<BigInt>(cols_, BigInt(0)));
    for (int c = 0; c < cols_; ++c)
      for (const auto& [r, v] : data_[c]) m[r][c] = v;
    return m;
  }

  std::vector<std::tuple<int, int, std::int64_t>> triplets() const {
    std::vector<std::tuple<int, int, std::int64_t>> t;
    for (int c = 0; c < cols_; ++c)
      for (const auto& [r, v] : data_[c]) t.push_back({r, c, v});
    std::sort(t.begin(), t.end());
    return t;
  }

  friend bool operator==(const SparseInt& a, const SparseInt& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
      throw std::overflow_error("SparseInt: int64 overflow");
    return r;
  }
  static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
      throw std::overflow_error("SparseInt: int64 overflow");
    return r;
  }

 private:
  using Entry = std::pair<int, std::int64_t>;

  void check_index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
      throw std::out_of_range("SparseInt: index out of range");
  }

  int rows_ = 0, cols_ = 0;
  std::vector<std::vector<Entry>> data_;
};

}  // namespace hdx
