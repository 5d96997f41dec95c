#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "hdx/rational.hpp"

namespace hdx {

enum class ChainMode { rational, float64 };

enum class Lp { l1, l2, linf };

/**
 * Norm selector: an l^p exponent (p in {1, 2, inf}) plus optional
 * per-cell positive weights. The unweighted l1 norm is the mass norm
 * used by the filling machinery.
 */
struct NormSpec {
  Lp p = Lp::l1;
  std::vector<BigRat> weights;  // empty = unweighted

  static NormSpec l1() { return {Lp::l1, {}}; }
  static NormSpec l2() { return {Lp::l2, {}}; }
  static NormSpec linf() { return {Lp::linf, {}}; }
};

/**
 * A chain in one degree: finitely supported map cell index -> coefficient.
 *
 * Coefficients are stored exactly in both modes; float64 mode marks that
 * the values came from floating computations, and operators prune entries
 * below a drop tolerance in that mode.
 */
class Chain {
 public:
  Chain() : dim_(0), mode_(ChainMode::rational) {}
  Chain(int dim, ChainMode mode = ChainMode::rational) : dim_(dim), mode_(mode) {}

  int dim() const { return dim_; }
  ChainMode mode() const { return mode_; }
  void set_mode(ChainMode m) { mode_ = m; }

  bool is_zero() const { return c_.empty(); }
  std::size_t support_size() const { return c_.size(); }

  const std::map<int, BigRat>& coeffs() const { return c_; }

  BigRat at(int i) const {
    auto it = c_.find(i);
    return it == c_.end() ? BigRat(0) : it->second;
  }

  void set(int i, const BigRat& v) {
    if (v == 0)
      c_.erase(i);
    else
      c_[i] = v;
  }

  void add(int i, const BigRat& v) {
    auto it = c_.find(i);
    if (it == c_.end()) {
      if (v != 0) c_[i] = v;
      return;
    }
    it->second += v;
    if (it->second == 0) c_.erase(it);
  }

  Chain& operator+=(const Chain& o) {
    require_same_degree(o);
    for (const auto& [i, v] : o.c_) add(i, v);
    return *this;
  }
  Chain& operator-=(const Chain& o) {
    require_same_degree(o);
    for (const auto& [i, v] : o.c_) add(i, -v);
    return *this;
  }
  Chain& operator*=(const BigRat& s) {
    if (s == 0) {
      c_.clear();
      return *this;
    }
    for (auto& [i, v] : c_) v *= s;
    return *this;
  }

  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
  friend Chain operator*(const BigRat& s, Chain a) { return a *= s; }

  friend bool operator==(const Chain& a, const Chain& b) {
    return a.dim_ == b.dim_ && a.c_ == b.c_;
  }

  /** Exact p-norm for p in {1, inf}; throws for l2 (use norm()). */
  BigRat norm_exact(const NormSpec& ns) const {
    if (ns.p == Lp::l2)
      throw std::invalid_argument("Chain::norm_exact: l2 is not exact");
    BigRat out(0);
    for (const auto& [i, v] : c_) {
      BigRat term = abs_rat(v) * weight_at(ns, i);
      if (ns.p == Lp::l1)
        out += term;
      else if (term > out)
        out = term;
    }
    return out;
  }

  double norm(const NormSpec& ns) const {
    if (ns.p != Lp::l2) return as_double(norm_exact(ns));
    BigRat sq(0);
    for (const auto& [i, v] : c_) sq += v * v * weight_at(ns, i);
    return std::sqrt(as_double(sq));
  }

  /** Exact sum of squares (weighted), the square of the l2 norm. */
  BigRat l2_sq(const NormSpec& ns = NormSpec::l2()) const {
    BigRat sq(0);
    for (const auto& [i, v] : c_) sq += v * v * weight_at(ns, i);
    return sq;
  }

  /** Drop entries with |value| < tol (intended for float64 mode). */
  void prune(double tol) {
    for (auto it = c_.begin(); it != c_.end();) {
      if (std::fabs(as_double(it->second)) < tol)
        it = c_.erase(it);
      else
        ++it;
    }
  }

  std::vector<BigRat> to_vector(int n) const {
    std::vector<BigRat> v(n, BigRat(0));
    for (const auto& [i, x] : c_) {
      if (i < 0 || i >= n) throw std::out_of_range("Chain::to_vector");
      v[i] = x;
    }
    return v;
  }

  static Chain from_vector(int dim, const std::vector<BigRat>& v,
                           ChainMode mode = ChainMode::rational) {
    Chain c(dim, mode);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] != 0) c.c_[static_cast<int>(i)] = v[i];
    return c;
  }

 private:
  static BigRat weight_at_impl(const NormSpec& ns, int i) {
    if (ns.weights.empty()) return BigRat(1);
    if (i < 0 || i >= static_cast<int>(ns.weights.size()))
      throw std::out_of_range("NormSpec: weight index");
    return ns.weights[i];
  }
  static BigRat weight_at(const NormSpec& ns, int i) { return weight_at_impl(ns, i); }

  void require_same_degree(const Chain& o) const {
    if (dim_ != o.dim_)
      throw std::invalid_argument("Chain: degree mismatch");
  }

  int dim_;
  ChainMode mode_;
  std::map<int, BigRat> c_;
};

}  // namespace hdx
