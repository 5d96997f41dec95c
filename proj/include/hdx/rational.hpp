#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace hdx {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/** Thrown by Rat arithmetic when a result leaves the 64-bit range.
 *  Callers are expected to retry the whole computation with BigRat.
 */
struct RatOverflow : std::overflow_error {
  RatOverflow() : std::overflow_error("Rat: 64-bit overflow") {}
};

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline u128 uabs128(i128 v) {
  return v < 0 ? u128(0) - static_cast<u128>(v) : static_cast<u128>(v);
}

inline u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t narrow64(i128 v) {
  if (v > static_cast<i128>(std::numeric_limits<std::int64_t>::max()) ||
      v < -static_cast<i128>(std::numeric_limits<std::int64_t>::max()))
    throw RatOverflow();
  return static_cast<std::int64_t>(v);
}

}  // namespace detail

/**
 * Exact fraction over int64 with overflow detection.
 *
 * Invariants: den > 0 and gcd(|num|, den) == 1. Every operation that
 * would produce a numerator or denominator outside the int64 range
 * throws RatOverflow instead of wrapping, so results are always exact.
 */
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rat(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  static Rat make(detail::i128 n, detail::i128 d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (n == 0) return Rat();
    detail::u128 g = detail::gcd128(detail::uabs128(n), detail::uabs128(d));
    n /= static_cast<detail::i128>(g);
    d /= static_cast<detail::i128>(g);
    Rat r;
    r.num_ = detail::narrow64(n);
    r.den_ = detail::narrow64(d);
    return r;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  Rat operator-() const {
    Rat r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    detail::i128 n = static_cast<detail::i128>(a.num_) * b.den_ +
                     static_cast<detail::i128>(b.num_) * a.den_;
    detail::i128 d = static_cast<detail::i128>(a.den_) * b.den_;
    return make(n, d);
  }
  friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
  friend Rat operator*(const Rat& a, const Rat& b) {
    detail::i128 n = static_cast<detail::i128>(a.num_) * b.num_;
    detail::i128 d = static_cast<detail::i128>(a.den_) * b.den_;
    return make(n, d);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
    detail::i128 n = static_cast<detail::i128>(a.num_) * b.den_;
    detail::i128 d = static_cast<detail::i128>(a.den_) * b.num_;
    return make(n, d);
  }

  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return static_cast<detail::i128>(a.num_) * b.den_ <
           static_cast<detail::i128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  BigRat to_bigrat() const { return BigRat(BigInt(num_), BigInt(den_)); }

  static Rat from_bigrat(const BigRat& r) {
    const BigInt n = boost::multiprecision::numerator(r);
    const BigInt d = boost::multiprecision::denominator(r);
    const BigInt lim = std::numeric_limits<std::int64_t>::max();
    if (n > lim || n < -lim || d > lim) throw RatOverflow();
    Rat out;
    out.num_ = n.convert_to<std::int64_t>();
    out.den_ = d.convert_to<std::int64_t>();
    return out;
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  std::int64_t num_;
  std::int64_t den_;
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

// Uniform helpers so exact algorithms can be templated over Rat / BigRat.

inline int sign_of(const Rat& r) { return r.sign(); }
inline int sign_of(const BigRat& r) { return r.sign(); }

inline double as_double(const Rat& r) { return r.to_double(); }
inline double as_double(const BigRat& r) { return r.convert_to<double>(); }

inline BigRat to_bigrat(const Rat& r) { return r.to_bigrat(); }
inline const BigRat& to_bigrat(const BigRat& r) { return r; }

template <class Q>
Q q_from_bigrat(const BigRat& r);
template <>
inline Rat q_from_bigrat<Rat>(const BigRat& r) { return Rat::from_bigrat(r); }
template <>
inline BigRat q_from_bigrat<BigRat>(const BigRat& r) { return r; }

inline BigRat abs_rat(const BigRat& r) { return r < 0 ? BigRat(-r) : r; }

/** Parse "p/q" or "p" into an exact rational. */
BigRat parse_bigrat(const std::string& s);

inline std::string bigrat_str(const BigRat& r) {
  const BigInt n = boost::multiprecision::numerator(r);
  const BigInt d = boost::multiprecision::denominator(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

}  // namespace hdx
