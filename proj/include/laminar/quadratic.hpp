#pragma once

#include <boost/multiprecision/miller_rabin.hpp>

#include <algorithm>
#include <cmath>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include "rational.hpp"

namespace laminar {

namespace detail {

inline Integer isqrt(const Integer& n) { return boost::multiprecision::sqrt(n); }

inline bool is_square(const Integer& n) {
  if (n < 0) return false;
  Integer s = isqrt(n);
  return s * s == n;
}

inline bool is_probable_prime(const Integer& n) {
  return boost::multiprecision::miller_rabin_test(n, 25);
}

// Brent's variant of Pollard rho; n must be odd, composite and not a square.
inline Integer rho_factor(const Integer& n) {
  for (unsigned c = 1;; ++c) {
    Integer y = 2, x, q = 1, g = 1, ys;
    std::size_t r = 1, m = 128;
    auto step = [&](const Integer& v) { return (v * v + c) % n; };
    do {
      x = y;
      for (std::size_t i = 0; i < r; ++i) y = step(y);
      std::size_t k = 0;
      do {
        ys = y;
        for (std::size_t i = 0; i < std::min(m, r - k); ++i) {
          y = step(y);
          q = (q * (x > y ? x - y : y - x)) % n;
        }
        g = boost::multiprecision::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        g = boost::multiprecision::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(Integer n, std::map<Integer, unsigned>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out[n] += 1;
    return;
  }
  if (is_square(n)) {
    Integer s = isqrt(n);
    std::map<Integer, unsigned> half;
    factor_into(s, half);
    for (auto& [p, e] : half) out[p] += 2 * e;
    return;
  }
  Integer f = rho_factor(n);
  factor_into(f, out);
  factor_into(n / f, out);
}

// n = s^2 * d with d square-free; returns {s, d}. n >= 0.
inline std::pair<Integer, Integer> square_part(Integer n) {
  if (n == 0) return {0, 0};
  Integer s = 1, d = 1;
  for (unsigned p = 2; p < 1000 && Integer(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (unsigned i = 0; i + 1 < e; i += 2) s *= p;
    if (e % 2) d *= p;
  }
  if (n > 1) {
    std::map<Integer, unsigned> fs;
    factor_into(n, fs);
    for (auto& [p, e] : fs) {
      for (unsigned i = 0; i + 1 < e; i += 2) s *= p;
      if (e % 2) d *= p;
    }
  }
  return {s, d};
}

// square part of n1*n2 from the square parts of the factors; useful when a
// radicand is known as a product of two smaller numbers of the same sign
inline std::pair<Integer, Integer> square_part_of_product(const Integer& n1, const Integer& n2) {
  auto [s1, d1] = square_part(abs(n1));
  auto [s2, d2] = square_part(abs(n2));
  Integer g = boost::multiprecision::gcd(d1, d2);
  return {s1 * s2 * g, (d1 / g) * (d2 / g)};
}

// sign of x + y*sqrt(d), d >= 0
inline int sign2(const Rational& x, const Rational& y, const Integer& d) {
  int sx = sign(x), sy = sign(y);
  if (sy == 0 || d == 0) return sx;
  if (sx == 0 || sx == sy) return sy;
  int c = sign(Rational(x * x - y * y * Rational(d)));
  return sx > 0 ? c : -c;
}

}  // namespace detail

// a + b*sqrt(d) with d square-free; b == 0 whenever d is 0 or 1.
class QuadraticReal {
 public:
  QuadraticReal() = default;
  QuadraticReal(const Rational& a) : a_(a) {}  // NOLINT(implicit)
  QuadraticReal(long a) : a_(a) {}             // NOLINT(implicit)

  // a + b*sqrt(n) for any n >= 0; square factors of n are moved into b
  static QuadraticReal make(const Rational& a, const Rational& b, const Integer& n) {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative radicand");
    if (b == 0 || n == 0) return QuadraticReal(a);
    auto [s, d] = detail::square_part(n);
    QuadraticReal r;
    r.a_ = a;
    r.b_ = b * Rational(s);
    r.d_ = d;
    r.normalize();
    return r;
  }

  // a + b*s*sqrt(d) where the caller guarantees d square-free
  static QuadraticReal from_parts(const Rational& a, const Rational& b, const Integer& s, const Integer& d) {
    if (b == 0 || d == 0) return QuadraticReal(a);
    return raw(a, b * Rational(s), d);
  }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Integer& d() const { return d_; }
  bool is_rational() const { return b_ == 0; }

  int sign() const { return detail::sign2(a_, b_, d_); }

  QuadraticReal conjugate() const {
    QuadraticReal r = *this;
    r.b_ = -r.b_;
    return r;
  }

  // a^2 - b^2 d
  Rational norm() const { return a_ * a_ - b_ * b_ * Rational(d_); }

  friend QuadraticReal operator-(const QuadraticReal& x) {
    QuadraticReal r = x;
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
  }
  friend QuadraticReal operator+(const QuadraticReal& x, const QuadraticReal& y) {
    Integer d = common_field(x, y);
    return raw(x.a_ + y.a_, x.b_ + y.b_, d);
  }
  friend QuadraticReal operator-(const QuadraticReal& x, const QuadraticReal& y) { return x + (-y); }
  friend QuadraticReal operator*(const QuadraticReal& x, const QuadraticReal& y) {
    Integer d = common_field(x, y);
    return raw(x.a_ * y.a_ + x.b_ * y.b_ * Rational(d), x.a_ * y.b_ + x.b_ * y.a_, d);
  }
  friend QuadraticReal operator/(const QuadraticReal& x, const QuadraticReal& y) {
    Rational n = y.norm();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "division by zero");
    QuadraticReal num = x * y.conjugate();
    return raw(num.a_ / n, num.b_ / n, num.d_);
  }

  // Exact order across different fields: the sign of
  // (a1-a2) + b1 sqrt(d1) - b2 sqrt(d2) by squaring once with sign tracking.
  friend int compare(const QuadraticReal& x, const QuadraticReal& y) {
    Rational A = x.a_ - y.a_;
    if (x.b_ == 0 || y.b_ == 0 || x.d_ == y.d_) {
      Integer d = x.b_ != 0 ? x.d_ : y.d_;
      return detail::sign2(A, x.b_ - y.b_, d);
    }
    int su = detail::sign2(A, x.b_, x.d_);
    int sv = y.b_.sign();  // V = b2 sqrt(d2)
    if (su != sv) return su > sv ? 1 : -1;
    if (su == 0) return 0;
    int c = detail::sign2(A * A + x.b_ * x.b_ * Rational(x.d_) - y.b_ * y.b_ * Rational(y.d_),
                          2 * A * x.b_, x.d_);
    return su > 0 ? c : -c;
  }

  friend bool operator==(const QuadraticReal& x, const QuadraticReal& y) { return compare(x, y) == 0; }
  friend std::strong_ordering operator<=>(const QuadraticReal& x, const QuadraticReal& y) {
    int c = compare(x, y);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  double to_double() const {
    return laminar::to_double(a_) + laminar::to_double(b_) * std::sqrt(d_.convert_to<double>());
  }

  std::string str() const {
    if (b_ == 0) return a_.str();
    return a_.str() + (b_ < 0 ? " - " : " + ") + Rational(abs(b_)).str() + "*sqrt(" + d_.str() + ")";
  }

 private:
  static Integer common_field(const QuadraticReal& x, const QuadraticReal& y) {
    if (x.b_ == 0) return y.d_;
    if (y.b_ == 0) return x.d_;
    if (x.d_ != y.d_)
      throw Error(ErrorKind::FieldMismatch, "sqrt(" + x.d_.str() + ") and sqrt(" + y.d_.str() + ")");
    return x.d_;
  }
  static QuadraticReal raw(Rational a, Rational b, const Integer& d) {
    QuadraticReal r;
    r.a_ = std::move(a);
    r.b_ = std::move(b);
    r.d_ = d;
    r.normalize();
    return r;
  }
  void normalize() {
    if (d_ == 1) {
      a_ += b_;
      b_ = 0;
    }
    if (b_ == 0 || d_ == 0) {
      b_ = 0;
      d_ = 0;
    }
  }

  Rational a_{0};
  Rational b_{0};
  Integer d_{0};
};

}  // namespace laminar
