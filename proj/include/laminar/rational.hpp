#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace laminar {

// expression templates off: values are captured by `auto` all over the place
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

inline int sign(const Integer& x) { return x.sign(); }
inline int sign(const Rational& x) { return x.sign(); }

inline Integer floor_div(const Integer& n, const Integer& d) {
  Integer q, r;
  boost::multiprecision::divide_qr(n, d, q, r);
  if (r != 0 && ((r < 0) != (d < 0))) q -= 1;
  return q;
}

inline Integer floor(const Rational& x) {
  return floor_div(boost::multiprecision::numerator(x), boost::multiprecision::denominator(x));
}

// fractional part, always in [0,1)
inline Rational frac(const Rational& x) { return x - Rational(floor(x)); }

inline Rational make_rational(const Integer& n, const Integer& d) {
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  return Rational(n, d);  // mpq canonicalizes on construction from a pair
}

inline Integer parse_integer(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
  if (i == s.size()) throw Error(ErrorKind::ParseError, "bad integer '" + std::string(s) + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j])))
      throw Error(ErrorKind::ParseError, "bad integer '" + std::string(s) + "'");
  std::string t(s[0] == '+' ? s.substr(1) : s);
  return Integer(t);
}

// Accepts "p", "p/q" with q != 0. The mpq string constructor does not reduce,
// so the two halves are parsed separately.
inline Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(s));
  Integer n = parse_integer(s.substr(0, slash));
  Integer d = parse_integer(s.substr(slash + 1));
  if (d == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(s) + "'");
  return Rational(n, d);
}

inline std::string to_string(const Rational& x) { return x.str(); }
inline std::string to_string(const Integer& x) { return x.str(); }

inline double to_double(const Rational& x) { return x.convert_to<double>(); }

}  // namespace laminar
