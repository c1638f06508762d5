#pragma once

#include <compare>
#include <string>
#include <utility>
#include <variant>

#include "quadratic.hpp"

namespace laminar {

enum class Model { Angle, Projective };

inline const char* to_string(Model m) { return m == Model::Angle ? "angle" : "projective"; }

// A point of R/Z measured in full turns.
class RationalAngle {
 public:
  RationalAngle() = default;
  explicit RationalAngle(const Rational& v) : value_(frac(v)) {}
  const Rational& value() const { return value_; }
  friend bool operator==(const RationalAngle&, const RationalAngle&) = default;
  friend auto operator<=>(const RationalAngle& x, const RationalAngle& y) {
    int c = x.value_.compare(y.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  Rational value_{0};
};

// A point of R ∪ {∞}. The linear order used for storage puts ∞ after every
// real, which reads the standard cyclic order of the projective line off
// directly.
class ProjectivePoint {
 public:
  ProjectivePoint() = default;
  explicit ProjectivePoint(QuadraticReal x) : value_(std::move(x)) {}
  static ProjectivePoint infinity() {
    ProjectivePoint p;
    p.infinite_ = true;
    return p;
  }
  bool is_infinity() const { return infinite_; }
  const QuadraticReal& value() const {
    if (infinite_) throw Error(ErrorKind::InvalidArgument, "value() of the point at infinity");
    return value_;
  }
  friend bool operator==(const ProjectivePoint& x, const ProjectivePoint& y) {
    if (x.infinite_ || y.infinite_) return x.infinite_ == y.infinite_;
    return x.value_ == y.value_;
  }
  friend std::strong_ordering operator<=>(const ProjectivePoint& x, const ProjectivePoint& y) {
    if (x.infinite_ || y.infinite_) return x.infinite_ <=> y.infinite_;
    return x.value_ <=> y.value_;
  }
  std::string str() const { return infinite_ ? "inf" : value_.str(); }

 private:
  bool infinite_ = false;
  QuadraticReal value_;
};

class CirclePoint {
 public:
  CirclePoint() = default;
  CirclePoint(RationalAngle a) : v_(std::move(a)) {}    // NOLINT(implicit)
  CirclePoint(ProjectivePoint p) : v_(std::move(p)) {}  // NOLINT(implicit)

  static CirclePoint angle(const Rational& r) { return CirclePoint(RationalAngle(r)); }
  static CirclePoint projective(const QuadraticReal& x) { return CirclePoint(ProjectivePoint(x)); }
  static CirclePoint infinity() { return CirclePoint(ProjectivePoint::infinity()); }

  Model model() const { return v_.index() == 0 ? Model::Angle : Model::Projective; }
  const RationalAngle& as_angle() const {
    if (model() != Model::Angle) throw Error(ErrorKind::ModelMismatch, "expected an angle point");
    return std::get<0>(v_);
  }
  const ProjectivePoint& as_projective() const {
    if (model() != Model::Projective) throw Error(ErrorKind::ModelMismatch, "expected a projective point");
    return std::get<1>(v_);
  }

  // Total order within a model (the linear chart cut at 0, resp. just after ∞).
  // Ordering across models is by model only so that mixed containers still
  // behave, but the geometric operations reject them.
  friend bool operator==(const CirclePoint&, const CirclePoint&) = default;
  friend std::strong_ordering operator<=>(const CirclePoint& x, const CirclePoint& y) {
    if (x.v_.index() != y.v_.index()) return x.v_.index() <=> y.v_.index();
    if (x.v_.index() == 0) return std::get<0>(x.v_) <=> std::get<0>(y.v_);
    return std::get<1>(x.v_) <=> std::get<1>(y.v_);
  }

  std::string str() const {
    return model() == Model::Angle ? std::get<0>(v_).value().str() : std::get<1>(v_).str();
  }

 private:
  std::variant<RationalAngle, ProjectivePoint> v_;
};

inline void require_same_model(const CirclePoint& a, const CirclePoint& b) {
  if (a.model() != b.model()) throw Error(ErrorKind::ModelMismatch, "points from different models");
}

enum class Orientation { Positive, Negative, Degenerate };

inline Orientation cyclic_order(const CirclePoint& a, const CirclePoint& b, const CirclePoint& c) {
  require_same_model(a, b);
  require_same_model(b, c);
  if (a == b || b == c || a == c) return Orientation::Degenerate;
  bool ab = a < b, bc = b < c, ca = c < a;
  // exactly one of the three "descents" happens for a positive triple
  int ascents = int(ab) + int(bc) + int(ca);
  return ascents == 2 ? Orientation::Positive : Orientation::Negative;
}

// b strictly inside the counterclockwise open arc from a to c
inline bool strictly_between(const CirclePoint& a, const CirclePoint& b, const CirclePoint& c) {
  return cyclic_order(a, b, c) == Orientation::Positive;
}

// Open arc traversed counterclockwise.
struct Arc {
  CirclePoint from;
  CirclePoint to;

  Arc(CirclePoint f, CirclePoint t) : from(std::move(f)), to(std::move(t)) {
    require_same_model(from, to);
    if (from == to) throw Error(ErrorKind::InvalidArgument, "arc endpoints coincide");
  }
  bool contains(const CirclePoint& p) const { return strictly_between(from, p, to); }
  // closed-arc membership
  bool contains_closed(const CirclePoint& p) const { return p == from || p == to || contains(p); }
  friend bool operator==(const Arc&, const Arc&) = default;
};

// An unordered pair of distinct points; stored with first < second in the
// model's linear order.
class Leaf {
 public:
  Leaf(CirclePoint x, CirclePoint y) {
    require_same_model(x, y);
    if (x == y) throw Error(ErrorKind::InvalidArgument, "degenerate leaf at " + x.str());
    if (y < x) std::swap(x, y);
    a_ = std::move(x);
    b_ = std::move(y);
  }
  const CirclePoint& first() const { return a_; }
  const CirclePoint& second() const { return b_; }
  Model model() const { return a_.model(); }
  bool has_endpoint(const CirclePoint& p) const { return p == a_ || p == b_; }
  const CirclePoint& other(const CirclePoint& p) const { return p == a_ ? b_ : a_; }
  friend bool operator==(const Leaf&, const Leaf&) = default;
  friend auto operator<=>(const Leaf&, const Leaf&) = default;
  std::string str() const { return "(" + a_.str() + ", " + b_.str() + ")"; }

 private:
  CirclePoint a_;
  CirclePoint b_;
};

inline bool linked(const Leaf& l1, const Leaf& l2) {
  require_same_model(l1.first(), l2.first());
  const auto& a = l1.first();
  const auto& b = l1.second();
  if (l2.has_endpoint(a) || l2.has_endpoint(b)) return false;
  return strictly_between(a, l2.first(), b) != strictly_between(a, l2.second(), b);
}

// Order chart to [0,1): the identity on angles; on the projective line
// x -> 1/2 + x / (2(1+|x|)) with ∞ -> 0. It is rational on rationals and stays
// in the field of a quadratic point, so scale comparisons remain exact.
inline QuadraticReal chart(const CirclePoint& p) {
  if (p.model() == Model::Angle) return QuadraticReal(p.as_angle().value());
  const auto& q = p.as_projective();
  if (q.is_infinity()) return QuadraticReal(0L);
  const QuadraticReal& x = q.value();
  QuadraticReal ax = x.sign() < 0 ? -x : x;
  return QuadraticReal(Rational(1, 2)) + x / (QuadraticReal(2L) * (QuadraticReal(1L) + ax));
}

// inverse of chart; y is reduced mod 1 first when it is rational
inline CirclePoint from_chart(Model m, QuadraticReal y) {
  if (y.is_rational()) y = QuadraticReal(frac(y.a()));
  if (m == Model::Angle) {
    if (!y.is_rational()) throw Error(ErrorKind::FieldMismatch, "irrational angle");
    return CirclePoint::angle(y.a());
  }
  if (y.sign() == 0) return CirclePoint::infinity();
  QuadraticReal t = QuadraticReal(2L) * y - QuadraticReal(1L);  // in (-1,1)
  QuadraticReal one(1L);
  if (t.sign() >= 0) return CirclePoint::projective(t / (one - t));
  return CirclePoint::projective(t / (one + t));
}

inline double chart_double(const CirclePoint& p) { return chart(p).to_double(); }

// Compare the counterclockwise length from p to q with a rational r:
// returns sign(len(p,q) - r). len(p,p) is 0.
inline int compare_ccw_length(const CirclePoint& p, const CirclePoint& q, const Rational& r) {
  require_same_model(p, q);
  QuadraticReal cp = chart(p), cq = chart(q);
  Rational shift = (cq < cp) ? Rational(1) : Rational(0);
  // len = cq + shift - cp
  return compare(cq + QuadraticReal(Rational(shift - r)), cp);
}

// circular distance min(len(p,q), len(q,p)) <= eps
inline bool within_distance(const CirclePoint& p, const CirclePoint& q, const Rational& eps) {
  if (p == q) return eps >= 0;
  return compare_ccw_length(p, q, eps) <= 0 || compare_ccw_length(q, p, eps) <= 0;
}

inline double ccw_length_double(const CirclePoint& p, const CirclePoint& q) {
  double l = chart_double(q) - chart_double(p);
  return l < 0 ? l + 1 : l;
}

inline double distance_double(const CirclePoint& p, const CirclePoint& q) {
  double l = ccw_length_double(p, q);
  return std::min(l, 1 - l);
}

}  // namespace laminar

namespace laminar {

// sign(dist(p,q) - eps) for the circular distance min(len(p,q), len(q,p))
inline int compare_distance(const CirclePoint& p, const CirclePoint& q, const Rational& eps) {
  if (p == q) return -sign(eps);
  return std::min(compare_ccw_length(p, q, eps), compare_ccw_length(q, p, eps));
}

}  // namespace laminar
