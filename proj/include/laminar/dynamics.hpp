#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "lamination.hpp"

namespace laminar {

inline constexpr int kDefaultMaxPower = 12;

enum class FixedKind { Attracting, Repelling, Neutral };

inline const char* to_string(FixedKind k) {
  return k == FixedKind::Attracting ? "A" : (k == FixedKind::Repelling ? "R" : "N");
}

struct FixedPointDatum {
  CirclePoint locus;
  FixedKind kind;
  friend bool operator==(const FixedPointDatum&, const FixedPointDatum&) = default;
};

namespace detail {

// Neutral points are reported only as the lone fixed point of a parabolic
// map; next to other fixed points they are an error.
inline void check_neutral(const std::vector<FixedPointDatum>& v) {
  if (v.size() < 2) return;
  for (const auto& d : v)
    if (d.kind == FixedKind::Neutral)
      throw Error(ErrorKind::IndifferentPoint, "fixed point " + d.locus.str() + " is neither attracting nor repelling");
}

inline std::vector<FixedPointDatum> fixed_points_pl(const PLMap& f) {
  const std::size_t n = f.size();
  std::vector<FixedPointDatum> out;
  std::vector<Rational> slopes(n);
  for (std::size_t i = 0; i < n; ++i) slopes[i] = f.piece(i).slope();
  for (std::size_t i = 0; i < n; ++i) {
    auto p = f.piece(i);
    const Rational& s = slopes[i];
    Rational d0 = p.y0 - p.x0;
    if (s == 1) {
      if (d0 == 0)
        throw Error(ErrorKind::FixedInterval,
                    "piece from " + p.x0.str() + " of length " + p.dx.str() + " lies on the diagonal");
      continue;
    }
    Rational d1 = d0 + p.dy - p.dx;
    Rational lo = std::min(d0, d1), hi = std::max(d0, d1);
    Integer m = floor(lo);
    if (Rational(m) < lo) m += 1;
    for (; Rational(m) <= hi; m += 1) {
      Rational t = p.x0 + (Rational(m) - d0) / (s - 1);
      if (t < p.x0 || t >= p.x0 + p.dx) continue;
      Rational x = frac(t);
      bool at_break = (t == p.x0);
      Rational sl = at_break ? slopes[(i + n - 1) % n] : s;
      if (sl == 1) continue;  // caught as a diagonal piece on the left
      FixedKind k = (sl < 1 && s < 1) ? FixedKind::Attracting
                    : (sl > 1 && s > 1) ? FixedKind::Repelling
                                        : FixedKind::Neutral;
      out.push_back({CirclePoint::angle(x), k});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.locus < b.locus; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<FixedPointDatum> fixed_points_mobius(const MobiusMap& f) {
  if (f.is_identity()) throw Error(ErrorKind::FixedInterval, "the identity fixes every point");
  std::vector<FixedPointDatum> out;
  const Integer det = f.det();
  if (f.r() == 0) {
    // multiplier at ∞ is s/p (same sign since ps > 0)
    if (f.p() == f.s()) {
      out.push_back({CirclePoint::infinity(), FixedKind::Neutral});
      return out;
    }
    bool inf_attracts = abs(f.s()) < abs(f.p());
    out.push_back({CirclePoint::infinity(), inf_attracts ? FixedKind::Attracting : FixedKind::Repelling});
    Rational x(f.q(), f.s() - f.p());
    out.push_back({CirclePoint::projective(QuadraticReal(x)), inf_attracts ? FixedKind::Repelling : FixedKind::Attracting});
  } else {
    const Integer tr = f.trace();
    const Integer disc = tr * tr - 4 * det;
    if (disc < 0) return out;
    Rational centre(f.p() - f.s(), 2 * f.r());
    if (disc == 0) {
      out.push_back({CirclePoint::projective(QuadraticReal(centre)), FixedKind::Neutral});
      return out;
    }
    std::pair<Integer, Integer> sq;
    if (detail::is_square(det)) {
      Integer D = detail::isqrt(det);
      sq = square_part_of_product(tr - 2 * D, tr + 2 * D);
    } else {
      sq = square_part(disc);
    }
    for (int sgn : {1, -1}) {
      QuadraticReal x = QuadraticReal::from_parts(centre, Rational(sgn, 2) / Rational(f.r()), sq.first, sq.second);
      QuadraticReal den = QuadraticReal(Rational(f.r())) * x + QuadraticReal(Rational(f.s()));
      // derivative det / den^2 below one means attracting
      bool attracting = den * den > QuadraticReal(Rational(det));
      out.push_back({CirclePoint::projective(x), attracting ? FixedKind::Attracting : FixedKind::Repelling});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.locus < b.locus; });
  return out;
}

}  // namespace detail

inline std::vector<FixedPointDatum> fixed_points(const ConcreteMap& f) {
  auto v = f.index() == 0 ? detail::fixed_points_pl(std::get<0>(f)) : detail::fixed_points_mobius(std::get<1>(f));
  detail::check_neutral(v);
  return v;
}

inline std::vector<FixedPointDatum> fixed_points(const CircleMap& f) { return fixed_points(f.flatten()); }

// kinds alternate A,R,A,R,... around the circle
inline bool alternating(const std::vector<FixedPointDatum>& v) {
  if (v.size() < 2 || v.size() % 2) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto a = v[i].kind, b = v[(i + 1) % v.size()].kind;
    if (a == FixedKind::Neutral || a == b) return false;
  }
  return true;
}

inline std::size_t count_kind(const std::vector<FixedPointDatum>& v, FixedKind k) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [&](const auto& d) { return d.kind == k; }));
}

struct RotationInterval {
  Rational lo;
  Rational hi;
  bool contains(const Rational& r) const { return lo < r && r < hi; }
  // true when the interval certifies a nonzero rotation number mod 1
  bool excludes_zero() const { return lo >= 0 && hi <= 1; }
};

// Maps with a fixed point have rotation number 0. Without one, the
// displacement reduced to [0,1) never crosses an integer, so it is a
// continuous lift and orbit sums bound the rotation number.
inline RotationInterval rotation_interval(const ConcreteMap& f, long iterations) {
  if (iterations < 1) throw Error(ErrorKind::InvalidArgument, "iterations must be positive");
  bool has_fixed = false;
  try {
    has_fixed = !fixed_points(f).empty();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::FixedInterval && e.kind() != ErrorKind::IndifferentPoint) throw;
    has_fixed = true;
  }
  Rational n(iterations);
  if (has_fixed) return {Rational(-1) / n, Rational(1) / n};
  CirclePoint x = from_chart(model_of(f), QuadraticReal(0L));
  Rational total = 0;
  for (long i = 0; i < iterations; ++i) {
    CirclePoint y = evaluate(f, x);
    total += frac(chart(y).a() - chart(x).a());
    x = y;
  }
  return {(total - 1) / n, (total + 1) / n};
}

struct MapClass {
  enum class Tag { Elliptic, Parabolic, Hyperbolic, ProperlyPALike, PALike, Indeterminate };
  Tag tag = Tag::Indeterminate;
  int k = 0;          // attracting fixed points of the certified power
  int period = 1;     // the power for PALike
  int max_power = 0;  // for Indeterminate

  friend bool operator==(const MapClass&, const MapClass&) = default;
  std::string str() const {
    switch (tag) {
      case Tag::Elliptic: return "Elliptic";
      case Tag::Parabolic: return "Parabolic";
      case Tag::Hyperbolic: return "Hyperbolic";
      case Tag::ProperlyPALike: return "ProperlyPALike(" + std::to_string(k) + ")";
      case Tag::PALike: return "PALike(" + std::to_string(period) + "," + std::to_string(k) + ")";
      case Tag::Indeterminate: return "Indeterminate(" + std::to_string(max_power) + ")";
    }
    return "?";
  }
};

namespace detail {

inline std::optional<MapClass> class_from_fixed(const std::vector<FixedPointDatum>& fp) {
  using T = MapClass::Tag;
  if (fp.size() == 1) return MapClass{T::Parabolic};
  if (fp.size() == 2 && alternating(fp)) return MapClass{T::Hyperbolic, 1};
  if (fp.size() >= 4 && alternating(fp))
    return MapClass{T::ProperlyPALike, static_cast<int>(count_kind(fp, FixedKind::Attracting))};
  return std::nullopt;
}

}  // namespace detail

inline MapClass classify(const ConcreteMap& f, int maxPower = kDefaultMaxPower) {
  using T = MapClass::Tag;
  if (maxPower < 1) throw Error(ErrorKind::InvalidArgument, "maxPower must be positive");
  if (is_identity(f)) return MapClass{T::Indeterminate, 0, 1, maxPower};
  if (f.index() == 1) {
    // an elliptic Mobius map is conjugate to a rotation, so none of its
    // powers can be p-A-like and the trace decides
    const auto& m = std::get<1>(f);
    Integer tr = m.trace();
    Integer c = tr * tr - 4 * m.det();
    if (c < 0) return MapClass{T::Elliptic};
  }
  auto fp = fixed_points(f);
  if (!fp.empty()) {
    if (auto c = detail::class_from_fixed(fp)) return *c;
    return MapClass{T::Indeterminate, 0, 1, maxPower};
  }
  ConcreteMap g = f;
  for (int n = 2; n <= maxPower; ++n) {
    g = compose(g, f);
    if (is_identity(g)) return MapClass{T::Elliptic};  // finite order
    auto fn = fixed_points(g);
    if (fn.empty()) continue;
    if (fn.size() >= 4 && alternating(fn))
      return MapClass{T::PALike, static_cast<int>(count_kind(fn, FixedKind::Attracting)), n};
    return MapClass{T::Elliptic};
  }
  if (rotation_interval(f, 16L * maxPower).excludes_zero()) return MapClass{T::Elliptic};
  return MapClass{T::Indeterminate, 0, 1, maxPower};
}

inline MapClass classify(const CircleMap& f, int maxPower = kDefaultMaxPower) { return classify(f.flatten(), maxPower); }

struct PeriodicReport {
  int period = 0;  // 0 when no power up to the bound has a fixed point
  std::vector<CirclePoint> points;
};

inline PeriodicReport periodic_points(const ConcreteMap& f, int maxPeriod = kDefaultMaxPower) {
  if (maxPeriod < 1) throw Error(ErrorKind::InvalidArgument, "maxPeriod must be positive");
  ConcreteMap g = f;
  for (int n = 1; n <= maxPeriod; ++n) {
    if (n > 1) g = compose(g, f);
    if (is_identity(g))
      throw Error(ErrorKind::IdentityPower, "power " + std::to_string(n) + " is the identity");
    auto fp = fixed_points(g);
    if (!fp.empty()) {
      PeriodicReport r{n, {}};
      for (auto& d : fp) r.points.push_back(d.locus);
      return r;
    }
  }
  return {};
}

// Fixed points of the power certified by classify, when it is p-A-like.
inline std::vector<FixedPointDatum> pa_fixed_points(const ConcreteMap& f, int maxPower, MapClass* cls = nullptr) {
  MapClass c = classify(f, maxPower);
  if (cls) *cls = c;
  if (c.tag == MapClass::Tag::ProperlyPALike) return fixed_points(f);
  if (c.tag == MapClass::Tag::PALike) return fixed_points(power(f, c.period));
  throw Error(ErrorKind::NotPALike, "map classifies as " + c.str());
}

namespace detail {

inline Gap polygon_of(const std::vector<FixedPointDatum>& fp, FixedKind kind) {
  Gap g;
  for (const auto& d : fp)
    if (d.kind == kind) g.vertices.push_back(d.locus);
  for (std::size_t i = 0; i < g.vertices.size(); ++i)
    g.sides.push_back({true, g.vertices[i], g.vertices[(i + 1) % g.vertices.size()], i});
  return g;
}

}  // namespace detail

inline Gap attracting_polygon(const ConcreteMap& f, int maxPower = kDefaultMaxPower) {
  return detail::polygon_of(pa_fixed_points(f, maxPower), FixedKind::Attracting);
}

inline Gap repelling_polygon(const ConcreteMap& f, int maxPower = kDefaultMaxPower) {
  return detail::polygon_of(pa_fixed_points(f, maxPower), FixedKind::Repelling);
}

struct Alternative {
  enum class Kind { Equal, Disjoint, Violation } kind = Kind::Equal;
  std::optional<CirclePoint> shared;    // in both sets (Violation)
  std::optional<CirclePoint> unshared;  // in exactly one set (Violation)
  int period_g = 0;
  int period_h = 0;
};

inline const char* to_string(Alternative::Kind k) {
  return k == Alternative::Kind::Equal ? "Equal" : (k == Alternative::Kind::Disjoint ? "Disjoint" : "Violation");
}

namespace detail {

inline PeriodicReport determinate_periodic(const ConcreteMap& f, int maxPeriod) {
  PeriodicReport r;
  try {
    r = periodic_points(f, maxPeriod);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::IdentityPower) throw Error(ErrorKind::IndeterminateInput, e.what());
    throw;
  }
  if (r.period == 0)
    throw Error(ErrorKind::IndeterminateInput,
                "no periodic points up to period " + std::to_string(maxPeriod));
  return r;
}

}  // namespace detail

inline Alternative compare_periodic_sets(const PeriodicReport& pg, const PeriodicReport& ph) {
  Alternative a;
  a.period_g = pg.period;
  a.period_h = ph.period;
  std::vector<CirclePoint> both, only;
  std::set_intersection(pg.points.begin(), pg.points.end(), ph.points.begin(), ph.points.end(),
                        std::back_inserter(both));
  std::set_symmetric_difference(pg.points.begin(), pg.points.end(), ph.points.begin(), ph.points.end(),
                                std::back_inserter(only));
  if (only.empty()) {
    a.kind = Alternative::Kind::Equal;
  } else if (both.empty()) {
    a.kind = Alternative::Kind::Disjoint;
  } else {
    a.kind = Alternative::Kind::Violation;
    a.shared = both.front();
    a.unshared = only.front();
  }
  return a;
}

inline Alternative per_alternative(const ConcreteMap& g, const ConcreteMap& h, int maxPeriod = kDefaultMaxPower) {
  return compare_periodic_sets(detail::determinate_periodic(g, maxPeriod), detail::determinate_periodic(h, maxPeriod));
}

struct TamenessViolation {
  std::size_t first;
  std::size_t second;
  MapClass product;
};

// ordered pairs of hyperbolic inputs whose product is neither hyperbolic nor
// the identity
inline std::vector<TamenessViolation> tameness_check(const std::vector<ConcreteMap>& maps, int maxPower = kDefaultMaxPower) {
  std::vector<bool> hyp(maps.size());
  for (std::size_t i = 0; i < maps.size(); ++i) hyp[i] = classify(maps[i], maxPower).tag == MapClass::Tag::Hyperbolic;
  std::vector<TamenessViolation> out;
  for (std::size_t i = 0; i < maps.size(); ++i)
    for (std::size_t j = 0; j < maps.size(); ++j) {
      if (!hyp[i] || !hyp[j]) continue;
      ConcreteMap prod = compose(maps[i], maps[j]);
      if (is_identity(prod)) continue;
      MapClass c = classify(prod, maxPower);
      if (c.tag != MapClass::Tag::Hyperbolic) out.push_back({i, j, c});
    }
  return out;
}

struct ClosureViolation {
  Word word;
  MapClass cls;
};

// words in the hyperbolic generators whose product is neither the identity
// nor hyperbolic
inline std::vector<ClosureViolation> hyperbolic_closure_check(const GeneratorTable& gens, long wordLen,
                                                              int maxPower = kDefaultMaxPower) {
  std::vector<std::string> hyp;
  for (const auto& [name, f] : gens.generators())
    if (classify(f, maxPower).tag == MapClass::Tag::Hyperbolic) hyp.push_back(name);
  std::vector<ClosureViolation> out;
  for (const auto& w : enumerate_reduced_words(hyp, wordLen)) {
    ConcreteMap f = gens.evaluate_word(w);
    if (is_identity(f)) continue;
    MapClass c = classify(f, maxPower);
    if (c.tag != MapClass::Tag::Hyperbolic) out.push_back({w, c});
  }
  return out;
}

}  // namespace laminar
