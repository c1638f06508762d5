#pragma once

#include <laminar/maps.hpp>

#include <random>
#include <set>
#include <vector>

namespace support {

using namespace laminar;

inline PLMap pl(std::vector<std::pair<Rational, Rational>> v) {
  std::vector<PLMap::Breakpoint> b;
  for (auto& [x, y] : v) b.push_back({x, y});
  return PLMap::from_breakpoints(b);
}

// fixes j/(2k); midpoints of each interval move toward the even (attracting) end
inline PLMap alternating_pl(int k) {
  std::vector<std::pair<Rational, Rational>> v;
  Rational h(1, 2 * k);
  for (int j = 0; j < 2 * k; ++j) {
    v.push_back({h * j, h * j});
    v.push_back({h * j + h / 2, h * j + (j % 2 == 0 ? h / 4 : 3 * h / 4)});
  }
  return pl(v);
}

inline Rational random_angle(std::mt19937_64& rng, long maxden = 64) {
  std::uniform_int_distribution<long> den(1, maxden);
  long d = den(rng);
  std::uniform_int_distribution<long> num(0, d - 1);
  return Rational(num(rng), d);
}

inline std::vector<Rational> distinct_angles(std::mt19937_64& rng, std::size_t n, long maxden = 64) {
  std::set<Rational> s;
  while (s.size() < n) s.insert(random_angle(rng, maxden));
  return {s.begin(), s.end()};
}

inline PLMap random_pl(std::mt19937_64& rng, std::size_t maxn = 5) {
  std::uniform_int_distribution<std::size_t> nd(1, maxn);
  std::size_t n = nd(rng);
  auto xs = distinct_angles(rng, n);
  auto ys = distinct_angles(rng, n);
  std::uniform_int_distribution<std::size_t> sh(0, n - 1);
  std::size_t k = sh(rng);
  std::vector<PLMap::Breakpoint> b;
  for (std::size_t i = 0; i < n; ++i) b.push_back({xs[i], ys[(i + k) % n]});
  return PLMap::from_breakpoints(b);
}

inline MobiusMap random_mobius(std::mt19937_64& rng, long range = 6) {
  std::uniform_int_distribution<long> e(-range, range);
  for (;;) {
    long p = e(rng), q = e(rng), r = e(rng), s = e(rng);
    if (p * s - q * r > 0) return MobiusMap::from_integers(p, q, r, s);
  }
}

inline CirclePoint random_projective(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> n(-40, 40), d(1, 12), k(0, 9);
  long kind = k(rng);
  if (kind == 0) return CirclePoint::infinity();
  Rational a(n(rng), d(rng));
  if (kind < 5) return CirclePoint::projective(QuadraticReal(a));
  static const long rad[] = {2, 3, 5, 6, 7, 10, 13};
  std::uniform_int_distribution<int> ri(0, 6);
  return CirclePoint::projective(QuadraticReal::make(a, Rational(n(rng), d(rng)), rad[ri(rng)]));
}

}  // namespace support

#include <laminar/lamination.hpp>

namespace support {

// a random triangulated polygon on m random vertices, sides included
inline std::vector<Leaf> random_maximal_chords(std::mt19937_64& rng, std::size_t m) {
  auto xs = distinct_angles(rng, m, 512);
  std::vector<Leaf> out;
  std::vector<std::pair<std::size_t, std::size_t>> todo{{0, m - 1}};
  out.emplace_back(CirclePoint::angle(xs[0]), CirclePoint::angle(xs[m - 1]));
  while (!todo.empty()) {
    auto [i, j] = todo.back();
    todo.pop_back();
    if (j - i < 2) continue;
    std::uniform_int_distribution<std::size_t> kd(i + 1, j - 1);
    std::size_t k = kd(rng);
    out.emplace_back(CirclePoint::angle(xs[i]), CirclePoint::angle(xs[k]));
    out.emplace_back(CirclePoint::angle(xs[k]), CirclePoint::angle(xs[j]));
    todo.push_back({i, k});
    todo.push_back({k, j});
  }
  return out;
}

// Side of leaf l on which the gap lies, decided from a gap vertex off l or
// from the midpoint of one of its boundary arcs.
inline std::vector<bool> gap_signature(const FiniteLamination& lam, const Gap& g) {
  std::vector<CirclePoint> probes;
  for (const auto& s : g.sides)
    if (!s.is_leaf) {
      Rational a = s.from.as_angle().value(), b = s.to.as_angle().value();
      probes.push_back(CirclePoint::angle(a + frac(b - a) / 2));
    }
  for (const auto& v : g.vertices) probes.push_back(v);
  std::vector<bool> sig;
  for (const auto& l : lam.leaves()) {
    bool decided = false, side = false;
    for (const auto& p : probes)
      if (!l.has_endpoint(p)) {
        side = strictly_between(l.first(), p, l.second());
        decided = true;
        break;
      }
    if (!decided) throw std::logic_error("gap with no probe off a leaf");
    sig.push_back(side);
  }
  return sig;
}

// region signatures realised next to the circle, one per arc between
// consecutive endpoints
inline std::set<std::vector<bool>> boundary_signatures(const FiniteLamination& lam) {
  auto pts = lam.endpoints();
  std::set<std::vector<bool>> out;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    Rational a = pts[j].as_angle().value(), b = pts[(j + 1) % pts.size()].as_angle().value();
    CirclePoint mid = CirclePoint::angle(a + frac(b - a) / 2);
    std::vector<bool> sig;
    for (const auto& l : lam.leaves()) sig.push_back(strictly_between(l.first(), mid, l.second()));
    out.insert(sig);
  }
  return out;
}

}  // namespace support
