#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dynamics.hpp"
#include "groups.hpp"
#include "lamination.hpp"

namespace laminar {

// ---- the free product Z/p * Z/q ----

struct Syllable {
  char gen;  // 'a' or 'b'
  int exp;   // 1 .. order-1
  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

// Normal form: alternating syllables.
class FreeProductElement {
 public:
  FreeProductElement() = default;

  const std::vector<Syllable>& syllables() const { return s_; }
  std::size_t length() const { return s_.size(); }
  bool empty() const { return s_.empty(); }
  char first_gen() const { return s_.empty() ? 0 : s_.front().gen; }
  char last_gen() const { return s_.empty() ? 0 : s_.back().gen; }

  // this * g^e
  FreeProductElement times_right(char g, long e, int order) const {
    FreeProductElement out = *this;
    int r = static_cast<int>(((e % order) + order) % order);
    if (r == 0) return out;
    if (!out.s_.empty() && out.s_.back().gen == g) {
      out.s_.back().exp = (out.s_.back().exp + r) % order;
      if (out.s_.back().exp == 0) out.s_.pop_back();
    } else {
      out.s_.push_back({g, r});
    }
    return out;
  }
  // g^e * this
  FreeProductElement times_left(char g, long e, int order) const {
    FreeProductElement out = *this;
    int r = static_cast<int>(((e % order) + order) % order);
    if (r == 0) return out;
    if (!out.s_.empty() && out.s_.front().gen == g) {
      out.s_.front().exp = (out.s_.front().exp + r) % order;
      if (out.s_.front().exp == 0) out.s_.erase(out.s_.begin());
    } else {
      out.s_.insert(out.s_.begin(), Syllable{g, r});
    }
    return out;
  }

  // letters, each syllable written with its shorter exponent
  Word word(int p, int q) const {
    Word w;
    for (const auto& s : s_) {
      int order = s.gen == 'a' ? p : q;
      long e = 2 * s.exp <= order ? s.exp : s.exp - order;
      w.push_back({std::string(1, s.gen), e});
    }
    return w;
  }
  std::size_t letter_length(int p, int q) const {
    std::size_t n = 0;
    for (const auto& l : word(p, q).letters()) n += static_cast<std::size_t>(std::abs(l.exp));
    return n;
  }

  std::string str() const {
    if (s_.empty()) return "e";
    std::string out;
    for (const auto& s : s_) {
      if (!out.empty()) out += ' ';
      out += s.gen;
      if (s.exp != 1) out += "^" + std::to_string(s.exp);
    }
    return out;
  }

  friend auto operator<=>(const FreeProductElement& x, const FreeProductElement& y) {
    if (x.s_.size() != y.s_.size()) return x.s_.size() <=> y.s_.size();
    return x.s_ <=> y.s_;
  }
  friend bool operator==(const FreeProductElement&, const FreeProductElement&) = default;

 private:
  std::vector<Syllable> s_;
};

// Ball of radius maxLetters in the word metric on {a, b}.
inline std::vector<FreeProductElement> elements_up_to(int p, int q, std::size_t maxLetters) {
  std::set<FreeProductElement> seen{FreeProductElement()};
  std::vector<FreeProductElement> layer{FreeProductElement()};
  for (std::size_t n = 0; n < maxLetters; ++n) {
    std::vector<FreeProductElement> next;
    for (const auto& x : layer)
      for (auto [g, ord] : {std::pair{'a', p}, std::pair{'b', q}})
        for (long e : {1L, -1L}) {
          auto y = x.times_right(g, e, ord);
          if (seen.insert(y).second) next.push_back(y);
        }
    layer = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

// ---- graphs ----

// v(c, side): one end of the blow-up interval of edge c
struct Vertex {
  FreeProductElement edge;
  int side = 0;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
  std::string str() const { return "v(" + edge.str() + "," + std::to_string(side) + ")"; }
};

// A copy of the marked circle of one factor: the coset base<gen>. Edges run
// ccw as base * gen^i; a G-circle is entered at side 0 of each edge and left
// at side 1, an H-circle the other way round.
struct Circle {
  char gen = 'a';
  FreeProductElement base;
  std::vector<FreeProductElement> edges;

  std::size_t depth() const { return base.length(); }
  std::size_t size() const { return edges.size(); }
  Vertex entry(std::size_t i) const { return {edges[i % size()], gen == 'a' ? 0 : 1}; }
  Vertex exit(std::size_t i) const { return {edges[i % size()], gen == 'a' ? 1 : 0}; }
};

class DepthGraph {
 public:
  struct Insertion {
    Vertex from, to;  // host interval, ccw
    std::size_t circle;
  };

  int p() const { return p_; }
  int q() const { return q_; }
  int depth() const { return depth_; }
  int order_of(char g) const { return g == 'a' ? p_ : q_; }
  // edges with at most depth+1 syllables
  const std::vector<FreeProductElement>& edges() const { return edges_; }
  const std::vector<Circle>& circles() const { return circles_; }
  // all vertices, ccw from v(e,0)
  const std::vector<Vertex>& order() const { return order_; }
  // the circle inserted at each level; level 0 is the seed
  const std::vector<Insertion>& insertions() const { return insertions_; }
  std::size_t marked_points() const { return static_cast<std::size_t>(p_ + q_ - 1); }

  std::vector<Vertex> vertices_up_to(int level) const {
    std::vector<Vertex> out;
    for (const auto& v : order_)
      if (static_cast<int>(v.edge.length()) <= level + 1) out.push_back(v);
    return out;
  }

  friend DepthGraph build_seed(int p, int q);
  friend DepthGraph expand(const DepthGraph& g);

 private:
  int p_ = 2, q_ = 2, depth_ = 0;
  std::vector<FreeProductElement> edges_;
  std::vector<Circle> circles_;
  std::vector<Vertex> order_;
  std::vector<Insertion> insertions_;

  Circle make_circle(char g, const FreeProductElement& base) const {
    Circle c{g, base, {}};
    for (int i = 0; i < order_of(g); ++i) c.edges.push_back(base.times_right(g, i, order_of(g)));
    return c;
  }
};

using SeedGraph = DepthGraph;

// Wedge of the two marked circles with every marked point blown up: the
// G-circle sits on side 1 -> 0 of edge e, the H-circle on side 0 -> 1.
inline DepthGraph build_seed(int p, int q) {
  if (p < 2 || q < 2) throw Error(ErrorKind::InvalidArgument, "factor orders must be at least 2");
  DepthGraph g;
  g.p_ = p;
  g.q_ = q;
  Circle G = g.make_circle('a', {}), H = g.make_circle('b', {});
  g.order_.push_back(H.exit(0));
  for (std::size_t i = 1; i < H.size(); ++i) {
    g.order_.push_back(H.entry(i));
    g.order_.push_back(H.exit(i));
  }
  g.order_.push_back(G.exit(0));
  for (std::size_t i = 1; i < G.size(); ++i) {
    g.order_.push_back(G.entry(i));
    g.order_.push_back(G.exit(i));
  }
  g.edges_.push_back({});
  for (const auto* c : {&G, &H})
    for (std::size_t i = 1; i < c->size(); ++i) g.edges_.push_back(c->edges[i]);
  std::sort(g.edges_.begin(), g.edges_.end());
  g.circles_ = {G, H};
  return g;
}

// One level more: every edge with depth+1 syllables gets the circle of the
// factor it does not end in, inserted on that side of its interval.
inline DepthGraph expand(const DepthGraph& g) {
  DepthGraph out = g;
  out.depth_ = g.depth_ + 1;
  std::map<Vertex, std::vector<Vertex>> clusters;
  for (const auto& c : g.edges_) {
    if (static_cast<int>(c.length()) != g.depth_ + 1) continue;
    char gen = c.last_gen() == 'a' ? 'b' : 'a';
    Circle C = out.make_circle(gen, c);
    std::vector<Vertex> cl;
    for (std::size_t i = 1; i < C.size(); ++i) {
      cl.push_back(C.entry(i));
      cl.push_back(C.exit(i));
      out.edges_.push_back(C.edges[i]);
    }
    out.insertions_.push_back({C.exit(0), C.entry(0), out.circles_.size()});
    clusters.emplace(C.exit(0), std::move(cl));
    out.circles_.push_back(std::move(C));
  }
  std::sort(out.edges_.begin(), out.edges_.end());
  out.order_.clear();
  for (const auto& v : g.order_) {
    out.order_.push_back(v);
    if (auto it = clusters.find(v); it != clusters.end())
      out.order_.insert(out.order_.end(), it->second.begin(), it->second.end());
  }
  return out;
}

inline DepthGraph build_depth(int p, int q, int depth) {
  if (depth < 0) throw Error(ErrorKind::InvalidArgument, "depth must be non-negative");
  DepthGraph g = build_seed(p, q);
  for (int k = 0; k < depth; ++k) g = expand(g);
  return g;
}

class EmbeddedGraph {
 public:
  const DepthGraph& graph() const { return g_; }
  int depth() const { return g_.depth(); }
  const Rational& angle(const Vertex& v) const {
    auto it = angles_.find(v);
    if (it == angles_.end()) throw Error(ErrorKind::InvalidArgument, "vertex " + v.str() + " not in the graph");
    return it->second;
  }
  CirclePoint point(const Vertex& v) const { return CirclePoint::angle(angle(v)); }
  bool contains(const Vertex& v) const { return angles_.count(v) > 0; }

  // the point at fraction t along arc i of a circle, from exit(i) to entry(i+1)
  Rational arc_angle(const Circle& c, std::size_t i, const Rational& t) const {
    const Rational& x = angle(c.exit(i));
    return frac(x + t * frac(angle(c.entry(i + 1)) - x));
  }

  friend EmbeddedGraph assign_angles(const DepthGraph& g);

 private:
  DepthGraph g_;
  std::map<Vertex, Rational> angles_;
};

// Seed vertices equally spaced; each inserted cluster spread evenly over the
// middle third of its host interval.
inline EmbeddedGraph assign_angles(const DepthGraph& g) {
  EmbeddedGraph E;
  E.g_ = g;
  std::size_t n0 = 2 * g.marked_points();
  std::size_t j = 0;
  for (const auto& v : g.order())
    if (v.edge.length() <= 1) E.angles_[v] = Rational(static_cast<long>(j++), static_cast<long>(n0));
  // insertions are stored level by level, so hosts are placed first
  for (const auto& ins : g.insertions()) {
    const Circle& C = g.circles()[ins.circle];
    Rational lo = E.angles_.at(ins.from);
    Rational len = frac(E.angles_.at(ins.to) - lo);
    long m = 2 * (static_cast<long>(C.size()) - 1);
    long i = 0;
    for (std::size_t e = 1; e < C.size(); ++e)
      for (const auto& v : {C.entry(e), C.exit(e)})
        E.angles_[v] = frac(lo + len / 3 + (len / 3) * Rational(i++, m - 1));
  }
  return E;
}

inline EmbeddedGraph build_embedded(int p, int q, int depth) { return assign_angles(build_depth(p, q, depth)); }

// ---- laminations ----

namespace detail {

inline void add_leaf(std::vector<Leaf>& out, const Rational& x, const Rational& y) {
  out.emplace_back(CirclePoint::angle(frac(x)), CirclePoint::angle(frac(y)));
}

struct FillShape {
  Rational single, inner, outer;  // positions measured from the inner end
  Rational cap[3];                // cap triangle, measured along the cut-off arc
};

// Λ1 points stay dyadic along each arc; Λ2 points keep a 3 in the
// denominator, so the two never share an endpoint.
inline const FillShape kDyadicFill{Rational(1, 2), Rational(1, 4), Rational(3, 4),
                                   {Rational(1, 4), Rational(1, 2), Rational(3, 4)}};
inline const FillShape kTriadicFill{Rational(1, 3), Rational(1, 3), Rational(2, 3),
                                    {Rational(2, 9), Rational(4, 9), Rational(7, 9)}};

// A triangle inside the arc cut off by leaf (u,w). Without it a short leaf
// would border a small gap on both sides and be isolated.
inline void cap(std::vector<Leaf>& out, const Rational& u, const Rational& w, const FillShape& s) {
  Rational len = frac(w - u);
  Rational c1 = u + s.cap[0] * len, c2 = u + s.cap[1] * len, c3 = u + s.cap[2] * len;
  add_leaf(out, c1, c2);
  add_leaf(out, c2, c3);
  add_leaf(out, c3, c1);
}

// Disjoint triangles filling the region between leaf (x1,y1) and leaf (x2,y2)
// (or the point x2 = y2), ccw order x1 x2 y2 y1, closing in on the inner end.
// Levels alternate between one vertex on the x side and one on the y side.
inline void strip_fill(std::vector<Leaf>& out, Rational x1, const Rational& x2, const Rational& y2, Rational y1,
                       int levels, const FillShape& s) {
  for (int j = 0; j < levels; ++j) {
    Rational la = frac(x2 - x1), lb = frac(y1 - y2);
    if (j % 2 == 0) {
      Rational m = x2 - s.single * la, bi = y2 + s.inner * lb, bo = y2 + s.outer * lb;
      add_leaf(out, m, bi);
      add_leaf(out, bi, bo);
      add_leaf(out, bo, m);
      cap(out, bi, bo, s);
      x1 = frac(m);
      y1 = frac(bi);
    } else {
      Rational n = y2 + s.single * lb, ai = x2 - s.inner * la, ao = x2 - s.outer * la;
      add_leaf(out, ao, ai);
      add_leaf(out, ai, n);
      add_leaf(out, n, ao);
      cap(out, ao, ai, s);
      x1 = frac(ai);
      y1 = frac(n);
    }
  }
}

// fill levels for an object of depth d inside a depth-k construction
inline int fill_levels(int k, std::size_t d) { return 2 * (k - static_cast<int>(d)) + 2; }

}  // namespace detail

inline FiniteLamination lambda0(const EmbeddedGraph& E) {
  std::vector<Leaf> out;
  for (const auto& c : E.graph().edges()) out.emplace_back(E.point({c, 0}), E.point({c, 1}));
  return FiniteLamination::validate(Model::Angle, std::move(out), E.depth());
}

// Λ0, an invariant polygon through the middle of each arc of every circle,
// and triangle fills between each polygon side and the Λ0 leaf it faces.
inline FiniteLamination lambda1(const EmbeddedGraph& E) {
  std::vector<Leaf> out = lambda0(E).leaves();
  const int k = E.depth();
  for (const auto& C : E.graph().circles()) {
    std::size_t r = C.size();
    std::vector<Rational> P;
    for (std::size_t i = 0; i < r; ++i) P.push_back(E.arc_angle(C, i, Rational(1, 2)));
    for (std::size_t i = 0; i < r; ++i) detail::add_leaf(out, P[i], P[(i + 1) % r]);
    for (std::size_t i = 0; i < r; ++i)
      detail::strip_fill(out, P[(i + r - 1) % r], E.angle(C.entry(i)), E.angle(C.exit(i)), P[i],
                         detail::fill_levels(k, C.depth()), detail::kDyadicFill);
  }
  return FiniteLamination::validate(Model::Angle, std::move(out), k);
}

// Each Λ0 leaf whose two circles are both present becomes a rectangle with
// corners at 8/9 and 1/9 of the four arcs next to its endpoints, with
// triangle fills closing in on the old endpoints; polygons sit at 4/9.
inline FiniteLamination lambda2(const EmbeddedGraph& E) {
  std::vector<Leaf> out;
  const int k = E.depth();
  const Rational lo(1, 9), hi(8, 9), mid(4, 9);
  const auto& G = E.graph();
  auto has_rectangle = [&](const FreeProductElement& c) { return static_cast<int>(c.length()) <= k; };

  std::map<FreeProductElement, std::pair<const Circle*, std::size_t>> gside, hside;
  for (const auto& C : G.circles())
    for (std::size_t i = 0; i < C.size(); ++i) (C.gen == 'a' ? gside : hside)[C.edges[i]] = {&C, i};

  for (const auto& C : G.circles()) {
    std::size_t r = C.size();
    std::vector<Rational> Q;
    for (std::size_t i = 0; i < r; ++i) Q.push_back(E.arc_angle(C, i, mid));
    for (std::size_t i = 0; i < r; ++i) detail::add_leaf(out, Q[i], Q[(i + 1) % r]);
    for (std::size_t i = 0; i < r; ++i) {
      if (!has_rectangle(C.edges[i])) continue;
      detail::strip_fill(out, Q[(i + r - 1) % r], E.arc_angle(C, i + r - 1, hi), E.arc_angle(C, i, lo), Q[i],
                         detail::fill_levels(k, C.depth()), detail::kTriadicFill);
    }
  }
  for (const auto& c : G.edges()) {
    if (!has_rectangle(c)) continue;
    auto [Cg, ig] = gside.at(c);
    auto [Ch, ih] = hside.at(c);
    Rational r1 = E.arc_angle(*Cg, ig + Cg->size() - 1, hi);  // before v(c,0)
    Rational r2 = E.arc_angle(*Ch, ih, lo);                   // after v(c,0)
    Rational r3 = E.arc_angle(*Ch, ih + Ch->size() - 1, hi);  // before v(c,1)
    Rational r4 = E.arc_angle(*Cg, ig, lo);                   // after v(c,1)
    detail::add_leaf(out, r1, r2);
    detail::add_leaf(out, r2, r3);
    detail::add_leaf(out, r3, r4);
    detail::add_leaf(out, r4, r1);
    int lv = detail::fill_levels(k, c.length());
    detail::strip_fill(out, r1, E.angle({c, 0}), E.angle({c, 0}), r2, lv, detail::kTriadicFill);
    detail::strip_fill(out, r3, E.angle({c, 1}), E.angle({c, 1}), r4, lv, detail::kTriadicFill);
  }
  return FiniteLamination::validate(Model::Angle, std::move(out), k);
}

// ---- generator maps ----

// PL maps through the graph action c -> g c on the orbits of the vertices of
// depth k-1; linear in between.
inline PLMap generator_map(const EmbeddedGraph& E, char gen) {
  const auto& G = E.graph();
  if (G.depth() < 2) throw Error(ErrorKind::DepthTooShallow, "generator maps need depth at least 2");
  int ord = G.order_of(gen);
  std::set<Vertex> orbit;
  for (const auto& v : G.vertices_up_to(G.depth() - 1))
    for (int i = 0; i < ord; ++i) orbit.insert({v.edge.times_left(gen, i, ord), v.side});
  std::vector<PLMap::Breakpoint> b;
  for (const auto& v : orbit) b.push_back({E.angle(v), E.angle({v.edge.times_left(gen, 1, ord), v.side})});
  std::sort(b.begin(), b.end(), [](const auto& x, const auto& y) { return x.x < y.x; });
  return PLMap::from_breakpoints(b);
}

inline GeneratorSet generator_maps(const EmbeddedGraph& E) {
  GeneratorSet S(Model::Angle);
  S.add("a", generator_map(E, 'a'));
  S.add("b", generator_map(E, 'b'));
  return S;
}

// ---- example factories ----

inline std::pair<MobiusMap, MobiusMap> fuchsian_pair() {
  return {MobiusMap::from_integers(2, 1, 1, 1), MobiusMap::from_integers(1, 1, 1, 2)};
}

// fixes j/(2k), attracting at even j; interval midpoints move a quarter of
// the way toward the attracting end
inline PLMap pa_like_example(int k) {
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "pa_like_example needs k >= 2");
  Rational h(1, 2 * k);
  std::vector<PLMap::Breakpoint> b;
  for (int j = 0; j < 2 * k; ++j) {
    b.push_back({h * j, h * j});
    b.push_back({h * j + h / 2, h * j + (j % 2 == 0 ? h / 4 : 3 * h / 4)});
  }
  return PLMap::from_breakpoints(b);
}

}  // namespace laminar
