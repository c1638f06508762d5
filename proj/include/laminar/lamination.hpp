#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "maps.hpp"

namespace laminar {

class LinkedPairError : public Error {
 public:
  LinkedPairError(Leaf a, Leaf b)
      : Error(ErrorKind::LinkedPair, a.str() + " crosses " + b.str()), first(std::move(a)), second(std::move(b)) {}
  Leaf first;
  Leaf second;
};

// Finite set of pairwise unlinked leaves, sorted and without duplicates.
class FiniteLamination {
 public:
  FiniteLamination() = default;
  explicit FiniteLamination(Model m) : model_(m) {}

  // Raises LinkedPairError with the first crossing met in a sweep of the
  // linear chart.
  static FiniteLamination validate(Model m, std::vector<Leaf> leaves, std::optional<int> depth = std::nullopt) {
    for (const auto& l : leaves)
      if (l.model() != m) throw Error(ErrorKind::ModelMismatch, "leaf " + l.str() + " is in the wrong model");
    std::sort(leaves.begin(), leaves.end());
    leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
    check_unlinked(leaves);
    FiniteLamination f(m);
    f.leaves_ = std::move(leaves);
    f.depth_ = depth;
    return f;
  }

  Model model() const { return model_; }
  const std::vector<Leaf>& leaves() const { return leaves_; }
  std::size_t size() const { return leaves_.size(); }
  bool empty() const { return leaves_.empty(); }
  std::optional<int> depth() const { return depth_; }
  bool contains(const Leaf& l) const { return std::binary_search(leaves_.begin(), leaves_.end(), l); }
  std::size_t index_of(const Leaf& l) const {
    auto it = std::lower_bound(leaves_.begin(), leaves_.end(), l);
    if (it == leaves_.end() || !(*it == l)) throw Error(ErrorKind::InvalidArgument, "leaf not in lamination");
    return static_cast<std::size_t>(it - leaves_.begin());
  }

  std::vector<CirclePoint> endpoints() const {
    std::vector<CirclePoint> v;
    v.reserve(2 * leaves_.size());
    for (const auto& l : leaves_) {
      v.push_back(l.first());
      v.push_back(l.second());
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  friend bool operator==(const FiniteLamination& a, const FiniteLamination& b) {
    return a.model_ == b.model_ && a.leaves_ == b.leaves_;
  }

 private:
  // Leaves are intervals [x,y] of the linear chart; unlinked means they nest
  // like parentheses. At each point close first (innermost first), then open
  // (outermost first).
  static void check_unlinked(const std::vector<Leaf>& leaves) {
    struct Event {
      const CirclePoint* at;
      bool open;
      std::size_t leaf;
    };
    std::vector<Event> ev;
    ev.reserve(2 * leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) {
      ev.push_back({&leaves[i].first(), true, i});
      ev.push_back({&leaves[i].second(), false, i});
    }
    std::sort(ev.begin(), ev.end(), [&](const Event& u, const Event& v) {
      if (*u.at != *v.at) return *u.at < *v.at;
      if (u.open != v.open) return !u.open;  // closings first
      const Leaf& a = leaves[u.leaf];
      const Leaf& b = leaves[v.leaf];
      if (!u.open) return b.first() < a.first();  // innermost (latest start) closes first
      if (a.second() != b.second()) return b.second() < a.second();  // outermost opens first
      return u.leaf < v.leaf;
    });
    std::vector<std::size_t> stack;
    for (const auto& e : ev) {
      if (e.open) {
        stack.push_back(e.leaf);
        continue;
      }
      if (stack.back() != e.leaf) throw LinkedPairError(leaves[e.leaf], leaves[stack.back()]);
      stack.pop_back();
    }
  }

  Model model_ = Model::Angle;
  std::vector<Leaf> leaves_;
  std::optional<int> depth_;
};

struct GapSide {
  bool is_leaf = false;
  CirclePoint from;
  CirclePoint to;
  std::size_t leaf = 0;  // index into the lamination when is_leaf
};

struct Gap {
  std::vector<CirclePoint> vertices;  // in traversal (counterclockwise) order
  std::vector<GapSide> sides;

  bool ideal_polygon() const {
    return !sides.empty() && std::all_of(sides.begin(), sides.end(), [](const GapSide& s) { return s.is_leaf; });
  }
  std::size_t leaf_sides() const {
    return static_cast<std::size_t>(std::count_if(sides.begin(), sides.end(), [](const GapSide& s) { return s.is_leaf; }));
  }
};

// Complementary regions of the chord system, found by tracing faces of the
// planar map formed by the circle and the chords. Each vertex lists its
// chords by counterclockwise offset; arriving along an edge, the face turns
// to the previous entry of that list.
class GapStructure {
 public:
  explicit GapStructure(const FiniteLamination& lam) : lam_(&lam) {
    pts_ = lam.endpoints();
    const std::size_t m = pts_.size();
    const auto& L = lam.leaves();
    if (m == 0) {
      gaps_.push_back(Gap{});
      return;
    }
    rot_.assign(m, {});
    for (std::size_t i = 0; i < L.size(); ++i) {
      std::size_t a = point_index(L[i].first()), b = point_index(L[i].second());
      rot_[a].push_back({b, i});
      rot_[b].push_back({a, i});
    }
    for (std::size_t j = 0; j < m; ++j)
      std::sort(rot_[j].begin(), rot_[j].end(), [&](const Spoke& u, const Spoke& v) {
        return (u.to + m - j) % m < (v.to + m - j) % m;
      });
    // directed edges: arcs 0..m-1, then chord sides 2i (first->second), 2i+1
    const std::size_t E = m + 2 * L.size();
    std::vector<bool> seen(E, false);
    leaf_gaps_.assign(L.size(), {npos, npos});
    for (std::size_t start = 0; start < E; ++start) {
      if (seen[start]) continue;
      Gap g;
      std::size_t gid = gaps_.size();
      std::size_t e = start;
      do {
        seen[e] = true;
        std::size_t from, to;
        if (e < m) {
          from = e;
          to = (e + 1) % m;
          g.sides.push_back({false, pts_[from], pts_[to], 0});
        } else {
          std::size_t li = (e - m) / 2;
          bool fwd = ((e - m) % 2) == 0;
          from = point_index(fwd ? L[li].first() : L[li].second());
          to = point_index(fwd ? L[li].second() : L[li].first());
          g.sides.push_back({true, pts_[from], pts_[to], li});
          (leaf_gaps_[li][0] == npos ? leaf_gaps_[li][0] : leaf_gaps_[li][1]) = gid;
        }
        g.vertices.push_back(pts_[from]);
        e = next_edge(e, from, to);
      } while (e != start);
      gaps_.push_back(std::move(g));
    }
  }

  const std::vector<Gap>& gaps() const { return gaps_; }
  const std::vector<CirclePoint>& points() const { return pts_; }
  // the two gaps bordering leaf i
  std::array<std::size_t, 2> gaps_of_leaf(std::size_t i) const { return leaf_gaps_[i]; }

  std::optional<std::size_t> find_point(const CirclePoint& p) const {
    auto it = std::lower_bound(pts_.begin(), pts_.end(), p);
    if (it == pts_.end() || *it != p) return std::nullopt;
    return static_cast<std::size_t>(it - pts_.begin());
  }
  std::size_t multiplicity(std::size_t j) const { return rot_[j].size(); }
  // leaf indices at point j, by counterclockwise offset of the far endpoint
  std::vector<std::size_t> leaves_at(std::size_t j) const {
    std::vector<std::size_t> v;
    for (const auto& s : rot_[j]) v.push_back(s.leaf);
    return v;
  }

  // gap whose boundary arc contains the non-endpoint p
  std::size_t gap_containing_arc_point(const CirclePoint& p) const {
    const std::size_t m = pts_.size();
    if (m == 0) return 0;
    auto it = std::upper_bound(pts_.begin(), pts_.end(), p);
    std::size_t j = it == pts_.begin() ? m - 1 : static_cast<std::size_t>(it - pts_.begin()) - 1;
    return arc_gap(j);
  }
  // gap bordered by the arc from point j to point j+1
  std::size_t arc_gap(std::size_t j) const {
    if (arc_gap_.empty()) {
      arc_gap_.assign(pts_.size(), 0);
      for (std::size_t g = 0; g < gaps_.size(); ++g)
        for (const auto& s : gaps_[g].sides)
          if (!s.is_leaf) arc_gap_[*find_point(s.from)] = g;
    }
    return arc_gap_[j];
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  struct Spoke {
    std::size_t to;
    std::size_t leaf;
  };

  std::size_t point_index(const CirclePoint& p) const { return *find_point(p); }

  std::size_t next_edge(std::size_t e, std::size_t from, std::size_t at) const {
    const std::size_t m = pts_.size();
    const auto& r = rot_[at];
    // position of the incoming edge in the rotation [arc+, chords..., arc-]
    std::size_t pos;
    if (e < m) {
      pos = r.size() + 1;
    } else {
      std::size_t li = (e - m) / 2;
      std::size_t k = 0;
      while (!(r[k].leaf == li && r[k].to == from)) ++k;
      pos = k + 1;
    }
    std::size_t prev = pos - 1;
    if (prev == 0) return at;  // the arc leaving `at`
    const Spoke& s = r[prev - 1];
    const Leaf& l = lam_->leaves()[s.leaf];
    bool fwd = l.first() == pts_[at];
    return m + 2 * s.leaf + (fwd ? 0 : 1);
  }

  const FiniteLamination* lam_;
  std::vector<CirclePoint> pts_;
  std::vector<std::vector<Spoke>> rot_;
  std::vector<Gap> gaps_;
  std::vector<std::array<std::size_t, 2>> leaf_gaps_;
  mutable std::vector<std::size_t> arc_gap_;
};

inline std::vector<Gap> gaps(const FiniteLamination& lam) { return GapStructure(lam).gaps(); }

inline std::size_t endpoint_multiplicity(const FiniteLamination& lam, const CirclePoint& p) {
  std::size_t n = 0;
  for (const auto& l : lam.leaves())
    if (l.has_endpoint(p)) ++n;
  return n;
}

// ---- scale checks ----

struct Witness {
  std::string kind;  // "point", "leaf", "gap", "arc", "circle"
  std::vector<CirclePoint> points;
  std::string detail;
};

struct PropertyFlag {
  bool holds = true;
  std::optional<Witness> witness;
};

struct PropertyReport {
  Rational epsilon;
  PropertyFlag dense;
  PropertyFlag loose;
  PropertyFlag very_full;
  PropertyFlag totally_disconnected;
};

namespace detail {

inline bool hausdorff_within(const Leaf& a, const Leaf& b, const Rational& eps) {
  auto near = [&](const CirclePoint& p, const Leaf& l) {
    return compare_distance(p, l.first(), eps) <= 0 || compare_distance(p, l.second(), eps) <= 0;
  };
  return near(a.first(), b) && near(a.second(), b) && near(b.first(), a) && near(b.second(), a);
}

// diameter >= eps: some pair of vertices is at least eps apart
inline bool diameter_at_least(const std::vector<CirclePoint>& v, const Rational& eps) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (compare_distance(v[i], v[j], eps) >= 0) return true;
  return false;
}

inline Witness leaf_witness(const Leaf& l, std::string detail) {
  return {"leaf", {l.first(), l.second()}, std::move(detail)};
}

}  // namespace detail

inline PropertyFlag check_loose_with(const FiniteLamination& lam, const GapStructure& gs, const Rational& eps) {
  const auto& L = lam.leaves();
  const auto& G = gs.gaps();
  // (a) multiplicity at most two, and a shared endpoint sits on a common
  // ideal-polygon gap
  for (std::size_t j = 0; j < gs.points().size(); ++j) {
    std::size_t mult = gs.multiplicity(j);
    if (mult > 2)
      return {false, Witness{"point", {gs.points()[j]}, "multiplicity " + std::to_string(mult)}};
    if (mult == 2) {
      auto ls = gs.leaves_at(j);
      auto g1 = gs.gaps_of_leaf(ls[0]), g2 = gs.gaps_of_leaf(ls[1]);
      bool common = false;
      for (auto a : g1)
        for (auto b : g2)
          if (a == b && G[a].ideal_polygon()) common = true;
      if (!common)
        return {false, Witness{"point", {gs.points()[j]}, "multiplicity 2 without a common polygon gap"}};
    }
  }
  // (b) no leaf isolated at scale eps. A leaf within Hausdorff eps of l is
  // parallel to it, and then some side of a gap bordering l is at least as
  // close, so only those sides need checking.
  for (std::size_t i = 0; i < L.size(); ++i) {
    auto gi = gs.gaps_of_leaf(i);
    if (detail::diameter_at_least(G[gi[0]].vertices, eps) && detail::diameter_at_least(G[gi[1]].vertices, eps))
      continue;
    bool near = false;
    for (auto g : gi)
      for (const auto& s : G[g].sides)
        if (s.is_leaf && s.leaf != i && detail::hausdorff_within(L[i], L[s.leaf], eps)) near = true;
    if (!near) return {false, detail::leaf_witness(L[i], "isolated at scale " + eps.str())};
  }
  return {};
}

inline PropertyFlag check_loose(const FiniteLamination& lam, const Rational& eps) {
  GapStructure gs(lam);
  return check_loose_with(lam, gs, eps);
}

inline PropertyReport check_properties(const FiniteLamination& lam, const Rational& eps) {
  if (eps <= 0) throw Error(ErrorKind::InvalidArgument, "scale must be positive");
  GapStructure gs(lam);
  const auto& pts = gs.points();
  const auto& G = gs.gaps();
  const auto& L = lam.leaves();
  PropertyReport rep;
  rep.epsilon = eps;

  if (pts.empty()) {
    rep.dense = {false, Witness{"circle", {}, "no endpoints"}};
  } else {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const auto& a = pts[j];
      const auto& b = pts[(j + 1) % pts.size()];
      bool gap_too_long = pts.size() == 1 ? eps < 1 : compare_ccw_length(a, b, eps) > 0;
      if (gap_too_long) {
        rep.dense = {false, Witness{"arc", {a, b}, "no endpoint inside"}};
        break;
      }
    }
  }

  rep.loose = check_loose_with(lam, gs, eps);

  for (const auto& g : G) {
    bool big_sides = true;
    for (const auto& s : g.sides)
      if (s.is_leaf && compare_distance(s.from, s.to, eps) < 0) big_sides = false;
    if (!big_sides) continue;
    for (const auto& s : g.sides)
      if (!s.is_leaf && (s.from == s.to || compare_ccw_length(s.from, s.to, eps) >= 0)) {
        rep.very_full = {false, Witness{"gap", g.vertices, "boundary arc " + s.from.str() + " -> " + s.to.str()}};
        break;
      }
    if (!rep.very_full.holds) break;
  }

  auto thin_strip = [&](const Gap& g) {
    if (g.sides.size() != 4 || g.leaf_sides() != 2) return false;
    for (const auto& s : g.sides)
      if (!s.is_leaf && compare_ccw_length(s.from, s.to, eps) >= 0) return false;
    return true;
  };
  for (std::size_t i = 0; i < L.size(); ++i) {
    auto gi = gs.gaps_of_leaf(i);
    if (thin_strip(G[gi[0]]) && thin_strip(G[gi[1]])) {
      rep.totally_disconnected = {false, detail::leaf_witness(L[i], "thin strips on both sides")};
      break;
    }
  }
  return rep;
}

// first shared endpoint, if any
inline std::optional<CirclePoint> shared_endpoint(const FiniteLamination& a, const FiniteLamination& b) {
  auto ea = a.endpoints(), eb = b.endpoints();
  std::vector<CirclePoint> both;
  std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(both));
  if (both.empty()) return std::nullopt;
  return both.front();
}

inline bool distinct_endpoints(const FiniteLamination& a, const FiniteLamination& b) {
  return !shared_endpoint(a, b).has_value();
}

// ---- rainbows and visibility ----

struct RainbowResult {
  enum class Kind { Rainbow, Endpoint, Neither } kind = Kind::Neither;
  std::vector<Leaf> chain;  // outside-in for Rainbow; the single leaf for Endpoint
};

// Leaves (x,y) with x < p < y in the linear chart all nest around p; they are
// returned widest first.
inline RainbowResult find_rainbow(const FiniteLamination& lam, const CirclePoint& p) {
  RainbowResult r;
  for (const auto& l : lam.leaves())
    if (l.has_endpoint(p)) {
      r.kind = RainbowResult::Kind::Endpoint;
      r.chain = {l};
      return r;
    }
  for (const auto& l : lam.leaves())
    if (l.first() < p && p < l.second()) r.chain.push_back(l);
  std::sort(r.chain.begin(), r.chain.end(), [](const Leaf& u, const Leaf& v) { return u.first() < v.first(); });
  r.kind = r.chain.empty() ? RainbowResult::Kind::Neither : RainbowResult::Kind::Rainbow;
  return r;
}

inline std::vector<Leaf> visible_leaves(const FiniteLamination& lam, const CirclePoint& p) {
  GapStructure gs(lam);
  std::set<std::size_t> ids;
  std::vector<std::size_t> adjacent;
  if (auto j = gs.find_point(p)) {
    for (std::size_t g = 0; g < gs.gaps().size(); ++g)
      for (const auto& v : gs.gaps()[g].vertices)
        if (v == p) adjacent.push_back(g);
  } else {
    adjacent.push_back(gs.gap_containing_arc_point(p));
  }
  for (auto g : adjacent)
    for (const auto& s : gs.gaps()[g].sides)
      if (s.is_leaf) ids.insert(s.leaf);
  std::vector<Leaf> out;
  for (auto i : ids) out.push_back(lam.leaves()[i]);
  return out;
}

// ---- images ----

inline FiniteLamination apply_map(const FiniteLamination& lam, const CircleMap& f) {
  if (f.model() != lam.model()) throw Error(ErrorKind::ModelMismatch, "map and lamination models differ");
  CircleMap g = f.is_word() ? CircleMap(f.flatten()) : f;
  std::vector<Leaf> out;
  out.reserve(lam.size());
  for (const auto& l : lam.leaves()) out.emplace_back(evaluate(g, l.first()), evaluate(g, l.second()));
  return FiniteLamination::validate(lam.model(), std::move(out), lam.depth());
}

// leaves of f(small) missing from big
inline std::vector<Leaf> check_invariance(const FiniteLamination& small, const FiniteLamination& big,
                                          const CircleMap& f) {
  FiniteLamination img = apply_map(small, f);
  std::vector<Leaf> defects;
  for (const auto& l : img.leaves())
    if (!big.contains(l)) defects.push_back(l);
  return defects;
}

// Collapse the closed counterclockwise arc [from, to] to `from` and stretch
// the rest affinely over the circle. Leaves that become degenerate vanish.
inline FiniteLamination monotone_collapse(const FiniteLamination& lam, const CirclePoint& from, const CirclePoint& to) {
  if (lam.model() != Model::Angle || from.model() != Model::Angle || to.model() != Model::Angle)
    throw Error(ErrorKind::ModelMismatch, "monotone collapse works in the angle model");
  if (from == to) throw Error(ErrorKind::ArcIsFullCircle, "collapsed arc must be proper");
  const Rational s = from.as_angle().value();
  const Rational t = to.as_angle().value();
  const Rational len = frac(t - s);
  auto f = [&](const CirclePoint& x) {
    Rational off = frac(x.as_angle().value() - s);
    if (off <= len) return CirclePoint::angle(s);
    return CirclePoint::angle(s + (off - len) / (1 - len));
  };
  std::vector<Leaf> out;
  for (const auto& l : lam.leaves()) {
    CirclePoint a = f(l.first()), b = f(l.second());
    if (a != b) out.emplace_back(a, b);
  }
  return FiniteLamination::validate(Model::Angle, std::move(out), lam.depth());
}

}  // namespace laminar
