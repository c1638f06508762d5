#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dynamics.hpp"

namespace laminar {

// Named generators in one model; inverses are formal (g^-1).
class GeneratorSet {
 public:
  explicit GeneratorSet(Model m) : table_(std::make_shared<GeneratorTable>(m)) {}

  void add(const std::string& name, ConcreteMap f) {
    auto t = std::make_shared<GeneratorTable>(*table_);
    t->add(name, std::move(f));
    table_ = std::move(t);
  }
  void add(const std::string& name, const PLMap& f) { add(name, ConcreteMap(f)); }
  void add(const std::string& name, const MobiusMap& f) { add(name, ConcreteMap(f)); }
  void add(const std::string& name, const CircleMap& f) { add(name, f.flatten()); }
  Model model() const { return table_->model(); }
  std::vector<std::string> names() const { return table_->names(); }
  const ConcreteMap& get(const std::string& name) const { return table_->get(name); }
  std::shared_ptr<const GeneratorTable> table() const { return table_; }
  std::size_t size() const { return table_->generators().size(); }

 private:
  std::shared_ptr<const GeneratorTable> table_;
};

inline ConcreteMap evaluate_word(const GeneratorSet& G, const Word& w) { return G.table()->evaluate_word(w); }

inline CircleMap word_map(const GeneratorSet& G, const Word& w) { return WordMap{w, G.table()}; }

struct Enumeration {
  struct Entry {
    Word word;
    ConcreteMap map;
  };
  std::vector<Entry> distinct;                  // first word reaching each element
  std::vector<std::pair<Word, Word>> relations;  // (word, earlier word with the same map)
  std::size_t words = 0;                         // reduced words visited
};

// Reduced words by length; each word extends its prefix by one letter on the
// right, so the map is one composition away.
inline Enumeration enumerate_reduced(const GeneratorSet& G, long maxLen) {
  if (maxLen < 0) throw Error(ErrorKind::InvalidArgument, "maxLen must be non-negative");
  struct Node {
    std::vector<Letter> letters;
    ConcreteMap map;
  };
  std::vector<Letter> alphabet;
  for (const auto& g : G.names()) {
    alphabet.push_back({g, 1});
    alphabet.push_back({g, -1});
  }
  Enumeration out;
  std::map<ConcreteMap, std::size_t, ConcreteMapLess> seen;
  auto record = [&](const std::vector<Letter>& ls, const ConcreteMap& f) {
    ++out.words;
    Word w(ls);
    auto [it, fresh] = seen.emplace(f, out.distinct.size());
    if (fresh)
      out.distinct.push_back({w, f});
    else
      out.relations.emplace_back(w, out.distinct[it->second].word);
  };
  std::vector<Node> layer{{{}, identity_map(G.model())}};
  record({}, layer[0].map);
  for (long len = 1; len <= maxLen; ++len) {
    std::vector<Node> next;
    for (const auto& n : layer)
      for (const auto& a : alphabet) {
        if (!n.letters.empty() && n.letters.back().gen == a.gen && n.letters.back().exp == -a.exp) continue;
        Node m{n.letters, compose(n.map, G.table()->get(a.gen, a.exp < 0))};
        m.letters.push_back(a);
        record(m.letters, m.map);
        next.push_back(std::move(m));
      }
    layer = std::move(next);
  }
  return out;
}

// ---- ping-pong ----

struct ClosedArc {
  CirclePoint from;
  CirclePoint to;
  bool contains(const CirclePoint& p) const { return p == from || p == to || strictly_between(from, p, to); }
  friend bool operator==(const ClosedArc&, const ClosedArc&) = default;
};

inline bool arcs_meet(const ClosedArc& a, const ClosedArc& b) { return a.contains(b.from) || b.contains(a.from); }

// open arc (a,b) inside closed arc [s,t]
inline bool open_arc_within(const CirclePoint& a, const CirclePoint& b, const ClosedArc& c) {
  const auto& s = c.from;
  const auto& t = c.to;
  if (a == s) return b == t || strictly_between(s, b, t);
  return strictly_between(s, a, t) && (b == t || strictly_between(a, b, t));
}

// X1+, X1-, X2+, X2-
struct PingPongCells {
  std::array<std::vector<ClosedArc>, 4> cells;
  static constexpr const char* names[4] = {"X1+", "X1-", "X2+", "X2-"};
};

inline void check_cells(const PingPongCells& c) {
  std::vector<std::pair<int, const ClosedArc*>> all;
  for (int i = 0; i < 4; ++i) {
    if (c.cells[i].empty()) throw Error(ErrorKind::CellsOverlap, std::string(PingPongCells::names[i]) + " is empty");
    for (const auto& a : c.cells[i]) {
      if (a.from == a.to) throw Error(ErrorKind::CellsOverlap, "degenerate arc in " + std::string(PingPongCells::names[i]));
      all.push_back({i, &a});
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (arcs_meet(*all[i].second, *all[j].second))
        throw Error(ErrorKind::CellsOverlap, std::string("arcs of ") + PingPongCells::names[all[i].first] + " and " +
                                                 PingPongCells::names[all[j].first] + " meet");
}

struct InclusionEvidence {
  std::string inclusion;  // e.g. "h1(S - X1-) in X1+"
  CirclePoint source_from, source_to;  // open arc of the complement
  CirclePoint image_from, image_to;    // its image
  std::optional<ClosedArc> target;     // the covering arc, when found
};

struct Certificate {
  ConcreteMap h1, h2;
  long power1 = 1, power2 = 1;  // h_i = g_i^power_i when found by search
  PingPongCells cells;
  std::vector<InclusionEvidence> evidence;
};

struct PingPongFailure {
  InclusionEvidence uncovered;
};

namespace detail {

// open complementary arcs of a union of disjoint closed arcs
inline std::vector<std::pair<CirclePoint, CirclePoint>> complement_arcs(std::vector<ClosedArc> arcs) {
  std::sort(arcs.begin(), arcs.end(), [](const ClosedArc& a, const ClosedArc& b) { return a.from < b.from; });
  std::vector<std::pair<CirclePoint, CirclePoint>> out;
  for (std::size_t i = 0; i < arcs.size(); ++i) out.emplace_back(arcs[i].to, arcs[(i + 1) % arcs.size()].from);
  return out;
}

}  // namespace detail

// h1(S - X1-) in X1+, h1^-1(S - X1+) in X1-, and the same for h2
inline std::variant<Certificate, PingPongFailure> pingpong_verify(const ConcreteMap& h1, const ConcreteMap& h2,
                                                                  const PingPongCells& cells) {
  if (model_of(h1) != model_of(h2)) throw Error(ErrorKind::ModelMismatch, "ping-pong maps in different models");
  check_cells(cells);
  Certificate cert{h1, h2, 1, 1, cells, {}};
  struct Check {
    const ConcreteMap* map;
    int from_cell;
    int to_cell;
    std::string name;
  };
  ConcreteMap i1 = invert(h1), i2 = invert(h2);
  std::vector<Check> checks{{&h1, 1, 0, "h1(S - X1-) in X1+"},
                            {&i1, 0, 1, "h1^-1(S - X1+) in X1-"},
                            {&h2, 3, 2, "h2(S - X2-) in X2+"},
                            {&i2, 2, 3, "h2^-1(S - X2+) in X2-"}};
  for (const auto& c : checks) {
    for (const auto& [u, v] : detail::complement_arcs(cells.cells[c.from_cell])) {
      CirclePoint fu = evaluate(*c.map, u), fv = evaluate(*c.map, v);
      InclusionEvidence ev{c.name, u, v, fu, fv, std::nullopt};
      for (const auto& t : cells.cells[c.to_cell])
        if (open_arc_within(fu, fv, t)) ev.target = t;
      if (!ev.target) return PingPongFailure{ev};
      cert.evidence.push_back(std::move(ev));
    }
  }
  return cert;
}

inline std::variant<Certificate, PingPongFailure> pingpong_verify(const CircleMap& h1, const CircleMap& h2,
                                                                  const PingPongCells& cells) {
  return pingpong_verify(h1.flatten(), h2.flatten(), cells);
}

namespace detail {

// chart value shifted by a rational and reduced mod 1
inline CirclePoint chart_shift(Model m, const QuadraticReal& y, const Rational& delta) {
  QuadraticReal z = y + QuadraticReal(delta);
  if (z.sign() < 0) z = z + QuadraticReal(1L);
  if (z >= QuadraticReal(1L)) z = z - QuadraticReal(1L);
  return from_chart(m, z);
}

inline ClosedArc arc_around(const CirclePoint& x, const Rational& r) {
  QuadraticReal c = chart(x);
  return {chart_shift(x.model(), c, -r), chart_shift(x.model(), c, r)};
}

}  // namespace detail

struct PingPongSearch {
  std::optional<Certificate> certificate;
  Rational radius;
  long tried = 0;  // powers tried
};

// Cells are arcs around the attracting and repelling fixed points of the
// p-A-like powers; the radius is a dyadic rational just below a third of
// the smallest gap between those points in the order chart.
inline PingPongSearch pingpong_search(const ConcreteMap& g1, const ConcreteMap& g2, int maxPower = kDefaultMaxPower) {
  using T = MapClass::Tag;
  auto base = [&](const ConcreteMap& g, long& period) {
    MapClass c = classify(g, maxPower);
    if (c.tag != T::Hyperbolic && c.tag != T::ProperlyPALike && c.tag != T::PALike)
      throw Error(ErrorKind::NotPALike, "ping-pong needs hyperbolic or p-A-like maps, got " + c.str());
    period = c.tag == T::PALike ? c.period : 1;
    return power(g, period);
  };
  long m1 = 1, m2 = 1;
  ConcreteMap f1 = base(g1, m1), f2 = base(g2, m2);
  if (per_alternative(g1, g2, maxPower).kind != Alternative::Kind::Disjoint)
    throw Error(ErrorKind::PeriodicSetsNotDisjoint, "the two maps share periodic points");
  auto fp1 = fixed_points(f1), fp2 = fixed_points(f2);
  std::vector<double> pos;
  for (const auto* v : {&fp1, &fp2})
    for (const auto& d : *v) pos.push_back(chart_double(d.locus));
  std::sort(pos.begin(), pos.end());
  double gap = 1;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    double d = (i + 1 < pos.size() ? pos[i + 1] : pos[0] + 1) - pos[i];
    gap = std::min(gap, d);
  }
  Rational r(1, 2);
  while (r.convert_to<double>() > gap / 3 * (1 - 1e-9)) r /= 2;

  PingPongCells cells;
  auto fill = [&](const std::vector<FixedPointDatum>& fp, int plus, int minus) {
    for (const auto& d : fp) cells.cells[d.kind == FixedKind::Attracting ? plus : minus].push_back(detail::arc_around(d.locus, r));
  };
  fill(fp1, 0, 1);
  fill(fp2, 2, 3);
  PingPongSearch out;
  out.radius = r;
  ConcreteMap h1 = f1, h2 = f2;
  for (long n = 1; n <= maxPower; ++n) {
    if (n > 1) {
      h1 = compose(h1, f1);
      h2 = compose(h2, f2);
    }
    out.tried = n;
    auto v = pingpong_verify(h1, h2, cells);
    if (auto* c = std::get_if<Certificate>(&v)) {
      c->power1 = n * m1;
      c->power2 = n * m2;
      out.certificate = std::move(*c);
      return out;
    }
  }
  return out;
}

// ---- abelian probe ----

struct AbelianReport {
  std::size_t elements = 0;        // distinct elements enumerated
  std::size_t cosets = 0;          // distinct permutations of the shared set
  std::size_t stabilizer = 0;      // elements fixing it pointwise (K)
  bool index_within_bound = true;  // cosets <= |sharedPer|
  bool index_within_half = true;   // cosets <= |sharedPer| / 2
  bool commutative = true;
  std::optional<std::pair<Word, Word>> noncommuting;
  bool free_on_components = true;
  std::optional<std::pair<Word, CirclePoint>> interior_fixed_point;
};

inline AbelianReport abelian_probe(const GeneratorSet& G, std::vector<CirclePoint> shared, long wordLen) {
  std::sort(shared.begin(), shared.end());
  shared.erase(std::unique(shared.begin(), shared.end()), shared.end());
  auto perm_of = [&](const ConcreteMap& f, const std::string& what) {
    std::vector<std::size_t> p;
    for (const auto& x : shared) {
      auto y = evaluate(f, x);
      auto it = std::lower_bound(shared.begin(), shared.end(), y);
      if (it == shared.end() || *it != y)
        throw Error(ErrorKind::PerNotInvariant, what + " sends " + x.str() + " outside the shared set");
      p.push_back(static_cast<std::size_t>(it - shared.begin()));
    }
    return p;
  };
  for (const auto& g : G.names()) perm_of(G.get(g), "generator " + g);

  auto en = enumerate_reduced(G, wordLen);
  AbelianReport rep;
  rep.elements = en.distinct.size();
  std::set<std::vector<std::size_t>> perms;
  std::vector<const Enumeration::Entry*> K;
  for (const auto& e : en.distinct) {
    auto p = perm_of(e.map, "word " + e.word.str());
    bool id = true;
    for (std::size_t i = 0; i < p.size(); ++i) id = id && p[i] == i;
    perms.insert(p);
    if (id) K.push_back(&e);
  }
  rep.cosets = perms.size();
  rep.stabilizer = K.size();
  rep.index_within_bound = rep.cosets <= std::max<std::size_t>(shared.size(), 1);
  rep.index_within_half = 2 * rep.cosets <= std::max<std::size_t>(shared.size(), 2);
  for (std::size_t i = 0; i < K.size() && rep.commutative; ++i)
    for (std::size_t j = i + 1; j < K.size(); ++j) {
      ConcreteMap uv = compose(K[i]->map, K[j]->map), vu = compose(K[j]->map, K[i]->map);
      if (ConcreteMapLess{}(uv, vu) || ConcreteMapLess{}(vu, uv)) {
        rep.commutative = false;
        rep.noncommuting = {K[i]->word, K[j]->word};
        break;
      }
    }
  for (const auto* e : K) {
    if (is_identity(e->map)) continue;
    std::vector<FixedPointDatum> fp;
    try {
      fp = fixed_points(e->map);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::FixedInterval && err.kind() != ErrorKind::IndifferentPoint) throw;
      rep.free_on_components = false;
      rep.interior_fixed_point = {e->word, shared.empty() ? CirclePoint() : shared.front()};
      break;
    }
    for (const auto& d : fp)
      if (!std::binary_search(shared.begin(), shared.end(), d.locus)) {
        rep.free_on_components = false;
        rep.interior_fixed_point = {e->word, d.locus};
        break;
      }
    if (!rep.free_on_components) break;
  }
  return rep;
}

// ---- alternative over a word ball ----

struct AlternativeViolation {
  Word g, h;
  Alternative result;
};

struct AlternativeGrid {
  std::size_t elements = 0;                          // distinct nonidentity elements
  std::vector<std::pair<Word, std::string>> skipped;  // no determinate periodic set
  std::size_t pairs = 0, equal = 0, disjoint = 0;
  std::vector<AlternativeViolation> violations;
};

// per_alternative on every unordered pair of distinct elements reached by
// reduced words of length <= maxLen. Periodic sets are computed once per
// element; elements without one (torsion, or nothing up to maxPeriod) are
// listed and left out of the pairs.
inline AlternativeGrid alternative_grid(const GeneratorSet& G, long maxLen, int maxPeriod = kDefaultMaxPower) {
  auto en = enumerate_reduced(G, maxLen);
  AlternativeGrid out;
  std::vector<std::pair<const Word*, PeriodicReport>> det;
  for (const auto& e : en.distinct) {
    if (is_identity(e.map)) continue;
    ++out.elements;
    try {
      det.push_back({&e.word, detail::determinate_periodic(e.map, maxPeriod)});
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::IndeterminateInput && err.kind() != ErrorKind::FixedInterval &&
          err.kind() != ErrorKind::IndifferentPoint)
        throw;
      out.skipped.push_back({e.word, err.what()});
    }
  }
  for (std::size_t i = 0; i < det.size(); ++i)
    for (std::size_t j = i + 1; j < det.size(); ++j) {
      auto a = compare_periodic_sets(det[i].second, det[j].second);
      ++out.pairs;
      if (a.kind == Alternative::Kind::Equal) ++out.equal;
      else if (a.kind == Alternative::Kind::Disjoint) ++out.disjoint;
      else out.violations.push_back({*det[i].first, *det[j].first, a});
    }
  return out;
}

}  // namespace laminar
