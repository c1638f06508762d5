#include <catch_amalgamated.hpp>

#include <laminar/constructions.hpp>

#include "support.hpp"

using namespace laminar;
using FPE = FreeProductElement;

namespace {

// normal forms with n syllables: (p-1)(q-1)(p-1)... from either end
long count_normal_forms(int p, int q, int n) {
  if (n == 0) return 1;
  long total = 0;
  for (int start = 0; start < 2; ++start) {
    long c = 1;
    for (int i = 0; i < n; ++i) c *= ((i + start) % 2 == 0) ? p - 1 : q - 1;
    total += c;
  }
  return total;
}

long edges_up_to(int p, int q, int maxSyllables) {
  long t = 0;
  for (int n = 0; n <= maxSyllables; ++n) t += count_normal_forms(p, q, n);
  return t;
}

// combinatorial orientation of three positions in the ccw vertex list
Orientation index_orientation(std::size_t i, std::size_t j, std::size_t k) {
  if (i == j || j == k || i == k) return Orientation::Degenerate;
  int ascents = (i < j) + (j < k) + (k < i);
  return ascents == 2 ? Orientation::Positive : Orientation::Negative;
}

bool flag_is_multiplicity(const PropertyFlag& f) {
  return !f.holds && f.witness && f.witness->kind == "point" && f.witness->detail.rfind("multiplicity", 0) == 0;
}

// the closed arc between the Λ1 endpoints on either side of x
std::pair<CirclePoint, CirclePoint> neighbours(const FiniteLamination& lam, const CirclePoint& x) {
  auto pts = lam.endpoints();
  auto it = std::find(pts.begin(), pts.end(), x);
  REQUIRE(it != pts.end());
  std::size_t i = static_cast<std::size_t>(it - pts.begin()), n = pts.size();
  return {pts[(i + n - 1) % n], pts[(i + 1) % n]};
}

const std::vector<std::pair<int, int>> kConfigs{{2, 2}, {4, 3}, {5, 2}};

}  // namespace

TEST_CASE("free product normal forms", "[constructions]") {
  FPE e;
  auto a = e.times_right('a', 1, 4);
  CHECK(a.str() == "a");
  CHECK(a.times_right('a', 3, 4).empty());
  CHECK(a.times_right('a', -1, 4).empty());
  auto w = a.times_right('b', 2, 3).times_right('a', 3, 4);
  CHECK(w.str() == "a b^2 a^3");
  CHECK(w.length() == 3);
  CHECK(w.letter_length(4, 3) == 3);
  CHECK(w.word(4, 3).str() == "a b^-1 a^-1");
  CHECK(w.times_left('a', 3, 4).str() == "b^2 a^3");
  CHECK(w.times_left('b', 1, 3).str() == "b a b^2 a^3");
  CHECK(elements_up_to(4, 3, 1).size() == 5);
  // ball of radius 2 in Z/2*Z/2 is {e, a, b, ab, ba}
  CHECK(elements_up_to(2, 2, 2).size() == 5);
}

TEST_CASE("seed graph", "[constructions]") {
  auto s = build_seed(4, 3);
  CHECK(s.marked_points() == 6);
  CHECK(s.edges().size() == 6);
  CHECK(s.order().size() == 12);
  CHECK(lambda0(assign_angles(s)).size() == 6);

  auto t = build_seed(2, 2);
  CHECK(t.marked_points() == 3);
  auto E = assign_angles(t);
  CHECK(lambda0(E).size() == 3);
  for (std::size_t j = 0; j < 6; ++j) CHECK(E.angle(t.order()[j]) == Rational(static_cast<long>(j), 6));

  CHECK_THROWS_AS(build_seed(1, 3), Error);
}

TEST_CASE("expansion counts edges by syllable length", "[constructions]") {
  for (auto [p, q] : kConfigs) {
    auto g = build_seed(p, q);
    for (int k = 0; k <= 3; ++k) {
      INFO("p=" << p << " q=" << q << " k=" << k);
      CHECK(static_cast<long>(g.edges().size()) == edges_up_to(p, q, k + 1));
      CHECK(g.order().size() == 2 * g.edges().size());
      g = expand(g);
    }
  }
  // regression constant
  CHECK(lambda0(build_embedded(4, 3, 1)).size() == 18);
}

TEST_CASE("angle assignment is stable and order-isomorphic", "[constructions]") {
  for (auto [p, q] : kConfigs) {
    std::vector<EmbeddedGraph> Es;
    for (int k = 0; k <= 3; ++k) Es.push_back(build_embedded(p, q, k));
    for (int j = 0; j < 3; ++j)
      for (int k = j + 1; k <= 3; ++k)
        for (const auto& v : Es[j].graph().order()) CHECK(Es[k].angle(v) == Es[j].angle(v));

    // depth-1 clusters sit strictly inside the middle third of their host
    const auto& G1 = Es[1].graph();
    for (const auto& ins : G1.insertions()) {
      Rational lo = Es[1].angle(ins.from), len = frac(Es[1].angle(ins.to) - lo);
      const auto& C = G1.circles()[ins.circle];
      for (std::size_t i = 1; i < C.size(); ++i) {
        Rational off = frac(Es[1].angle(C.entry(i)) - lo);
        CHECK(off >= len / 3);
        CHECK(off <= 2 * len / 3);
      }
    }

    for (int k = 0; k <= 2; ++k) {
      const auto& ord = Es[k].graph().order();
      std::vector<CirclePoint> pts;
      for (const auto& v : ord) pts.push_back(Es[k].point(v));
      std::size_t bad = 0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
          for (std::size_t l = 0; l < pts.size(); ++l)
            if (cyclic_order(pts[i], pts[j], pts[l]) != index_orientation(i, j, l)) ++bad;
      CHECK(bad == 0);
    }
  }
}

TEST_CASE("left multiplication preserves the circular order", "[constructions]") {
  auto E = build_embedded(4, 3, 3);
  const auto& G = E.graph();
  auto V = G.vertices_up_to(1);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, V.size() - 1);
  for (auto [g, ord] : {std::pair{'a', 4}, std::pair{'b', 3}})
    for (int t = 0; t < 3000; ++t) {
      Vertex x = V[pick(rng)], y = V[pick(rng)], z = V[pick(rng)];
      auto m = [&](const Vertex& v) { return E.point({v.edge.times_left(g, 1, ord), v.side}); };
      CHECK(cyclic_order(E.point(x), E.point(y), E.point(z)) == cyclic_order(m(x), m(y), m(z)));
    }
  // each circle's vertices run ccw in the order entry(0) exit(0) entry(1) ...
  for (const auto& C : G.circles()) {
    std::vector<CirclePoint> seq;
    for (std::size_t i = 0; i < C.size(); ++i) {
      seq.push_back(E.point(C.entry(i)));
      seq.push_back(E.point(C.exit(i)));
    }
    for (std::size_t i = 0; i + 2 < seq.size(); ++i)
      CHECK(cyclic_order(seq[i], seq[i + 1], seq[i + 2]) == Orientation::Positive);
  }
}

TEST_CASE("the three laminations", "[constructions]") {
  for (auto [p, q] : kConfigs)
    for (int k = 0; k <= 2; ++k) {
      INFO("p=" << p << " q=" << q << " k=" << k);
      auto E = build_embedded(p, q, k);
      auto L0 = lambda0(E), L1 = lambda1(E), L2 = lambda2(E);
      for (const auto& l : L0.leaves()) CHECK(L1.contains(l));
      CHECK(distinct_endpoints(L1, L2));
      Rational eps(1, 1L << (2 * k));
      auto f1 = check_loose(L1, eps), f2 = check_loose(L2, eps);
      CHECK(f1.holds);
      CHECK(f2.holds);
      if (!f1.holds) INFO(f1.witness->detail);
      for (const auto* L : {&L1, &L2})
        for (const auto& x : L->endpoints()) CHECK(endpoint_multiplicity(*L, x) <= 2);
    }
}

TEST_CASE("depth 3 (4,3) laminations", "[constructions][slow]") {
  auto E = build_embedded(4, 3, 3);
  auto L1 = lambda1(E), L2 = lambda2(E);
  CHECK(distinct_endpoints(L1, L2));
  CHECK(check_loose(L1, Rational(1, 64)).holds);
  CHECK(check_loose(L2, Rational(1, 64)).holds);
}

TEST_CASE("collapsing across a Λ0 endpoint breaks looseness", "[constructions]") {
  auto E = build_embedded(4, 3, 2);
  auto L1 = lambda1(E);
  REQUIRE(check_loose(L1, Rational(1, 16)).holds);
  auto v = E.point({FPE(), 0});
  auto [from, to] = neighbours(L1, v);
  auto C = monotone_collapse(L1, from, to);
  auto f = check_loose(C, Rational(1, 16));
  CHECK(flag_is_multiplicity(f));
}

TEST_CASE("generator maps", "[constructions]") {
  CHECK_THROWS_MATCHES(generator_maps(build_embedded(4, 3, 1)), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.kind() == ErrorKind::DepthTooShallow;
                       }));
  for (auto [p, q] : kConfigs)
    for (int k = 2; k <= 3; ++k) {
      INFO("p=" << p << " q=" << q << " k=" << k);
      auto E = build_embedded(p, q, k), Eprev = build_embedded(p, q, k - 1);
      auto S = generator_maps(E);
      auto V = E.graph().vertices_up_to(k - 1);
      auto ap = power(S.get("a"), p), bq = power(S.get("b"), q);
      for (const auto& v : V) {
        CHECK(evaluate(ap, E.point(v)) == E.point(v));
        CHECK(evaluate(bq, E.point(v)) == E.point(v));
        CHECK(evaluate(S.get("a"), E.point(v)) != E.point(v));
        CHECK(evaluate(S.get("b"), E.point(v)) != E.point(v));
        // the map is the graph action on these vertices
        CHECK(evaluate(S.get("a"), E.point(v)) == E.point({v.edge.times_left('a', 1, p), v.side}));
      }
      for (const char* g : {"a", "b"}) {
        CircleMap f = S.get(g);
        CHECK(check_invariance(lambda1(Eprev), lambda1(E), f).empty());
        CHECK(check_invariance(lambda2(Eprev), lambda2(E), f).empty());
        CHECK(check_invariance(lambda0(Eprev), lambda0(E), f).empty());
      }

      // distinct elements of word length <= 2(k-1) act distinctly on the vertices
      auto Vk = E.graph().vertices_up_to(k);
      std::set<std::vector<Rational>> actions;
      auto elems = elements_up_to(p, q, static_cast<std::size_t>(2 * (k - 1)));
      for (const auto& g : elems) {
        auto f = evaluate_word(S, g.word(p, q));
        std::vector<Rational> img;
        for (const auto& v : Vk) img.push_back(evaluate(f, E.point(v)).as_angle().value());
        actions.insert(img);
      }
      CHECK(actions.size() == elems.size());
    }
}

TEST_CASE("the commutator fixes no depth-1 vertex", "[constructions]") {
  for (int k : {2, 5}) {
    auto E = build_embedded(4, 3, k);
    auto S = generator_maps(E);
    auto c = evaluate_word(S, Word::parse("a b a^-1 b^-1"));
    for (const auto& v : E.graph().vertices_up_to(1)) CHECK(evaluate(c, E.point(v)) != E.point(v));
    if (k == 5) {
      // deep enough for the action to be exact along the way
      FPE comm = FPE().times_right('a', 1, 4).times_right('b', 1, 3).times_right('a', -1, 4).times_right('b', -1, 3);
      for (const auto& v : E.graph().vertices_up_to(1)) {
        FPE img = v.edge;
        for (auto it = comm.syllables().rbegin(); it != comm.syllables().rend(); ++it)
          img = img.times_left(it->gen, it->exp, it->gen == 'a' ? 4 : 3);
        CHECK(evaluate(c, E.point(v)) == E.point({img, v.side}));
      }
    }
  }
}

TEST_CASE("example factories", "[constructions]") {
  auto [g, h] = fuchsian_pair();
  CHECK(classify(ConcreteMap(g)).tag == MapClass::Tag::Hyperbolic);
  CHECK(classify(ConcreteMap(h)).tag == MapClass::Tag::Hyperbolic);
  CHECK(per_alternative(g, h).kind == Alternative::Kind::Disjoint);

  auto c = classify(ConcreteMap(pa_like_example(2)));
  CHECK(c.tag == MapClass::Tag::ProperlyPALike);
  CHECK(c.k == 2);
  auto fp = fixed_points(ConcreteMap(pa_like_example(4)));
  REQUIRE(fp.size() == 8);
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(fp[j].locus == CirclePoint::angle(Rational(static_cast<long>(j), 8)));
    CHECK((fp[j].kind == FixedKind::Attracting) == (j % 2 == 0));
  }
  auto tri = attracting_polygon(ConcreteMap(pa_like_example(3)));
  std::vector<CirclePoint> want{CirclePoint::angle(0), CirclePoint::angle(Rational(1, 3)),
                                CirclePoint::angle(Rational(2, 3))};
  auto got = tri.vertices;
  std::sort(got.begin(), got.end());
  CHECK(got == want);
  CHECK(tri.ideal_polygon());
  CHECK_THROWS_AS(pa_like_example(1), Error);
}
