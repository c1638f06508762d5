#include <catch_amalgamated.hpp>

#include <laminar/constructions.hpp>
#include <laminar/quotient.hpp>

#include <chrono>
#include <map>

#include "support.hpp"

using namespace laminar;

namespace {

CirclePoint A(long n, long d) { return CirclePoint::angle(Rational(n, d)); }

FiniteLamination lam(std::vector<std::pair<Rational, Rational>> v) {
  std::vector<Leaf> ls;
  for (auto& [x, y] : v) ls.emplace_back(CirclePoint::angle(x), CirclePoint::angle(y));
  return FiniteLamination::validate(Model::Angle, ls);
}

FiniteLamination empty_lam(Model m) { return FiniteLamination::validate(m, {}); }

// connected components of the leaf graph, by breadth-first search
std::map<CirclePoint, std::size_t> leaf_components(const std::vector<const FiniteLamination*>& ls,
                                                   const std::vector<CirclePoint>& universe) {
  std::map<CirclePoint, std::vector<CirclePoint>> adj;
  for (const auto& p : universe) adj[p];
  for (const auto* L : ls)
    for (const auto& l : L->leaves()) {
      adj[l.first()].push_back(l.second());
      adj[l.second()].push_back(l.first());
    }
  std::map<CirclePoint, std::size_t> comp;
  std::size_t next = 0;
  for (const auto& [p, _] : adj) {
    if (comp.count(p)) continue;
    std::vector<CirclePoint> stack{p};
    comp[p] = next;
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      for (const auto& y : adj[x])
        if (!comp.count(y)) {
          comp[y] = next;
          stack.push_back(y);
        }
    }
    ++next;
  }
  return comp;
}

}  // namespace

TEST_CASE("quotient examples", "[quotient]") {
  auto l1 = lam({{0, Rational(1, 2)}});
  auto l2 = lam({{Rational(1, 4), Rational(3, 4)}});
  auto Q = build_quotient(l1, l2, {A(0, 1), A(1, 4), A(1, 2), A(3, 4), A(1, 8)});
  REQUIRE(Q.class_count() == 3);
  CHECK(Q.members(0) == std::vector<CirclePoint>{A(0, 1), A(1, 2)});
  CHECK(Q.members(1) == std::vector<CirclePoint>{A(1, 8)});
  CHECK(Q.members(2) == std::vector<CirclePoint>{A(1, 4), A(3, 4)});
  CHECK(project(Q, A(1, 2)) == project(Q, A(0, 1)));
  CHECK_FALSE(project(Q, A(1, 2)) == project(Q, A(1, 4)));
  auto out = project(Q, A(1, 16));
  CHECK(out.id == QuotientComplex::npos);
  CHECK(out.representative == A(1, 16));

  auto tri = lam({{0, Rational(1, 3)}, {Rational(1, 3), Rational(2, 3)}, {Rational(2, 3), 0}});
  auto T = build_quotient(tri, empty_lam(Model::Angle), {});
  REQUIRE(T.class_count() == 1);
  CHECK(T.members(0).size() == 3);

  auto proj = FiniteLamination::validate(Model::Projective, {});
  CHECK_THROWS_AS(build_quotient(l1, proj, {}), Error);
  CHECK_THROWS_AS(build_quotient(l1, l2, {CirclePoint::infinity()}), Error);
}

TEST_CASE("classes against a leaf-graph search", "[quotient]") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    auto c1 = support::random_maximal_chords(rng, 4 + t % 9);
    auto c2 = support::random_maximal_chords(rng, 3 + t % 7);
    std::vector<Leaf> a(c1.begin(), c1.begin() + static_cast<long>(c1.size() / 2 + 1));
    std::vector<Leaf> b(c2.begin(), c2.begin() + static_cast<long>(c2.size() / 2));
    auto L1 = FiniteLamination::validate(Model::Angle, a), L2 = FiniteLamination::validate(Model::Angle, b);
    std::vector<CirclePoint> samples;
    for (int i = 0; i < 5; ++i) samples.push_back(CirclePoint::angle(support::random_angle(rng, 97)));
    auto Q = build_quotient(L1, L2, samples);

    // ideal-polygon gaps are bounded by leaves, so leaf connectivity decides
    auto comp = leaf_components({&L1, &L2}, Q.universe());
    for (const auto& p : Q.universe())
      for (const auto& q : Q.universe()) CHECK((Q.class_of(p) == Q.class_of(q)) == (comp.at(p) == comp.at(q)));

    std::size_t collapsed = 0, big = 0;
    for (std::size_t c = 0; c < Q.class_count(); ++c)
      if (Q.members(c).size() > 1) {
        ++big;
        collapsed += Q.members(c).size();
      }
    CHECK(Q.class_count() + collapsed - big == Q.universe().size());

    for (const auto* L : {&L1, &L2}) {
      for (const auto& l : L->leaves()) CHECK(project(Q, l.first()) == project(Q, l.second()));
      for (const auto& g : gaps(*L))
        if (g.ideal_polygon())
          for (const auto& v : g.vertices) CHECK(project(Q, v) == project(Q, g.vertices.front()));
    }
    for (std::size_t c = 0; c < Q.class_count(); ++c)
      CHECK(std::is_sorted(Q.members(c).begin(), Q.members(c).end()));
  }
}

TEST_CASE("equivariance", "[quotient]") {
  auto l1 = lam({{0, Rational(1, 2)}});
  auto l2 = lam({{Rational(1, 4), Rational(3, 4)}});
  std::vector<CirclePoint> samples{A(0, 1), A(1, 4), A(1, 2), A(3, 4), A(1, 8)};
  auto Q = build_quotient(l1, l2, samples);
  auto r = equivariance_check(Q, PLMap::rotation(Rational(1, 2)), samples);
  CHECK(r.checked == 5);
  CHECK(r.defects.empty());
  CHECK_THROWS_MATCHES(equivariance_check(Q, PLMap::rotation(Rational(1, 8)), samples), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.kind() == ErrorKind::NotInvariant; }));

  // generators carry the depth-1 laminations into the depth-2 ones
  auto E1 = build_embedded(4, 3, 1), E2 = build_embedded(4, 3, 2);
  auto S = generator_maps(E2);
  auto V1 = E2.graph().vertices_up_to(1);
  std::vector<CirclePoint> vs;
  for (const auto& v : V1) vs.push_back(E2.point(v));
  auto Q2 = build_quotient(lambda1(E2), lambda2(E2), vs);
  for (const char* g : {"a", "b"}) {
    auto rep = equivariance_check(Q2, S.get(g), vs, std::pair{lambda1(E1), lambda2(E1)});
    CHECK(rep.checked == vs.size());
    CHECK(rep.defects.empty());
  }
  // regression constant
  CHECK(Q2.class_count() == 960);
}

TEST_CASE("convergence for a single hyperbolic map", "[quotient]") {
  auto [g, h] = fuchsian_pair();
  GeneratorSet G(Model::Projective);
  G.add("g", g);
  auto E = empty_lam(Model::Projective);
  auto rep = convergence_sample(G, E, E, 1, 50);
  REQUIRE(rep.sequences.size() == 2);
  CHECK(rep.verdict == ConvergenceVerdict::ConvergenceObserved);
  auto fp = fixed_points(ConcreteMap(g));
  REQUIRE(fp.size() == 2);
  const auto& s = rep.sequences[0];
  CHECK(s.word == Word::parse("g"));
  REQUIRE(s.attractor.size() == 1);
  REQUIRE(s.repeller.size() == 1);
  for (const auto& d : fp) {
    const auto& cls = d.kind == FixedKind::Attracting ? s.attractor[0] : s.repeller[0];
    CHECK(cls.representative == d.locus);
  }
  // g^-1 swaps the roles
  CHECK(rep.sequences[1].attractor[0] == s.repeller[0]);
  CHECK(s.concentration.back() == 1.0);
}

TEST_CASE("convergence for the certified free pair", "[quotient]") {
  auto [g, h] = fuchsian_pair();
  auto cert = pingpong_search(g, h);
  REQUIRE(cert.certificate);
  GeneratorSet G(Model::Projective);
  G.add("a", cert.certificate->h1);
  G.add("b", cert.certificate->h2);
  auto E = empty_lam(Model::Projective);
  auto t0 = std::chrono::steady_clock::now();
  auto rep = convergence_sample(G, E, E, 4, 200);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  INFO("seconds " << secs);
  CHECK(rep.verdict == ConvergenceVerdict::ConvergenceObserved);
  CHECK(rep.violations == 0);
  CHECK(rep.inconclusive == 0);
  CHECK(rep.samples == 200);
}

TEST_CASE("convergence verdicts without an attractor", "[quotient]") {
  GeneratorSet I(Model::Projective);
  I.add("u", MobiusMap::identity());
  auto E = empty_lam(Model::Projective);
  auto r = convergence_sample(I, E, E, 2, 30);
  CHECK(r.verdict == ConvergenceVerdict::Inconclusive);
  CHECK(r.violations == 0);

  // an elliptic map of infinite order keeps three samples apart forever
  GeneratorSet R(Model::Projective);
  R.add("r", MobiusMap::from_integers(1, -2, 1, 1));
  REQUIRE(classify(R.get("r")).tag == MapClass::Tag::Elliptic);
  auto v = convergence_sample(R, E, E, 1, 30);
  CHECK(v.verdict == ConvergenceVerdict::ViolationWitness);
  REQUIRE(v.sequences[0].witness.size() == 3);

  GeneratorSet P(Model::Angle);
  P.add("r", PLMap::rotation(Rational(1, 5)));
  auto ae = empty_lam(Model::Angle);
  auto w = convergence_sample(P, ae, ae, 1, 30);
  CHECK(w.verdict != ConvergenceVerdict::ConvergenceObserved);

  CHECK_THROWS_AS(convergence_sample(I, E, E, 1, 3, Rational(0)), Error);
}

TEST_CASE("farey samples", "[quotient]") {
  auto s = farey_samples(Model::Angle, 6);
  CHECK(s == std::vector<CirclePoint>{A(0, 1), A(1, 2), A(1, 3), A(2, 3), A(1, 4), A(3, 4)});
  auto p = farey_samples(Model::Projective, 3);
  CHECK(p[0] == CirclePoint::infinity());
  CHECK(p[1] == CirclePoint::projective(QuadraticReal(0L)));
}
