#include <catch_amalgamated.hpp>

#include <boost/multiprecision/gmp.hpp>

#include "support.hpp"

using namespace laminar;
using support::random_mobius;
using support::random_pl;

namespace {
CirclePoint ang(long n, long d) { return CirclePoint::angle(Rational(n, d)); }
PLMap pl(std::vector<std::pair<Rational, Rational>> v) {
  std::vector<PLMap::Breakpoint> b;
  for (auto& [x, y] : v) b.push_back({x, y});
  return PLMap::from_breakpoints(b);
}
}  // namespace

TEST_CASE("rationals parse reduced and round trip", "[circle]") {
  CHECK(parse_rational("6/8") == Rational(3, 4));
  CHECK(parse_rational("6/8").str() == "3/4");
  CHECK(parse_rational("-7/2").str() == "-7/2");
  CHECK(parse_rational("5") == Rational(5));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("x"), Error);
  CHECK(frac(Rational(-1, 3)) == Rational(2, 3));
  CHECK(floor(Rational(-1, 3)) == -1);
}

TEST_CASE("quadratic reals normalise square factors", "[circle]") {
  auto x = QuadraticReal::make(Rational(1), Rational(1), 12);  // 1 + 2 sqrt 3
  CHECK(x.d() == 3);
  CHECK(x.b() == 2);
  auto y = QuadraticReal::make(Rational(1), Rational(3), 16);
  CHECK(y.is_rational());
  CHECK(y.a() == 13);
  // a large square factor beyond trial division
  Integer p("1000000007"), q("998244353");
  auto z = QuadraticReal::make(Rational(0), Rational(1), p * p * q);
  CHECK(z.d() == q);
  CHECK(z.b() == Rational(p));
}

TEST_CASE("quadratic comparison agrees with a 50 digit oracle", "[circle]") {
  using F = boost::multiprecision::mpf_float_50;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> n(-30, 30), d(1, 9);
  static const long rad[] = {0, 2, 3, 5, 6, 7, 11, 15};
  std::uniform_int_distribution<int> ri(0, 7);
  auto draw = [&] {
    return QuadraticReal::make(Rational(n(rng), d(rng)), Rational(n(rng), d(rng)), rad[ri(rng)]);
  };
  auto approx = [](const QuadraticReal& x) {
    auto q = [](const Rational& r) {
      return F(boost::multiprecision::numerator(r)) / F(boost::multiprecision::denominator(r));
    };
    return q(x.a()) + q(x.b()) * sqrt(F(x.d()));
  };
  int disagreements = 0;
  for (int i = 0; i < 2000; ++i) {
    auto x = draw(), y = draw();
    F diff = approx(x) - approx(y);
    int oracle = abs(diff) < F("1e-40") ? 0 : (diff > 0 ? 1 : -1);
    if (compare(x, y) != oracle) ++disagreements;
  }
  CHECK(disagreements == 0);
  // near-ties across fields
  auto phi = QuadraticReal::make(Rational(1, 2), Rational(1, 2), 5);
  CHECK(phi > QuadraticReal(Rational(161803398, 100000000)));
  CHECK(phi < QuadraticReal(Rational(161803399, 100000000)));
  auto s2 = QuadraticReal::make(0, 1, 2), s3 = QuadraticReal::make(0, 1, 3);
  CHECK(s2 + QuadraticReal(Rational(1)) > s3);   // 2.414 > 1.732
  CHECK(compare(s2 * s2, QuadraticReal(2L)) == 0);
}

TEST_CASE("cyclic order", "[circle]") {
  CHECK(cyclic_order(ang(0, 1), ang(1, 3), ang(2, 3)) == Orientation::Positive);
  CHECK(cyclic_order(ang(0, 1), ang(2, 3), ang(1, 3)) == Orientation::Negative);
  CHECK(cyclic_order(ang(0, 1), ang(0, 1), ang(1, 2)) == Orientation::Degenerate);
  CHECK_THROWS_AS(cyclic_order(ang(0, 1), CirclePoint::infinity(), ang(1, 2)), Error);
  auto inf = CirclePoint::infinity();
  auto one = CirclePoint::projective(QuadraticReal(1L)), two = CirclePoint::projective(QuadraticReal(2L));
  CHECK(cyclic_order(one, two, inf) == Orientation::Positive);
  CHECK(cyclic_order(two, inf, one) == Orientation::Positive);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    auto a = support::random_projective(rng), b = support::random_projective(rng),
         c = support::random_projective(rng);
    auto o = cyclic_order(a, b, c);
    CHECK(cyclic_order(b, c, a) == o);
    if (o == Orientation::Positive) CHECK(cyclic_order(a, c, b) == Orientation::Negative);
  }
}

TEST_CASE("linked", "[circle]") {
  CHECK(linked(Leaf(ang(0, 1), ang(1, 2)), Leaf(ang(1, 4), ang(3, 4))));
  CHECK_FALSE(linked(Leaf(ang(0, 1), ang(1, 4)), Leaf(ang(1, 2), ang(3, 4))));
  CHECK_FALSE(linked(Leaf(ang(0, 1), ang(1, 2)), Leaf(ang(1, 2), ang(3, 4))));
}

TEST_CASE("evaluate, compose, invert", "[circle]") {
  auto m = MobiusMap::from_integers(2, 1, 1, 1);
  CHECK(evaluate(ConcreteMap(m), CirclePoint::projective(QuadraticReal(0L))) ==
        CirclePoint::projective(QuadraticReal(1L)));
  CHECK(evaluate(ConcreteMap(m), CirclePoint::infinity()) == CirclePoint::projective(QuadraticReal(2L)));
  CHECK(compose(m, m) == MobiusMap::from_integers(5, 3, 3, 2));
  CHECK(m.inverse() == MobiusMap::from_integers(1, -1, -1, 2));
  CHECK(MobiusMap::from_integers(-4, -2, -2, -2) == m);
  CHECK(MobiusMap::make(Rational(1), Rational(1, 2), Rational(1, 2), Rational(1, 2)) == m);

  auto f = pl({{0, 0}, {Rational(1, 2), Rational(3, 4)}});
  CHECK(f.apply(Rational(1, 4)) == Rational(3, 8));
  CHECK(f.inverse() == pl({{0, 0}, {Rational(3, 4), Rational(1, 2)}}));
  CHECK(PLMap::identity().apply(Rational(2, 7)) == Rational(2, 7));
  CHECK(pl({{Rational(1, 4), Rational(1, 2)}, {Rational(1, 2), Rational(3, 4)}}) == PLMap::rotation(Rational(1, 4)));
  CHECK_THROWS_AS(pl({{0, 0}, {Rational(1, 2), Rational(0)}}), Error);
  CHECK_THROWS_AS(pl({{0, Rational(1, 2)}, {Rational(1, 4), Rational(1, 4)}, {Rational(1, 2), Rational(3, 4)}}), Error);
}

TEST_CASE("map laws hold exactly on random draws", "[circle]") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    auto f = random_pl(rng), g = random_pl(rng), h = random_pl(rng);
    CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
    CHECK(compose(f, f.inverse()).is_identity());
    auto x = support::random_angle(rng, 97);
    CHECK(compose(f, g).apply(x) == f.apply(g.apply(x)));
    auto a = support::random_angle(rng), b = support::random_angle(rng), c = support::random_angle(rng);
    auto pa = CirclePoint::angle(a), pb = CirclePoint::angle(b), pc = CirclePoint::angle(c);
    ConcreteMap cf = f;
    CHECK(cyclic_order(evaluate(cf, pa), evaluate(cf, pb), evaluate(cf, pc)) == cyclic_order(pa, pb, pc));
  }
  for (int i = 0; i < 300; ++i) {
    auto f = random_mobius(rng), g = random_mobius(rng), h = random_mobius(rng);
    CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
    CHECK(compose(f, f.inverse()).is_identity());
    auto x = support::random_projective(rng), y = support::random_projective(rng),
         z = support::random_projective(rng);
    ConcreteMap cf = f, cg = g;
    CHECK(evaluate(compose(cf, cg), x) == evaluate(cf, evaluate(cg, x)));
    CHECK(cyclic_order(evaluate(cf, x), evaluate(cf, y), evaluate(cf, z)) == cyclic_order(x, y, z));
    if (x != y && z != x && z != y) {
      auto w = support::random_projective(rng);
      if (w != x && w != y && w != z) {
        Leaf l1(x, y), l2(z, w);
        CHECK(linked(Leaf(evaluate(cf, x), evaluate(cf, y)), Leaf(evaluate(cf, z), evaluate(cf, w))) ==
              linked(l1, l2));
      }
    }
  }
}

TEST_CASE("word maps evaluate lazily", "[circle]") {
  auto tab = std::make_shared<GeneratorTable>(Model::Projective);
  tab->add("a", MobiusMap::from_integers(2, 1, 1, 1));
  tab->add("b", MobiusMap::from_integers(1, 1, 1, 2));
  CircleMap w = WordMap{Word::parse("a b^-1 a"), tab};
  auto x = CirclePoint::projective(QuadraticReal(Rational(1, 3)));
  ConcreteMap flat = compose(compose(ConcreteMap(MobiusMap::from_integers(2, 1, 1, 1)),
                                     ConcreteMap(MobiusMap::from_integers(1, 1, 1, 2).inverse())),
                             ConcreteMap(MobiusMap::from_integers(2, 1, 1, 1)));
  CHECK(evaluate(w, x) == evaluate(flat, x));
  CHECK(compose(w, invert(w)).flatten() == ConcreteMap(MobiusMap::identity()));
  CHECK_THROWS_AS(evaluate(CircleMap(WordMap{Word::parse("c"), tab}), x), Error);
  CHECK(Word::parse("a a^-1 b^2").str() == "b^2");
}

TEST_CASE("chart is an order isomorphism", "[circle]") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    auto x = support::random_projective(rng), y = support::random_projective(rng);
    if (!x.as_projective().is_infinity() && !y.as_projective().is_infinity())
      CHECK((chart(x) < chart(y)) == (x < y));
    CHECK(from_chart(Model::Projective, chart(x)) == x);
  }
  CHECK(compare_ccw_length(ang(1, 4), ang(1, 2), Rational(1, 4)) == 0);
  CHECK(compare_ccw_length(ang(3, 4), ang(1, 8), Rational(1, 4)) > 0);
  CHECK(compare_distance(ang(1, 8), ang(7, 8), Rational(1, 4)) == 0);
}
