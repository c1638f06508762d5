#include <catch_amalgamated.hpp>

#include <laminar/constructions.hpp>
#include <laminar/json_io.hpp>
#include <laminar/svg.hpp>

#include "support.hpp"

using namespace laminar;
using io::json;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

// text round trip: serialize, print, parse, serialize again
json reparse(const json& j) { return json::parse(j.dump()); }

}  // namespace

TEST_CASE("numbers round trip", "[io]") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    Rational r = support::random_angle(rng, 1000) - 500;
    CHECK(io::rational_from(reparse(io::to_json(r))) == r);
  }
  CHECK(io::to_json(Rational(1, 2)) == "1/2");
  CHECK(io::to_json(Rational(-3)) == "-3");
  CHECK(io::rational_from(json(7)) == 7);

  Integer big = Integer(1) << 100;
  CHECK(io::to_json(big).is_string());
  CHECK(io::integer_from(reparse(io::to_json(big))) == big);
  CHECK(io::to_json(Integer(-5)) == -5);

  auto x = QuadraticReal::make(Rational(1, 2), Rational(-3, 4), 20);  // square factor moves into b
  json jx = io::to_json(x);
  CHECK(jx == json{{"a", "1/2"}, {"b", "-3/2"}, {"d", 5}});
  CHECK(io::quadratic_from(reparse(jx)) == x);
  CHECK(io::to_json(QuadraticReal(Rational(2, 3))) == json{{"a", "2/3"}, {"b", "0"}, {"d", 1}});
}

TEST_CASE("points and maps round trip", "[io]") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    auto p = support::random_projective(rng);
    CHECK(io::point_from(Model::Projective, reparse(io::to_json(p))) == p);
    auto a = CirclePoint::angle(support::random_angle(rng));
    CHECK(io::point_from(Model::Angle, reparse(io::to_json(a))) == a);

    ConcreteMap f = support::random_pl(rng), g = support::random_mobius(rng);
    CHECK(io::map_from(Model::Angle, reparse(io::to_json(f))) == f);
    CHECK(io::map_from(Model::Projective, reparse(io::to_json(g))) == g);
    CHECK(io::map_document_from(io::map_document(g)) == g);
  }
  CHECK(io::to_json(CirclePoint::infinity()) == "inf");
  CHECK(io::point_from(Model::Projective, json("3/4")) == CirclePoint::projective(QuadraticReal(Rational(3, 4))));
  CHECK(io::to_json(ConcreteMap(MobiusMap::from_integers(2, 1, 1, 1))) == json::array({2, 1, 1, 1}));
  CHECK(io::to_json(ConcreteMap(PLMap::rotation(Rational(1, 4)))) == json::array({json::array({"0", "1/4"})}));
}

TEST_CASE("laminations and groups round trip", "[io]") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    auto L = FiniteLamination::validate(Model::Angle, support::random_maximal_chords(rng, 3 + i % 20));
    auto back = io::lamination_from(reparse(io::to_json(L)));
    CHECK(back.leaves() == L.leaves());
    CHECK(io::to_json(back).dump() == io::to_json(L).dump());
  }
  auto E = build_embedded(4, 3, 2);
  auto L2 = lambda2(E);
  auto back = io::lamination_from(reparse(io::to_json(L2)));
  CHECK(back.leaves() == L2.leaves());
  CHECK(back.depth() == 2);

  auto S = generator_maps(E);
  auto G = io::group_from(reparse(io::to_json(S)));
  CHECK(G.names() == S.names());
  for (const auto& n : S.names()) CHECK(G.get(n) == S.get(n));

  std::vector<Leaf> proj{Leaf(CirclePoint::infinity(), CirclePoint::projective(QuadraticReal::make(1, 1, 2)))};
  auto P = FiniteLamination::validate(Model::Projective, proj);
  CHECK(io::lamination_from(reparse(io::to_json(P))).leaves() == P.leaves());
}

TEST_CASE("malformed input", "[io]") {
  auto kind_is = [](ErrorKind k) {
    return Catch::Matchers::Predicate<Error>([k](const Error& e) { return e.kind() == k; });
  };
  CHECK_THROWS_MATCHES(io::model_from(json("sphere")), Error, kind_is(ErrorKind::ParseError));
  CHECK_THROWS_MATCHES(io::rational_from(json(0.5)), Error, kind_is(ErrorKind::ParseError));
  CHECK_THROWS_AS(io::rational_from(json("1/0")), Error);
  CHECK_THROWS_MATCHES(io::map_from(Model::Projective, json::array({1, 2, 3})), Error, kind_is(ErrorKind::ParseError));
  CHECK_THROWS_MATCHES(io::map_from(Model::Projective, json::array({1, 2, 2, 1})), Error,
                       kind_is(ErrorKind::InvalidArgument));
  CHECK_THROWS_MATCHES(io::lamination_from(json{{"leaves", json::array()}}), Error, kind_is(ErrorKind::ParseError));
  json crossing = json::parse(R"({"model":"angle","leaves":[["0","1/2"],["1/4","3/4"]]})");
  CHECK_THROWS_AS(io::lamination_from(crossing), LinkedPairError);
  json g = json::parse(R"({"model":"projective","generators":[{"name":"a","map":[[0,"1/2"]]}]})");
  CHECK_THROWS_AS(io::group_from(g), Error);
}

TEST_CASE("reports carry exact data", "[io]") {
  auto [g, h] = fuchsian_pair();
  auto s = pingpong_search(g, h);
  REQUIRE(s.certificate);
  json c = reparse(io::to_json(*s.certificate));
  CHECK(c["power1"] == 3);
  CHECK(c["evidence"].size() == 4);
  CHECK(io::map_from(Model::Projective, c["h1"]) == s.certificate->h1);
  for (const char* cell : {"X1+", "X1-", "X2+", "X2-"}) {
    REQUIRE(c["cells"][cell].size() == 1);
    auto arc = c["cells"][cell][0];
    CHECK(io::point_from(Model::Projective, arc[0]) != io::point_from(Model::Projective, arc[1]));
  }
  auto fp = fixed_points(ConcreteMap(g));
  CHECK(io::kind_pattern(fp) == "RA");
  json jf = io::to_json(fp);
  CHECK(io::point_from(Model::Projective, jf[1]["locus"]) == fp[1].locus);
  CHECK(jf[1]["text"] == "1/2 + 1/2*sqrt(5)");
}

TEST_CASE("svg output", "[io]") {
  auto E = build_embedded(4, 3, 1);
  auto L1 = lambda1(E);
  std::size_t polys = 0;
  for (const auto& gp : gaps(L1)) polys += gp.ideal_polygon();
  auto a = svg::chord_diagram({{&L1, "#123456", true}});
  CHECK(a == svg::chord_diagram({{&L1, "#123456", true}}));
  CHECK(count(a, "<line ") == L1.size());
  CHECK(count(a, "<polygon ") == polys);
  CHECK(count(svg::chord_diagram({{&L1, "#123456", false}}), "<polygon ") == 0);

  auto l1 = FiniteLamination::validate(Model::Angle, {Leaf(CirclePoint::angle(0), CirclePoint::angle(Rational(1, 2)))});
  auto l2 = FiniteLamination::validate(Model::Angle, {Leaf(CirclePoint::angle(Rational(1, 4)), CirclePoint::angle(Rational(3, 4)))});
  auto Q = build_quotient(l1, l2, {CirclePoint::angle(Rational(1, 8))});
  auto q = svg::quotient_diagram(Q);
  // each of the 5 points is drawn on both disks
  CHECK(count(q, "r=\"2.5\"") == 10);
  CHECK(count(q, "fill=\"#888\"") == 2);
  // the leaf (0, 1/2) is a horizontal diameter of the first disk
  CHECK(q.find("x1=\"470.000\" y1=\"240.000\" x2=\"10.000\" y2=\"240.000\"") != std::string::npos);
}
