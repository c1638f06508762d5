#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "constructions.hpp"
#include "groups.hpp"
#include "lamination.hpp"
#include "quotient.hpp"

namespace laminar::io {

using json = nlohmann::ordered_json;

[[noreturn]] inline void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

// ---- numbers ----

inline json to_json(const Integer& n) {
  if (n >= std::numeric_limits<long long>::min() && n <= std::numeric_limits<long long>::max())
    return n.convert_to<long long>();
  return n.str();
}

inline Integer integer_from(const json& j) {
  if (j.is_number_integer()) return Integer(j.get<long long>());
  if (j.is_string()) return parse_integer(j.get<std::string>());
  parse_fail("expected an integer, got " + j.dump());
}

inline json to_json(const Rational& r) { return r.str(); }

inline Rational rational_from(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  parse_fail("expected a rational \"p/q\", got " + j.dump());
}

inline json to_json(const QuadraticReal& x) {
  return json{{"a", to_json(x.a())}, {"b", to_json(x.b())}, {"d", to_json(x.b() == 0 ? Integer(1) : x.d())}};
}

inline QuadraticReal quadratic_from(const json& j) {
  if (!j.is_object()) return QuadraticReal(rational_from(j));
  if (!j.contains("a") || !j.contains("b") || !j.contains("d")) parse_fail("quadratic real needs a, b, d: " + j.dump());
  return QuadraticReal::make(rational_from(j["a"]), rational_from(j["b"]), integer_from(j["d"]));
}

// ---- points, maps ----

inline Model model_from(const json& j) {
  if (j == "angle") return Model::Angle;
  if (j == "projective") return Model::Projective;
  parse_fail("model must be \"angle\" or \"projective\", got " + j.dump());
}

inline json to_json(const CirclePoint& p) {
  if (p.model() == Model::Angle) return to_json(p.as_angle().value());
  const auto& q = p.as_projective();
  if (q.is_infinity()) return "inf";
  return to_json(q.value());
}

inline CirclePoint point_from(Model m, const json& j) {
  if (m == Model::Angle) return CirclePoint::angle(rational_from(j));
  if (j == "inf") return CirclePoint::infinity();
  return CirclePoint::projective(quadratic_from(j));
}

inline json points_json(const std::vector<CirclePoint>& v) {
  json a = json::array();
  for (const auto& p : v) a.push_back(to_json(p));
  return a;
}

inline json to_json(const Leaf& l) { return json::array({to_json(l.first()), to_json(l.second())}); }

inline json to_json(const ConcreteMap& f) {
  json a = json::array();
  if (f.index() == 0) {
    for (const auto& b : std::get<0>(f).breakpoints()) a.push_back(json::array({to_json(b.x), to_json(b.y)}));
  } else {
    for (const auto& e : std::get<1>(f).entries()) a.push_back(to_json(e));
  }
  return a;
}

inline ConcreteMap map_from(Model m, const json& j) {
  if (!j.is_array()) parse_fail("map must be an array, got " + j.dump());
  if (m == Model::Projective) {
    if (j.size() != 4) parse_fail("Mobius map needs 4 integers");
    return MobiusMap::from_integers(integer_from(j[0]), integer_from(j[1]), integer_from(j[2]), integer_from(j[3]));
  }
  std::vector<PLMap::Breakpoint> bps;
  for (const auto& b : j) {
    if (!b.is_array() || b.size() != 2) parse_fail("breakpoint must be [x, y], got " + b.dump());
    bps.push_back({rational_from(b[0]), rational_from(b[1])});
  }
  return PLMap::from_breakpoints(std::move(bps));
}

// {"model": ..., "map": [...]}
inline json map_document(const ConcreteMap& f) { return json{{"model", to_string(model_of(f))}, {"map", to_json(f)}}; }

inline ConcreteMap map_document_from(const json& j) {
  if (!j.is_object() || !j.contains("model") || !j.contains("map")) parse_fail("map document needs model and map");
  return map_from(model_from(j["model"]), j["map"]);
}

// ---- laminations, groups ----

inline json to_json(const FiniteLamination& lam) {
  json leaves = json::array();
  for (const auto& l : lam.leaves()) leaves.push_back(to_json(l));
  json j{{"model", to_string(lam.model())}, {"leaves", leaves}};
  j["depth"] = lam.depth() ? json(*lam.depth()) : json(nullptr);
  return j;
}

// validates; a crossing raises LinkedPairError
inline FiniteLamination lamination_from(const json& j) {
  if (!j.is_object() || !j.contains("model") || !j.contains("leaves")) parse_fail("lamination needs model and leaves");
  Model m = model_from(j["model"]);
  std::vector<Leaf> leaves;
  for (const auto& l : j["leaves"]) {
    if (!l.is_array() || l.size() != 2) parse_fail("leaf must be a pair of points, got " + l.dump());
    leaves.emplace_back(point_from(m, l[0]), point_from(m, l[1]));
  }
  std::optional<int> depth;
  if (j.contains("depth") && !j["depth"].is_null()) depth = j["depth"].get<int>();
  return FiniteLamination::validate(m, std::move(leaves), depth);
}

inline json to_json(const GeneratorSet& G) {
  json gens = json::array();
  for (const auto& n : G.names()) gens.push_back(json{{"name", n}, {"map", to_json(G.get(n))}});
  return json{{"model", to_string(G.model())}, {"generators", gens}};
}

inline GeneratorSet group_from(const json& j) {
  if (!j.is_object() || !j.contains("model") || !j.contains("generators")) parse_fail("group needs model and generators");
  Model m = model_from(j["model"]);
  GeneratorSet G(m);
  for (const auto& g : j["generators"]) {
    if (!g.contains("name") || !g.contains("map")) parse_fail("generator needs name and map");
    G.add(g["name"].get<std::string>(), map_from(m, g["map"]));
  }
  return G;
}

// ---- reports ----

inline json to_json(const Witness& w) {
  return json{{"kind", w.kind}, {"points", points_json(w.points)}, {"detail", w.detail}};
}

inline json to_json(const PropertyFlag& f) {
  json j{{"holds", f.holds}};
  j["witness"] = f.witness ? to_json(*f.witness) : json(nullptr);
  return j;
}

inline json to_json(const PropertyReport& r) {
  return json{{"epsilon", to_json(r.epsilon)},
              {"dense", to_json(r.dense)},
              {"loose", to_json(r.loose)},
              {"very_full", to_json(r.very_full)},
              {"totally_disconnected", to_json(r.totally_disconnected)}};
}

// A and R in cyclic order, e.g. "ARAR"
inline std::string kind_pattern(const std::vector<FixedPointDatum>& fp) {
  std::string s;
  for (const auto& d : fp) s += d.kind == FixedKind::Attracting ? 'A' : (d.kind == FixedKind::Repelling ? 'R' : 'N');
  return s;
}

inline json to_json(const std::vector<FixedPointDatum>& fp) {
  json a = json::array();
  for (const auto& d : fp)
    a.push_back(json{{"locus", to_json(d.locus)}, {"text", d.locus.str()}, {"kind", to_string(d.kind)}});
  return a;
}

inline json to_json(const MapClass& c) {
  json j{{"tag", c.str()}, {"k", c.k}, {"period", c.period}};
  if (c.tag == MapClass::Tag::Indeterminate) j["max_power"] = c.max_power;
  return j;
}

inline json to_json(const Alternative& a) {
  json j{{"kind", to_string(a.kind)}, {"period_g", a.period_g}, {"period_h", a.period_h}};
  if (a.shared) j["shared"] = to_json(*a.shared);
  if (a.unshared) j["unshared"] = to_json(*a.unshared);
  return j;
}

inline json to_json(const AlternativeGrid& g) {
  json skipped = json::array(), viol = json::array();
  for (const auto& [w, why] : g.skipped) skipped.push_back(json{{"word", w.str()}, {"reason", why}});
  for (const auto& v : g.violations)
    viol.push_back(json{{"g", v.g.str()}, {"h", v.h.str()}, {"result", to_json(v.result)}});
  return json{{"elements", g.elements}, {"pairs", g.pairs},     {"equal", g.equal},
              {"disjoint", g.disjoint}, {"skipped", skipped}, {"violations", viol}};
}

inline json to_json(const ClosedArc& a) { return json::array({to_json(a.from), to_json(a.to)}); }

inline json to_json(const InclusionEvidence& e) {
  json j{{"inclusion", e.inclusion},
         {"source", json::array({to_json(e.source_from), to_json(e.source_to)})},
         {"image", json::array({to_json(e.image_from), to_json(e.image_to)})}};
  j["target"] = e.target ? to_json(*e.target) : json(nullptr);
  return j;
}

inline json to_json(const PingPongCells& c) {
  json j = json::object();
  for (int i = 0; i < 4; ++i) {
    json arcs = json::array();
    for (const auto& a : c.cells[i]) arcs.push_back(to_json(a));
    j[PingPongCells::names[i]] = arcs;
  }
  return j;
}

inline json to_json(const Certificate& c) {
  json ev = json::array();
  for (const auto& e : c.evidence) ev.push_back(to_json(e));
  return json{{"h1", to_json(c.h1)},         {"h2", to_json(c.h2)}, {"power1", c.power1}, {"power2", c.power2},
              {"cells", to_json(c.cells)}, {"evidence", ev}};
}

inline json to_json(const AbelianReport& r) {
  json j{{"elements", r.elements},
         {"cosets", r.cosets},
         {"stabilizer", r.stabilizer},
         {"index_within_bound", r.index_within_bound},
         {"index_within_half", r.index_within_half},
         {"commutative", r.commutative},
         {"free_on_components", r.free_on_components}};
  j["noncommuting"] = r.noncommuting ? json::array({r.noncommuting->first.str(), r.noncommuting->second.str()}) : json(nullptr);
  j["interior_fixed_point"] = r.interior_fixed_point
                                  ? json{{"word", r.interior_fixed_point->first.str()},
                                         {"point", to_json(r.interior_fixed_point->second)}}
                                  : json(nullptr);
  return j;
}

inline json to_json(const QuotientComplex& Q) {
  json classes = json::array();
  std::size_t nontrivial = 0;
  for (std::size_t c = 0; c < Q.class_count(); ++c) {
    if (Q.members(c).size() > 1) ++nontrivial;
    classes.push_back(points_json(Q.members(c)));
  }
  return json{{"model", to_string(Q.model())},
              {"points", Q.universe().size()},
              {"class_count", Q.class_count()},
              {"nontrivial_classes", nontrivial},
              {"classes", classes}};
}

inline json to_json(const SphereSample& s) {
  json j{{"representative", to_json(s.representative)}};
  j["class"] = s.id == QuotientComplex::npos ? json(nullptr) : json(s.id);
  return j;
}

inline json to_json(const EquivarianceReport& r) {
  json d = json::array();
  for (const auto& x : r.defects) d.push_back(json{{"sample", to_json(x.sample)}, {"partner", to_json(x.partner)}});
  return json{{"checked", r.checked}, {"defects", d}};
}

inline json to_json(const SequenceReport& s) {
  json att = json::array(), rep = json::array();
  for (const auto& a : s.attractor) att.push_back(to_json(a));
  for (const auto& r : s.repeller) rep.push_back(to_json(r));
  json j{{"word", s.word.str()},   {"powers", s.powers},         {"attractor", att},
         {"repeller", rep},        {"concentration", s.concentration}, {"verdict", to_string(s.verdict)},
         {"witness", points_json(s.witness)}};
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

inline json to_json(const ConvergenceReport& r) {
  json seq = json::array();
  for (const auto& s : r.sequences) seq.push_back(to_json(s));
  return json{{"delta", to_json(r.delta)}, {"samples", r.samples},           {"observed", r.observed},
              {"inconclusive", r.inconclusive}, {"violations", r.violations}, {"verdict", to_string(r.verdict)},
              {"sequences", seq}};
}

}  // namespace laminar::io
