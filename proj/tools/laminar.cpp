#include <CLI11.hpp>

#include <laminar/constructions.hpp>
#include <laminar/json_io.hpp>
#include <laminar/svg.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#ifndef LAMINAR_VERSION
#define LAMINAR_VERSION "dev"
#endif

using namespace laminar;
using io::json;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

Rational rational_flag(const std::string& flag, const std::string& s) {
  try {
    Rational r = parse_rational(s);
    if (r <= 0) throw UsageError(flag + " must be positive, got " + s);
    return r;
  } catch (const Error&) {
    throw UsageError(flag + ": not a rational: " + s);
  }
}

int default_max_power() {
  const char* env = std::getenv("LAMINAR_MAX_POWER");
  if (!env || !*env) return kDefaultMaxPower;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*end || v < 1 || v > 1000) throw UsageError(std::string("LAMINAR_MAX_POWER must be a positive integer, got ") + env);
  return static_cast<int>(v);
}

// shared by every subcommand
struct Common {
  std::string out;
  long seed = 0;
  int max_power = 0;  // 0: env or built-in default
  bool text = false;
};

struct Outcome {
  json result;
  int code = kOk;
  std::string text;  // human-readable rendering for --text
};

json envelope(const std::string& cmd, json config, const Common& c, int maxPower, json result) {
  config["seed"] = c.seed;
  config["max_power"] = maxPower;
  return json{{"tool", "laminar"}, {"version", LAMINAR_VERSION}, {"command", cmd}, {"config", std::move(config)},
              {"result", std::move(result)}};
}

json error_json(const Error& e) { return json{{"error", to_string(e.kind())}, {"message", e.what()}}; }

bool is_usage(ErrorKind k) {
  return k == ErrorKind::ParseError || k == ErrorKind::InvalidArgument || k == ErrorKind::ModelMismatch ||
         k == ErrorKind::UnknownGenerator;
}

// ---- subcommands ----

Outcome do_construct(int p, int q, int depth, const std::string& dir, const std::string& epsText) {
  if (dir.empty()) throw UsageError("construct needs --out DIR");
  Rational eps = epsText.empty() ? Rational(1) / Rational(Integer(1) << (2 * depth)) : rational_flag("--eps", epsText);
  auto E = build_embedded(p, q, depth);
  auto l0 = lambda0(E), l1 = lambda1(E), l2 = lambda2(E);
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const json& j) { write_text((fs::path(dir) / name).string(), j.dump(2) + "\n"); };
  put("lambda0.json", io::to_json(l0));
  put("lambda1.json", io::to_json(l1));
  put("lambda2.json", io::to_json(l2));
  std::vector<std::string> files{"lambda0.json", "lambda1.json", "lambda2.json"};

  json res{{"p", p}, {"q", q}, {"depth", depth}, {"epsilon", io::to_json(eps)}};
  res["vertices"] = E.graph().vertices_up_to(depth).size();
  res["leaves"] = json{{"lambda0", l0.size()}, {"lambda1", l1.size()}, {"lambda2", l2.size()}};
  res["distinct_endpoints"] = distinct_endpoints(l1, l2);
  auto f1 = check_loose(l1, eps), f2 = check_loose(l2, eps);
  res["loose"] = json{{"lambda1", io::to_json(f1)}, {"lambda2", io::to_json(f2)}};
  bool ok = f1.holds && f2.holds && distinct_endpoints(l1, l2);

  if (depth >= 2) {
    auto S = generator_maps(E);
    put("generators.json", io::to_json(S));
    files.push_back("generators.json");
    auto P = build_embedded(p, q, depth - 1);
    json inv = json::object();
    for (const auto& g : S.names()) {
      CircleMap f = S.get(g);
      json d = json::object();
      for (auto [name, small, big] : {std::tuple{"lambda0", lambda0(P), l0}, std::tuple{"lambda1", lambda1(P), l1},
                                      std::tuple{"lambda2", lambda2(P), l2}}) {
        json bad = json::array();
        for (const auto& l : check_invariance(small, big, f)) bad.push_back(io::to_json(l));
        ok = ok && bad.empty();
        d[name] = bad;
      }
      inv[g] = d;
    }
    res["invariance_defects"] = inv;
  } else {
    res["generators"] = "generator maps need depth at least 2";
  }

  svg::Options o;
  write_text((fs::path(dir) / "lambda1.svg").string(),
             svg::chord_diagram({{&l0, "#000000", false}, {&l1, "#1f4e9c", true}}, o));
  write_text((fs::path(dir) / "lambda2.svg").string(),
             svg::chord_diagram({{&l0, "#000000", false}, {&l2, "#b22222", true}}, o));
  write_text((fs::path(dir) / "pair.svg").string(),
             svg::chord_diagram({{&l1, "#1f4e9c", false}, {&l2, "#b22222", false}}, o));
  for (const char* f : {"lambda1.svg", "lambda2.svg", "pair.svg"}) files.push_back(f);
  files.push_back("report.json");
  res["files"] = files;
  return {res, ok ? kOk : kCheckFailed, ""};
}

Outcome do_check(const std::string& lamPath, const std::string& lam2Path, const std::string& epsText,
                 const std::vector<std::string>& require) {
  Rational eps = rational_flag("--eps", epsText);
  for (const auto& r : require)
    if (r != "dense" && r != "loose" && r != "very-full" && r != "totally-disconnected" && r != "distinct-endpoints")
      throw UsageError("--require: unknown property " + r);
  json res;
  std::vector<FiniteLamination> lams;
  for (const auto& path : {lamPath, lam2Path}) {
    if (path.empty()) continue;
    try {
      lams.push_back(io::lamination_from(read_json(path)));
    } catch (const LinkedPairError& e) {
      res = json{{"file", path}, {"valid", false}, {"error", "LinkedPair"},
                 {"witness", json::array({io::to_json(e.first), io::to_json(e.second)})}};
      return {res, kCheckFailed, e.what()};
    }
  }
  json per = json::array();
  json failed = json::array();
  for (const auto& L : lams) {
    auto G = gaps(L);
    std::size_t polys = 0;
    for (const auto& g : G) polys += g.ideal_polygon();
    auto rep = check_properties(L, eps);
    per.push_back(json{{"leaves", L.size()}, {"gaps", G.size()}, {"ideal_polygons", polys}, {"properties", io::to_json(rep)}});
    for (const auto& r : require) {
      const PropertyFlag* f = r == "dense" ? &rep.dense
                            : r == "loose" ? &rep.loose
                            : r == "very-full" ? &rep.very_full
                            : r == "totally-disconnected" ? &rep.totally_disconnected
                                                          : nullptr;
      if (f && !f->holds) failed.push_back(r);
    }
  }
  res = json{{"valid", true}, {"laminations", per}};
  if (lams.size() == 2) {
    auto s = shared_endpoint(lams[0], lams[1]);
    res["distinct_endpoints"] = !s;
    res["shared_endpoint"] = s ? io::to_json(*s) : json(nullptr);
    if (s && std::find(require.begin(), require.end(), "distinct-endpoints") != require.end())
      failed.push_back("distinct-endpoints");
  } else if (std::find(require.begin(), require.end(), "distinct-endpoints") != require.end()) {
    throw UsageError("--require distinct-endpoints needs --lam2");
  }
  res["failed"] = failed;
  return {res, failed.empty() ? kOk : kCheckFailed, ""};
}

ConcreteMap map_from_flags(const std::string& mapPath, const std::string& mobius, const std::string& plText) {
  int given = !mapPath.empty() + !mobius.empty() + !plText.empty();
  if (given != 1) throw UsageError("give exactly one of --map, --mobius, --pl");
  if (!mapPath.empty()) return io::map_document_from(read_json(mapPath));
  if (!mobius.empty()) {
    std::vector<Integer> e;
    std::stringstream ss(mobius);
    std::string tok;
    while (std::getline(ss, tok, ',')) e.push_back(parse_integer(tok));
    if (e.size() != 4) throw UsageError("--mobius wants p,q,r,s");
    return MobiusMap::from_integers(e[0], e[1], e[2], e[3]);
  }
  std::vector<PLMap::Breakpoint> bps;
  std::stringstream ss(plText);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto colon = tok.find(':');
    if (colon == std::string::npos) throw UsageError("--pl wants x:y pairs separated by commas");
    bps.push_back({parse_rational(tok.substr(0, colon)), parse_rational(tok.substr(colon + 1))});
  }
  return PLMap::from_breakpoints(std::move(bps));
}

Outcome do_classify(const ConcreteMap& f, int maxPower) {
  json res{{"map", io::map_document(f)}};
  MapClass c = classify(f, maxPower);
  res["class"] = io::to_json(c);
  std::ostringstream text;
  text << c.str() << "\n";
  std::vector<FixedPointDatum> fp;
  try {
    fp = fixed_points(c.tag == MapClass::Tag::PALike ? power(f, c.period) : f);
  } catch (const Error& e) {
    res["fixed_points_error"] = error_json(e);
  }
  res["fixed_points_of_power"] = c.tag == MapClass::Tag::PALike ? c.period : 1;
  res["fixed_points"] = io::to_json(fp);
  res["pattern"] = io::kind_pattern(fp);
  if (!fp.empty()) text << "pattern " << io::kind_pattern(fp) << "\n";
  for (const auto& d : fp) text << (d.kind == FixedKind::Attracting ? "A " : (d.kind == FixedKind::Repelling ? "R " : "N ")) << d.locus.str() << "\n";
  return {res, kOk, text.str()};
}

Outcome do_alternative(const GeneratorSet& G, long maxLen, int maxPeriod) {
  auto grid = alternative_grid(G, maxLen, maxPeriod);
  std::ostringstream text;
  text << grid.pairs << " pairs: " << grid.equal << " equal, " << grid.disjoint << " disjoint, " << grid.violations.size()
       << " violations\n";
  return {io::to_json(grid), grid.violations.empty() ? kOk : kCheckFailed, text.str()};
}

std::string proof_sketch(const Certificate& c, const std::string& g1, const std::string& g2) {
  std::ostringstream os;
  os << "h1 = " << g1 << "^" << c.power1 << ", h2 = " << g2 << "^" << c.power2 << "\n";
  for (int i = 0; i < 4; ++i) {
    os << PingPongCells::names[i] << ":";
    for (const auto& a : c.cells.cells[i]) os << " [" << a.from.str() << ", " << a.to.str() << "]";
    os << "\n";
  }
  os << "cells are pairwise disjoint closed arcs\n";
  for (const auto& e : c.evidence) {
    os << e.inclusion << ": (" << e.source_from.str() << ", " << e.source_to.str() << ") -> (" << e.image_from.str()
       << ", " << e.image_to.str() << ")";
    if (e.target) os << " inside [" << e.target->from.str() << ", " << e.target->to.str() << "]";
    os << "\n";
  }
  os << "each h_i maps the complement of its repelling cell into its attracting cell,\n"
        "so by ping-pong <h1, h2> is free of rank 2\n";
  return os.str();
}

std::pair<std::string, std::string> two_generators(const GeneratorSet& G, std::string g1, std::string g2) {
  auto names = G.names();
  if (g1.empty() || g2.empty()) {
    if (names.size() < 2) throw UsageError("group needs at least two generators");
    if (g1.empty()) g1 = names[0];
    if (g2.empty()) g2 = names[1];
  }
  for (const auto& n : {g1, g2})
    if (std::find(names.begin(), names.end(), n) == names.end()) throw UsageError("no generator named " + n);
  if (g1 == g2) throw UsageError("--g1 and --g2 must differ");
  return {g1, g2};
}

Outcome do_pingpong(const GeneratorSet& G, const std::string& n1, const std::string& n2, int maxPower) {
  auto s = pingpong_search(G.get(n1), G.get(n2), maxPower);
  json res{{"g1", n1}, {"g2", n2}, {"radius", io::to_json(s.radius)}, {"tried", s.tried}};
  res["certificate"] = s.certificate ? io::to_json(*s.certificate) : json(nullptr);
  if (!s.certificate) return {res, kCheckFailed, "no certificate up to power " + std::to_string(maxPower) + "\n"};
  return {res, kOk, proof_sketch(*s.certificate, n1, n2)};
}

Outcome do_probe(const GeneratorSet& G, long maxLen, const std::string& sharedPath, int maxPower) {
  std::vector<CirclePoint> shared;
  json res;
  if (!sharedPath.empty()) {
    json j = read_json(sharedPath);
    if (!j.is_array()) throw UsageError(sharedPath + ": expected an array of points");
    for (const auto& p : j) shared.push_back(io::point_from(G.model(), p));
    res["shared_from"] = sharedPath;
  } else {
    auto first = G.names().front();
    shared = periodic_points(G.get(first), maxPower).points;
    res["shared_from"] = "periodic points of " + first;
  }
  res["shared"] = io::points_json(shared);
  auto r = abelian_probe(G, shared, maxLen);
  res["report"] = io::to_json(r);
  bool witness = r.noncommuting || r.interior_fixed_point;
  return {res, witness ? kCheckFailed : kOk, ""};
}

FiniteLamination lamination_or_empty(const std::string& path, Model m) {
  return path.empty() ? FiniteLamination::validate(m, {}) : io::lamination_from(read_json(path));
}

Outcome do_quotient(const std::string& p1, const std::string& p2, std::size_t nSamples, const std::string& groupPath,
                    const std::string& d1, const std::string& d2, const std::string& svgPath) {
  auto l1 = io::lamination_from(read_json(p1)), l2 = io::lamination_from(read_json(p2));
  if (d1.empty() != d2.empty()) throw UsageError("--domain1 and --domain2 go together");
  auto samples = farey_samples(l1.model(), nSamples);
  auto Q = build_quotient(l1, l2, samples);
  json res{{"quotient", io::to_json(Q)}};
  int code = kOk;
  if (!groupPath.empty()) {
    auto G = io::group_from(read_json(groupPath));
    std::optional<std::pair<FiniteLamination, FiniteLamination>> dom;
    if (!d1.empty()) dom = std::pair{io::lamination_from(read_json(d1)), io::lamination_from(read_json(d2))};
    json eq = json::object();
    for (const auto& g : G.names()) {
      try {
        auto r = equivariance_check(Q, G.get(g), samples, dom);
        if (!r.defects.empty()) code = kCheckFailed;
        eq[g] = io::to_json(r);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotInvariant) throw;
        code = kCheckFailed;
        eq[g] = error_json(e);
      }
    }
    res["equivariance"] = eq;
  }
  if (!svgPath.empty()) write_text(svgPath, svg::quotient_diagram(Q));
  return {res, code, ""};
}

Outcome do_converge(const GeneratorSet& G, long maxLen, const Rational& delta, std::size_t nSamples,
                    const std::string& p1, const std::string& p2, int maxPower) {
  auto l1 = lamination_or_empty(p1, G.model()), l2 = lamination_or_empty(p2, G.model());
  auto r = convergence_sample(G, l1, l2, maxLen, nSamples, delta, maxPower);
  std::ostringstream text;
  text << to_string(r.verdict) << ": " << r.observed << " observed, " << r.inconclusive << " inconclusive, " << r.violations
       << " violations over " << r.sequences.size() << " sequences\n";
  return {io::to_json(r), r.verdict == ConvergenceVerdict::ViolationWitness ? kCheckFailed : kOk, text.str()};
}

Outcome do_render(const std::vector<std::string>& paths, const std::string& outPath, bool noShade, double size) {
  if (outPath.empty()) throw UsageError("render needs --out FILE.svg");
  std::vector<FiniteLamination> lams;
  for (const auto& p : paths) lams.push_back(io::lamination_from(read_json(p)));
  std::vector<svg::Layer> layers;
  const std::vector<std::string> colors{"#1f4e9c", "#b22222", "#2e8b57", "#000000"};
  for (std::size_t i = 0; i < lams.size(); ++i) layers.push_back({&lams[i], colors[i % colors.size()], !noShade});
  svg::Options o;
  o.size = size;
  write_text(outPath, svg::chord_diagram(layers, o));
  return {json{{"svg", outPath}, {"layers", paths.size()}}, kOk, ""};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact laminations, circle group actions and their quotients"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LAMINAR_VERSION);
  Common common;

  auto add_common = [&](CLI::App* sub, bool outIsDir = false) {
    sub->add_option("--out", common.out, outIsDir ? "output directory" : "write the JSON report here instead of stdout");
    sub->add_option("--seed", common.seed, "recorded in the report; all sampling is deterministic");
    sub->add_option("--max-power", common.max_power,
                    "bound on powers and periods (default 12, or LAMINAR_MAX_POWER)")
        ->check(CLI::Range(1, 1000));
  };

  json config;
  std::function<Outcome(int)> action;

  // construct
  int p = 4, q = 3, depth = 2;
  std::string eps;
  auto* construct = app.add_subcommand("construct", "build the two laminations and generator maps for Z/p * Z/q");
  construct->add_option("--p", p, "order of a")->check(CLI::Range(2, 64));
  construct->add_option("--q", q, "order of b")->check(CLI::Range(2, 64));
  construct->add_option("--depth", depth, "truncation depth k")->check(CLI::Range(0, 8));
  construct->add_option("--eps", eps, "scale for the loose check (default 4^-k)");
  add_common(construct, true);
  construct->callback([&] {
    config = json{{"p", p}, {"q", q}, {"depth", depth}, {"eps", eps.empty() ? json(nullptr) : json(eps)}};
    action = [&](int) { return do_construct(p, q, depth, common.out, eps); };
  });

  // check
  std::string lam, lam2, checkEps = "1/16";
  std::vector<std::string> require;
  auto* check = app.add_subcommand("check", "validate a lamination and report its scale properties");
  check->add_option("--lam", lam, "lamination JSON")->required();
  check->add_option("--lam2", lam2, "second lamination, for the endpoint comparison");
  check->add_option("--eps", checkEps, "scale epsilon as p/q");
  check->add_option("--require", require, "fail (exit 1) unless these hold: dense loose very-full totally-disconnected distinct-endpoints");
  add_common(check);
  check->callback([&] {
    config = json{{"lam", lam}, {"lam2", lam2}, {"eps", checkEps}, {"require", require}};
    action = [&](int) { return do_check(lam, lam2, checkEps, require); };
  });

  // classify
  std::string mapPath, mobius, plText;
  auto* cls = app.add_subcommand("classify", "fixed-point taxonomy of one circle map");
  cls->add_option("--map", mapPath, "map JSON {\"model\", \"map\"}");
  cls->add_option("--mobius", mobius, "integer matrix p,q,r,s");
  cls->add_option("--pl", plText, "PL breakpoints x:y,x:y,...");
  cls->add_flag("--text", common.text, "print kinds and loci instead of JSON");
  add_common(cls);
  cls->callback([&] {
    config = json{{"map", mapPath}, {"mobius", mobius}, {"pl", plText}};
    action = [&](int mp) { return do_classify(map_from_flags(mapPath, mobius, plText), mp); };
  });

  // alternative
  std::string groupPath;
  long maxLen = 4;
  auto* alt = app.add_subcommand("alternative", "periodic-set alternative over all word pairs");
  alt->add_option("--group", groupPath, "group JSON")->required();
  alt->add_option("--maxlen", maxLen, "word length bound")->check(CLI::Range(1, 12));
  alt->add_flag("--text", common.text, "print a summary line instead of JSON");
  add_common(alt);
  alt->callback([&] {
    config = json{{"group", groupPath}, {"maxlen", maxLen}};
    action = [&](int mp) { return do_alternative(io::group_from(read_json(groupPath)), maxLen, mp); };
  });

  // pingpong
  std::string g1, g2;
  auto* pp = app.add_subcommand("pingpong", "search for a ping-pong certificate of freeness");
  pp->add_option("--group", groupPath, "group JSON")->required();
  pp->add_option("--g1", g1, "first generator (default: first listed)");
  pp->add_option("--g2", g2, "second generator (default: second listed)");
  pp->add_flag("--text", common.text, "print a proof sketch instead of JSON");
  add_common(pp);
  pp->callback([&] {
    config = json{{"group", groupPath}, {"g1", g1}, {"g2", g2}};
    action = [&](int mp) {
      auto G = io::group_from(read_json(groupPath));
      auto [a, b] = two_generators(G, g1, g2);
      return do_pingpong(G, a, b, mp);
    };
  });

  // probe
  std::string sharedPath;
  long probeLen = 4;
  auto* probe = app.add_subcommand("probe", "evidence for a virtually abelian group with a shared periodic set");
  probe->add_option("--group", groupPath, "group JSON")->required();
  probe->add_option("--shared", sharedPath, "JSON array of points (default: periodic points of the first generator)");
  probe->add_option("--maxlen", probeLen, "word length bound")->check(CLI::Range(0, 12));
  add_common(probe);
  probe->callback([&] {
    config = json{{"group", groupPath}, {"shared", sharedPath}, {"maxlen", probeLen}};
    action = [&](int mp) { return do_probe(io::group_from(read_json(groupPath)), probeLen, sharedPath, mp); };
  });

  // quotient
  std::string lam1, qlam2, dom1, dom2, svgPath;
  std::size_t samples = 64;
  auto* quot = app.add_subcommand("quotient", "identify points of the circle along two laminations");
  quot->add_option("--lam1", lam1, "first lamination JSON")->required();
  quot->add_option("--lam2", qlam2, "second lamination JSON")->required();
  quot->add_option("--samples", samples, "Farey samples added to the point set")->check(CLI::Range(0, 100000));
  quot->add_option("--group", groupPath, "check equivariance of these generators");
  quot->add_option("--domain1", dom1, "lamination carried into --lam1 by the generators");
  quot->add_option("--domain2", dom2, "lamination carried into --lam2 by the generators");
  quot->add_option("--svg", svgPath, "also draw both disks with classes color-keyed");
  add_common(quot);
  quot->callback([&] {
    config = json{{"lam1", lam1}, {"lam2", qlam2}, {"samples", samples}, {"group", groupPath},
                  {"domain1", dom1}, {"domain2", dom2}, {"svg", svgPath}};
    action = [&](int) { return do_quotient(lam1, qlam2, samples, groupPath, dom1, dom2, svgPath); };
  });

  // converge
  std::string delta = "1/100", clam1, clam2;
  std::size_t csamples = 200;
  long cmaxLen = 4;
  auto* conv = app.add_subcommand("converge", "sample power sequences for north-south dynamics on the quotient");
  conv->add_option("--group", groupPath, "group JSON")->required();
  conv->add_option("--maxlen", cmaxLen, "word length bound")->check(CLI::Range(1, 10));
  conv->add_option("--delta", delta, "closeness threshold as p/q");
  conv->add_option("--samples", csamples, "Farey samples")->check(CLI::Range(3, 100000));
  conv->add_option("--lam1", clam1, "first lamination (default empty)");
  conv->add_option("--lam2", clam2, "second lamination (default empty)");
  conv->add_flag("--text", common.text, "print a summary line instead of JSON");
  add_common(conv);
  conv->callback([&] {
    config = json{{"group", groupPath}, {"maxlen", cmaxLen}, {"delta", delta}, {"samples", csamples},
                  {"lam1", clam1}, {"lam2", clam2}};
    action = [&](int mp) {
      return do_converge(io::group_from(read_json(groupPath)), cmaxLen, rational_flag("--delta", delta), csamples, clam1,
                         clam2, mp);
    };
  });

  // render
  std::vector<std::string> layers;
  bool noShade = false;
  double size = 480;
  auto* render = app.add_subcommand("render", "draw laminations as chord diagrams in the unit disk");
  render->add_option("--lam", layers, "lamination JSON, repeatable")->required();
  render->add_option("--out", common.out, "SVG file")->required();
  render->add_flag("--no-shade", noShade, "leave ideal polygons unfilled");
  render->add_option("--size", size, "pixel width")->check(CLI::Range(64.0, 8192.0));
  render->callback([&] {
    config = json{{"lam", layers}, {"shade", !noShade}, {"size", size}};
    action = [&](int) { return do_render(layers, common.out, noShade, size); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  int maxPower = 0;
  Outcome outcome;
  try {
    maxPower = common.max_power > 0 ? common.max_power : default_max_power();
    outcome = action(maxPower);
  } catch (const UsageError& e) {
    std::cerr << "laminar " << cmd << ": " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    if (is_usage(e.kind())) {
      std::cerr << "laminar " << cmd << ": " << e.what() << "\n";
      return kUsage;
    }
    outcome = {error_json(e), kCheckFailed, std::string(e.what()) + "\n"};
  } catch (const fs::filesystem_error& e) {
    std::cerr << "laminar " << cmd << ": " << e.what() << "\n";
    return kUsage;
  }

  json report = envelope(cmd, config, common, maxPower, outcome.result);
  report["exit_code"] = outcome.code;
  const std::string body = report.dump(2) + "\n";
  try {
    if (cmd == "construct") {
      write_text((fs::path(common.out) / "report.json").string(), body);
      std::cout << "wrote " << outcome.result.value("files", json::array()).size() << " files to " << common.out << "\n";
    } else if (cmd == "render") {
      std::cout << "wrote " << common.out << "\n";
    } else {
      if (!common.out.empty()) write_text(common.out, body);
      if (common.text && !outcome.text.empty())
        std::cout << outcome.text;
      else if (common.out.empty())
        std::cout << body;
    }
  } catch (const UsageError& e) {
    std::cerr << "laminar " << cmd << ": " << e.what() << "\n";
    return kUsage;
  }
  return outcome.code;
}
